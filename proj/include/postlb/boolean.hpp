#pragma once

// Semantic layer for n-variable Boolean functions: truth tables, formula
// ASTs, canonical minterm/maxterm representatives, full representations of
// B^n -> B, and a brute-force conjunction-satisfiability oracle.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace postlb {

// Values for x1..xn, in that order.
using Assignment = std::vector<bool>;

// Assignments are indexed 0..2^n-1 in binary order with x1 as the most
// significant bit, so index 0 is all-false and index 2^n-1 all-true.
inline Assignment assignment_from_index(std::uint64_t index, unsigned arity) {
  Assignment a(arity);
  for (unsigned i = 0; i < arity; ++i)
    a[i] = (index >> (arity - 1 - i)) & 1;
  return a;
}

inline std::uint64_t index_of_assignment(const Assignment& a) {
  std::uint64_t index = 0;
  for (bool v : a) index = (index << 1) | (v ? 1 : 0);
  return index;
}

class TruthTable {
 public:
  TruthTable(unsigned arity, std::vector<bool> bits)
      : arity_(arity), bits_(std::move(bits)) {
    if (arity_ < 1 || arity_ > 26)
      throw std::invalid_argument("truth table arity out of range");
    if (bits_.size() != (std::size_t{1} << arity_))
      throw std::invalid_argument("truth table needs exactly 2^arity bits");
  }

  // Function index: bit i of the index is the value at assignment index i.
  static TruthTable from_index(unsigned arity, std::uint64_t index) {
    if (arity > 6) throw std::invalid_argument("from_index supports arity <= 6");
    std::vector<bool> bits(std::size_t{1} << arity);
    for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = (index >> i) & 1;
    return TruthTable(arity, std::move(bits));
  }

  std::uint64_t index() const {
    if (arity_ > 6) throw std::logic_error("index() supports arity <= 6");
    std::uint64_t index = 0;
    for (std::size_t i = 0; i < bits_.size(); ++i)
      if (bits_[i]) index |= std::uint64_t{1} << i;
    return index;
  }

  unsigned arity() const { return arity_; }
  std::size_t size() const { return bits_.size(); }
  bool bit(std::size_t i) const { return bits_.at(i); }
  const std::vector<bool>& bits() const { return bits_; }

  TruthTable negated() const {
    std::vector<bool> flipped(bits_.size());
    for (std::size_t i = 0; i < bits_.size(); ++i) flipped[i] = !bits_[i];
    return TruthTable(arity_, std::move(flipped));
  }

  // '0'/'1' per assignment index; handy for reports and file names.
  std::string bit_string() const {
    std::string s(bits_.size(), '0');
    for (std::size_t i = 0; i < bits_.size(); ++i)
      if (bits_[i]) s[i] = '1';
    return s;
  }

  friend bool operator==(const TruthTable& a, const TruthTable& b) {
    return a.arity_ == b.arity_ && a.bits_ == b.bits_;
  }
  friend bool operator!=(const TruthTable& a, const TruthTable& b) { return !(a == b); }
  friend bool operator<(const TruthTable& a, const TruthTable& b) {
    if (a.arity_ != b.arity_) return a.arity_ < b.arity_;
    return a.bits_ < b.bits_;
  }

 private:
  unsigned arity_;
  std::vector<bool> bits_;
};

inline TruthTable negate(const TruthTable& t) { return t.negated(); }

// Immutable formula AST over Const, Var (1-based), Not, And, Or. Cheap to
// copy; subtrees are shared.
class Formula {
 public:
  enum class Kind { Const, Var, Not, And, Or };

  static Formula constant(bool value) {
    return Formula(std::make_shared<Node>(Node{Kind::Const, value, 0, nullptr, nullptr}));
  }
  static Formula var(unsigned index) {
    if (index < 1) throw std::invalid_argument("variable indices start at 1");
    return Formula(std::make_shared<Node>(Node{Kind::Var, false, index, nullptr, nullptr}));
  }
  static Formula negation(Formula child) {
    return Formula(
        std::make_shared<Node>(Node{Kind::Not, false, 0, child.node_, nullptr}));
  }
  static Formula conjunction(Formula left, Formula right) {
    return Formula(
        std::make_shared<Node>(Node{Kind::And, false, 0, left.node_, right.node_}));
  }
  static Formula disjunction(Formula left, Formula right) {
    return Formula(
        std::make_shared<Node>(Node{Kind::Or, false, 0, left.node_, right.node_}));
  }

  Kind kind() const { return node_->kind; }
  bool value() const { return node_->value; }
  unsigned var_index() const { return node_->var; }
  Formula child() const { return Formula(node_->left); }  // Not
  Formula left() const { return Formula(node_->left); }
  Formula right() const { return Formula(node_->right); }

  unsigned max_var() const {
    switch (kind()) {
      case Kind::Const: return 0;
      case Kind::Var: return var_index();
      case Kind::Not: return child().max_var();
      default: return std::max(left().max_var(), right().max_var());
    }
  }

  friend bool operator==(const Formula& a, const Formula& b) {
    return structurally_equal(a.node_.get(), b.node_.get());
  }
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

 private:
  struct Node {
    Kind kind;
    bool value;
    unsigned var;
    std::shared_ptr<const Node> left;
    std::shared_ptr<const Node> right;
  };

  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {
    if (!node_) throw std::logic_error("null formula node");
  }

  static bool structurally_equal(const Node* a, const Node* b) {
    if (a == b) return true;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
      case Kind::Const: return a->value == b->value;
      case Kind::Var: return a->var == b->var;
      case Kind::Not: return structurally_equal(a->left.get(), b->left.get());
      default:
        return structurally_equal(a->left.get(), b->left.get()) &&
               structurally_equal(a->right.get(), b->right.get());
    }
  }

  std::shared_ptr<const Node> node_;
};

inline bool eval(const Formula& formula, const Assignment& a) {
  switch (formula.kind()) {
    case Formula::Kind::Const:
      return formula.value();
    case Formula::Kind::Var: {
      unsigned i = formula.var_index();
      if (i > a.size())
        throw std::out_of_range("variable x" + std::to_string(i) +
                                " exceeds assignment length " + std::to_string(a.size()));
      return a[i - 1];
    }
    case Formula::Kind::Not:
      return !eval(formula.child(), a);
    case Formula::Kind::And:
      return eval(formula.left(), a) && eval(formula.right(), a);
    case Formula::Kind::Or:
      return eval(formula.left(), a) || eval(formula.right(), a);
  }
  throw std::logic_error("unreachable");
}

inline TruthTable truth_table(const Formula& formula, unsigned arity) {
  if (formula.max_var() > arity)
    throw std::invalid_argument("formula mentions x" + std::to_string(formula.max_var()) +
                                " but arity is " + std::to_string(arity));
  std::vector<bool> bits(std::size_t{1} << arity);
  for (std::size_t i = 0; i < bits.size(); ++i)
    bits[i] = eval(formula, assignment_from_index(i, arity));
  return TruthTable(arity, std::move(bits));
}

enum class Style { MintermDnf, MaxtermCnf };

inline const char* to_string(Style s) {
  return s == Style::MintermDnf ? "minterm-dnf" : "maxterm-cnf";
}

namespace detail {

inline Formula literal(unsigned var, bool positive) {
  return positive ? Formula::var(var) : Formula::negation(Formula::var(var));
}

// Left-associated fold; keeps printed shapes canonical.
template <typename Join>
Formula fold(const std::vector<Formula>& terms, Join join) {
  Formula acc = terms.front();
  for (std::size_t i = 1; i < terms.size(); ++i) acc = join(acc, terms[i]);
  return acc;
}

}  // namespace detail

// Canonical representative of a truth table. MintermDnf ORs one conjunction
// of literals per satisfying row; MaxtermCnf ANDs one disjunction per
// falsifying row. The degenerate tables keep a formula over x1 rather than a
// bare constant: constant-false becomes x1&!x1 under MintermDnf and
// constant-true becomes x1|!x1 under MaxtermCnf.
inline Formula formula_from_table(const TruthTable& t, Style style) {
  unsigned n = t.arity();
  std::vector<Formula> terms;
  if (style == Style::MintermDnf) {
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (!t.bit(i)) continue;
      Assignment a = assignment_from_index(i, n);
      std::vector<Formula> lits;
      for (unsigned v = 1; v <= n; ++v) lits.push_back(detail::literal(v, a[v - 1]));
      terms.push_back(detail::fold(lits, Formula::conjunction));
    }
    if (terms.empty())
      return Formula::conjunction(Formula::var(1), Formula::negation(Formula::var(1)));
    return detail::fold(terms, Formula::disjunction);
  }
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t.bit(i)) continue;
    Assignment a = assignment_from_index(i, n);
    std::vector<Formula> lits;
    for (unsigned v = 1; v <= n; ++v) lits.push_back(detail::literal(v, !a[v - 1]));
    terms.push_back(detail::fold(lits, Formula::disjunction));
  }
  if (terms.empty())
    return Formula::disjunction(Formula::var(1), Formula::negation(Formula::var(1)));
  return detail::fold(terms, Formula::conjunction);
}

// One formula per Boolean function of n variables, keyed by truth table.
struct FormulaSet {
  unsigned arity = 0;
  std::map<TruthTable, Formula> members;
};

// All 2^(2^n) functions of n variables. Every member is verified by a
// truth-table round trip before it is admitted.
inline FormulaSet full_representation(unsigned n, Style style = Style::MintermDnf) {
  if (n < 1 || n > 4)
    throw std::invalid_argument("full representations are supported for 1 <= n <= 4");
  FormulaSet set;
  set.arity = n;
  std::uint64_t count = std::uint64_t{1} << (std::uint64_t{1} << n);
  for (std::uint64_t index = 0; index < count; ++index) {
    TruthTable t = TruthTable::from_index(n, index);
    Formula f = formula_from_table(t, style);
    if (truth_table(f, n) != t)
      throw std::logic_error("representative failed its round-trip check");
    set.members.emplace(std::move(t), std::move(f));
  }
  return set;
}

// Exhaustive scan of all 2^arity shared-variable assignments; returns the
// first (lowest-index) assignment satisfying both conjuncts, or nullopt when
// the conjunction is unsatisfiable.
inline std::optional<Assignment> sat_conj(const Formula& f1, const Formula& f2,
                                          unsigned arity) {
  if (arity < 1 || arity > 26)
    throw std::invalid_argument("sat_conj arity out of range");
  if (f1.max_var() > arity || f2.max_var() > arity)
    throw std::invalid_argument("conjunct mentions a variable beyond the arity");
  std::uint64_t count = std::uint64_t{1} << arity;
  for (std::uint64_t i = 0; i < count; ++i) {
    Assignment a = assignment_from_index(i, arity);
    if (eval(f1, a) && eval(f2, a)) return a;
  }
  return std::nullopt;
}

// Lowest-index assignment on which two equal-arity tables differ.
inline std::optional<Assignment> distinguishing_assignment(const TruthTable& g,
                                                           const TruthTable& h) {
  if (g.arity() != h.arity())
    throw std::invalid_argument("tables must have equal arity");
  for (std::size_t i = 0; i < g.size(); ++i)
    if (g.bit(i) != h.bit(i)) return assignment_from_index(i, g.arity());
  return std::nullopt;
}

// --- text syntax ----------------------------------------------------------
//
// Variables x1..xn, constants T/F, operators ! & | with precedence ! > & > |,
// parentheses. to_text emits no whitespace and re-parses to a structurally
// identical formula.

class FormulaParseError : public std::runtime_error {
 public:
  FormulaParseError(std::size_t offset, const std::string& message)
      : std::runtime_error("offset " + std::to_string(offset) + ": " + message),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

namespace detail {

class FormulaParser {
 public:
  explicit FormulaParser(const std::string& text) : text_(text) {}

  Formula parse() {
    Formula f = parse_or();
    skip_ws();
    if (pos_ != text_.size())
      throw FormulaParseError(pos_, "unexpected trailing input");
    return f;
  }

 private:
  Formula parse_or() {
    Formula f = parse_and();
    for (;;) {
      skip_ws();
      if (!accept('|')) return f;
      f = Formula::disjunction(f, parse_and());
    }
  }

  Formula parse_and() {
    Formula f = parse_unary();
    for (;;) {
      skip_ws();
      if (!accept('&')) return f;
      f = Formula::conjunction(f, parse_unary());
    }
  }

  Formula parse_unary() {
    skip_ws();
    if (accept('!')) return Formula::negation(parse_unary());
    return parse_atom();
  }

  Formula parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) throw FormulaParseError(pos_, "unexpected end of formula");
    char c = text_[pos_];
    if (c == 'T') {
      ++pos_;
      return Formula::constant(true);
    }
    if (c == 'F') {
      ++pos_;
      return Formula::constant(false);
    }
    if (c == '(') {
      ++pos_;
      Formula f = parse_or();
      skip_ws();
      if (!accept(')')) throw FormulaParseError(pos_, "expected ')'");
      return f;
    }
    if (c == 'x') {
      std::size_t start = pos_++;
      std::uint64_t index = 0;
      std::size_t digits = 0;
      while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') {
        index = index * 10 + static_cast<std::uint64_t>(text_[pos_] - '0');
        if (index > 1000000) throw FormulaParseError(start, "variable index too large");
        ++pos_;
        ++digits;
      }
      if (digits == 0) throw FormulaParseError(start, "expected digits after 'x'");
      if (index == 0) throw FormulaParseError(start, "variable indices start at x1");
      return Formula::var(static_cast<unsigned>(index));
    }
    throw FormulaParseError(pos_, std::string("unexpected character '") + c + "'");
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
            text_[pos_] == '\r'))
      ++pos_;
  }

  bool accept(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

inline int precedence(Formula::Kind k) {
  switch (k) {
    case Formula::Kind::Or: return 1;
    case Formula::Kind::And: return 2;
    case Formula::Kind::Not: return 3;
    default: return 4;
  }
}

// Parenthesizes right operands of equal precedence so associativity survives
// the parser's left-leaning grammar.
inline void print(const Formula& f, int parent_prec, bool right_side, std::string& out) {
  int prec = precedence(f.kind());
  bool wrap = prec < parent_prec || (prec == parent_prec && right_side);
  if (wrap) out += '(';
  switch (f.kind()) {
    case Formula::Kind::Const:
      out += f.value() ? 'T' : 'F';
      break;
    case Formula::Kind::Var:
      out += 'x';
      out += std::to_string(f.var_index());
      break;
    case Formula::Kind::Not:
      out += '!';
      print(f.child(), prec, false, out);
      break;
    case Formula::Kind::And:
      print(f.left(), prec, false, out);
      out += '&';
      print(f.right(), prec, true, out);
      break;
    case Formula::Kind::Or:
      print(f.left(), prec, false, out);
      out += '|';
      print(f.right(), prec, true, out);
      break;
  }
  if (wrap) out += ')';
}

}  // namespace detail

inline Formula parse_formula(const std::string& text) {
  return detail::FormulaParser(text).parse();
}

inline std::string to_text(const Formula& f) {
  std::string out;
  detail::print(f, 0, false, out);
  return out;
}

}  // namespace postlb
