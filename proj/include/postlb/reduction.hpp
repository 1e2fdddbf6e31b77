#pragma once

// CNF -> 3CNF clause splitting that preserves satisfiability over
// conjunction, plus the De Morgan dual transform. Wide clauses are chained
// through fresh variables; short clauses are padded by repeating their last
// literal, which adds no variables. Fresh variables for conjunct 0 and
// conjunct 1 are drawn from disjoint ranges separated by conjunct_stride.

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "postlb/boolean.hpp"

namespace postlb {

struct Literal {
  unsigned var = 1;       // 1-based
  bool positive = true;

  friend bool operator==(const Literal& a, const Literal& b) {
    return a.var == b.var && a.positive == b.positive;
  }
};

using Clause = std::vector<Literal>;  // disjunction of literals

struct CnfFormula {
  std::vector<Clause> clauses;  // conjunction of clauses; no clause is empty

  unsigned max_var() const {
    unsigned m = 0;
    for (const Clause& c : clauses)
      for (const Literal& l : c) m = std::max(m, l.var);
    return m;
  }
};

inline void validate(const CnfFormula& f) {
  if (f.clauses.empty()) throw std::invalid_argument("CNF formula has no clauses");
  for (const Clause& c : f.clauses) {
    if (c.empty()) throw std::invalid_argument("CNF clause is empty");
    for (const Literal& l : c)
      if (l.var < 1) throw std::invalid_argument("variable indices start at 1");
  }
}

// fresh_base must exceed every original variable; conjunct_stride separates
// the fresh ranges of the two conjuncts.
struct ReductionMap {
  unsigned fresh_base = 0;
  unsigned conjunct_stride = 0;

  static ReductionMap for_arity(unsigned n, unsigned stride = 1024) {
    return ReductionMap{n + 1, stride};
  }
};

// Extracts clause structure from a CNF-shaped AST: a conjunction of clauses,
// each a disjunction of literals (a bare literal counts as a clause).
// Anything else, constants included, is rejected.
inline CnfFormula cnf_of(const Formula& formula) {
  auto literal_of = [](const Formula& f) -> Literal {
    if (f.kind() == Formula::Kind::Var) return {f.var_index(), true};
    if (f.kind() == Formula::Kind::Not && f.child().kind() == Formula::Kind::Var)
      return {f.child().var_index(), false};
    throw std::invalid_argument("formula is not in CNF: expected a literal, got '" +
                                to_text(f) + "'");
  };

  struct Walker {
    decltype(literal_of)& lit;

    void clause(const Formula& f, Clause& out) {
      if (f.kind() == Formula::Kind::Or) {
        clause(f.left(), out);
        clause(f.right(), out);
      } else {
        out.push_back(lit(f));
      }
    }
    void clauses(const Formula& f, CnfFormula& out) {
      if (f.kind() == Formula::Kind::And) {
        clauses(f.left(), out);
        clauses(f.right(), out);
      } else {
        Clause c;
        clause(f, c);
        out.clauses.push_back(std::move(c));
      }
    }
  } walker{literal_of};

  CnfFormula out;
  walker.clauses(formula, out);
  validate(out);
  return out;
}

// Left-associated AST for a CNF formula; round-trips through cnf_of.
inline Formula formula_of(const CnfFormula& cnf) {
  validate(cnf);
  std::vector<Formula> clause_formulas;
  for (const Clause& c : cnf.clauses) {
    std::vector<Formula> lits;
    for (const Literal& l : c) lits.push_back(detail::literal(l.var, l.positive));
    clause_formulas.push_back(detail::fold(lits, Formula::disjunction));
  }
  return detail::fold(clause_formulas, Formula::conjunction);
}

// Splits every clause to exactly 3 literals. A clause (l1 v ... v lk) with
// k > 3 becomes (l1 v l2 v y1) & (!y1 v l3 v y2) & ... & (!y_{k-3} v l_{k-1}
// v lk) with fresh y's; clauses below width 3 repeat their last literal.
// Fresh variables are numbered from fresh_base + conjunct_id * stride and
// never collide across the two conjuncts.
inline CnfFormula to_3cnf(const CnfFormula& f, const ReductionMap& map, int conjunct_id) {
  validate(f);
  if (conjunct_id != 0 && conjunct_id != 1)
    throw std::invalid_argument("conjunct_id must be 0 or 1");
  if (map.fresh_base <= f.max_var())
    throw std::invalid_argument("fresh_base must exceed every original variable");

  unsigned next_fresh = map.fresh_base + static_cast<unsigned>(conjunct_id) * map.conjunct_stride;
  unsigned fresh_limit = next_fresh + map.conjunct_stride;
  auto fresh = [&]() -> unsigned {
    if (next_fresh >= fresh_limit)
      throw std::invalid_argument("conjunct_stride too small for this formula");
    return next_fresh++;
  };

  CnfFormula out;
  for (const Clause& clause : f.clauses) {
    if (clause.size() <= 3) {
      Clause padded = clause;
      while (padded.size() < 3) padded.push_back(padded.back());
      out.clauses.push_back(std::move(padded));
      continue;
    }
    unsigned carry = fresh();
    out.clauses.push_back({clause[0], clause[1], {carry, true}});
    for (std::size_t i = 2; i + 2 < clause.size(); ++i) {
      unsigned next = fresh();
      out.clauses.push_back({{carry, false}, clause[i], {next, true}});
      carry = next;
    }
    out.clauses.push_back({{carry, false}, clause[clause.size() - 2], clause.back()});
  }
  return out;
}

// Variables introduced by to_3cnf under the given map.
inline std::set<unsigned> fresh_vars_in(const CnfFormula& reduced, const ReductionMap& map) {
  std::set<unsigned> fresh;
  for (const Clause& c : reduced.clauses)
    for (const Literal& l : c)
      if (l.var >= map.fresh_base) fresh.insert(l.var);
  return fresh;
}

struct PreservationReport {
  std::uint64_t pairs_checked = 0;
  std::uint64_t violations = 0;
  std::vector<std::size_t> violating_pairs;  // indices into the input list

  bool clean() const { return violations == 0; }
};

// Brute-force check that a mapping preserves satisfiability over conjunction:
// for each (phi1, phi2, t(phi1), t(phi2)), sat(t(phi1) & t(phi2)) must equal
// sat(phi1 & phi2). Images share the original variables; their fresh
// variables only widen the assignment space scanned.
inline PreservationReport preserves_sat_over_conjunction(
    const std::vector<std::tuple<Formula, Formula, Formula, Formula>>& pairs, unsigned n) {
  PreservationReport report;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& [phi1, phi2, image1, image2] = pairs[i];
    bool original = sat_conj(phi1, phi2, n).has_value();
    unsigned image_arity = std::max({n, image1.max_var(), image2.max_var()});
    bool image = sat_conj(image1, image2, image_arity).has_value();
    ++report.pairs_checked;
    if (original != image) {
      ++report.violations;
      report.violating_pairs.push_back(i);
    }
  }
  return report;
}

// De Morgan push-down of !phi: swaps and/or, negates literals, flips
// constants, and cancels double negation. The result's truth table is the
// negation of the input's, so phi is falsifiable iff dualize(phi) is
// satisfiable. CNF in, DNF of the same shape out.
inline Formula dualize(const Formula& formula) {
  switch (formula.kind()) {
    case Formula::Kind::Const:
      return Formula::constant(!formula.value());
    case Formula::Kind::Var:
      return Formula::negation(formula);
    case Formula::Kind::Not:
      return formula.child();
    case Formula::Kind::And:
      return Formula::disjunction(dualize(formula.left()), dualize(formula.right()));
    case Formula::Kind::Or:
      return Formula::conjunction(dualize(formula.left()), dualize(formula.right()));
  }
  throw std::logic_error("unreachable");
}

}  // namespace postlb
