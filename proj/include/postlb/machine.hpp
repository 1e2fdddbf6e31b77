#pragma once

// Post's Formulation 1: a fixed finite program of mark/unmark/move/branch/stop
// instructions driving a single head over a two-way infinite tape of two-state
// boxes. The tape is stored sparsely as the set of marked addresses.

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace postlb {

using Address = std::int64_t;        // box addresses: ..., -2, -1, 0, 1, 2, ...
using InstrAddress = std::uint32_t;  // instruction addresses: 1..n, contiguous

// Parse failure with the 1-based source line it occurred on.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct Instruction {
  enum class Kind { Mark, Unmark, MoveRight, MoveLeft, Branch, Stop };

  Kind kind = Kind::Stop;
  InstrAddress next = 0;       // Mark/Unmark/MoveRight/MoveLeft
  InstrAddress on_marked = 0;  // Branch
  InstrAddress on_blank = 0;   // Branch

  static Instruction mark(InstrAddress next) { return {Kind::Mark, next, 0, 0}; }
  static Instruction unmark(InstrAddress next) { return {Kind::Unmark, next, 0, 0}; }
  static Instruction move_right(InstrAddress next) { return {Kind::MoveRight, next, 0, 0}; }
  static Instruction move_left(InstrAddress next) { return {Kind::MoveLeft, next, 0, 0}; }
  static Instruction branch(InstrAddress on_marked, InstrAddress on_blank) {
    return {Kind::Branch, 0, on_marked, on_blank};
  }
  static Instruction stop() { return {Kind::Stop, 0, 0, 0}; }

  bool is_write() const { return kind == Kind::Mark || kind == Kind::Unmark; }
  bool is_move() const { return kind == Kind::MoveRight || kind == Kind::MoveLeft; }
  bool is_type_a() const { return is_write() || is_move(); }
};

// A fixed program. Instruction addresses are exactly 1..size() with no gaps;
// execution always begins at address 1. Immutable after construction, so a
// single Program may back any number of concurrent runs.
class Program {
 public:
  explicit Program(std::vector<Instruction> instructions)
      : instructions_(std::move(instructions)) {
    if (instructions_.empty())
      throw std::invalid_argument("program must contain at least one instruction");
    for (std::size_t i = 0; i < instructions_.size(); ++i)
      validate_targets(static_cast<InstrAddress>(i + 1), instructions_[i]);
  }

  std::size_t size() const { return instructions_.size(); }

  const Instruction& at(InstrAddress address) const {
    if (address < 1 || address > instructions_.size())
      throw std::out_of_range("no instruction at address " + std::to_string(address));
    return instructions_[address - 1];
  }

 private:
  void validate_targets(InstrAddress address, const Instruction& ins) const {
    auto check = [&](InstrAddress target) {
      if (target < 1 || target > instructions_.size())
        throw std::invalid_argument("instruction " + std::to_string(address) +
                                    ": dangling target " + std::to_string(target));
    };
    switch (ins.kind) {
      case Instruction::Kind::Branch:
        check(ins.on_marked);
        check(ins.on_blank);
        break;
      case Instruction::Kind::Stop:
        break;
      default:
        check(ins.next);
        break;
    }
  }

  std::vector<Instruction> instructions_;
};

// Sparse symbol space: only marked addresses are stored, every other box is
// blank. mark/unmark are plain set operations; the applicability discipline
// (no re-mark, no re-blank) is enforced by step(), not here.
class SymbolSpace {
 public:
  SymbolSpace() = default;
  explicit SymbolSpace(std::set<Address> marked) : marked_(std::move(marked)) {}

  bool is_marked(Address box) const { return marked_.count(box) != 0; }
  void mark(Address box) { marked_.insert(box); }
  void unmark(Address box) { marked_.erase(box); }

  const std::set<Address>& marked() const { return marked_; }

  friend bool operator==(const SymbolSpace& a, const SymbolSpace& b) {
    return a.marked_ == b.marked_;
  }

 private:
  std::set<Address> marked_;
};

struct MachineState {
  Address head = 0;
  InstrAddress ip = 1;
  SymbolSpace space;
  std::uint64_t branches_executed = 0;
  std::uint64_t steps_executed = 0;
  std::vector<InstrAddress> trace;  // addresses of executed instructions
};

enum class StepSignal {
  Continue,      // instruction executed, more to come
  Halted,        // Stop executed (and recorded in the trace)
  Inapplicable,  // Mark on a marked box or Unmark on a blank one; not recorded
};

// Executes one instruction and advances the state in place. Branch senses the
// current box without writing; every executed instruction is appended to the
// trace. An inapplicable write leaves the state untouched except that ip still
// points at the offending instruction.
inline StepSignal step(const Program& program, MachineState& state) {
  const Instruction& ins = program.at(state.ip);
  switch (ins.kind) {
    case Instruction::Kind::Mark:
      if (state.space.is_marked(state.head)) return StepSignal::Inapplicable;
      state.space.mark(state.head);
      break;
    case Instruction::Kind::Unmark:
      if (!state.space.is_marked(state.head)) return StepSignal::Inapplicable;
      state.space.unmark(state.head);
      break;
    case Instruction::Kind::MoveRight:
      ++state.head;
      break;
    case Instruction::Kind::MoveLeft:
      --state.head;
      break;
    case Instruction::Kind::Branch:
    case Instruction::Kind::Stop:
      break;
  }
  state.trace.push_back(state.ip);
  ++state.steps_executed;
  switch (ins.kind) {
    case Instruction::Kind::Branch:
      ++state.branches_executed;
      state.ip = state.space.is_marked(state.head) ? ins.on_marked : ins.on_blank;
      return StepSignal::Continue;
    case Instruction::Kind::Stop:
      return StepSignal::Halted;
    default:
      state.ip = ins.next;
      return StepSignal::Continue;
  }
}

struct RunResult {
  enum class Status { Halted, StepCapExceeded, ApplicabilityViolation };

  Status status = Status::Halted;
  std::uint64_t violation_step = 0;  // 1-based step of the inapplicable write
  MachineState final_state;

  bool halted() const { return status == Status::Halted; }
};

inline const char* to_string(RunResult::Status s) {
  switch (s) {
    case RunResult::Status::Halted: return "halted";
    case RunResult::Status::StepCapExceeded: return "step_cap_exceeded";
    case RunResult::Status::ApplicabilityViolation: return "applicability_violation";
  }
  return "?";
}

constexpr std::uint64_t kDefaultStepCap = 100000;

// Runs the program from address 1 until Stop, an inapplicable write, or the
// step cap. The cap is mandatory: arbitrary programs may diverge.
inline RunResult run(const Program& program, SymbolSpace space, Address initial_head,
                     std::uint64_t step_cap = kDefaultStepCap) {
  if (step_cap == 0) throw std::invalid_argument("step_cap must be >= 1");
  MachineState state;
  state.head = initial_head;
  state.space = std::move(space);
  while (state.steps_executed < step_cap) {
    switch (step(program, state)) {
      case StepSignal::Continue:
        break;
      case StepSignal::Halted:
        return {RunResult::Status::Halted, 0, std::move(state)};
      case StepSignal::Inapplicable:
        return {RunResult::Status::ApplicabilityViolation, state.steps_executed + 1,
                std::move(state)};
    }
  }
  return {RunResult::Status::StepCapExceeded, 0, std::move(state)};
}

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline bool parse_u32(const std::string& s, InstrAddress& out) {
  if (s.empty() || s.size() > 9) return false;
  std::uint64_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
    v = v * 10 + static_cast<std::uint64_t>(c - '0');
  }
  out = static_cast<InstrAddress>(v);
  return true;
}

inline std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t b = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > b) out.push_back(s.substr(b, i - b));
  }
  return out;
}

}  // namespace detail

// Parses the line-oriented program format:
//
//   <addr>: MARK -> <next>
//   <addr>: UNMARK -> <next>
//   <addr>: RIGHT -> <next>
//   <addr>: LEFT -> <next>
//   <addr>: BRANCH marked=<a> blank=<b>
//   <addr>: STOP
//
// '#' starts a comment; blank lines are ignored. Addresses must be exactly
// 1..n with no duplicates or gaps, and every jump target must exist.
inline Program parse_program(const std::string& text) {
  struct Parsed {
    Instruction ins;
    std::size_t line;
  };
  std::vector<std::pair<InstrAddress, Parsed>> entries;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string raw = text.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
    pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::string line = detail::trim(raw);
    if (line.empty()) continue;

    std::size_t colon = line.find(':');
    if (colon == std::string::npos)
      throw ParseError(line_no, "expected '<addr>: <instruction>'");
    InstrAddress addr = 0;
    if (!detail::parse_u32(detail::trim(line.substr(0, colon)), addr) || addr == 0)
      throw ParseError(line_no, "invalid instruction address '" +
                                    detail::trim(line.substr(0, colon)) + "'");

    std::vector<std::string> tok = detail::split_ws(line.substr(colon + 1));
    if (tok.empty()) throw ParseError(line_no, "missing instruction");
    const std::string& op = tok[0];

    auto want_arrow_target = [&](Instruction (*make)(InstrAddress)) {
      if (tok.size() != 3 || tok[1] != "->")
        throw ParseError(line_no, op + " expects '-> <next>'");
      InstrAddress next = 0;
      if (!detail::parse_u32(tok[2], next) || next == 0)
        throw ParseError(line_no, "invalid jump target '" + tok[2] + "'");
      return make(next);
    };

    Instruction ins;
    if (op == "MARK") {
      ins = want_arrow_target(&Instruction::mark);
    } else if (op == "UNMARK") {
      ins = want_arrow_target(&Instruction::unmark);
    } else if (op == "RIGHT") {
      ins = want_arrow_target(&Instruction::move_right);
    } else if (op == "LEFT") {
      ins = want_arrow_target(&Instruction::move_left);
    } else if (op == "STOP") {
      if (tok.size() != 1) throw ParseError(line_no, "STOP takes no arguments");
      ins = Instruction::stop();
    } else if (op == "BRANCH") {
      if (tok.size() != 3)
        throw ParseError(line_no, "BRANCH expects 'marked=<a> blank=<b>'");
      InstrAddress on_marked = 0, on_blank = 0;
      bool have_marked = false, have_blank = false;
      for (std::size_t i = 1; i < tok.size(); ++i) {
        std::size_t eq = tok[i].find('=');
        if (eq == std::string::npos)
          throw ParseError(line_no, "BRANCH expects 'marked=<a> blank=<b>'");
        std::string key = tok[i].substr(0, eq);
        InstrAddress value = 0;
        if (!detail::parse_u32(tok[i].substr(eq + 1), value) || value == 0)
          throw ParseError(line_no, "invalid jump target '" + tok[i].substr(eq + 1) + "'");
        if (key == "marked" && !have_marked) {
          on_marked = value;
          have_marked = true;
        } else if (key == "blank" && !have_blank) {
          on_blank = value;
          have_blank = true;
        } else {
          throw ParseError(line_no, "unexpected BRANCH argument '" + tok[i] + "'");
        }
      }
      if (!have_marked || !have_blank)
        throw ParseError(line_no, "BRANCH expects both marked= and blank=");
      ins = Instruction::branch(on_marked, on_blank);
    } else {
      throw ParseError(line_no, "unknown instruction '" + op + "'");
    }
    entries.emplace_back(addr, Parsed{ins, line_no});
  }

  if (entries.empty()) throw ParseError(line_no ? line_no : 1, "empty program");

  std::vector<Instruction> instructions(entries.size());
  std::vector<std::size_t> line_of(entries.size() + 1, 0);
  std::vector<bool> seen(entries.size() + 1, false);
  for (const auto& [addr, parsed] : entries) {
    if (addr > entries.size())
      throw ParseError(parsed.line, "address " + std::to_string(addr) +
                                        " leaves a gap (program has " +
                                        std::to_string(entries.size()) + " instructions)");
    if (seen[addr])
      throw ParseError(parsed.line, "duplicate address " + std::to_string(addr));
    seen[addr] = true;
    instructions[addr - 1] = parsed.ins;
    line_of[addr] = parsed.line;
  }

  // Every jump target must exist; report against the referencing line.
  for (InstrAddress a = 1; a <= entries.size(); ++a) {
    const Instruction& ins = instructions[a - 1];
    auto check = [&](InstrAddress target) {
      if (target < 1 || target > entries.size())
        throw ParseError(line_of[a], "dangling jump target " + std::to_string(target));
    };
    if (ins.kind == Instruction::Kind::Branch) {
      check(ins.on_marked);
      check(ins.on_blank);
    } else if (ins.kind != Instruction::Kind::Stop) {
      check(ins.next);
    }
  }
  return Program(std::move(instructions));
}

// Round-trips through parse_program.
inline std::string program_to_text(const Program& program) {
  std::string out;
  for (InstrAddress a = 1; a <= program.size(); ++a) {
    const Instruction& ins = program.at(a);
    out += std::to_string(a);
    out += ": ";
    switch (ins.kind) {
      case Instruction::Kind::Mark:
        out += "MARK -> " + std::to_string(ins.next);
        break;
      case Instruction::Kind::Unmark:
        out += "UNMARK -> " + std::to_string(ins.next);
        break;
      case Instruction::Kind::MoveRight:
        out += "RIGHT -> " + std::to_string(ins.next);
        break;
      case Instruction::Kind::MoveLeft:
        out += "LEFT -> " + std::to_string(ins.next);
        break;
      case Instruction::Kind::Branch:
        out += "BRANCH marked=" + std::to_string(ins.on_marked) +
               " blank=" + std::to_string(ins.on_blank);
        break;
      case Instruction::Kind::Stop:
        out += "STOP";
        break;
    }
    out += '\n';
  }
  return out;
}

}  // namespace postlb
