#pragma once

// The fooling-set adversary. For every function f of n variables the family
// S holds one run of the machine on the pair (phi_f, phi_not_f) - an
// unsatisfiable conjunction, so a correct machine must reject every member
// within 2^n - 1 branches. Any wrong answer, branch overrun, or failure to
// halt is already a refutation. Otherwise the 2^(2^n) rejecting runs crowd
// into at most 2^(2^n - 1) terminated paths, two of them collide, and the
// run-crossing property forces the machine to reject a crossed pair whose
// conjunction is satisfiable. Every returned outcome is re-verified by
// independent re-simulation and oracle evaluation before it escapes.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "postlb/boolean.hpp"
#include "postlb/convention.hpp"
#include "postlb/encoding.hpp"
#include "postlb/machine.hpp"
#include "postlb/paths.hpp"
#include "postlb/reduction.hpp"

namespace postlb {

enum class RunVerdict { Accept, Reject, Undecided };

inline const char* to_string(RunVerdict v) {
  switch (v) {
    case RunVerdict::Accept: return "accept";
    case RunVerdict::Reject: return "reject";
    case RunVerdict::Undecided: return "undecided";
  }
  return "?";
}

inline RunVerdict verdict_of(Verdict v) {
  return v == Verdict::Accept ? RunVerdict::Accept : RunVerdict::Reject;
}

enum class AttackMode { Plain, Reduced };

inline const char* to_string(AttackMode m) {
  return m == AttackMode::Plain ? "plain" : "3cnf";
}

struct AttackConfig {
  unsigned n = 1;
  Style style = Style::MintermDnf;
  AttackMode mode = AttackMode::Plain;
  Convention convention;
  std::uint64_t step_cap = kDefaultStepCap;
  bool allow_large = false;  // permit the 65,536-run family at n == 4
  ReductionMap reduction{0, 0};  // zero fresh_base means "derive from n"

  ReductionMap reduction_map() const {
    return reduction.fresh_base != 0 ? reduction : ReductionMap::for_arity(n);
  }
};

inline void validate(const AttackConfig& cfg) {
  if (cfg.n < 1) throw std::invalid_argument("n must be at least 1");
  if (cfg.n >= 5) throw std::invalid_argument("n >= 5 is not supported");
  if (cfg.n == 4 && !cfg.allow_large)
    throw std::invalid_argument("the n=4 family has 65536 runs; pass allow_large to proceed");
  validate(cfg.convention);
  if (cfg.step_cap == 0) throw std::invalid_argument("step_cap must be >= 1");
}

inline std::uint64_t family_size(unsigned n) {
  return std::uint64_t{1} << (std::uint64_t{1} << n);
}

inline std::uint64_t branch_budget(unsigned n) {
  return (std::uint64_t{1} << n) - 1;
}

struct RunRecord {
  std::uint64_t function_index = 0;
  std::string first_text;   // formula text of the first part (post-reduction in 3cnf mode)
  std::string second_text;  // likewise for phi of the negated function
  BipartiteInput input;
  RunResult result;
  RunVerdict verdict = RunVerdict::Undecided;
  Path path;
};

struct RunFamily {
  unsigned n = 0;
  std::uint64_t budget = 0;         // 2^n - 1 branches
  std::uint64_t expected_size = 0;  // 2^(2^n)
  std::vector<RunRecord> records;   // function-index order
};

namespace detail {

inline Formula representative(const FormulaSet& repr, const TruthTable& table) {
  auto it = repr.members.find(table);
  if (it == repr.members.end())
    throw std::invalid_argument("representation is missing a function; it is not full");
  return it->second;
}

inline Formula reduce_conjunct(const Formula& phi, const ReductionMap& map, int conjunct_id) {
  return formula_of(to_3cnf(cnf_of(phi), map, conjunct_id));
}

// The two part texts of the bipartite input for function f: conjunct 0 is
// phi_f, conjunct 1 is phi_not_f, each pushed through the 3CNF reduction in
// Reduced mode.
inline std::pair<std::string, std::string> part_texts(const AttackConfig& cfg,
                                                      const FormulaSet& repr,
                                                      std::uint64_t function_index) {
  TruthTable table = TruthTable::from_index(cfg.n, function_index);
  Formula first = representative(repr, table);
  Formula second = representative(repr, table.negated());
  if (cfg.mode == AttackMode::Reduced) {
    ReductionMap map = cfg.reduction_map();
    first = reduce_conjunct(first, map, 0);
    second = reduce_conjunct(second, map, 1);
  }
  return {to_text(first), to_text(second)};
}

inline RunRecord run_on_parts(const Program& machine, const AttackConfig& cfg,
                              std::uint64_t function_index, std::string first_text,
                              std::string second_text) {
  RunRecord rec;
  rec.function_index = function_index;
  rec.first_text = std::move(first_text);
  rec.second_text = std::move(second_text);
  rec.input = BipartiteInput{encode_formula(parse_formula(rec.first_text)),
                             encode_formula(parse_formula(rec.second_text))};
  SymbolSpace space = layout(rec.input, cfg.convention);
  rec.result = run(machine, std::move(space), cfg.convention.initial_head, cfg.step_cap);
  rec.verdict = rec.result.halted()
                    ? verdict_of(read_verdict(cfg.convention, rec.result.final_state.space))
                    : RunVerdict::Undecided;
  rec.path = path_of(rec.result.final_state.trace, machine);
  return rec;
}

inline RunRecord make_record(const Program& machine, const AttackConfig& cfg,
                             const FormulaSet& repr, std::uint64_t function_index) {
  auto [first, second] = part_texts(cfg, repr, function_index);
  return run_on_parts(machine, cfg, function_index, std::move(first), std::move(second));
}

inline std::uint64_t fnv1a(const std::vector<InstrAddress>& addresses) {
  std::uint64_t h = 1469598103934665603ull;
  for (InstrAddress a : addresses) {
    for (unsigned byte = 0; byte < 4; ++byte) {
      h ^= (a >> (8 * byte)) & 0xff;
      h *= 1099511628211ull;
    }
  }
  return h;
}

}  // namespace detail

// --- outcomes ---------------------------------------------------------------

// The machine accepted a family input whose conjunction the oracle certifies
// unsatisfiable.
struct CorrectnessViolation {
  RunRecord record;
  bool oracle_sat = false;  // always false: the family conjunction is phi_f & phi_not_f
};

// The machine answered correctly but spent 2^n or more conditional branches.
struct BudgetViolation {
  RunRecord record;
  std::uint64_t budget = 0;
};

// The machine failed to halt: it ran into the step cap or attempted an
// inapplicable write (record.result.status tells which), so it did not decide
// its input at all.
struct StepCapViolation {
  RunRecord record;
};

// Two rejecting family runs g and h collided on one terminated path; crossing
// their input parts kept the machine on that path, still rejecting, yet the
// crossed conjunction is satisfiable.
struct CrossedCounterexample {
  std::uint64_t g = 0;
  std::uint64_t h = 0;
  Path shared_path;
  std::uint64_t first_from = 0;   // family index contributing the first part
  std::uint64_t second_from = 0;  // family index contributing the second part
  std::string first_text;
  std::string second_text;
  BipartiteInput input;
  RunResult result;
  RunVerdict machine_verdict = RunVerdict::Reject;
  Assignment oracle_witness;   // satisfies first & second
  Assignment distinguishing;   // lowest-index assignment where g and h differ
};

using AttackOutcome =
    std::variant<CorrectnessViolation, BudgetViolation, StepCapViolation,
                 CrossedCounterexample>;

inline const char* kind_of(const AttackOutcome& outcome) {
  struct Visitor {
    const char* operator()(const CorrectnessViolation&) const { return "correctness_violation"; }
    const char* operator()(const BudgetViolation&) const { return "budget_violation"; }
    const char* operator()(const StepCapViolation&) const { return "step_cap_violation"; }
    const char* operator()(const CrossedCounterexample&) const { return "crossed_counterexample"; }
  };
  return std::visit(Visitor{}, outcome);
}

namespace detail {

// Violation check for a single record: failure to halt, a wrong accept, or a
// branch overrun, in that priority order.
inline std::optional<AttackOutcome> classify_record(const RunRecord& rec,
                                                    const AttackConfig& cfg) {
  if (!rec.result.halted()) return AttackOutcome{StepCapViolation{rec}};
  if (rec.verdict == RunVerdict::Accept) {
    Formula first = parse_formula(rec.first_text);
    Formula second = parse_formula(rec.second_text);
    unsigned arity = std::max({cfg.n, first.max_var(), second.max_var()});
    if (sat_conj(first, second, arity).has_value())
      throw std::logic_error("family conjunction reported satisfiable; oracle or "
                             "reduction is broken");
    return AttackOutcome{CorrectnessViolation{rec, false}};
  }
  std::uint64_t budget = branch_budget(cfg.n);
  if (rec.path.branch_count > budget)
    return AttackOutcome{BudgetViolation{rec, budget}};
  return std::nullopt;
}

}  // namespace detail

// Runs the machine on every family input, in function-index order. Records
// are independent; nothing is shared between runs but the immutable program.
inline RunFamily run_family(const Program& machine, const AttackConfig& cfg,
                            const FormulaSet& repr) {
  validate(cfg);
  if (repr.arity != cfg.n)
    throw std::invalid_argument("representation arity does not match the attack arity");
  RunFamily family;
  family.n = cfg.n;
  family.budget = branch_budget(cfg.n);
  family.expected_size = family_size(cfg.n);
  if (repr.members.size() != family.expected_size)
    throw std::invalid_argument("representation is not full");
  family.records.reserve(family.expected_size);
  for (std::uint64_t f = 0; f < family.expected_size; ++f)
    family.records.push_back(detail::make_record(machine, cfg, repr, f));
  return family;
}

// First record, in function-index order, that fails to halt, accepts, or
// overruns the branch budget. nullopt means the family is Clean.
inline std::optional<AttackOutcome> scan_violations(const RunFamily& family,
                                                    const AttackConfig& cfg) {
  for (const RunRecord& rec : family.records) {
    if (auto violation = detail::classify_record(rec, cfg)) return violation;
  }
  return std::nullopt;
}

// First pair of records sharing one terminated path: the pair that completes
// earliest in function-index order. Paths are grouped by a hash of the full
// address sequence with exact-sequence confirmation on hash equality. For a
// Clean family nullopt is impossible (2^(2^n) runs, at most half as many
// paths), so callers treat it as an internal error.
inline std::optional<std::pair<std::uint64_t, std::uint64_t>> find_collision(
    const RunFamily& family) {
  std::unordered_map<std::uint64_t, std::vector<std::uint64_t>> buckets;
  for (std::uint64_t i = 0; i < family.records.size(); ++i) {
    const Path& path = family.records[i].path;
    if (!path.terminated || family.records[i].verdict != RunVerdict::Reject ||
        path.branch_count > family.budget)
      throw std::invalid_argument("find_collision requires a Clean family");
    auto& bucket = buckets[detail::fnv1a(path.addresses)];
    for (std::uint64_t j : bucket)
      if (family.records[j].path.addresses == path.addresses)
        return std::make_pair(j, i);
    bucket.push_back(i);
  }
  return std::nullopt;
}

// Crosses the colliding pair's input parts and returns the run the oracle
// convicts. Both crossed runs must stay on the shared path and reject; a
// departure falsifies the run-crossing property and is reported as a
// simulator bug, never as a machine refutation.
inline CrossedCounterexample cross_and_refute(const Program& machine,
                                              const AttackConfig& cfg,
                                              const RunFamily& family, std::uint64_t g,
                                              std::uint64_t h) {
  const RunRecord& rec_g = family.records.at(g);
  const RunRecord& rec_h = family.records.at(h);
  if (g == h) throw std::invalid_argument("collision indices must differ");
  if (!(rec_g.path.terminated && rec_g.path == rec_h.path))
    throw std::invalid_argument("records do not share a terminated path");
  if (rec_g.verdict != RunVerdict::Reject || rec_h.verdict != RunVerdict::Reject)
    throw std::invalid_argument("colliding records must both reject");

  const Path& shared = rec_g.path;
  auto crossed_run = [&](const RunRecord& first_rec, const RunRecord& second_rec) {
    RunRecord rec = detail::run_on_parts(machine, cfg, first_rec.function_index,
                                         first_rec.first_text, second_rec.second_text);
    rec.input = BipartiteInput{first_rec.input.first, second_rec.input.second};
    if (!rec.result.halted() || !(rec.path == shared))
      throw std::logic_error("crossed run left the shared path; simulator bug");
    if (rec.verdict != RunVerdict::Reject)
      throw std::logic_error("crossed run changed its verdict on the shared path; "
                             "simulator bug");
    return rec;
  };

  RunRecord crossed_gh = crossed_run(rec_g, rec_h);  // (phi_g, phi_not_h)
  RunRecord crossed_hg = crossed_run(rec_h, rec_g);  // (phi_h, phi_not_g)

  auto oracle = [&](const RunRecord& rec) {
    Formula first = parse_formula(rec.first_text);
    Formula second = parse_formula(rec.second_text);
    unsigned arity = std::max({cfg.n, first.max_var(), second.max_var()});
    return sat_conj(first, second, arity);
  };

  CrossedCounterexample out;
  out.g = g;
  out.h = h;
  out.shared_path = shared;
  std::optional<Assignment> witness = oracle(crossed_gh);
  const RunRecord* chosen = &crossed_gh;
  out.first_from = g;
  out.second_from = h;
  if (!witness) {
    witness = oracle(crossed_hg);
    chosen = &crossed_hg;
    out.first_from = h;
    out.second_from = g;
    if (!witness)
      throw std::logic_error("neither crossed conjunction is satisfiable; oracle bug");
  }
  out.first_text = chosen->first_text;
  out.second_text = chosen->second_text;
  out.input = chosen->input;
  out.result = chosen->result;
  out.machine_verdict = chosen->verdict;
  out.oracle_witness = *witness;

  auto s = distinguishing_assignment(TruthTable::from_index(cfg.n, g),
                                     TruthTable::from_index(cfg.n, h));
  if (!s) throw std::logic_error("colliding functions are identical; family bug");
  out.distinguishing = *s;
  return out;
}

// Independent re-check of an outcome before anyone acts on it: rebuild the
// cited input from the function indices, re-simulate the run, and re-evaluate
// the oracle claim by direct evaluation.
inline bool verify_outcome(const AttackOutcome& outcome, const Program& machine,
                           const AttackConfig& cfg, const FormulaSet& repr) {
  auto resimulate = [&](const BipartiteInput& input) {
    SymbolSpace space = layout(input, cfg.convention);
    return run(machine, std::move(space), cfg.convention.initial_head, cfg.step_cap);
  };

  // The record must cite exactly the family input for its function index and
  // replay to the same trace.
  auto record_checks_out = [&](const RunRecord& rec) {
    auto [first, second] = detail::part_texts(cfg, repr, rec.function_index);
    if (first != rec.first_text || second != rec.second_text) return false;
    if (encode_formula(parse_formula(first)) != rec.input.first) return false;
    if (encode_formula(parse_formula(second)) != rec.input.second) return false;
    RunResult again = resimulate(rec.input);
    return again.status == rec.result.status &&
           again.final_state.trace == rec.result.final_state.trace;
  };

  if (const auto* v = std::get_if<CorrectnessViolation>(&outcome)) {
    if (!record_checks_out(v->record)) return false;
    if (!v->record.result.halted() || v->record.verdict != RunVerdict::Accept) return false;
    Formula first = parse_formula(v->record.first_text);
    Formula second = parse_formula(v->record.second_text);
    unsigned arity = std::max({cfg.n, first.max_var(), second.max_var()});
    return !v->oracle_sat && !sat_conj(first, second, arity).has_value();
  }
  if (const auto* v = std::get_if<BudgetViolation>(&outcome)) {
    return record_checks_out(v->record) && v->record.result.halted() &&
           v->budget == branch_budget(cfg.n) && v->record.path.branch_count > v->budget &&
           v->record.result.final_state.branches_executed > v->budget;
  }
  if (const auto* v = std::get_if<StepCapViolation>(&outcome)) {
    return record_checks_out(v->record) && !v->record.result.halted();
  }
  const auto& v = std::get<CrossedCounterexample>(outcome);
  if (v.g == v.h || v.g >= family_size(cfg.n) || v.h >= family_size(cfg.n)) return false;
  if (!v.shared_path.terminated ||
      v.shared_path.branch_count > branch_budget(cfg.n))
    return false;
  // cited parts must be the genuine family parts of the contributing runs
  auto first_parts = detail::part_texts(cfg, repr, v.first_from);
  auto second_parts = detail::part_texts(cfg, repr, v.second_from);
  if (v.first_text != first_parts.first || v.second_text != second_parts.second)
    return false;
  if (encode_formula(parse_formula(v.first_text)) != v.input.first) return false;
  if (encode_formula(parse_formula(v.second_text)) != v.input.second) return false;
  // the machine really rejects the crossed input along the shared path
  RunResult again = resimulate(v.input);
  if (!again.halted()) return false;
  if (again.final_state.trace != v.shared_path.addresses) return false;
  if (verdict_of(read_verdict(cfg.convention, again.final_state.space)) !=
      RunVerdict::Reject ||
      v.machine_verdict != RunVerdict::Reject)
    return false;
  // the oracle witness really satisfies the crossed conjunction
  Formula first = parse_formula(v.first_text);
  Formula second = parse_formula(v.second_text);
  if (first.max_var() > v.oracle_witness.size() ||
      second.max_var() > v.oracle_witness.size())
    return false;
  if (!eval(first, v.oracle_witness) || !eval(second, v.oracle_witness)) return false;
  // the distinguishing assignment really separates g and h
  TruthTable tg = TruthTable::from_index(cfg.n, v.g);
  TruthTable th = TruthTable::from_index(cfg.n, v.h);
  if (v.distinguishing.size() != cfg.n) return false;
  std::uint64_t s_index = index_of_assignment(v.distinguishing);
  return tg.bit(s_index) != th.bit(s_index);
}

// The full adversary: family runs in function-index order with violations
// short-circuiting the remaining runs, then pigeonhole collision, then the
// crossed refutation. Always produces an outcome; "the machine is correct
// within budget" is not a possible result. Every outcome is re-verified
// before it is returned.
inline AttackOutcome attack(const Program& machine, const AttackConfig& cfg,
                            const FormulaSet& repr) {
  validate(cfg);
  if (repr.arity != cfg.n)
    throw std::invalid_argument("representation arity does not match the attack arity");
  if (repr.members.size() != family_size(cfg.n))
    throw std::invalid_argument("representation is not full");

  RunFamily family;
  family.n = cfg.n;
  family.budget = branch_budget(cfg.n);
  family.expected_size = family_size(cfg.n);
  family.records.reserve(family.expected_size);

  auto checked = [&](AttackOutcome outcome) {
    if (!verify_outcome(outcome, machine, cfg, repr))
      throw std::logic_error("attack outcome failed re-verification");
    return outcome;
  };

  for (std::uint64_t f = 0; f < family.expected_size; ++f) {
    RunRecord rec = detail::make_record(machine, cfg, repr, f);
    if (auto violation = detail::classify_record(rec, cfg)) return checked(*violation);
    family.records.push_back(std::move(rec));
  }

  auto collision = find_collision(family);
  if (!collision)
    throw std::logic_error("no path collision in a Clean family; pigeonhole violated");
  return checked(AttackOutcome{
      cross_and_refute(machine, cfg, family, collision->first, collision->second)});
}

// --- run-crossing probe -----------------------------------------------------

struct Lemma2CounterWitness {
  int crossing = 0;  // 0: (first1, second2), 1: (first2, second1)
  Path base_path;
  RunResult crossed_result;
};

// Runs the four combinations of two part pairs. Whenever the two base runs
// halt on the same terminated path, both crossed runs must halt on it too; a
// counter-witness would falsify the run-crossing property and means the
// simulator is broken.
struct Lemma2Probe {
  bool antecedent = false;  // both base runs halted on one shared path
  std::optional<Lemma2CounterWitness> counter;

  bool holds() const { return !counter.has_value(); }
};

inline Lemma2Probe lemma2_probe(const Program& machine, const Convention& conv,
                                const std::string& first1, const std::string& second1,
                                const std::string& first2, const std::string& second2,
                                std::uint64_t step_cap = kDefaultStepCap) {
  validate(conv);
  auto run_parts = [&](const std::string& first, const std::string& second) {
    SymbolSpace space = layout(BipartiteInput{first, second}, conv);
    return run(machine, std::move(space), conv.initial_head, step_cap);
  };

  Lemma2Probe probe;
  RunResult base1 = run_parts(first1, second1);
  RunResult base2 = run_parts(first2, second2);
  if (!base1.halted() || !base2.halted() ||
      base1.final_state.trace != base2.final_state.trace)
    return probe;  // antecedent false; holds vacuously

  probe.antecedent = true;
  Path base_path = path_of(base1.final_state.trace, machine);
  RunResult crossed[2] = {run_parts(first1, second2), run_parts(first2, second1)};
  for (int i = 0; i < 2; ++i) {
    if (!crossed[i].halted() ||
        crossed[i].final_state.trace != base_path.addresses) {
      probe.counter = Lemma2CounterWitness{i, base_path, std::move(crossed[i])};
      return probe;
    }
  }
  return probe;
}

}  // namespace postlb
