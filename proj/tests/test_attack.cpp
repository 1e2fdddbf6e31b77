#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "postlb/attack.hpp"
#include "postlb/random.hpp"

using namespace postlb;

namespace {

AttackConfig config_n(unsigned n, AttackMode mode = AttackMode::Plain,
                      Style style = Style::MintermDnf) {
  AttackConfig cfg;
  cfg.n = n;
  cfg.mode = mode;
  cfg.style = style;
  cfg.step_cap = 10000;
  return cfg;
}

const Program& always_reject() {
  static Program p = parse_program("1: STOP");
  return p;
}

// marks the answer box (blank for every family input) and halts
const Program& always_accept() {
  static Program p = parse_program("1: MARK -> 2\n2: STOP");
  return p;
}

// wanders right and back, writes nothing, rejects everything
const Program& pacer() {
  static Program p = parse_program("1: RIGHT -> 2\n2: RIGHT -> 3\n3: LEFT -> 4\n4: STOP");
  return p;
}

}  // namespace

TEST_CASE("run_family produces one rejecting record per function", "[attack][family]") {
  FormulaSet repr = full_representation(1);
  AttackConfig cfg = config_n(1);
  RunFamily family = run_family(always_reject(), cfg, repr);
  REQUIRE(family.records.size() == 4);
  CHECK(family.expected_size == 4);
  CHECK(family.budget == 1);
  for (std::uint64_t f = 0; f < 4; ++f) {
    const RunRecord& rec = family.records[f];
    CHECK(rec.function_index == f);
    CHECK(rec.verdict == RunVerdict::Reject);
    CHECK(rec.path.terminated);
    CHECK(rec.path.addresses == std::vector<InstrAddress>{1});

    // the conjunction phi_f & phi_not_f is always unsatisfiable
    Formula first = parse_formula(rec.first_text);
    Formula second = parse_formula(rec.second_text);
    CHECK_FALSE(sat_conj(first, second, 1).has_value());
  }

  FormulaSet repr2 = full_representation(2);
  CHECK(run_family(always_reject(), config_n(2), repr2).records.size() == 16);
}

TEST_CASE("scan_violations is clean exactly when nothing failed", "[attack][scan]") {
  FormulaSet repr = full_representation(1);
  AttackConfig cfg = config_n(1);

  CHECK_FALSE(scan_violations(run_family(always_reject(), cfg, repr), cfg).has_value());

  auto violation = scan_violations(run_family(always_accept(), cfg, repr), cfg);
  REQUIRE(violation.has_value());
  CHECK(std::holds_alternative<CorrectnessViolation>(*violation));
  CHECK(std::get<CorrectnessViolation>(*violation).record.function_index == 0);
}

TEST_CASE("find_collision returns the earliest colliding pair", "[attack][collision]") {
  FormulaSet repr = full_representation(1);
  AttackConfig cfg = config_n(1);
  RunFamily family = run_family(always_reject(), cfg, repr);
  auto pair = find_collision(family);
  REQUIRE(pair.has_value());
  CHECK(pair->first == 0);
  CHECK(pair->second == 1);

  // a family with violations is refused outright
  RunFamily accepting = run_family(always_accept(), cfg, repr);
  CHECK_THROWS_AS(find_collision(accepting), std::invalid_argument);
}

TEST_CASE("the always-reject machine loses to the crossed counterexample",
          "[attack][worked]") {
  FormulaSet repr = full_representation(1);
  AttackConfig cfg = config_n(1);
  AttackOutcome outcome = attack(always_reject(), cfg, repr);
  REQUIRE(std::holds_alternative<CrossedCounterexample>(outcome));
  const auto& c = std::get<CrossedCounterexample>(outcome);

  CHECK(c.g == 0);
  CHECK(c.h == 1);
  CHECK(c.shared_path.addresses == std::vector<InstrAddress>{1});
  CHECK(c.machine_verdict == RunVerdict::Reject);

  // g = const-false, h = not-x1: (phi_g & phi_not_h) is unsatisfiable, so the
  // refutation lands on the second crossing (phi_h & phi_not_g) = not-x1 & true
  CHECK(c.first_from == 1);
  CHECK(c.second_from == 0);
  CHECK(c.oracle_witness == Assignment{false});

  // oracle certificate: the witness satisfies both crossed conjuncts
  CHECK(eval(parse_formula(c.first_text), c.oracle_witness));
  CHECK(eval(parse_formula(c.second_text), c.oracle_witness));

  // independent replay reproduces the rejection
  SymbolSpace space = layout(c.input, cfg.convention);
  RunResult again = run(always_reject(), space, cfg.convention.initial_head, cfg.step_cap);
  REQUIRE(again.halted());
  CHECK(verdict_of(read_verdict(cfg.convention, again.final_state.space)) ==
        RunVerdict::Reject);

  CHECK(verify_outcome(outcome, always_reject(), cfg, repr));
}

TEST_CASE("crossing the constant functions convicts the second crossing",
          "[attack][worked]") {
  // g = const-false (index 0), h = const-true (index 3): phi_g & phi_not_h is
  // itself unsatisfiable, so the refutation must come from phi_h & phi_not_g
  FormulaSet repr = full_representation(1);
  AttackConfig cfg = config_n(1);
  RunFamily family = run_family(always_reject(), cfg, repr);
  CrossedCounterexample c = cross_and_refute(always_reject(), cfg, family, 0, 3);
  CHECK(c.first_from == 3);
  CHECK(c.second_from == 0);
  CHECK(c.oracle_witness == Assignment{false});
  CHECK(eval(parse_formula(c.first_text), c.oracle_witness));
  CHECK(eval(parse_formula(c.second_text), c.oracle_witness));
  CHECK(verify_outcome(AttackOutcome{c}, always_reject(), cfg, repr));
}

TEST_CASE("an accepting machine is convicted of a correctness violation",
          "[attack][worked]") {
  FormulaSet repr = full_representation(1);
  AttackConfig cfg = config_n(1);
  AttackOutcome outcome = attack(always_accept(), cfg, repr);
  REQUIRE(std::holds_alternative<CorrectnessViolation>(outcome));
  const auto& v = std::get<CorrectnessViolation>(outcome);
  CHECK(v.record.function_index == 0);
  CHECK(v.record.verdict == RunVerdict::Accept);
  CHECK_FALSE(v.oracle_sat);
  CHECK(verify_outcome(outcome, always_accept(), cfg, repr));
}

TEST_CASE("branch-heavy and diverging machines violate budget or cap",
          "[attack][worked]") {
  FormulaSet repr = full_representation(1);
  AttackConfig cfg = config_n(1);

  // two branches on every run at n=1 exceeds the budget of one
  Program two_branches = parse_program(
      "1: BRANCH marked=2 blank=2\n2: BRANCH marked=3 blank=3\n3: STOP");
  AttackOutcome budget = attack(two_branches, cfg, repr);
  REQUIRE(std::holds_alternative<BudgetViolation>(budget));
  CHECK(std::get<BudgetViolation>(budget).budget == 1);
  CHECK(std::get<BudgetViolation>(budget).record.path.branch_count == 2);
  CHECK(verify_outcome(budget, two_branches, cfg, repr));

  Program spinner = parse_program("1: RIGHT -> 1");
  AttackOutcome cap = attack(spinner, cfg, repr);
  REQUIRE(std::holds_alternative<StepCapViolation>(cap));
  CHECK(std::get<StepCapViolation>(cap).record.result.status ==
        RunResult::Status::StepCapExceeded);
  CHECK(verify_outcome(cap, spinner, cfg, repr));

  // a machine that re-marks a marked box fails to decide at all
  Program remarker = parse_program("1: MARK -> 2\n2: MARK -> 3\n3: STOP");
  AttackOutcome inapplicable = attack(remarker, cfg, repr);
  REQUIRE(std::holds_alternative<StepCapViolation>(inapplicable));
  CHECK(std::get<StepCapViolation>(inapplicable).record.result.status ==
        RunResult::Status::ApplicabilityViolation);
  CHECK(verify_outcome(inapplicable, remarker, cfg, repr));
}

TEST_CASE("clean families stay under the F/2 path count", "[attack][pigeonhole]") {
  for (unsigned n : {1u, 2u}) {
    FormulaSet repr = full_representation(n);
    AttackConfig cfg = config_n(n);
    for (const Program* machine : {&always_reject(), &pacer()}) {
      RunFamily family = run_family(*machine, cfg, repr);
      REQUIRE_FALSE(scan_violations(family, cfg).has_value());
      std::set<std::vector<InstrAddress>> distinct;
      for (const RunRecord& rec : family.records) distinct.insert(rec.path.addresses);
      CHECK(distinct.size() <= (std::size_t{1} << ((std::size_t{1} << n) - 1)));
    }
  }
}

TEST_CASE("attack returns a verified outcome for every machine tried",
          "[attack][totality]") {
  FormulaSet repr = full_representation(1);
  AttackConfig cfg = config_n(1);
  Rng rng(1010);
  for (int trial = 0; trial < 60; ++trial) {
    Program machine = random_program(rng, 15);
    AttackOutcome outcome = attack(machine, cfg, repr);
    CHECK(verify_outcome(outcome, machine, cfg, repr));
  }
}

TEST_CASE("totality survives arbitrary conventions", "[attack][totality]") {
  Rng rng(2020);
  for (unsigned n : {1u, 2u}) {
    FormulaSet repr = full_representation(n);
    int trials = n == 1 ? 60 : 15;
    for (int trial = 0; trial < trials; ++trial) {
      AttackConfig cfg = config_n(n);
      cfg.convention = random_convention(rng);
      Program machine = random_program(rng, 12);
      AttackOutcome outcome = attack(machine, cfg, repr);
      CHECK(verify_outcome(outcome, machine, cfg, repr));
    }
  }
}

TEST_CASE("reduced mode attacks through the 3CNF images", "[attack][reduced]") {
  FormulaSet repr = full_representation(1, Style::MaxtermCnf);
  AttackConfig cfg = config_n(1, AttackMode::Reduced, Style::MaxtermCnf);

  AttackOutcome outcome = attack(always_reject(), cfg, repr);
  REQUIRE(std::holds_alternative<CrossedCounterexample>(outcome));
  const auto& c = std::get<CrossedCounterexample>(outcome);

  // every clause of the reduced inputs has exactly 3 literals
  for (const std::string& text : {c.first_text, c.second_text})
    for (const Clause& clause : cnf_of(parse_formula(text)).clauses)
      CHECK(clause.size() == 3);

  CHECK(eval(parse_formula(c.first_text), c.oracle_witness));
  CHECK(eval(parse_formula(c.second_text), c.oracle_witness));
  CHECK(verify_outcome(outcome, always_reject(), cfg, repr));

  AttackOutcome accept_outcome = attack(always_accept(), cfg, repr);
  CHECK(std::holds_alternative<CorrectnessViolation>(accept_outcome));
  CHECK(verify_outcome(accept_outcome, always_accept(), cfg, repr));
}

TEST_CASE("arity guards reject oversized families", "[attack][guards]") {
  FormulaSet repr = full_representation(1);
  AttackConfig cfg = config_n(4);
  CHECK_THROWS_AS(attack(always_reject(), cfg, repr), std::invalid_argument);
  cfg = config_n(5);
  CHECK_THROWS_AS(attack(always_reject(), cfg, repr), std::invalid_argument);
  cfg = config_n(2);  // repr arity mismatch
  CHECK_THROWS_AS(attack(always_reject(), cfg, repr), std::invalid_argument);
}

TEST_CASE("lemma2_probe crosses the worked four-run inputs", "[attack][lemma2]") {
  Convention conv;
  conv.split = 15;
  conv.first_anchor = 14;
  conv.second_anchor = 15;
  Lemma2Probe probe =
      lemma2_probe(always_reject(), conv, "mbm", "mbbm", "mmbm", "mbmm", 1000);
  CHECK(probe.antecedent);
  CHECK(probe.holds());
}

TEST_CASE("lemma2_probe is vacuous when base paths differ", "[attack][lemma2]") {
  // branch on the box right of the head: the two base runs take different paths
  Program p = parse_program("1: RIGHT -> 2\n2: BRANCH marked=3 blank=4\n3: STOP\n4: STOP");
  Convention conv;
  Lemma2Probe probe = lemma2_probe(p, conv, "b", "mm", "b", "bb", 1000);
  CHECK_FALSE(probe.antecedent);
  CHECK(probe.holds());
}

TEST_CASE("the crossing property holds over random trials", "[attack][property]") {
  Rng rng(1111);
  int applicable = 0;
  for (int trial = 0; trial < 400; ++trial) {
    Program machine = random_program(rng, 12);
    Convention conv = random_convention(rng);
    Lemma2Probe probe =
        lemma2_probe(machine, conv, random_part(rng, 6), random_part(rng, 6),
                     random_part(rng, 6), random_part(rng, 6), 2000);
    if (probe.antecedent) ++applicable;
    REQUIRE(probe.holds());
  }
  CHECK(applicable > 20);
}
