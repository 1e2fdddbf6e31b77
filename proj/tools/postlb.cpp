// Command-line front end: run/trace a machine on a bipartite input, check the
// path-count ceiling, run the fooling-set adversary, reduce CNF to 3CNF,
// generate full representations, and probe the run-crossing property on
// random trials. Every subcommand emits a JSON report (stdout, or --out) and
// the reports are byte-stable for identical inputs and flags.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "postlb/attack.hpp"
#include "postlb/boolean.hpp"
#include "postlb/convention.hpp"
#include "postlb/encoding.hpp"
#include "postlb/machine.hpp"
#include "postlb/paths.hpp"
#include "postlb/random.hpp"
#include "postlb/reduction.hpp"

using nlohmann::json;

namespace {

constexpr std::uint64_t kDefaultSeed = 20140601;

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void emit(const json& report, const std::string& out_path, const std::string& summary) {
  std::string text = report.dump(2);
  text += '\n';
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw DomainError("cannot write '" + out_path + "'");
    out << text;
    if (!summary.empty()) std::cout << summary << '\n';
  }
}

postlb::Program load_program(const std::string& path) {
  try {
    return postlb::parse_program(read_file(path));
  } catch (const postlb::ParseError& e) {
    throw DomainError(path + ": " + e.what());
  }
}

postlb::Convention load_convention(const std::string& path) {
  if (path.empty()) return postlb::Convention{};
  try {
    return postlb::parse_convention(read_file(path));
  } catch (const postlb::ParseError& e) {
    throw DomainError(path + ": " + e.what());
  }
}

std::uint64_t seed_from_env_or(std::uint64_t fallback) {
  if (const char* env = std::getenv("POSTLB_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw DomainError("POSTLB_SEED is not a number");
    }
  }
  return fallback;
}

json assignment_json(const postlb::Assignment& a) {
  json arr = json::array();
  for (bool v : a) arr.push_back(v);
  return arr;
}

json path_json(const std::vector<postlb::InstrAddress>& addresses) {
  json arr = json::array();
  for (auto a : addresses) arr.push_back(a);
  return arr;
}

json run_report(const postlb::RunResult& result, const postlb::Convention& conv,
                bool include_trace) {
  const postlb::MachineState& st = result.final_state;
  json report;
  report["status"] = postlb::to_string(result.status);
  report["steps"] = st.steps_executed;
  report["branches"] = st.branches_executed;
  report["final_head"] = st.head;
  json marked = json::array();
  for (auto box : st.space.marked()) marked.push_back(box);
  report["marked_boxes"] = marked;
  if (result.halted()) {
    report["halt_address"] = st.trace.back();
    report["verdict"] =
        postlb::to_string(postlb::read_verdict(conv, st.space));
  } else {
    report["verdict"] = "undecided";
  }
  if (result.status == postlb::RunResult::Status::ApplicabilityViolation)
    report["violation_step"] = result.violation_step;
  if (include_trace) report["trace"] = path_json(st.trace);
  return report;
}

json record_json(const postlb::RunRecord& rec) {
  json j;
  j["function_index"] = rec.function_index;
  j["formulas"] = {{"first", rec.first_text}, {"second", rec.second_text}};
  j["inputs"] = {{"first", rec.input.first}, {"second", rec.input.second}};
  j["status"] = postlb::to_string(rec.result.status);
  j["machine_verdict"] = postlb::to_string(rec.verdict);
  j["branches"] = rec.result.final_state.branches_executed;
  j["steps"] = rec.result.final_state.steps_executed;
  j["path"] = path_json(rec.path.addresses);
  return j;
}

json outcome_json(const postlb::AttackOutcome& outcome, const postlb::AttackConfig& cfg) {
  json j;
  j["kind"] = postlb::kind_of(outcome);
  j["n"] = cfg.n;
  j["repr"] = postlb::to_string(cfg.style);
  j["mode"] = postlb::to_string(cfg.mode);
  j["budget"] = postlb::branch_budget(cfg.n);
  j["step_cap"] = cfg.step_cap;

  if (const auto* v = std::get_if<postlb::CorrectnessViolation>(&outcome)) {
    j["function_indices"] = {v->record.function_index};
    j["run"] = record_json(v->record);
    j["inputs"] = j["run"]["inputs"];
    j["path"] = j["run"]["path"];
    j["machine_verdict"] = "accept";
    j["oracle_verdict"] = "unsat";
    j["witness_assignment"] = nullptr;
  } else if (const auto* v = std::get_if<postlb::BudgetViolation>(&outcome)) {
    j["function_indices"] = {v->record.function_index};
    j["run"] = record_json(v->record);
    j["inputs"] = j["run"]["inputs"];
    j["path"] = j["run"]["path"];
    j["machine_verdict"] = postlb::to_string(v->record.verdict);
    j["oracle_verdict"] = "unsat";
    j["witness_assignment"] = nullptr;
  } else if (const auto* v = std::get_if<postlb::StepCapViolation>(&outcome)) {
    j["function_indices"] = {v->record.function_index};
    j["run"] = record_json(v->record);
    j["inputs"] = j["run"]["inputs"];
    j["path"] = j["run"]["path"];
    j["machine_verdict"] = "undecided";
    j["oracle_verdict"] = "unsat";
    j["witness_assignment"] = nullptr;
  } else {
    const auto& c = std::get<postlb::CrossedCounterexample>(outcome);
    j["function_indices"] = {c.g, c.h};
    j["crossed_from"] = {{"first", c.first_from}, {"second", c.second_from}};
    j["formulas"] = {{"first", c.first_text}, {"second", c.second_text}};
    j["inputs"] = {{"first", c.input.first}, {"second", c.input.second}};
    j["path"] = path_json(c.shared_path.addresses);
    j["branches"] = c.shared_path.branch_count;
    j["machine_verdict"] = postlb::to_string(c.machine_verdict);
    j["oracle_verdict"] = "sat";
    j["witness_assignment"] = assignment_json(c.oracle_witness);
    j["distinguishing_assignment"] = assignment_json(c.distinguishing);
  }
  return j;
}

postlb::Style parse_style(const std::string& name) {
  if (name == "minterm-dnf") return postlb::Style::MintermDnf;
  if (name == "maxterm-cnf") return postlb::Style::MaxtermCnf;
  throw DomainError("unknown representation style '" + name + "'");
}

std::string padded_index(std::uint64_t index, std::uint64_t max_index) {
  std::string digits = std::to_string(max_index);
  std::string s = std::to_string(index);
  while (s.size() < digits.size()) s.insert(s.begin(), '0');
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Post-machine emulation and lower-bound analysis toolkit"};
  app.require_subcommand(1);

  // run / trace
  std::string program_path, input_path, convention_path, out_path;
  std::uint64_t step_cap = postlb::kDefaultStepCap;
  auto add_run_like = [&](CLI::App* sub) {
    sub->add_option("--program", program_path, "program file")->required();
    sub->add_option("--input", input_path, "bipartite input file (blank tape if omitted)");
    sub->add_option("--convention", convention_path, "symbol space convention file");
    sub->add_option("--step-cap", step_cap, "maximum steps before giving up");
    sub->add_option("--out", out_path, "write the JSON report here instead of stdout");
  };
  CLI::App* cmd_run = app.add_subcommand("run", "run a program on a bipartite input");
  add_run_like(cmd_run);
  CLI::App* cmd_trace =
      app.add_subcommand("trace", "run a program and include the full trace");
  add_run_like(cmd_trace);

  // paths
  std::uint64_t m_max = 8;
  bool list_paths = false;
  CLI::App* cmd_paths =
      app.add_subcommand("paths", "enumerate execution paths per branch budget");
  cmd_paths->add_option("--program", program_path, "program file")->required();
  cmd_paths->add_option("--m-max", m_max, "largest branch budget to check");
  cmd_paths->add_flag("--list-paths", list_paths, "include full path listings");
  cmd_paths->add_option("--out", out_path, "write the JSON report here instead of stdout");

  // attack
  unsigned arity = 1;
  std::string repr_name = "minterm-dnf";
  std::string mode_name = "plain";
  bool allow_large = false;
  CLI::App* cmd_attack =
      app.add_subcommand("attack", "run the fooling-set adversary against a machine");
  cmd_attack->add_option("--program", program_path, "machine under test")->required();
  cmd_attack->add_option("--n", arity, "number of Boolean variables")->required();
  cmd_attack->add_option("--repr", repr_name, "minterm-dnf or maxterm-cnf");
  cmd_attack->add_option("--mode", mode_name, "plain or 3cnf");
  cmd_attack->add_option("--convention", convention_path, "symbol space convention file");
  cmd_attack->add_option("--step-cap", step_cap, "per-run step cap");
  cmd_attack->add_flag("--allow-large", allow_large, "permit the 65536-run n=4 family");
  cmd_attack->add_option("--out", out_path, "write the JSON report here instead of stdout");

  // reduce
  std::string formula_text, formula_file;
  int conjunct_id = 0;
  unsigned fresh_base = 0, stride = 1024;
  CLI::App* cmd_reduce = app.add_subcommand("reduce", "reduce a CNF formula to 3CNF");
  cmd_reduce->add_option("--formula", formula_text, "CNF formula text");
  cmd_reduce->add_option("--formula-file", formula_file, "file holding the formula");
  cmd_reduce->add_option("--conjunct", conjunct_id, "conjunct id (0 or 1)");
  cmd_reduce->add_option("--fresh-base", fresh_base,
                         "first fresh variable (default: max variable + 1)");
  cmd_reduce->add_option("--stride", stride, "fresh-variable stride between conjuncts");
  cmd_reduce->add_option("--out", out_path, "write the JSON report here instead of stdout");

  // gen-repr
  std::string out_dir = ".";
  std::string style_name = "minterm-dnf";
  CLI::App* cmd_gen =
      app.add_subcommand("gen-repr", "generate a full representation of B^n -> B");
  cmd_gen->add_option("--n", arity, "number of Boolean variables")->required();
  cmd_gen->add_option("--style", style_name, "minterm-dnf or maxterm-cnf");
  cmd_gen->add_option("--out-dir", out_dir, "directory for formula files and index.json");

  // lemma2
  std::uint64_t trials = 1000;
  std::uint64_t seed = 0;
  bool seed_given = false;
  unsigned max_instructions = 12;
  CLI::App* cmd_lemma2 =
      app.add_subcommand("lemma2", "randomized probe of the run-crossing property");
  cmd_lemma2->add_option("--program", program_path,
                         "fix the machine (random machines per trial if omitted)");
  cmd_lemma2->add_option("--trials", trials, "number of random trials");
  cmd_lemma2->add_option("--seed", seed, "random seed")->each([&](const std::string&) {
    seed_given = true;
  });
  cmd_lemma2->add_option("--step-cap", step_cap, "per-run step cap");
  cmd_lemma2->add_option("--max-instructions", max_instructions,
                         "size limit for random machines");
  cmd_lemma2->add_option("--out", out_path, "write the JSON report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp")
      return app.exit(e);
    app.exit(e);
    return 2;
  }

  try {
    if (cmd_run->parsed() || cmd_trace->parsed()) {
      postlb::Program program = load_program(program_path);
      postlb::Convention conv = load_convention(convention_path);
      postlb::SymbolSpace space;
      if (!input_path.empty()) {
        postlb::BipartiteInput input = postlb::parse_bipartite_input(read_file(input_path));
        space = postlb::layout(input, conv);
      }
      postlb::RunResult result =
          postlb::run(program, std::move(space), conv.initial_head, step_cap);
      json report = run_report(result, conv, cmd_trace->parsed());
      emit(report, out_path, std::string("status: ") + postlb::to_string(result.status));
      return 0;
    }

    if (cmd_paths->parsed()) {
      postlb::Program program = load_program(program_path);
      json report;
      report["m_max"] = m_max;
      bool all_hold = true;
      json rows = json::array();
      for (const postlb::Lemma1Row& row : postlb::verify_lemma1(program, m_max)) {
        json r;
        r["m"] = row.m;
        r["terminated_count"] = row.terminated_count;
        r["open_count"] = row.open_count;
        r["bound"] = row.bound;
        r["holds"] = row.holds;
        if (list_paths) {
          postlb::PathSet set = postlb::enumerate_paths(program, row.m);
          json terminated = json::array();
          for (const postlb::Path& p : set.terminated) terminated.push_back(path_json(p.addresses));
          json open = json::array();
          for (const postlb::Path& p : set.open) open.push_back(path_json(p.addresses));
          r["terminated_paths"] = terminated;
          r["open_paths"] = open;
        }
        all_hold = all_hold && row.holds;
        rows.push_back(r);
      }
      report["rows"] = rows;
      report["all_hold"] = all_hold;
      emit(report, out_path, all_hold ? "ceiling holds at every budget" : "CEILING VIOLATED");
      return 0;
    }

    if (cmd_attack->parsed()) {
      postlb::Program program = load_program(program_path);
      postlb::AttackConfig cfg;
      cfg.n = arity;
      cfg.style = parse_style(repr_name);
      if (mode_name == "plain") cfg.mode = postlb::AttackMode::Plain;
      else if (mode_name == "3cnf") cfg.mode = postlb::AttackMode::Reduced;
      else throw DomainError("unknown mode '" + mode_name + "'");
      cfg.convention = load_convention(convention_path);
      cfg.step_cap = step_cap;
      cfg.allow_large = allow_large;
      postlb::validate(cfg);  // before the representation is built
      postlb::FormulaSet repr = postlb::full_representation(cfg.n, cfg.style);
      postlb::AttackOutcome outcome = postlb::attack(program, cfg, repr);
      json report = outcome_json(outcome, cfg);
      emit(report, out_path, std::string("outcome: ") + postlb::kind_of(outcome));
      return 0;
    }

    if (cmd_reduce->parsed()) {
      if (formula_text.empty() == formula_file.empty())
        throw DomainError("pass exactly one of --formula and --formula-file");
      std::string text = formula_text.empty()
                             ? postlb::detail::trim(read_file(formula_file))
                             : formula_text;
      postlb::CnfFormula cnf;
      try {
        cnf = postlb::cnf_of(postlb::parse_formula(text));
      } catch (const postlb::FormulaParseError& e) {
        throw DomainError(std::string("formula: ") + e.what());
      } catch (const std::invalid_argument& e) {
        throw DomainError(e.what());
      }
      postlb::ReductionMap map{fresh_base ? fresh_base : cnf.max_var() + 1, stride};
      postlb::CnfFormula reduced = postlb::to_3cnf(cnf, map, conjunct_id);
      json report;
      report["input"] = postlb::to_text(postlb::formula_of(cnf));
      report["output"] = postlb::to_text(postlb::formula_of(reduced));
      report["clauses_in"] = cnf.clauses.size();
      report["clauses_out"] = reduced.clauses.size();
      json fresh = json::array();
      for (unsigned v : postlb::fresh_vars_in(reduced, map)) fresh.push_back(v);
      report["fresh_variables"] = fresh;
      report["conjunct"] = conjunct_id;
      report["fresh_base"] = map.fresh_base;
      report["stride"] = map.conjunct_stride;
      emit(report, out_path, "reduced " + std::to_string(cnf.clauses.size()) + " clauses to " +
                                 std::to_string(reduced.clauses.size()));
      return 0;
    }

    if (cmd_gen->parsed()) {
      postlb::Style style = parse_style(style_name);
      std::error_code ec;
      std::filesystem::create_directories(out_dir, ec);
      if (ec) throw DomainError("cannot create '" + out_dir + "': " + ec.message());
      postlb::FormulaSet set = postlb::full_representation(arity, style);
      std::uint64_t count = postlb::family_size(arity);
      json members = json::array();
      for (std::uint64_t index = 0; index < count; ++index) {
        postlb::TruthTable table = postlb::TruthTable::from_index(arity, index);
        const postlb::Formula& formula = set.members.at(table);
        std::string name = "f_" + padded_index(index, count - 1) + ".bf";
        std::ofstream out(out_dir + "/" + name, std::ios::binary);
        if (!out) throw DomainError("cannot write '" + out_dir + "/" + name + "'");
        out << postlb::to_text(formula) << '\n';
        json m;
        m["index"] = index;
        m["table"] = table.bit_string();
        m["file"] = name;
        m["formula"] = postlb::to_text(formula);
        members.push_back(m);
      }
      json index_doc;
      index_doc["n"] = arity;
      index_doc["style"] = style_name;
      index_doc["count"] = count;
      index_doc["members"] = members;
      emit(index_doc, out_dir + "/index.json",
           "wrote " + std::to_string(count) + " formulas to " + out_dir);
      return 0;
    }

    if (cmd_lemma2->parsed()) {
      std::uint64_t effective_seed = seed_given ? seed : seed_from_env_or(kDefaultSeed);
      postlb::Rng rng(effective_seed);
      std::optional<postlb::Program> fixed;
      if (!program_path.empty()) fixed = load_program(program_path);
      std::uint64_t applicable = 0, counter_witnesses = 0;
      for (std::uint64_t t = 0; t < trials; ++t) {
        postlb::Program machine =
            fixed ? *fixed : postlb::random_program(rng, max_instructions);
        postlb::Convention conv = postlb::random_convention(rng);
        std::string a1 = postlb::random_part(rng, 6), b1 = postlb::random_part(rng, 6);
        std::string a2 = postlb::random_part(rng, 6), b2 = postlb::random_part(rng, 6);
        postlb::Lemma2Probe probe =
            postlb::lemma2_probe(machine, conv, a1, b1, a2, b2, step_cap);
        if (probe.antecedent) ++applicable;
        if (!probe.holds()) ++counter_witnesses;
      }
      json report;
      report["trials"] = trials;
      report["seed"] = effective_seed;
      report["step_cap"] = step_cap;
      report["applicable"] = applicable;
      report["vacuous"] = trials - applicable;
      report["counter_witnesses"] = counter_witnesses;
      report["holds"] = counter_witnesses == 0;
      emit(report, out_path,
           "crossing held in " + std::to_string(applicable) + "/" +
               std::to_string(trials) + " applicable trials");
      return 0;
    }
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const postlb::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const postlb::FormulaParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const postlb::EncodingError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
