// Command-line front end: solve constraint files, generate random problems,
// and check the bundled corpus.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "wsc/engine.hpp"
#include "wsc/frontend.hpp"
#include "wsc/oracles.hpp"

#ifndef WSC_CORPUS_DIR
#define WSC_CORPUS_DIR "corpus"
#endif

namespace fs = std::filesystem;
using namespace wsc;

namespace {

constexpr int kExitSat = 0;
constexpr int kExitUnsat = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDisagree = 3;

int verdict_exit(Verdict v) { return v == Verdict::Unsat ? kExitUnsat : kExitSat; }

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<BaseVar> input_vars(const ProblemFile& problem) {
  std::vector<BaseVar> out;
  for (const Atom& a : problem.atoms)
    a.for_each_var([&](const Var& v) {
      for (BaseVar b : v.components())
        if (std::find(out.begin(), out.end(), b) == out.end()) out.push_back(b);
    });
  return out;
}

SolveResult run_incremental(const ProblemFile& problem, const SolverOptions& options) {
  Solver solver(options);
  for (const Atom& a : problem.atoms) solver.assert_atom(a);
  solver.run();
  return SolveResult{solver.verdict(), solver.store(), solver.step_count(), solver.trace(),
                     solver.elim_record()};
}

// Returns the disagreement messages; empty when all oracles agree.
std::vector<std::string> oracle_check(const ProblemFile& problem, Verdict verdict,
                                      const Vocabulary& vocab, std::ostream& log) {
  std::vector<std::string> problems;
  Store input = problem.store();
  bool sub_free = input.count(AtomKind::Sub) == 0 && input.count(AtomKind::SubApp) == 0;

  if (sub_free) {
    bool sat = rational_unify(input);
    log << "rational-unify: " << (sat ? "sat" : "unsat") << '\n';
    if (sat != (verdict == Verdict::Sat)) problems.push_back("rational unification disagrees");
  }

  NaiveResult naive = naive_solve(input, 200);
  log << "naive (budget 200): "
      << (naive.outcome == NaiveOutcome::Unsat ? "unsat" : "exhausted") << '\n';
  if (naive.outcome == NaiveOutcome::Unsat && verdict != Verdict::Unsat)
    problems.push_back("naive procedure derives false but the solver says sat");

  if (input.base_components().size() <= 5) {
    SearchLimits limits;
    limits.max_assignments = 200'000;
    SearchResult search = witness_search(input, vocab, limits);
    log << "witness search: " << to_string(search.status) << '\n';
    if (search.witness) {
      for (const auto& [var, tree] : *search.witness)
        log << "  " << vocab.name(var) << " := " << print_term(tree) << '\n';
      if (!check_witness(*search.witness, input, vocab))
        problems.push_back("witness search returned an invalid witness");
      if (verdict == Verdict::Unsat) problems.push_back("a witness exists but the solver says unsat");
    }
  } else {
    log << "witness search: skipped (too many variables)\n";
  }
  return problems;
}

int cmd_solve(const std::string& path, bool json, bool trace, bool check, bool incremental) {
  Vocabulary vocab;
  ProblemFile problem;
  try {
    problem = parse_problem(read_file(path), vocab);
  } catch (const ParseError& e) {
    std::cerr << path << ":" << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return kExitUsage;
  }

  SolverOptions options;
  options.record_trace = trace;
  SolveResult result =
      incremental ? run_incremental(problem, options) : solve(problem.store(), options);

  if (json) {
    std::cout << solve_report(result, input_vars(problem), vocab, trace).dump(2) << '\n';
  } else {
    if (trace)
      for (const TraceEntry& e : result.trace) std::cout << format_trace_entry(e, vocab) << '\n';
    std::cout << to_string(result.verdict) << " (" << result.steps << " steps)\n";
    if (result.verdict == Verdict::Sat) std::cout << to_string(result.solved, vocab);
  }

  if (check) {
    std::ostream& log = json ? std::cerr : std::cout;
    auto problems = oracle_check(problem, result.verdict, vocab, log);
    for (const auto& p : problems) std::cerr << "disagreement: " << p << '\n';
    if (!problems.empty()) return kExitDisagree;
  }
  return verdict_exit(result.verdict);
}

int cmd_random(RandomSpec spec, std::size_t count, unsigned threads, bool print) {
  if (count == 1) {
    Vocabulary vocab;
    ProblemFile problem = random_problem(spec, vocab);
    SolveResult result = solve(problem.store());
    if (print) std::cout << print_problem(problem, vocab);
    std::cout << "# result: " << to_string(result.verdict) << " (" << result.steps << " steps)\n";
    return verdict_exit(result.verdict);
  }

  struct Outcome {
    Verdict verdict;
    std::size_t steps;
  };
  std::vector<Outcome> outcomes(count);
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < count; i += threads) {
        RandomSpec s = spec;
        s.seed = spec.seed + i;
        Vocabulary vocab;
        SolveResult r = solve(random_problem(s, vocab).store());
        outcomes[i] = {r.verdict, r.steps};
      }
    });
  }
  for (auto& th : pool) th.join();

  std::size_t sat = 0, unsat = 0, unknown = 0, max_steps = 0, total = 0;
  for (const Outcome& o : outcomes) {
    sat += o.verdict == Verdict::Sat;
    unsat += o.verdict == Verdict::Unsat;
    unknown += o.verdict == Verdict::Unknown;
    max_steps = std::max(max_steps, o.steps);
    total += o.steps;
  }
  std::cout << "instances: " << count << "\nsat: " << sat << "\nunsat: " << unsat
            << "\nunknown: " << unknown << "\nmax steps: " << max_steps
            << "\nmean steps: " << static_cast<double>(total) / static_cast<double>(count) << '\n';
  return unknown ? kExitDisagree : kExitSat;
}

int cmd_corpus(const std::string& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.path().extension() == ".wsc") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    std::cerr << "no .wsc files in " << dir << '\n';
    return kExitUsage;
  }

  std::size_t failed = 0;
  for (const fs::path& path : files) {
    Vocabulary vocab;
    std::string line = path.filename().string() + ": ";
    try {
      ProblemFile problem = parse_problem(read_file(path), vocab);
      SolveResult result = solve(problem.store());
      line += std::string(to_string(result.verdict));
      if (!problem.expected) {
        line += " (no expectation)";
      } else if (*problem.expected != result.verdict) {
        line += " MISMATCH, expected " + std::string(to_string(*problem.expected));
        ++failed;
      } else {
        line += " ok";
      }
    } catch (const std::exception& e) {
      line += std::string("ERROR ") + e.what();
      ++failed;
    }
    std::cout << line << '\n';
  }
  std::cout << files.size() - failed << "/" << files.size() << " as expected\n";
  return failed ? kExitUnsat : kExitSat;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Solver for equations and weak subsumption constraints over rational trees"};
  app.require_subcommand(1);

  auto* solve_cmd = app.add_subcommand("solve", "Solve a .wsc constraint file");
  std::string file;
  bool json = false, trace = false, check = false, incremental = false;
  solve_cmd->add_option("file", file, "Constraint file")->required();
  solve_cmd->add_flag("--json", json, "Print a JSON report");
  solve_cmd->add_flag("--trace", trace, "Print the rule applications");
  solve_cmd->add_flag("--oracle-check", check, "Cross-check the verdict against the oracles");
  solve_cmd->add_flag("--incremental", incremental, "Assert atoms one at a time");

  auto* random_cmd = app.add_subcommand("random", "Generate and solve random problems");
  RandomSpec spec;
  std::size_t count = 1;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  bool equational = false, quiet = false;
  random_cmd->add_option("--seed", spec.seed, "Seed (instance i uses seed + i)");
  random_cmd->add_option("--vars", spec.vars, "Number of variables")->check(CLI::PositiveNumber);
  random_cmd->add_option("--symbols", spec.symbols, "Number of symbols")->check(CLI::Range(2, 9));
  random_cmd->add_option("--atoms", spec.atoms, "Number of atoms");
  random_cmd->add_option("--max-arity", spec.max_arity, "Largest symbol arity")->check(CLI::Range(0, 3));
  random_cmd->add_option("--count", count, "Number of instances")->check(CLI::PositiveNumber);
  random_cmd->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  random_cmd->add_flag("--equational", equational, "Only = atoms");
  random_cmd->add_flag("--quiet", quiet, "Do not print the generated problem");

  auto* corpus_cmd = app.add_subcommand("corpus", "Check the bundled examples");
  std::string dir = WSC_CORPUS_DIR;
  corpus_cmd->add_option("dir", dir, "Directory of .wsc files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*solve_cmd) return cmd_solve(file, json, trace, check, incremental);
    if (*random_cmd) {
      spec.subsumption = !equational;
      return cmd_random(spec, count, threads, !quiet);
    }
    if (*corpus_cmd) return cmd_corpus(dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
