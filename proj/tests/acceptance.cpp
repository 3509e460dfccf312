// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "support.hpp"

using namespace wsc;
using namespace wsc::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::string> failures;  // first few counterexamples

  void fail(std::string what) {
    pass = false;
    if (failures.size() < 5) failures.push_back(std::move(what));
  }
};

std::string describe(const Problem& p) {
  std::string out;
  for (const Atom& a : p.file.atoms) out += to_string(a, p.vocab) + "; ";
  return out;
}

constexpr std::uint64_t kSeed = 20240601;

// --- 1 ------------------------------------------------------------------------

Outcome worked_examples() {
  Outcome o;
  auto expect = [&](std::string_view text, Verdict want, std::size_t max_steps,
                    std::string_view label) {
    Problem p = parse(text);
    SolveResult r = solve(p.store());
    if (r.verdict != want)
      o.fail(std::string(label) + ": got " + std::string(to_string(r.verdict)));
    if (r.steps >= max_steps)
      o.fail(std::string(label) + ": " + std::to_string(r.steps) + " steps");
    return std::make_pair(std::move(p), std::move(r));
  };

  expect("x <= z\ny <= z\nx = a()\ny = b()\n", Verdict::Sat, 100, "two constants below z");
  expect("y = f(u)\nu = a()\nz = f(x)\nx <= y\nx <= z\n", Verdict::Unsat, 100, "clash example");

  auto [p, r] = expect("x = f(u, v)\nx <= y\ny = f(z, z)\n", Verdict::Sat, 100, "weak pair");
  auto classes = solved_classes(r.solved, r.elim_record, p.store().base_components());
  if (class_of(classes, p.var("u")) == class_of(classes, p.var("v")))
    o.fail("weak pair: u and v share a class");

  auto [p1, r1] = expect("x <= y\ny = f(x)\n", Verdict::Sat, 100, "loop x <= y, y = f(x)");
  auto [p2, r2] = expect("x <= y\ny = f(y)\n", Verdict::Sat, 100, "loop x <= y, y = f(y)");
  o.detail = "loop steps " + std::to_string(r1.steps) + " and " + std::to_string(r2.steps);
  return o;
}

// --- 2 ------------------------------------------------------------------------

Outcome forbidden_derivations() {
  Outcome o;
  auto run = [&](std::string_view text, std::string_view forbidden_text, std::string_view label) {
    Problem p = parse(text);
    SolverOptions options;
    options.record_trace = true;
    SolveResult r = solve(p.store(), options);
    Store forbidden = parse_store(forbidden_text, p.vocab);
    Store input = p.store();
    for (const TraceEntry& e : r.trace) {
      bool descend = e.rule == RuleId::Descend1 || e.rule == RuleId::Descend2;
      for (const Atom& c : e.conclusions) {
        if (descend && forbidden.contains(c))
          o.fail(std::string(label) + ": " + format_trace_entry(e, p.vocab));
        if (descend && input.contains(c))
          o.fail(std::string(label) + ": re-added " + to_string(c, p.vocab));
      }
    }
    if (r.verdict != Verdict::Sat) o.fail(std::string(label) + ": not sat");
    return r.steps;
  };
  std::size_t a = run("x = f(u)\n", "x <= f(u)\n", "x = f(u)");
  std::size_t b = run("x <= y\nx = f(x)\nx <= f(y)\n", "x <= y\n", "x <= y, x = f(x), x <= f(y)");
  std::size_t c = run("x = f(y)\n", "y <= y\n", "x = f(y)");
  o.detail = "steps " + std::to_string(a) + ", " + std::to_string(b) + ", " + std::to_string(c);
  return o;
}

// --- 3 and 7 ------------------------------------------------------------------

RandomRanges termination_ranges() { return RandomRanges{6, 3, 12, 2, true}; }

Outcome termination(std::vector<Verdict>& verdicts) {
  Outcome o;
  std::size_t max_steps = 0, total = 0, sat = 0;
  for (std::size_t i = 0; i < 1000; ++i) {
    Problem p = random_instance(kSeed, i, termination_ranges());
    SolveResult r = solve(p.store());
    verdicts.push_back(r.verdict);
    if (r.verdict == Verdict::Unknown) {
      o.fail("no fixpoint: " + describe(p));
      continue;
    }
    if (r.verdict == Verdict::Sat) {
      ++sat;
      if (!irreducible(r.solved)) o.fail("sat but reducible: " + describe(p));
    }
    max_steps = std::max(max_steps, r.steps);
    total += r.steps;
  }
  std::ostringstream d;
  d << "1000 instances, " << sat << " sat, max steps " << max_steps << ", mean steps "
    << static_cast<double>(total) / 1000.0;
  o.detail = d.str();
  return o;
}

RulePriority scrambled_priority() {
  RulePriority p = kDefaultPriority;
  std::mt19937_64 rng(kSeed);
  do std::shuffle(p.begin(), p.end(), rng);
  while (p == kDefaultPriority);
  return p;
}

Outcome strategy_invariance(const std::vector<Verdict>& baseline) {
  Outcome o;
  SolverOptions scrambled;
  scrambled.priority = scrambled_priority();
  SolverOptions reversed;
  std::reverse(reversed.priority.begin(), reversed.priority.end());
  for (std::size_t i = 0; i < baseline.size(); ++i) {
    Problem p = random_instance(kSeed, i, termination_ranges());
    for (const SolverOptions* options : {&scrambled, &reversed}) {
      Verdict v = solve(p.store(), *options).verdict;
      if (v != baseline[i])
        o.fail(std::string(to_string(v)) + " vs " + std::string(to_string(baseline[i])) + ": " +
               describe(p));
    }
  }
  std::string order;
  for (RuleId r : scrambled.priority) order += (order.empty() ? "" : ">") + std::string(to_string(r));
  o.detail = std::to_string(baseline.size()) + " instances under " + order + " and reversed order";
  return o;
}

// --- 4 ------------------------------------------------------------------------

Outcome equational_agreement() {
  Outcome o;
  RandomRanges ranges{6, 3, 12, 2, false};
  std::size_t sat = 0;
  for (std::size_t i = 0; i < 1000; ++i) {
    Problem p = random_instance(kSeed + 4, i, ranges);
    Store s = p.store();
    Verdict v = solve(s).verdict;
    bool expected = rational_unify(s);
    sat += expected;
    if ((v == Verdict::Sat) != expected)
      o.fail(std::string("solver ") + std::string(to_string(v)) + ": " + describe(p));
  }
  o.detail = "1000 instances, " + std::to_string(sat) + " sat";
  return o;
}

// --- 5 ------------------------------------------------------------------------

Outcome triangulation() {
  Outcome o;
  RandomRanges ranges{4, 2, 8, 2, true};
  SearchLimits limits;
  limits.max_depth = 2;
  limits.max_holes = 1;
  limits.max_assignments = 100'000;
  std::size_t unsat = 0, found = 0, not_found = 0, exhausted = 0, naive_unsat = 0;
  for (std::size_t i = 0; i < 500; ++i) {
    Problem p = random_instance(kSeed + 5, i, ranges);
    Store s = p.store();
    Verdict v = solve(s).verdict;
    unsat += v == Verdict::Unsat;

    SearchResult w = witness_search(s, p.vocab, limits);
    switch (w.status) {
      case SearchStatus::Found: ++found; break;
      case SearchStatus::NotFound: ++not_found; break;
      case SearchStatus::Exhausted: ++exhausted; break;
    }
    if (w.witness && !check_witness(*w.witness, s, p.vocab)) o.fail("invalid witness: " + describe(p));
    if (w.witness && v != Verdict::Sat) o.fail("witness found, solver unsat: " + describe(p));

    NaiveResult n = naive_solve(s, 200);
    if (n.outcome == NaiveOutcome::Unsat) {
      ++naive_unsat;
      if (v != Verdict::Unsat) o.fail("naive unsat, solver sat: " + describe(p));
    }
  }
  std::ostringstream d;
  d << "500 instances, solver unsat " << unsat << "; witnesses found " << found
    << ", none in space " << not_found << ", search capped " << exhausted << "; naive unsat "
    << naive_unsat;
  o.detail = d.str();
  return o;
}

// --- 6 ------------------------------------------------------------------------

Outcome incremental_batch() {
  Outcome o;
  std::size_t checks = 0;
  for (std::size_t i = 0; i < 500; ++i) {
    Problem p = random_instance(kSeed + 6, i, termination_ranges());
    Verdict batch = solve(p.store()).verdict;
    std::mt19937_64 rng(kSeed + i);
    std::vector<Atom> atoms = p.file.atoms;
    for (int order = 0; order < 5; ++order) {
      std::shuffle(atoms.begin(), atoms.end(), rng);
      Solver solver;
      Verdict v = Verdict::Sat;
      Store prefix;
      for (const Atom& a : atoms) {
        v = solver.assert_atom(a);
        prefix.add(a);
        // Every prefix must agree with batch solving of that prefix too.
        if (v != solve(prefix).verdict) {
          o.fail("prefix disagreement: " + describe(p));
          break;
        }
      }
      ++checks;
      if (v != batch) o.fail("final disagreement: " + describe(p));
    }
  }
  o.detail = std::to_string(checks) + " assertion orders (500 instances x 5)";
  return o;
}

// --- 8 ------------------------------------------------------------------------

Outcome simulation_checker() {
  Outcome o;
  std::vector<Symbol> symbols{{"a", 0}, {"b", 0}, {"f", 1}, {"g", 2}};
  std::mt19937_64 rng(kSeed + 8);
  std::size_t related = 0;
  for (std::size_t i = 0; i < 200; ++i) {
    // Half the triples are chains of generalizations, half independent.
    TermGraph u = random_graph(rng, 1 + i % 6, symbols, 2);
    TermGraph t = i % 2 ? generalize(rng, u, 3) : random_graph(rng, 1 + i % 5, symbols, 2);
    TermGraph s = i % 2 ? generalize(rng, t, 3) : random_graph(rng, 1 + i % 4, symbols, 2);
    for (const TermGraph* g : {&s, &t, &u})
      if (!weak_subsumes(*g, *g)) o.fail("not reflexive: " + print_term(*g));
    bool st = weak_subsumes(s, t), tu = weak_subsumes(t, u);
    if (i % 2 && !(st && tu)) o.fail("generalization not subsuming: " + print_term(u));
    if (st && tu) {
      ++related;
      if (!weak_subsumes(s, u))
        o.fail("not transitive: " + print_term(s) + ", " + print_term(t) + ", " + print_term(u));
    }
  }

  auto check = [&](bool ok, std::string_view what) {
    if (!ok) o.fail(std::string(what));
  };
  TermGraph fxx = parse_term("f(x, x)");
  TermGraph fab = parse_term("f(a(), b())");
  check(weak_subsumes(fxx, fab), "f(a, b) not below f(x, x)");
  check(instance_member(fab, fxx, 5), "f(a, b) not an instance of f(x, x)");
  check(!weak_subsumes(fab, fxx), "f(x, x) below f(a, b)");
  TermGraph x = parse_term("x");
  for (const char* text : {"a()", "f(a(), b())", "rec X. g(X, y)", "y"})
    check(weak_subsumes(x, parse_term(text)), "a hole does not subsume everything");
  check(!weak_subsumes(parse_term("f(a())"), parse_term("f(a(), b())")), "arity mismatch accepted");
  check(!weak_subsumes(parse_term("f(a(), b())"), parse_term("f(a())")), "arity mismatch accepted");

  o.detail = "200 triples (" + std::to_string(related) + " with both premises of transitivity)";
  return o;
}

// --- 9 ------------------------------------------------------------------------

Outcome entailment() {
  Outcome o;
  RandomRanges ranges{5, 3, 8, 2, true};
  std::size_t tests = 0;
  for (std::size_t i = 0; i < 200; ++i) {
    std::mt19937_64 rng(kSeed + 9 + i);
    Problem p = random_instance(kSeed + 9, i, ranges);
    auto vars = p.store().base_components();
    auto pick = [&] { return Var(vars[std::uniform_int_distribution<std::size_t>(0, vars.size() - 1)(rng)]); };
    auto same = [&](const std::vector<Atom>& base, const std::vector<Atom>& extra,
                    std::string_view label) {
      Store a, b;
      for (const Atom& at : base) a.add(at), b.add(at);
      for (const Atom& at : extra) b.add(at);
      ++tests;
      if (solve(a).verdict != solve(b).verdict) o.fail(std::string(label) + ": " + describe(p));
    };

    Var x = pick(), y = pick(), z = pick();
    std::vector<Atom> phi = p.file.atoms;

    std::vector<Atom> with_eq = phi;
    with_eq.push_back(Atom::eq(x, y));
    same(with_eq, {Atom::sub(x, y)}, "x = y entails x <= y");

    std::vector<Atom> with_chain = phi;
    with_chain.push_back(Atom::sub(x, y));
    with_chain.push_back(Atom::sub(y, z));
    same(with_chain, {Atom::sub(x, z)}, "x <= y, y <= z entails x <= z");

    SymbolId f = p.vocab.symbol("k", 2);
    std::vector<Atom> with_app = phi;
    with_app.push_back(Atom::eq_app(x, f, {y, z}));
    same(with_app, {Atom::sub_app(x, f, {y, z})}, "x = f(y, z) entails x <= f(y, z)");
  }

  auto apart = [&](std::string_view text, std::string_view a, std::string_view b) {
    Problem p = parse(text);
    SolveResult r = solve(p.store());
    auto classes = solved_classes(r.solved, r.elim_record, p.store().base_components());
    if (r.verdict != Verdict::Sat ||
        class_of(classes, p.var(a)) == class_of(classes, p.var(b)))
      o.fail(std::string(a) + " and " + std::string(b) + " merged in: " + std::string(text));
  };
  apart("x <= y\ny <= x\n", "x", "y");
  apart("x = f(u, v)\nx <= y\ny = f(z, z)\n", "u", "v");
  o.detail = std::to_string(tests) + " entailed additions, 2 non-entailment checks";
  return o;
}

}  // namespace

int main() {
  using Clock = std::chrono::steady_clock;
  int failed = 0;
  std::vector<Verdict> baseline;
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 worked examples", worked_examples},
      {"2 forbidden derivations", forbidden_derivations},
      {"3 termination", [&] { return termination(baseline); }},
      {"4 equational agreement", equational_agreement},
      {"5 oracle triangulation", triangulation},
      {"6 incremental equals batch", incremental_batch},
      {"7 strategy invariance", [&] { return strategy_invariance(baseline); }},
      {"8 simulation checker", simulation_checker},
      {"9 entailment", entailment},
  };
  for (auto& [name, run] : criteria) {
    auto start = Clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(Clock::now() - start).count();
    char time[32];
    std::snprintf(time, sizeof time, "%.2fs", secs);
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << " [" << time << "]\n";
    for (const auto& f : o.failures) std::cout << "    " << f << '\n';
    failed += !o.pass;
  }
  std::cout << (failed ? "FAILED " : "ALL PASSED ") << (9 - failed) << "/9\n";
  return failed ? 1 : 0;
}
