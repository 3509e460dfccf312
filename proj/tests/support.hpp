#pragma once

// Helpers shared by the unit tests and the acceptance suite.

#include <random>
#include <string>
#include <vector>
#include <string_view>

#include "wsc/engine.hpp"
#include "wsc/frontend.hpp"
#include "wsc/oracles.hpp"

namespace wsc::testing {

struct Problem {
  Vocabulary vocab;
  ProblemFile file;
  Store store() const { return file.store(); }
  BaseVar var(std::string_view name) { return vocab.var(name); }
};

inline Problem parse(std::string_view text) {
  Problem p;
  p.file = parse_problem(text, p.vocab);
  return p;
}

/// Store from text that may mention intersection variables (`x&y`).
inline Store parse_store(std::string_view text, Vocabulary& vocab) {
  ParseOptions options;
  options.allow_intersections = true;
  return parse_problem(text, vocab, options).store();
}

struct RandomRanges {
  std::size_t max_vars = 6;
  std::size_t max_symbols = 3;
  std::size_t max_atoms = 12;
  std::uint32_t max_arity = 2;
  bool subsumption = true;
};

/// Instance `index` of a seeded family: sizes are drawn per instance, then
/// the problem itself comes from random_problem.
inline Problem random_instance(std::uint64_t seed, std::size_t index, const RandomRanges& r) {
  std::mt19937_64 rng(seed * 1'000'003u + index);
  auto draw = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  RandomSpec spec;
  spec.vars = draw(2, r.max_vars);
  spec.symbols = draw(2, r.max_symbols);
  spec.atoms = draw(1, r.max_atoms);
  spec.max_arity = r.max_arity;
  spec.subsumption = r.subsumption;
  spec.seed = rng();
  Problem p;
  p.file = random_problem(spec, p.vocab);
  return p;
}

/// True iff no rule applies.
inline bool irreducible(const Store& store) {
  for (RuleId rule : kDefaultPriority)
    if (apply_rule(rule, store)) return false;
  return true;
}

/// Index of the solved class containing `b`, or -1.
inline int class_of(const std::vector<SolvedClass>& classes, BaseVar b) {
  for (std::size_t i = 0; i < classes.size(); ++i)
    for (BaseVar m : classes[i].members)
      if (m == b) return static_cast<int>(i);
  return -1;
}

/// A random graph with up to `nodes` nodes over `symbols`; edges may point
/// back to earlier nodes, so cycles are common.
inline TermGraph random_graph(std::mt19937_64& rng, std::size_t nodes,
                              const std::vector<Symbol>& symbols, std::size_t holes) {
  auto draw = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  TermGraph::Builder b;
  std::vector<TermGraph::NodeId> ids;
  std::vector<std::uint32_t> arity;
  for (std::size_t i = 0; i < nodes; ++i) {
    if (holes > 0 && draw(0, 3) == 0) {
      ids.push_back(b.add_hole("h" + std::to_string(draw(0, holes - 1))));
      arity.push_back(0);
    } else {
      const Symbol& s = symbols[draw(0, symbols.size() - 1)];
      ids.push_back(b.add_node(s));
      arity.push_back(s.arity);
    }
  }
  for (std::size_t i = 0; i < nodes; ++i)
    for (std::uint32_t k = 0; k < arity[i]; ++k) b.set_child(ids[i], k, ids[draw(0, nodes - 1)]);
  return b.build(ids[0]);
}

/// Turns each non-root node into a hole with probability 1/`one_in`. The
/// result weakly subsumes the input.
inline TermGraph generalize(std::mt19937_64& rng, const TermGraph& t, std::size_t one_in) {
  TermGraph::Builder b;
  std::vector<TermGraph::NodeId> ids;
  std::vector<bool> cut(t.size(), false);
  for (TermGraph::NodeId i = 0; i < t.size(); ++i) {
    const auto& n = t.node(i);
    cut[i] = i != t.root() && std::uniform_int_distribution<std::size_t>(1, one_in)(rng) == 1;
    if (!n.label || cut[i])
      ids.push_back(b.add_hole(n.label ? "g" + std::to_string(i) : n.hole));
    else
      ids.push_back(b.add_node(*n.label));
  }
  for (TermGraph::NodeId i = 0; i < t.size(); ++i) {
    const auto& n = t.node(i);
    if (!n.label || cut[i]) continue;
    for (std::size_t k = 0; k < n.children.size(); ++k) b.set_child(ids[i], k, ids[n.children[k]]);
  }
  return b.build(ids[t.root()]);
}

}  // namespace wsc::testing
