#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>

#include "wsc/constraints.hpp"
#include "wsc/terms.hpp"

namespace wsc {

// Reference procedures used to validate the engine. None of them share code
// with the rule engine beyond the constraint data types.

enum class NaiveOutcome { Unsat, Exhausted };

struct NaiveResult {
  NaiveOutcome outcome = NaiveOutcome::Exhausted;
  std::size_t steps = 0;
  /// No rule applied before the budget ran out. Still reported as Exhausted:
  /// only Unsat answers from this procedure are trusted.
  bool irreducible = false;
};

/// The unification rules plus a Descend rule that introduces fresh variables.
/// Loops on cyclic inputs, hence the step budget. Input atoms must mention
/// base variables only; x ⊑ f(ȳ) is read as x ⊑ u ∧ u = f(ȳ) for a fresh u.
NaiveResult naive_solve(const Store& input, std::size_t budget);

/// Classic union-find unification over rational trees (no occurs check) for
/// stores without subsumption atoms. Returns true iff satisfiable. Throws
/// std::invalid_argument on Sub/SubApp atoms or intersection variables.
bool rational_unify(const Store& input);

/// A substitution from base variables to rational trees with holes.
using Witness = std::map<BaseVar, TermGraph>;

/// Checks every atom of `store` under `sigma`. Intersection variables denote
/// the intersection of their components' weak-instance sets. Throws
/// std::invalid_argument when a base variable of the store is unassigned.
bool check_witness(const Witness& sigma, const Store& store, const Vocabulary& vocab);

struct SearchLimits {
  int max_depth = 2;
  int max_holes = 1;
  std::size_t max_candidates = 4000;
  std::size_t max_assignments = 2'000'000;
};

enum class SearchStatus {
  Found,
  NotFound,   // the whole space was searched
  Exhausted,  // a resource cap was hit first
};

std::string_view to_string(SearchStatus status);

struct SearchResult {
  SearchStatus status = SearchStatus::NotFound;
  std::optional<Witness> witness;
  std::size_t candidates = 0;
  std::size_t assignments = 0;
};

/// Brute-force search for a witness over a bounded space of graphs.
///
/// The space: finite trees of depth <= max_depth over the symbols of the
/// store and up to max_holes hole names, plus graphs `rec X. t` where t is
/// such a tree with root labeled and X occurring in it. Variables fixed by
/// equations from already-chosen ones are computed rather than enumerated,
/// so they may take values outside that space.
SearchResult witness_search(const Store& store, const Vocabulary& vocab,
                            const SearchLimits& limits = {});

/// The candidate graphs witness_search enumerates, deduplicated, smallest
/// first.
std::vector<TermGraph> witness_candidates(const std::vector<Symbol>& symbols,
                                          const SearchLimits& limits);

}  // namespace wsc
