#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wsc/constraints.hpp"

namespace wsc {

enum class RuleId { Decom, Clash, Elim, Propagate1, Propagate2, Collapse, Descend1, Descend2 };

std::string_view to_string(RuleId rule);

using RulePriority = std::array<RuleId, 8>;

/// Clash first so contradictions surface early; the Descend rules last since
/// they are the only ones that grow the store.
inline constexpr RulePriority kDefaultPriority{
    RuleId::Clash,      RuleId::Elim,     RuleId::Decom,    RuleId::Propagate1,
    RuleId::Propagate2, RuleId::Collapse, RuleId::Descend2, RuleId::Descend1};

enum class Verdict { Sat, Unsat, Unknown };

std::string_view to_string(Verdict verdict);

struct TraceEntry {
  std::size_t step = 0;
  RuleId rule{};
  std::vector<Atom> premises;     // atoms the rule matched on
  std::vector<Atom> conclusions;  // atoms it added
  bool bottom = false;            // the store became ⊥
};

/// `step N: <Rule> on <atoms> => <atoms>`
std::string format_trace_entry(const TraceEntry& entry, const Vocabulary& vocab);

struct SolverOptions {
  RulePriority priority = kDefaultPriority;
  bool record_trace = false;
  /// Safety net only; the rule system terminates on every input.
  std::size_t max_steps = 1'000'000;
};

/// Incremental solver for conjunctions of equations and weak subsumption
/// constraints.
///
/// Atoms are asserted one at a time (or in bulk) and the store is rewritten
/// to a fixpoint of the rule system. A store that reaches ⊥ stays there.
/// Inputs must mention base variables only; intersection variables are
/// created by the rules themselves.
class Solver {
 public:
  explicit Solver(SolverOptions options = {});

  /// Adds `atom` (rewritten through the eliminated-variable record) and runs
  /// to a fixpoint. Throws std::invalid_argument for intersection variables.
  Verdict assert_atom(const Atom& atom);
  /// Adds all atoms, then runs to a fixpoint.
  Verdict assert_all(std::span<const Atom> atoms);
  /// Adds without running; verdict becomes Unknown until run().
  void add(const Atom& atom);

  /// Applies the first applicable rule in priority order. Returns false when
  /// the store is irreducible or ⊥.
  bool step();
  Verdict run();

  Verdict verdict() const { return verdict_; }
  const Store& store() const { return store_; }
  std::size_t step_count() const { return steps_; }
  const std::vector<TraceEntry>& trace() const { return trace_; }
  const std::map<BaseVar, BaseVar>& elim_record() const { return elim_; }
  /// Follows the eliminated-variable record to the variable now standing for b.
  BaseVar representative(BaseVar b) const;

 private:
  Atom normalize(const Atom& atom) const;

  SolverOptions options_;
  Store store_;
  std::map<BaseVar, BaseVar> elim_;
  std::vector<TraceEntry> trace_;
  std::size_t steps_ = 0;
  Verdict verdict_ = Verdict::Sat;
};

struct SolveResult {
  Verdict verdict = Verdict::Unknown;
  Store solved;
  std::size_t steps = 0;
  std::vector<TraceEntry> trace;
  std::map<BaseVar, BaseVar> elim_record;
};

/// Batch solving: Sat iff an irreducible store other than ⊥ is reached.
SolveResult solve(const Store& input, SolverOptions options = {});

// Single rule applications at the first match (lowest atom ids); nullopt
// when the rule does not apply.
std::optional<Store> rule_decom(const Store& store);
std::optional<Store> rule_clash(const Store& store);
std::optional<Store> rule_elim(const Store& store);
std::optional<Store> rule_propagate1(const Store& store);
std::optional<Store> rule_propagate2(const Store& store);
std::optional<Store> rule_collapse(const Store& store);
std::optional<Store> rule_descend1(const Store& store);
std::optional<Store> rule_descend2(const Store& store);
std::optional<Store> apply_rule(RuleId rule, const Store& store);

}  // namespace wsc
