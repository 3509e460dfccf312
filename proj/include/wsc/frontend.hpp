#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "wsc/constraints.hpp"
#include "wsc/engine.hpp"

namespace wsc {

/// A parsed `.wsc` constraint file.
struct ProblemFile {
  std::string name;
  std::optional<Verdict> expected;
  std::vector<Atom> atoms;

  Store store() const;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  std::string message_;
  std::size_t line_;
  std::size_t column_;
};

struct ParseOptions {
  /// Accept `x&y` variables. Off for solver input; on to read back solved
  /// forms.
  bool allow_intersections = false;
};

/// Statements are `x = y`, `x = f(a1, ..., an)`, `x <= y`, `x <= f(...)`,
/// terminated by a newline or '.'. `#` starts a comment. Header comments
/// `# name: ...` and `# expect: sat|unsat` fill in the metadata. Arguments
/// may be nested applications; each nested application is named by a fresh
/// variable `_<n>`. A symbol keeps the arity of its first use.
ProblemFile parse_problem(std::string_view text, Vocabulary& vocab,
                          const ParseOptions& options = {});

/// Canonical text: header comments, then one atom per line.
std::string print_problem(const ProblemFile& problem, const Vocabulary& vocab);

/// Equivalence classes of base variables induced by the Eq atoms of a solved
/// store and the eliminated-variable record, each with the constructor
/// determined for it, if any.
struct SolvedClass {
  std::vector<BaseVar> members;
  std::optional<Atom> constructor;  // an EqApp atom on some member
};

std::vector<SolvedClass> solved_classes(const Store& solved,
                                        const std::map<BaseVar, BaseVar>& elim_record,
                                        const std::vector<BaseVar>& variables);

/// `{status, steps, classes, atoms, trace?}`.
nlohmann::json solve_report(const SolveResult& result, const std::vector<BaseVar>& input_vars,
                            const Vocabulary& vocab, bool with_trace);

struct RandomSpec {
  std::uint64_t seed = 0;
  std::size_t vars = 4;
  std::size_t symbols = 2;
  std::size_t atoms = 6;
  std::uint32_t max_arity = 2;
  /// Include x <= y and x <= f(ȳ) atoms; off gives the equational fragment.
  bool subsumption = true;
};

/// A random base-variable-only problem. Variables are named x0.., symbols
/// take the first unused name for their arity (a, b, c / f, g, h / p, q, r);
/// the first symbol is always nullary.
ProblemFile random_problem(const RandomSpec& spec, Vocabulary& vocab);

}  // namespace wsc
