#include "wsc/frontend.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <sstream>

namespace wsc {

Store ProblemFile::store() const {
  Store s;
  for (const Atom& a : atoms) s.add(a);
  return s;
}

ParseError::ParseError(const std::string& message, std::size_t line, std::size_t column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      message_(message),
      line_(line),
      column_(column) {}

// --- parsing ------------------------------------------------------------------

namespace {

bool ident_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

class ProblemParser {
 public:
  ProblemParser(std::string_view text, Vocabulary& vocab, const ParseOptions& options)
      : text_(text), vocab_(vocab), options_(options) {}

  ProblemFile parse() {
    while (true) {
      skip_blank(/*newlines=*/true);
      if (at_end()) break;
      statement();
    }
    return std::move(problem_);
  }

 private:
  [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, line_, col_); }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void comment() {
    std::size_t start = pos_ + 1;
    while (!at_end() && peek() != '\n') advance();
    std::string body = trim(text_.substr(start, pos_ - start));
    auto colon = body.find(':');
    if (colon == std::string::npos) return;
    std::string key = trim(std::string_view(body).substr(0, colon));
    std::string value = trim(std::string_view(body).substr(colon + 1));
    if (key == "name") {
      problem_.name = value;
    } else if (key == "expect") {
      if (value == "sat")
        problem_.expected = Verdict::Sat;
      else if (value == "unsat")
        problem_.expected = Verdict::Unsat;
      else
        fail("expected 'sat' or 'unsat' after '# expect:'");
    }
  }

  // Skips spaces and comments, and newlines too when `newlines` is set.
  void skip_blank(bool newlines) {
    while (!at_end()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || (newlines && (c == '\n' || c == '.')))
        advance();
      else if (c == '#')
        comment();
      else
        break;
    }
  }

  std::string ident(const char* what) {
    skip_blank(false);
    if (!ident_start(peek())) fail(std::string("expected ") + what);
    std::size_t start = pos_;
    while (!at_end() && ident_char(peek())) advance();
    return std::string(text_.substr(start, pos_ - start));
  }

  bool accept(char c) {
    skip_blank(false);
    if (peek() != c) return false;
    advance();
    return true;
  }

  Var variable(std::string first) {
    std::vector<BaseVar> comps{vocab_.var(first)};
    while (true) {
      skip_blank(false);
      if (peek() != '&') break;
      if (!options_.allow_intersections) fail("intersection variables are not allowed in input");
      advance();
      comps.push_back(vocab_.var(ident("variable")));
    }
    return Var::of(std::move(comps));
  }

  SymbolId symbol(const std::string& name, std::size_t arity) {
    auto [it, inserted] = arities_.emplace(name, arity);
    if (!inserted && it->second != arity)
      fail("symbol '" + name + "' used with arity " + std::to_string(arity) +
           ", but it has arity " + std::to_string(it->second));
    return vocab_.symbol(name, static_cast<std::uint32_t>(arity));
  }

  Var fresh() {
    while (true) {
      std::string name = "_" + std::to_string(++fresh_counter_);
      if (!vocab_.find_var(name)) return Var(vocab_.var(name));
    }
  }

  // IDENT '(' already consumed up to the '('. Returns the argument variables.
  std::vector<Var> arguments() {
    std::vector<Var> args;
    if (accept(')')) return args;
    do {
      std::string name = ident("variable or constructor");
      if (accept('(')) {
        // Nested application: name it with a fresh variable.
        std::vector<Var> inner = arguments();
        SymbolId f = symbol(name, inner.size());
        Var v = fresh();
        pending_.push_back(Atom::eq_app(v, f, std::move(inner)));
        args.push_back(v);
      } else {
        args.push_back(variable(name));
      }
    } while (accept(','));
    if (!accept(')')) fail("expected ',' or ')'");
    return args;
  }

  void statement() {
    Var lhs = variable(ident("variable"));
    skip_blank(false);
    bool subsumption;
    if (peek() == '=') {
      advance();
      subsumption = false;
    } else if (peek() == '<') {
      advance();
      if (peek() != '=') fail("expected '<='");
      advance();
      subsumption = true;
    } else {
      fail("expected '=' or '<='");
    }
    std::string name = ident("variable or constructor");
    if (accept('(')) {
      std::vector<Var> args = arguments();
      SymbolId f = symbol(name, args.size());
      problem_.atoms.push_back(subsumption ? Atom::sub_app(lhs, f, std::move(args))
                                           : Atom::eq_app(lhs, f, std::move(args)));
    } else {
      Var rhs = variable(name);
      problem_.atoms.push_back(subsumption ? Atom::sub(lhs, rhs) : Atom::eq(lhs, rhs));
    }
    for (Atom& a : pending_) problem_.atoms.push_back(std::move(a));
    pending_.clear();

    skip_blank(false);
    if (at_end()) return;
    if (peek() != '\n' && peek() != '.') fail("expected end of statement");
    advance();
  }

  std::string_view text_;
  Vocabulary& vocab_;
  ParseOptions options_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
  ProblemFile problem_;
  std::map<std::string, std::size_t> arities_;
  std::vector<Atom> pending_;
  std::size_t fresh_counter_ = 0;
};

}  // namespace

ProblemFile parse_problem(std::string_view text, Vocabulary& vocab, const ParseOptions& options) {
  return ProblemParser(text, vocab, options).parse();
}

std::string print_problem(const ProblemFile& problem, const Vocabulary& vocab) {
  std::ostringstream os;
  if (!problem.name.empty()) os << "# name: " << problem.name << '\n';
  if (problem.expected) os << "# expect: " << to_string(*problem.expected) << '\n';
  for (const Atom& a : problem.atoms) os << to_string(a, vocab) << '\n';
  return os.str();
}

// --- reporting ----------------------------------------------------------------

std::vector<SolvedClass> solved_classes(const Store& solved,
                                        const std::map<BaseVar, BaseVar>& elim_record,
                                        const std::vector<BaseVar>& variables) {
  std::map<BaseVar, BaseVar> parent;
  auto find = [&](BaseVar b) {
    auto it = parent.try_emplace(b, b).first;
    while (it->second != b) {
      b = it->second;
      it = parent.try_emplace(b, b).first;
    }
    return b;
  };
  auto unite = [&](BaseVar a, BaseVar b) {
    BaseVar ra = find(a), rb = find(b);
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  };

  for (BaseVar v : variables) find(v);
  for (BaseVar v : solved.base_components()) find(v);
  for (const auto& [from, to] : elim_record) unite(from, to);
  for (const Atom& a : solved.atoms())
    if (a.kind() == AtomKind::Eq && a.base_only()) unite(a.lhs().base(), a.rhs().base());

  std::map<BaseVar, SolvedClass> classes;
  std::vector<BaseVar> keys;
  for (const auto& [b, _] : parent) keys.push_back(b);
  for (BaseVar b : keys) classes[find(b)].members.push_back(b);
  for (const Atom& a : solved.atoms()) {
    if (a.kind() != AtomKind::EqApp || !a.lhs().is_base()) continue;
    auto& cls = classes[find(a.lhs().base())];
    if (!cls.constructor) cls.constructor = a;
  }
  std::vector<SolvedClass> out;
  for (auto& [root, cls] : classes) out.push_back(std::move(cls));
  return out;
}

nlohmann::json solve_report(const SolveResult& result, const std::vector<BaseVar>& input_vars,
                            const Vocabulary& vocab, bool with_trace) {
  nlohmann::json out;
  out["status"] = std::string(to_string(result.verdict));
  out["steps"] = result.steps;
  auto classes = nlohmann::json::array();
  auto atoms = nlohmann::json::array();
  if (result.verdict == Verdict::Sat) {
    for (const SolvedClass& cls : solved_classes(result.solved, result.elim_record, input_vars)) {
      nlohmann::json c;
      std::vector<std::string> names;
      for (BaseVar b : cls.members) names.push_back(vocab.name(b));
      std::sort(names.begin(), names.end());
      c["vars"] = names;
      if (cls.constructor) {
        std::string text = to_string(*cls.constructor, vocab);
        c["constructor"] = text.substr(text.find(" = ") + 3);
      } else {
        c["constructor"] = nullptr;
      }
      classes.push_back(std::move(c));
    }
    for (const Atom& a : result.solved.atoms()) atoms.push_back(to_string(a, vocab));
  }
  out["classes"] = std::move(classes);
  out["atoms"] = std::move(atoms);
  if (with_trace) {
    auto trace = nlohmann::json::array();
    for (const TraceEntry& e : result.trace) trace.push_back(format_trace_entry(e, vocab));
    out["trace"] = std::move(trace);
  }
  return out;
}

// --- random instances -----------------------------------------------------------

ProblemFile random_problem(const RandomSpec& spec, Vocabulary& vocab) {
  if (spec.vars == 0) throw std::invalid_argument("random_problem: need at least one variable");
  if (spec.symbols == 0) throw std::invalid_argument("random_problem: need at least one symbol");
  std::mt19937_64 rng(spec.seed);
  auto uniform = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };

  std::vector<BaseVar> vars;
  for (std::size_t i = 0; i < spec.vars; ++i) vars.push_back(vocab.var("x" + std::to_string(i)));

  static const char* const kNames[3][3] = {{"a", "b", "c"}, {"f", "g", "h"}, {"p", "q", "r"}};
  std::size_t used[3] = {0, 0, 0};
  std::vector<std::pair<SymbolId, std::uint32_t>> symbols;
  for (std::size_t i = 0; i < spec.symbols; ++i) {
    auto arity = i == 0 ? 0u : static_cast<std::uint32_t>(uniform(0, spec.max_arity));
    std::size_t row = std::min<std::size_t>(arity, 2);
    std::size_t k = used[row]++;
    std::string name = k < 3 ? kNames[row][k] : std::string(kNames[row][0]) + std::to_string(k);
    if (arity > 2) name += std::to_string(arity);
    symbols.emplace_back(vocab.symbol(name, arity), arity);
  }

  auto pick = [&] { return Var(vars[uniform(0, vars.size() - 1)]); };
  ProblemFile problem;
  problem.name = "random seed=" + std::to_string(spec.seed);
  for (std::size_t i = 0; i < spec.atoms; ++i) {
    std::size_t roll = uniform(0, 19);
    AtomKind kind;
    if (spec.subsumption)
      kind = roll < 2 ? AtomKind::Eq : roll < 7 ? AtomKind::EqApp : roll < 17 ? AtomKind::Sub
                                                                               : AtomKind::SubApp;
    else
      kind = roll < 7 ? AtomKind::Eq : AtomKind::EqApp;
    Var x = pick();
    if (kind == AtomKind::Eq || kind == AtomKind::Sub) {
      Var y = pick();
      problem.atoms.push_back(kind == AtomKind::Eq ? Atom::eq(x, y) : Atom::sub(x, y));
      continue;
    }
    auto [f, arity] = symbols[uniform(0, symbols.size() - 1)];
    std::vector<Var> args;
    for (std::uint32_t k = 0; k < arity; ++k) args.push_back(pick());
    problem.atoms.push_back(kind == AtomKind::EqApp ? Atom::eq_app(x, f, std::move(args))
                                                    : Atom::sub_app(x, f, std::move(args)));
  }
  return problem;
}

}  // namespace wsc
