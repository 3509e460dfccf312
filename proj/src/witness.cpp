#include <algorithm>
#include <cctype>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include "wsc/oracles.hpp"

namespace wsc {

namespace {

constexpr const char* kBinder = "_X";

std::optional<TermGraph> evaluate(const Witness& sigma, const Var& v) {
  std::optional<TermGraph> acc;
  for (BaseVar b : v.components()) {
    auto it = sigma.find(b);
    if (it == sigma.end())
      throw std::invalid_argument("witness assigns no tree to variable id " + std::to_string(b.id));
    if (!acc) {
      acc = it->second;
      continue;
    }
    acc = instance_meet(*acc, it->second);
    if (!acc) return std::nullopt;
  }
  return acc;
}

// nullopt if some argument denotes the empty set.
std::optional<TermGraph> build_app(const Witness& sigma, const Symbol& f,
                                   std::span<const Var> args) {
  std::vector<TermGraph> children;
  for (const Var& v : args) {
    auto t = evaluate(sigma, v);
    if (!t) return std::nullopt;
    children.push_back(std::move(*t));
  }
  return TermGraph::apply(f, children);
}

bool check_atom(const Witness& sigma, const Atom& a, const Vocabulary& vocab) {
  switch (a.kind()) {
    case AtomKind::Eq: {
      auto x = evaluate(sigma, a.lhs());
      auto y = evaluate(sigma, a.rhs());
      return x && y && graph_equal(*x, *y);
    }
    case AtomKind::EqApp: {
      auto x = evaluate(sigma, a.lhs());
      auto t = build_app(sigma, vocab.symbol(a.symbol()), a.args());
      return x && t && graph_equal(*x, *t);
    }
    case AtomKind::Sub: {
      auto x = evaluate(sigma, a.lhs());
      if (!x) return true;  // the empty set is a subset of anything
      auto y = evaluate(sigma, a.rhs());
      return y && weak_subsumes(*y, *x);
    }
    case AtomKind::SubApp: {
      // ∃u (x ⊑ u ∧ u = f(ȳ)): u is fixed by ȳ.
      auto x = evaluate(sigma, a.lhs());
      if (!x) return true;
      auto u = build_app(sigma, vocab.symbol(a.symbol()), a.args());
      return u && weak_subsumes(*u, *x);
    }
  }
  return false;
}

std::vector<std::string> leaves(const std::vector<Symbol>& symbols, int holes, bool with_rec) {
  std::vector<std::string> out;
  for (int h = 1; h <= holes; ++h) out.push_back("h" + std::to_string(h));
  for (const Symbol& s : symbols)
    if (s.arity == 0) out.push_back(s.name + "()");
  if (with_rec) out.push_back(kBinder);
  return out;
}

// All terms of depth <= depth, as strings, with a cap on how many.
std::vector<std::string> trees(const std::vector<Symbol>& symbols, int holes, int depth,
                               bool with_rec, std::size_t cap, bool& truncated) {
  std::vector<std::string> level = leaves(symbols, holes, with_rec);
  for (int d = 1; d <= depth; ++d) {
    std::vector<std::string> next = leaves(symbols, holes, with_rec);
    for (const Symbol& s : symbols) {
      if (s.arity == 0) continue;
      std::vector<std::size_t> idx(s.arity, 0);
      while (true) {
        std::string t = s.name + "(";
        for (std::size_t i = 0; i < idx.size(); ++i) {
          if (i) t += ", ";
          t += level[idx[i]];
        }
        next.push_back(t + ")");
        if (next.size() > cap) {
          truncated = true;
          return next;
        }
        std::size_t k = 0;
        while (k < idx.size() && ++idx[k] == level.size()) idx[k++] = 0;
        if (k == idx.size()) break;
      }
    }
    level = std::move(next);
  }
  return level;
}

bool mentions_binder(const std::string& t) {
  auto ident = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
  const std::string_view binder = kBinder;
  for (auto i = t.find(binder); i != std::string::npos; i = t.find(binder, i + 1)) {
    std::size_t end = i + binder.size();
    bool starts = i == 0 || !ident(t[i - 1]);
    bool ends = end == t.size() || (!ident(t[end]) && t[end] != '(');
    if (starts && ends) return true;
  }
  return false;
}

std::vector<TermGraph> candidates_impl(const std::vector<Symbol>& symbols,
                                       const SearchLimits& limits, bool& truncated) {
  std::vector<std::string> texts =
      trees(symbols, limits.max_holes, limits.max_depth, false, limits.max_candidates, truncated);
  if (!truncated) {
    for (std::string& body :
         trees(symbols, limits.max_holes, limits.max_depth, true, limits.max_candidates, truncated)) {
      if (body.back() != ')' || !mentions_binder(body)) continue;
      texts.push_back(std::string("rec ") + kBinder + ". " + body);
    }
  }

  std::vector<TermGraph> out;
  std::unordered_set<std::string> seen;
  for (const std::string& text : texts) {
    TermGraph g = parse_term(text);
    if (!seen.insert(canonical_key(g)).second) continue;
    out.push_back(std::move(g));
    if (out.size() >= limits.max_candidates) {
      truncated = true;
      break;
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const TermGraph& a, const TermGraph& b) {
    return a.size() < b.size();
  });
  return out;
}

class Search {
 public:
  Search(const Store& store, const Vocabulary& vocab, const SearchLimits& limits)
      : vocab_(vocab), limits_(limits), atoms_(store.atoms()) {
    vars_ = store.base_components();
    for (std::size_t i = 0; i < vars_.size(); ++i) slot_[vars_[i].id] = i;
    std::set<SymbolId> used;
    for (const Atom& a : atoms_)
      if (a.is_app()) used.insert(a.symbol());
    std::vector<Symbol> symbols;
    for (SymbolId s : used) symbols.push_back(vocab.symbol(s));
    candidates_ = candidates_impl(symbols, limits, truncated_);
  }

  SearchResult run() {
    SearchResult result;
    result.candidates = candidates_.size();
    std::vector<std::optional<TermGraph>> values(vars_.size());
    bool found = descend(values);
    result.assignments = assignments_;
    if (found) {
      result.status = SearchStatus::Found;
      result.witness = witness_;
    } else {
      result.status = (capped_ || truncated_) ? SearchStatus::Exhausted : SearchStatus::NotFound;
    }
    return result;
  }

 private:
  using Values = std::vector<std::optional<TermGraph>>;

  std::size_t slot(const Var& v) const { return slot_.at(v.base().id); }

  // Fills in variables fixed by equations. False on an immediate conflict.
  bool propagate(Values& values) const {
    for (bool changed = true; changed;) {
      changed = false;
      for (const Atom& a : atoms_) {
        if (!a.base_only()) continue;
        if (a.kind() == AtomKind::Eq) {
          auto& x = values[slot(a.lhs())];
          auto& y = values[slot(a.rhs())];
          if (x && !y) y = x, changed = true;
          else if (y && !x) x = y, changed = true;
        } else if (a.kind() == AtomKind::EqApp) {
          auto& x = values[slot(a.lhs())];
          const Symbol& f = vocab_.symbol(a.symbol());
          if (x) {
            const auto& root = x->node(x->root());
            if (!root.label || *root.label != f) return false;
            for (std::size_t i = 0; i < a.args().size(); ++i) {
              auto& arg = values[slot(a.args()[i])];
              if (!arg) {
                arg = x->subgraph(root.children[i]);
                changed = true;
              }
            }
          } else {
            std::vector<TermGraph> args;
            for (const Var& v : a.args()) {
              if (!values[slot(v)]) break;
              args.push_back(*values[slot(v)]);
            }
            if (args.size() == a.args().size()) {
              x = TermGraph::apply(f, args);
              changed = true;
            }
          }
        }
      }
    }
    return true;
  }

  bool consistent(const Values& values) const {
    for (const Atom& a : atoms_) {
      bool assigned = true;
      a.for_each_var([&](const Var& v) {
        for (BaseVar b : v.components())
          if (!values[slot_.at(b.id)]) assigned = false;
      });
      if (!assigned) continue;
      Witness sigma;
      a.for_each_var([&](const Var& v) {
        for (BaseVar b : v.components()) sigma.emplace(b, *values[slot_.at(b.id)]);
      });
      if (!check_atom(sigma, a, vocab_)) return false;
    }
    return true;
  }

  bool descend(Values values) {
    if (!propagate(values) || !consistent(values)) return false;
    auto open = std::find_if(values.begin(), values.end(), [](const auto& v) { return !v; });
    if (open == values.end()) {
      witness_ = Witness{};
      for (std::size_t i = 0; i < vars_.size(); ++i) witness_->emplace(vars_[i], *values[i]);
      return true;
    }
    for (const TermGraph& c : candidates_) {
      if (++assignments_ > limits_.max_assignments) {
        capped_ = true;
        return false;
      }
      *open = c;
      if (descend(values)) return true;
      if (capped_) return false;
    }
    *open = std::nullopt;
    return false;
  }

  const Vocabulary& vocab_;
  SearchLimits limits_;
  std::vector<Atom> atoms_;
  std::vector<BaseVar> vars_;
  std::map<std::uint32_t, std::size_t> slot_;
  std::vector<TermGraph> candidates_;
  bool truncated_ = false;
  bool capped_ = false;
  std::size_t assignments_ = 0;
  std::optional<Witness> witness_;
};

}  // namespace

bool check_witness(const Witness& sigma, const Store& store, const Vocabulary& vocab) {
  if (store.contradiction()) return false;
  for (const Atom& a : store.atoms())
    if (!check_atom(sigma, a, vocab)) return false;
  return true;
}

std::string_view to_string(SearchStatus status) {
  switch (status) {
    case SearchStatus::Found: return "found";
    case SearchStatus::NotFound: return "not-found";
    case SearchStatus::Exhausted: return "exhausted";
  }
  return "?";
}

std::vector<TermGraph> witness_candidates(const std::vector<Symbol>& symbols,
                                          const SearchLimits& limits) {
  bool truncated = false;
  return candidates_impl(symbols, limits, truncated);
}

SearchResult witness_search(const Store& store, const Vocabulary& vocab,
                            const SearchLimits& limits) {
  if (store.contradiction()) return SearchResult{};
  return Search(store, vocab, limits).run();
}

}  // namespace wsc
