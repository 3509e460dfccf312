#include <stdexcept>

#include "wsc/oracles.hpp"

namespace wsc {

namespace {

void drop_trivial(Store& s, BaseVar b) {
  for (AtomId id : s.mentioning(b)) {
    const Atom& a = s.atom(id);
    if (!a.is_app() && a.lhs() == a.rhs()) s.remove(id);
  }
}

void insert(Store& s, Atom a) {
  if (!a.is_app() && a.lhs() == a.rhs()) return;
  s.add_unique(std::move(a));
}

}  // namespace

NaiveResult naive_solve(const Store& input, std::size_t budget) {
  std::uint32_t next_fresh = kFreshVarBase;
  auto fresh = [&] { return Var(BaseVar{next_fresh++}); };

  Store s;
  for (const Atom& a : input.atoms()) {
    if (!a.base_only()) throw std::invalid_argument("naive_solve: base variables only");
    if (a.kind() == AtomKind::SubApp) {
      Var u = fresh();
      insert(s, Atom::sub(a.lhs(), u));
      insert(s, Atom::eq_app(u, a.symbol(), {a.args().begin(), a.args().end()}));
    } else {
      insert(s, a);
    }
  }

  NaiveResult result;
  while (result.steps < budget) {
    // Clash and Decom on two equations x = f(ū), x = g(v̄).
    bool fired = false;
    for (AtomId id : s.of_kind(AtomKind::EqApp)) {
      const Atom& a = s.atom(id);
      for (AtomId other : s.with_lhs(a.lhs())) {
        const Atom& b = s.atom(other);
        if (other == id || b.kind() != AtomKind::EqApp) continue;
        ++result.steps;
        if (a.symbol() != b.symbol()) {
          result.outcome = NaiveOutcome::Unsat;
          return result;
        }
        std::vector<Atom> eqs;
        for (std::size_t i = 0; i < a.args().size(); ++i)
          eqs.push_back(Atom::eq(a.args()[i], b.args()[i]));
        s.remove(id);
        for (auto& e : eqs) insert(s, std::move(e));
        fired = true;
        break;
      }
      if (fired) break;
    }
    if (fired) continue;

    // Elim.
    for (AtomId id : s.of_kind(AtomKind::Eq)) {
      const Atom& a = s.atom(id);
      BaseVar x = a.lhs().base();
      if (!s.mentions(x, id)) continue;
      BaseVar y = a.rhs().base();
      s.substitute(x, y, id, /*unique=*/true);
      drop_trivial(s, y);
      ++result.steps;
      fired = true;
      break;
    }
    if (fired) continue;

    // Descend on the oldest x ⊑ y with y = f(z̄): x = f(ū) ∧ ū ⊑ z̄, ū fresh.
    for (AtomId id : s.of_kind(AtomKind::Sub)) {
      const Atom& a = s.atom(id);
      std::optional<AtomId> def;
      for (AtomId d : s.with_lhs(a.rhs())) {
        if (s.atom(d).kind() == AtomKind::EqApp) {
          def = d;
          break;
        }
      }
      if (!def) continue;
      const Atom& y = s.atom(*def);
      Var x = a.lhs();
      SymbolId f = y.symbol();
      std::vector<Var> zs(y.args().begin(), y.args().end());
      std::vector<Var> us;
      for (std::size_t i = 0; i < zs.size(); ++i) us.push_back(fresh());
      s.remove(id);
      insert(s, Atom::eq_app(x, f, us));
      for (std::size_t i = 0; i < zs.size(); ++i) insert(s, Atom::sub(us[i], zs[i]));
      ++result.steps;
      fired = true;
      break;
    }
    if (!fired) {
      result.irreducible = true;
      break;
    }
  }
  return result;
}

namespace {

class UnionFind {
 public:
  std::uint32_t find(std::uint32_t x) {
    auto it = parent_.find(x);
    if (it == parent_.end()) {
      parent_.emplace(x, x);
      return x;
    }
    if (it->second == x) return x;
    std::uint32_t root = find(it->second);
    parent_[x] = root;
    return root;
  }
  // Makes `b`'s root the root of `a`'s class.
  void link(std::uint32_t a_root, std::uint32_t b_root) { parent_[a_root] = b_root; }

 private:
  std::map<std::uint32_t, std::uint32_t> parent_;
};

}  // namespace

bool rational_unify(const Store& input) {
  struct Term {
    SymbolId symbol;
    std::vector<std::uint32_t> args;
  };
  UnionFind uf;
  std::map<std::uint32_t, Term> terms;  // keyed by class root
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pending;

  auto bind = [&](std::uint32_t x, Term t) {
    std::uint32_t r = uf.find(x);
    auto it = terms.find(r);
    if (it == terms.end()) {
      terms.emplace(r, std::move(t));
      return true;
    }
    if (it->second.symbol != t.symbol) return false;
    for (std::size_t i = 0; i < t.args.size(); ++i) pending.emplace_back(it->second.args[i], t.args[i]);
    return true;
  };

  for (const Atom& a : input.atoms()) {
    if (!a.base_only()) throw std::invalid_argument("rational_unify: base variables only");
    switch (a.kind()) {
      case AtomKind::Eq:
        pending.emplace_back(a.lhs().base().id, a.rhs().base().id);
        break;
      case AtomKind::EqApp: {
        Term t{a.symbol(), {}};
        for (const Var& v : a.args()) t.args.push_back(v.base().id);
        if (!bind(a.lhs().base().id, std::move(t))) return false;
        break;
      }
      default:
        throw std::invalid_argument("rational_unify: subsumption atoms are not supported");
    }
    while (!pending.empty()) {
      auto [x, y] = pending.back();
      pending.pop_back();
      std::uint32_t rx = uf.find(x), ry = uf.find(y);
      if (rx == ry) continue;
      uf.link(rx, ry);
      auto it = terms.find(rx);
      if (it == terms.end()) continue;
      Term moved = std::move(it->second);
      terms.erase(it);
      if (!bind(ry, std::move(moved))) return false;
    }
  }
  return true;
}

}  // namespace wsc
