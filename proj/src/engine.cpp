#include "wsc/engine.hpp"

#include <algorithm>
#include <stdexcept>

namespace wsc {

namespace {

// The effect of one rule instance, computed against a fixed store.
struct Rewrite {
  RuleId rule;
  std::vector<AtomId> premises;
  std::vector<AtomId> removed;
  std::vector<Atom> added;
  std::optional<std::pair<BaseVar, BaseVar>> elim;  // eliminated var, replacement
  bool bottom = false;
};

std::vector<Var> meet_args(std::span<const Var> us, std::span<const Var> vs) {
  std::vector<Var> out;
  out.reserve(us.size());
  for (std::size_t i = 0; i < us.size(); ++i) out.push_back(intersect(us[i], vs[i]));
  return out;
}

// Clash: x ≤ f(ū) and x∩y ≤ g(v̄) with f ≠ g. Only left-hand sides can be
// determined, so both x and x∩y range over those; x∩y ≡ x covers two
// constructors on one variable.
std::optional<Rewrite> match_clash(const Store& store) {
  std::vector<Var> lhs = store.lhs_vars();
  std::vector<std::vector<Determination>> dets;
  dets.reserve(lhs.size());
  for (const Var& v : lhs) dets.push_back(determined(store, v));
  for (std::size_t w = 0; w < lhs.size(); ++w) {
    if (dets[w].empty()) continue;
    for (std::size_t x = 0; x < lhs.size(); ++x) {
      if (dets[x].empty() || !lhs[w].includes(lhs[x])) continue;
      for (const auto& dx : dets[x])
        for (const auto& dw : dets[w])
          if (dx.symbol != dw.symbol)
            return Rewrite{RuleId::Clash, {dx.source, dw.source}, {}, {}, {}, true};
    }
  }
  return std::nullopt;
}

// Elim: x = y with x occurring elsewhere. Eq atoms keep the smaller variable
// on the left and that is the one eliminated; once it is gone the atom is
// solved, so the rule never flips back.
std::optional<Rewrite> match_elim(const Store& store) {
  for (AtomId id : store.of_kind(AtomKind::Eq)) {
    const Atom& a = store.atom(id);
    if (a.lhs() == a.rhs()) continue;
    BaseVar x = a.lhs().base();
    if (store.mentions(x, id))
      return Rewrite{RuleId::Elim, {id}, {}, {}, std::make_pair(x, a.rhs().base()), false};
  }
  return std::nullopt;
}

std::optional<Rewrite> match_decom(const Store& store) {
  for (AtomId id : store.of_kind(AtomKind::EqApp)) {
    const Atom& a = store.atom(id);
    for (AtomId other : store.with_lhs(a.lhs())) {
      if (other == id) continue;
      const Atom& b = store.atom(other);
      if (b.kind() != AtomKind::EqApp || b.symbol() != a.symbol()) continue;
      Rewrite r{RuleId::Decom, {id, other}, {id}, {}, {}, false};
      for (std::size_t i = 0; i < a.args().size(); ++i)
        if (a.args()[i] != b.args()[i]) r.added.push_back(Atom::eq(a.args()[i], b.args()[i]));
      return r;
    }
  }
  return std::nullopt;
}

// Propagate1: x∩y ⊑ z becomes x∩y ⊑ z∩u given x ⊑ u. The left side may be
// a base variable (y ≡ x).
std::optional<Rewrite> match_propagate1(const Store& store) {
  const auto& subs = store.of_kind(AtomKind::Sub);
  for (AtomId id : subs) {
    const Atom& a = store.atom(id);
    for (AtomId other : subs) {
      if (other == id) continue;
      const Atom& b = store.atom(other);
      if (!a.lhs().includes(b.lhs()) || a.rhs().includes(b.rhs())) continue;
      return Rewrite{RuleId::Propagate1,
                     {id, other},
                     {id},
                     {Atom::sub(a.lhs(), intersect(a.rhs(), b.rhs()))},
                     {},
                     false};
    }
  }
  return std::nullopt;
}

std::optional<Rewrite> match_propagate2(const Store& store) {
  std::vector<Var> lhs = store.lhs_vars();
  for (AtomId id : store.of_kind(AtomKind::SubApp)) {
    const Atom& a = store.atom(id);
    for (const Var& x : lhs) {
      if (!a.lhs().includes(x)) continue;
      for (const Determination& d : determined(store, x, id)) {
        if (d.symbol != a.symbol()) continue;
        std::vector<Var> merged = meet_args(a.args(), d.args);
        if (std::equal(merged.begin(), merged.end(), a.args().begin())) continue;
        return Rewrite{RuleId::Propagate2,
                       {id, d.source},
                       {id},
                       {Atom::sub_app(a.lhs(), a.symbol(), std::move(merged))},
                       {},
                       false};
      }
    }
  }
  return std::nullopt;
}

// Collapse: x ⊑ y∩u becomes x ⊑ y∩z∩u given y ⊑ z. The printed side
// condition reads "y∩z∩u ≢ y∩z"; we require that the right-hand side
// actually grows (y∩z∩u ≢ y∩u), without which the rule could fire forever
// as a no-op.
std::optional<Rewrite> match_collapse(const Store& store) {
  const auto& subs = store.of_kind(AtomKind::Sub);
  for (AtomId id : subs) {
    const Atom& a = store.atom(id);
    for (AtomId other : subs) {
      if (other == id) continue;
      const Atom& b = store.atom(other);
      if (!a.rhs().includes(b.lhs()) || a.rhs().includes(b.rhs())) continue;
      return Rewrite{RuleId::Collapse,
                     {id, other},
                     {id},
                     {Atom::sub(a.lhs(), intersect(a.rhs(), b.rhs()))},
                     {},
                     false};
    }
  }
  return std::nullopt;
}

// Descend1: from x = f(ū) and x ≤ f(v̄) (determined by the rest of the store)
// add u_i ⊑ v_i for each position not already covered by some u_i ⊑ r with
// v_i a component of r.
std::optional<Rewrite> match_descend1(const Store& store) {
  for (AtomId id : store.of_kind(AtomKind::EqApp)) {
    const Atom& a = store.atom(id);
    for (const Determination& d : determined(store, a.lhs(), id)) {
      if (d.symbol != a.symbol()) continue;
      Rewrite r{RuleId::Descend1, {id, d.source}, {}, {}, {}, false};
      for (std::size_t i = 0; i < d.args.size(); ++i) {
        const Var& u = a.args()[i];
        const Var& v = d.args[i];
        bool covered = false;
        for (AtomId s : store.with_lhs(u)) {
          const Atom& sa = store.atom(s);
          if (sa.kind() == AtomKind::Sub && sa.rhs().includes(v)) {
            covered = true;
            break;
          }
        }
        if (!covered) r.added.push_back(Atom::sub(u, v));
      }
      if (!r.added.empty()) return r;
    }
  }
  return std::nullopt;
}

// Descend2: an intersection variable occurring in the store with a determined
// component, and no constructor of its own yet, gets one.
std::optional<Rewrite> match_descend2(const Store& store) {
  std::vector<Var> lhs;
  for (const Var& w : store.variables()) {
    if (w.is_base()) continue;
    if (!immediately_determined(store, w).empty()) continue;
    if (lhs.empty()) lhs = store.lhs_vars();
    for (const Var& x : lhs) {
      if (!w.includes(x)) continue;
      auto dets = determined(store, x);
      if (dets.empty()) continue;
      const Determination& d = dets.front();
      return Rewrite{RuleId::Descend2,      {d.source}, {}, {Atom::sub_app(w, d.symbol, d.args)},
                     {}, false};
    }
  }
  return std::nullopt;
}

std::optional<Rewrite> match(RuleId rule, const Store& store) {
  switch (rule) {
    case RuleId::Decom: return match_decom(store);
    case RuleId::Clash: return match_clash(store);
    case RuleId::Elim: return match_elim(store);
    case RuleId::Propagate1: return match_propagate1(store);
    case RuleId::Propagate2: return match_propagate2(store);
    case RuleId::Collapse: return match_collapse(store);
    case RuleId::Descend1: return match_descend1(store);
    case RuleId::Descend2: return match_descend2(store);
  }
  return std::nullopt;
}

TraceEntry apply(Store& store, const Rewrite& r) {
  TraceEntry entry;
  entry.rule = r.rule;
  for (AtomId id : r.premises) entry.premises.push_back(store.atom(id));
  if (r.bottom) {
    store.set_contradiction();
    entry.bottom = true;
    return entry;
  }
  if (r.elim) {
    auto [from, to] = *r.elim;
    AtomId keep = r.premises.front();
    for (AtomId id : store.mentioning(from)) {
      if (id == keep) continue;
      entry.premises.push_back(store.atom(id));
      entry.conclusions.push_back(store.atom(id).substitute(from, to));
    }
    store.substitute(from, to, keep, /*unique=*/true);
    return entry;
  }
  for (AtomId id : r.removed) store.remove(id);
  for (const Atom& a : r.added) {
    store.add_unique(a);
    entry.conclusions.push_back(a);
  }
  return entry;
}

std::optional<Store> apply_once(RuleId rule, const Store& store) {
  if (store.contradiction()) return std::nullopt;
  auto r = match(rule, store);
  if (!r) return std::nullopt;
  Store out = store;
  apply(out, *r);
  return out;
}

std::string join_atoms(const std::vector<Atom>& atoms, const Vocabulary& vocab) {
  std::string out;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (i) out += ", ";
    out += to_string(atoms[i], vocab);
  }
  return out;
}

}  // namespace

std::string_view to_string(RuleId rule) {
  switch (rule) {
    case RuleId::Decom: return "Decom";
    case RuleId::Clash: return "Clash";
    case RuleId::Elim: return "Elim";
    case RuleId::Propagate1: return "Propagate1";
    case RuleId::Propagate2: return "Propagate2";
    case RuleId::Collapse: return "Collapse";
    case RuleId::Descend1: return "Descend1";
    case RuleId::Descend2: return "Descend2";
  }
  return "?";
}

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Sat: return "sat";
    case Verdict::Unsat: return "unsat";
    case Verdict::Unknown: return "unknown";
  }
  return "?";
}

std::string format_trace_entry(const TraceEntry& entry, const Vocabulary& vocab) {
  std::string out = "step " + std::to_string(entry.step) + ": " +
                    std::string(to_string(entry.rule)) + " on " +
                    join_atoms(entry.premises, vocab) + " => ";
  out += entry.bottom ? "false" : join_atoms(entry.conclusions, vocab);
  return out;
}

// --- Solver -------------------------------------------------------------------

Solver::Solver(SolverOptions options) : options_(options) {}

BaseVar Solver::representative(BaseVar b) const {
  for (auto it = elim_.find(b); it != elim_.end(); it = elim_.find(b)) b = it->second;
  return b;
}

Atom Solver::normalize(const Atom& atom) const {
  Atom out = atom;
  atom.for_each_var([&](const Var& v) {
    for (BaseVar b : v.components()) {
      BaseVar r = representative(b);
      if (r != b) out = out.substitute(b, r);
    }
  });
  return out;
}

void Solver::add(const Atom& atom) {
  if (!atom.base_only())
    throw std::invalid_argument("solver input may only mention base variables");
  if (verdict_ == Verdict::Unsat) return;
  store_.add_unique(normalize(atom));
  verdict_ = Verdict::Unknown;
}

Verdict Solver::assert_atom(const Atom& atom) {
  if (verdict_ == Verdict::Unsat) return verdict_;
  add(atom);
  return run();
}

Verdict Solver::assert_all(std::span<const Atom> atoms) {
  for (const Atom& a : atoms) {
    if (!a.base_only())
      throw std::invalid_argument("solver input may only mention base variables");
  }
  for (const Atom& a : atoms) add(a);
  return run();
}

bool Solver::step() {
  if (store_.contradiction()) return false;
  for (RuleId rule : options_.priority) {
    auto r = match(rule, store_);
    if (!r) continue;
    TraceEntry entry = apply(store_, *r);
    ++steps_;
    if (r->elim) {
      auto [from, to] = *r->elim;
      for (auto& [eliminated, rep] : elim_)
        if (rep == from) rep = to;
      elim_[from] = to;
    }
    if (options_.record_trace) {
      entry.step = steps_;
      trace_.push_back(std::move(entry));
    }
    return true;
  }
  return false;
}

Verdict Solver::run() {
  std::size_t budget = options_.max_steps;
  while (!store_.contradiction()) {
    if (budget-- == 0) return verdict_ = Verdict::Unknown;
    if (!step()) break;
  }
  return verdict_ = store_.contradiction() ? Verdict::Unsat : Verdict::Sat;
}

SolveResult solve(const Store& input, SolverOptions options) {
  Solver solver(options);
  auto atoms = input.atoms();
  solver.assert_all(atoms);
  return SolveResult{solver.verdict(), solver.store(), solver.step_count(), solver.trace(),
                     solver.elim_record()};
}

std::optional<Store> rule_decom(const Store& s) { return apply_once(RuleId::Decom, s); }
std::optional<Store> rule_clash(const Store& s) { return apply_once(RuleId::Clash, s); }
std::optional<Store> rule_elim(const Store& s) { return apply_once(RuleId::Elim, s); }
std::optional<Store> rule_propagate1(const Store& s) { return apply_once(RuleId::Propagate1, s); }
std::optional<Store> rule_propagate2(const Store& s) { return apply_once(RuleId::Propagate2, s); }
std::optional<Store> rule_collapse(const Store& s) { return apply_once(RuleId::Collapse, s); }
std::optional<Store> rule_descend1(const Store& s) { return apply_once(RuleId::Descend1, s); }
std::optional<Store> rule_descend2(const Store& s) { return apply_once(RuleId::Descend2, s); }
std::optional<Store> apply_rule(RuleId rule, const Store& s) { return apply_once(rule, s); }

}  // namespace wsc
