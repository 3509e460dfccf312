#include "wsc/constraints.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace wsc {

namespace {

std::size_t hash_combine(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2));
}

}  // namespace

// --- Var ----------------------------------------------------------------------

Var Var::of(std::vector<BaseVar> components) {
  if (components.empty()) throw std::invalid_argument("a variable needs at least one component");
  std::sort(components.begin(), components.end());
  components.erase(std::unique(components.begin(), components.end()), components.end());
  Var v;
  v.components_ = std::move(components);
  return v;
}

BaseVar Var::base() const {
  if (!is_base()) throw std::logic_error("Var::base on an intersection variable");
  return components_.front();
}

bool Var::contains(BaseVar b) const {
  return std::binary_search(components_.begin(), components_.end(), b);
}

bool Var::includes(const Var& other) const {
  return std::includes(components_.begin(), components_.end(), other.components_.begin(),
                       other.components_.end());
}

Var Var::substitute(BaseVar from, BaseVar to) const {
  if (!contains(from)) return *this;
  std::vector<BaseVar> out = components_;
  std::replace(out.begin(), out.end(), from, to);
  return of(std::move(out));
}

Var intersect(const Var& x, const Var& y) {
  Var v;
  std::set_union(x.components_.begin(), x.components_.end(), y.components_.begin(),
                 y.components_.end(), std::back_inserter(v.components_));
  return v;
}

std::vector<BaseVar> components(const Var& x) {
  return {x.components().begin(), x.components().end()};
}

std::size_t VarHash::operator()(const Var& v) const noexcept {
  std::size_t h = v.components().size();
  for (BaseVar b : v.components()) h = hash_combine(h, b.id);
  return h;
}

// --- Vocabulary ---------------------------------------------------------------

BaseVar Vocabulary::var(std::string_view name) {
  auto it = var_ids_.find(std::string(name));
  if (it != var_ids_.end()) return it->second;
  if (var_names_.size() >= kFreshVarBase) throw std::length_error("too many variables");
  BaseVar v{static_cast<std::uint32_t>(var_names_.size())};
  var_names_.emplace_back(name);
  var_ids_.emplace(std::string(name), v);
  return v;
}

std::optional<BaseVar> Vocabulary::find_var(std::string_view name) const {
  auto it = var_ids_.find(std::string(name));
  if (it == var_ids_.end()) return std::nullopt;
  return it->second;
}

std::string Vocabulary::name(BaseVar v) const {
  if (v.id < var_names_.size()) return var_names_[v.id];
  return "_v" + std::to_string(v.id);
}

std::string Vocabulary::name(const Var& v) const {
  std::vector<std::string> names;
  for (BaseVar b : v.components()) names.push_back(name(b));
  std::sort(names.begin(), names.end());
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += '&';
    out += names[i];
  }
  return out;
}

SymbolId Vocabulary::symbol(std::string_view name, std::uint32_t arity) {
  Symbol s{std::string(name), arity};
  auto it = symbol_ids_.find(s);
  if (it != symbol_ids_.end()) return it->second;
  auto id = static_cast<SymbolId>(symbols_.size());
  symbols_.push_back(s);
  symbol_ids_.emplace(std::move(s), id);
  return id;
}

std::optional<SymbolId> Vocabulary::find_symbol(std::string_view name,
                                                std::uint32_t arity) const {
  auto it = symbol_ids_.find(Symbol{std::string(name), arity});
  if (it == symbol_ids_.end()) return std::nullopt;
  return it->second;
}

// --- Atom ---------------------------------------------------------------------

Atom Atom::eq(Var x, Var y) {
  if (y < x) std::swap(x, y);
  return Atom(AtomKind::Eq, std::move(x), 0, {std::move(y)});
}

Atom Atom::eq_app(Var x, SymbolId f, std::vector<Var> args) {
  return Atom(AtomKind::EqApp, std::move(x), f, std::move(args));
}

Atom Atom::sub(Var x, Var y) { return Atom(AtomKind::Sub, std::move(x), 0, {std::move(y)}); }

Atom Atom::sub_app(Var x, SymbolId f, std::vector<Var> args) {
  return Atom(AtomKind::SubApp, std::move(x), f, std::move(args));
}

const Var& Atom::rhs() const {
  if (is_app()) throw std::logic_error("Atom::rhs on an application atom");
  return rest_.front();
}

std::span<const Var> Atom::args() const {
  if (!is_app()) throw std::logic_error("Atom::args on a variable atom");
  return rest_;
}

void Atom::for_each_var(const std::function<void(const Var&)>& fn) const {
  fn(lhs_);
  for (const Var& v : rest_) fn(v);
}

bool Atom::base_only() const {
  if (!lhs_.is_base()) return false;
  return std::all_of(rest_.begin(), rest_.end(), [](const Var& v) { return v.is_base(); });
}

bool Atom::mentions(BaseVar b) const {
  if (lhs_.contains(b)) return true;
  return std::any_of(rest_.begin(), rest_.end(), [&](const Var& v) { return v.contains(b); });
}

Atom Atom::substitute(BaseVar from, BaseVar to) const {
  std::vector<Var> rest;
  rest.reserve(rest_.size());
  for (const Var& v : rest_) rest.push_back(v.substitute(from, to));
  Var lhs = lhs_.substitute(from, to);
  if (kind_ == AtomKind::Eq) return eq(std::move(lhs), std::move(rest.front()));
  return Atom(kind_, std::move(lhs), sym_, std::move(rest));
}

std::size_t AtomHash::operator()(const Atom& a) const noexcept {
  VarHash vh;
  std::size_t h = static_cast<std::size_t>(a.kind());
  h = hash_combine(h, vh(a.lhs()));
  if (a.is_app()) {
    h = hash_combine(h, a.symbol());
    for (const Var& v : a.args()) h = hash_combine(h, vh(v));
  } else {
    h = hash_combine(h, vh(a.rhs()));
  }
  return h;
}

std::string to_string(const Atom& atom, const Vocabulary& vocab) {
  std::string out = vocab.name(atom.lhs());
  out += (atom.kind() == AtomKind::Eq || atom.kind() == AtomKind::EqApp) ? " = " : " <= ";
  if (!atom.is_app()) return out + vocab.name(atom.rhs());
  out += vocab.symbol(atom.symbol()).name;
  out += '(';
  auto args = atom.args();
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ", ";
    out += vocab.name(args[i]);
  }
  return out + ')';
}

// --- Store --------------------------------------------------------------------

void Store::index(AtomId id) {
  const Atom& a = *slots_[id];
  by_atom_[a].push_back(id);
  by_kind_[static_cast<int>(a.kind())].insert(id);
  if (a.kind() != AtomKind::Eq) by_lhs_[a.lhs()].insert(id);
  a.for_each_var([&](const Var& v) {
    for (BaseVar b : v.components()) by_base_[b.id].insert(id);
  });
}

void Store::unindex(AtomId id) {
  const Atom& a = *slots_[id];
  auto it = by_atom_.find(a);
  std::erase(it->second, id);
  if (it->second.empty()) by_atom_.erase(it);
  by_kind_[static_cast<int>(a.kind())].erase(id);
  if (a.kind() != AtomKind::Eq) {
    auto l = by_lhs_.find(a.lhs());
    l->second.erase(id);
    if (l->second.empty()) by_lhs_.erase(l);
  }
  a.for_each_var([&](const Var& v) {
    for (BaseVar b : v.components()) {
      auto bi = by_base_.find(b.id);
      if (bi == by_base_.end()) continue;
      bi->second.erase(id);
      if (bi->second.empty()) by_base_.erase(bi);
    }
  });
}

AtomId Store::add(Atom atom) {
  auto id = static_cast<AtomId>(slots_.size());
  slots_.emplace_back(std::move(atom));
  ++live_count_;
  index(id);
  return id;
}

std::pair<AtomId, bool> Store::add_unique(Atom atom) {
  if (auto existing = find(atom)) return {*existing, false};
  return {add(std::move(atom)), true};
}

void Store::remove(AtomId id) {
  if (!live(id)) throw std::out_of_range("Store::remove: atom not live");
  unindex(id);
  slots_[id].reset();
  --live_count_;
}

std::optional<AtomId> Store::find(const Atom& atom) const {
  auto it = by_atom_.find(atom);
  if (it == by_atom_.end()) return std::nullopt;
  return it->second.front();
}

std::vector<AtomId> Store::ids() const {
  std::vector<AtomId> out;
  out.reserve(live_count_);
  for (AtomId i = 0; i < slots_.size(); ++i)
    if (slots_[i]) out.push_back(i);
  return out;
}

std::vector<Atom> Store::atoms() const {
  std::vector<Atom> out;
  out.reserve(live_count_);
  for (const auto& s : slots_)
    if (s) out.push_back(*s);
  return out;
}

std::vector<AtomId> Store::with_lhs(const Var& x) const {
  auto it = by_lhs_.find(x);
  if (it == by_lhs_.end()) return {};
  return {it->second.begin(), it->second.end()};
}

std::vector<AtomId> Store::mentioning(BaseVar b) const {
  auto it = by_base_.find(b.id);
  if (it == by_base_.end()) return {};
  return {it->second.begin(), it->second.end()};
}

bool Store::mentions(BaseVar b, std::optional<AtomId> except) const {
  auto it = by_base_.find(b.id);
  if (it == by_base_.end()) return false;
  if (!except) return true;
  return it->second.size() > 1 || !it->second.count(*except);
}

std::vector<Var> Store::variables() const {
  std::vector<Var> out;
  std::unordered_map<Var, bool, VarHash> seen;
  for (const auto& s : slots_) {
    if (!s) continue;
    s->for_each_var([&](const Var& v) {
      if (seen.emplace(v, true).second) out.push_back(v);
    });
  }
  return out;
}

std::vector<BaseVar> Store::base_components() const {
  std::vector<BaseVar> out;
  for (const auto& [id, atoms] : by_base_) out.push_back(BaseVar{id});
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Var> Store::lhs_vars() const {
  std::vector<std::pair<AtomId, Var>> firsts;
  for (const auto& [v, ids] : by_lhs_) firsts.emplace_back(*ids.begin(), v);
  std::sort(firsts.begin(), firsts.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Var> out;
  out.reserve(firsts.size());
  for (auto& [id, v] : firsts) out.push_back(std::move(v));
  return out;
}

void Store::substitute(BaseVar from, BaseVar to, std::optional<AtomId> keep, bool unique) {
  for (AtomId id : mentioning(from)) {
    if (keep && id == *keep) continue;
    Atom rewritten = slots_[id]->substitute(from, to);
    remove(id);
    if (unique)
      add_unique(std::move(rewritten));
    else
      add(std::move(rewritten));
  }
}

Store deep_subst(const Store& store, BaseVar x, BaseVar y) {
  if (x == y) throw std::invalid_argument("deep_subst: x and y must differ");
  Store out;
  for (const Atom& a : store.atoms()) out.add(a.substitute(x, y));
  if (store.contradiction()) out.set_contradiction();
  return out;
}

// --- determinedness ------------------------------------------------------------

std::vector<Determination> immediately_determined(const Store& store, const Var& x,
                                                  std::optional<AtomId> excluded) {
  std::vector<Determination> out;
  for (AtomId id : store.with_lhs(x)) {
    if (excluded && id == *excluded) continue;
    const Atom& a = store.atom(id);
    if (!a.is_app()) continue;
    out.push_back({a.symbol(), {a.args().begin(), a.args().end()}, id});
  }
  return out;
}

std::vector<Determination> determined(const Store& store, const Var& x,
                                      std::optional<AtomId> excluded) {
  std::vector<Determination> out = immediately_determined(store, x, excluded);
  for (AtomId id : store.with_lhs(x)) {
    if (excluded && id == *excluded) continue;
    const Atom& a = store.atom(id);
    if (a.kind() != AtomKind::Sub) continue;
    const Var& bound = a.rhs();
    for (AtomKind kind : {AtomKind::EqApp, AtomKind::SubApp}) {
      for (AtomId d : store.of_kind(kind)) {
        if (excluded && d == *excluded) continue;
        const Atom& det = store.atom(d);
        if (!bound.includes(det.lhs())) continue;
        Determination found{det.symbol(), {det.args().begin(), det.args().end()}, d};
        if (std::find(out.begin(), out.end(), found) == out.end()) out.push_back(std::move(found));
      }
    }
  }
  return out;
}

bool congruent(const Store& a, const Store& b) {
  if (a.contradiction() != b.contradiction()) return false;
  auto xs = a.atoms();
  auto ys = b.atoms();
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  return xs == ys;
}

std::string to_string(const Store& store, const Vocabulary& vocab) {
  if (store.contradiction()) return "false\n";
  std::ostringstream os;
  for (const Atom& a : store.atoms()) os << to_string(a, vocab) << '\n';
  return os.str();
}

}  // namespace wsc
