#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "wsc/terms.hpp"

namespace wsc {

struct BaseVar {
  std::uint32_t id = 0;
  friend auto operator<=>(const BaseVar&, const BaseVar&) = default;
  friend bool operator==(const BaseVar&, const BaseVar&) = default;
};

/// Base variables at or above this id are reserved for solver-generated
/// fresh variables.
inline constexpr std::uint32_t kFreshVarBase = 0x4000'0000u;

/// A constraint variable: a nonempty set of base variables, read as their
/// intersection. Components are kept sorted and duplicate-free, so
/// representation equality is equality modulo the ACI laws of intersection.
class Var {
 public:
  Var(BaseVar base) : components_{base} {}  // NOLINT: a base variable is a Var
  /// Throws std::invalid_argument if `components` is empty.
  static Var of(std::vector<BaseVar> components);
  static Var of(std::initializer_list<BaseVar> components) {
    return of(std::vector<BaseVar>(components));
  }

  std::span<const BaseVar> components() const { return components_; }
  bool is_base() const { return components_.size() == 1; }
  BaseVar base() const;  // throws unless is_base()
  bool contains(BaseVar b) const;
  /// True iff every component of `other` is a component of *this, i.e.
  /// *this ≡ other ∩ z for some z.
  bool includes(const Var& other) const;

  /// Deep substitution: replaces `from` by `to` componentwise.
  Var substitute(BaseVar from, BaseVar to) const;

  friend Var intersect(const Var& x, const Var& y);
  friend auto operator<=>(const Var&, const Var&) = default;
  friend bool operator==(const Var&, const Var&) = default;

 private:
  Var() = default;
  std::vector<BaseVar> components_;
};

Var intersect(const Var& x, const Var& y);

/// The base-variable set of x (every base variable is its own component).
std::vector<BaseVar> components(const Var& x);

struct VarHash {
  std::size_t operator()(const Var& v) const noexcept;
};

using SymbolId = std::uint32_t;

/// Interns variable names and constructor symbols.
class Vocabulary {
 public:
  BaseVar var(std::string_view name);
  std::optional<BaseVar> find_var(std::string_view name) const;
  /// Name of a base variable; ids never interned here print as `_v<id>`.
  std::string name(BaseVar v) const;
  std::string name(const Var& v) const;  // components joined by '&', sorted by name
  std::size_t var_count() const { return var_names_.size(); }

  SymbolId symbol(std::string_view name, std::uint32_t arity);
  std::optional<SymbolId> find_symbol(std::string_view name, std::uint32_t arity) const;
  const Symbol& symbol(SymbolId id) const { return symbols_.at(id); }
  std::size_t symbol_count() const { return symbols_.size(); }

 private:
  std::vector<std::string> var_names_;
  std::unordered_map<std::string, BaseVar> var_ids_;
  std::vector<Symbol> symbols_;
  std::map<Symbol, SymbolId> symbol_ids_;
};

enum class AtomKind : std::uint8_t { Eq, EqApp, Sub, SubApp };

/// One of x = y, x = f(ȳ), x ⊑ y, x ⊑ f(ȳ).
///
/// Eq atoms are unordered: the side with the smaller variable is always kept
/// on the left.
class Atom {
 public:
  static Atom eq(Var x, Var y);
  static Atom eq_app(Var x, SymbolId f, std::vector<Var> args);
  static Atom sub(Var x, Var y);
  static Atom sub_app(Var x, SymbolId f, std::vector<Var> args);

  AtomKind kind() const { return kind_; }
  bool is_app() const { return kind_ == AtomKind::EqApp || kind_ == AtomKind::SubApp; }
  const Var& lhs() const { return lhs_; }
  const Var& rhs() const;                   // Eq and Sub only
  SymbolId symbol() const { return sym_; }  // EqApp and SubApp only
  std::span<const Var> args() const;        // EqApp and SubApp only

  void for_each_var(const std::function<void(const Var&)>& fn) const;
  bool base_only() const;
  bool mentions(BaseVar b) const;
  Atom substitute(BaseVar from, BaseVar to) const;

  friend auto operator<=>(const Atom&, const Atom&) = default;
  friend bool operator==(const Atom&, const Atom&) = default;

 private:
  Atom(AtomKind kind, Var lhs, SymbolId sym, std::vector<Var> rest)
      : kind_(kind), lhs_(std::move(lhs)), sym_(sym), rest_(std::move(rest)) {}

  AtomKind kind_;
  Var lhs_;
  SymbolId sym_ = 0;
  std::vector<Var> rest_;  // rhs for Eq/Sub, arguments otherwise
};

struct AtomHash {
  std::size_t operator()(const Atom& a) const noexcept;
};

/// `x = y`, `x = f(y, z)`, `x <= y`, `x <= f(y, z)`.
std::string to_string(const Atom& atom, const Vocabulary& vocab);

using AtomId = std::uint32_t;

/// A conjunction of atoms with incremental indices.
///
/// The store is a multiset (add) with a deduplicating insertion path
/// (add_unique). Atom ids are never reused; iteration is in id order.
class Store {
 public:
  AtomId add(Atom atom);
  /// Inserts unless an identical atom is present; returns the id of the
  /// stored atom and whether it was inserted.
  std::pair<AtomId, bool> add_unique(Atom atom);
  void remove(AtomId id);

  bool live(AtomId id) const { return id < slots_.size() && slots_[id].has_value(); }
  const Atom& atom(AtomId id) const { return *slots_.at(id); }
  std::optional<AtomId> find(const Atom& atom) const;
  bool contains(const Atom& atom) const { return find(atom).has_value(); }

  std::size_t size() const { return live_count_; }
  bool empty() const { return live_count_ == 0; }
  std::size_t count(AtomKind kind) const { return by_kind_[static_cast<int>(kind)].size(); }

  std::vector<AtomId> ids() const;
  std::vector<Atom> atoms() const;
  const std::set<AtomId>& of_kind(AtomKind kind) const {
    return by_kind_[static_cast<int>(kind)];
  }
  /// Atoms whose left-hand side is exactly `x`, ascending.
  std::vector<AtomId> with_lhs(const Var& x) const;
  /// Atoms mentioning base variable `b` in any position, ascending.
  std::vector<AtomId> mentioning(BaseVar b) const;
  /// True iff `b` occurs in some atom other than `except`.
  bool mentions(BaseVar b, std::optional<AtomId> except = std::nullopt) const;

  /// V(φ): distinct variables in order of first occurrence.
  std::vector<Var> variables() const;
  /// Comp(V(φ)) ∩ BV.
  std::vector<BaseVar> base_components() const;
  /// Distinct left-hand sides of Sub, EqApp and SubApp atoms, in order of
  /// first occurrence.
  std::vector<Var> lhs_vars() const;

  bool contradiction() const { return contradiction_; }
  void set_contradiction() { contradiction_ = true; }

  /// Replaces `from` by `to` in every atom except `keep`; with `unique`,
  /// rewritten atoms that duplicate an existing atom are dropped.
  void substitute(BaseVar from, BaseVar to, std::optional<AtomId> keep, bool unique);

 private:
  void index(AtomId id);
  void unindex(AtomId id);

  std::vector<std::optional<Atom>> slots_;
  std::size_t live_count_ = 0;
  std::unordered_map<Atom, std::vector<AtomId>, AtomHash> by_atom_;
  std::unordered_map<Var, std::set<AtomId>, VarHash> by_lhs_;
  std::unordered_map<std::uint32_t, std::set<AtomId>> by_base_;
  std::set<AtomId> by_kind_[4];
  bool contradiction_ = false;
};

/// φ[y/x] with deep substitution into intersection variables. Precondition
/// x ≠ y (std::invalid_argument otherwise).
Store deep_subst(const Store& store, BaseVar x, BaseVar y);

/// A constructor fixed for some variable, with the atom that fixes it.
struct Determination {
  SymbolId symbol;
  std::vector<Var> args;
  AtomId source;

  friend bool operator==(const Determination&, const Determination&) = default;
};

/// x ∘ f(ȳ): an EqApp or SubApp atom with left-hand side x.
std::vector<Determination> immediately_determined(const Store& store, const Var& x,
                                                  std::optional<AtomId> excluded = std::nullopt);

/// x ≤ f(ū): x is immediately determined, or x ⊑ r is in the store and some
/// component y of r (any variable with r ≡ y ∩ z) is immediately determined
/// by f(ū). `excluded` removes one atom from consideration, which is how a
/// rule reads its side conditions against the rest of the store.
std::vector<Determination> determined(const Store& store, const Var& x,
                                      std::optional<AtomId> excluded = std::nullopt);

/// Multiset equality of atoms (conjunction modulo associativity and
/// commutativity).
bool congruent(const Store& a, const Store& b);

/// All atoms, one per line, in id order.
std::string to_string(const Store& store, const Vocabulary& vocab);

}  // namespace wsc
