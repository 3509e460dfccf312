#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wsc {

/// A constructor symbol. Identity is the (name, arity) pair, so `f/1` and
/// `f/2` are different symbols.
struct Symbol {
  std::string name;
  std::uint32_t arity = 0;

  friend auto operator<=>(const Symbol&, const Symbol&) = default;
  friend bool operator==(const Symbol&, const Symbol&) = default;
};

std::string to_string(const Symbol& symbol);

/// A finite rooted graph denoting a rational tree over constructor symbols
/// and holes (free variables of the semantic domain).
///
/// Every node is either labeled with a symbol and has exactly arity-many
/// children, or it is a hole with a name and no children. Cycles are allowed.
/// Graphs are immutable once built; node ids are numbered in breadth-first
/// order from the root, so node 0 is always the root.
class TermGraph {
 public:
  using NodeId = std::uint32_t;

  struct Node {
    std::optional<Symbol> label;
    std::vector<NodeId> children;
    std::string hole;  // nonempty iff !label
  };

  /// Incremental construction of possibly cyclic graphs.
  class Builder {
   public:
    NodeId add_hole(std::string name);
    /// Adds a labeled node whose children are filled in later with set_child.
    NodeId add_node(Symbol label);
    void set_child(NodeId parent, std::size_t position, NodeId child);
    /// Validates the graph and drops nodes unreachable from `root`.
    TermGraph build(NodeId root) const;

   private:
    friend class TermGraph;
    std::vector<Node> nodes_;
  };

  static TermGraph hole(std::string name);
  static TermGraph apply(const Symbol& label, std::span<const TermGraph> args);

  NodeId root() const { return 0; }
  std::size_t size() const { return nodes_.size(); }
  const Node& node(NodeId id) const { return nodes_.at(id); }
  bool is_hole() const { return !nodes_.front().label.has_value(); }

  /// The graph rooted at `id`.
  TermGraph subgraph(NodeId id) const;

  /// True if some node lies on a cycle.
  bool cyclic() const;

 private:
  TermGraph() = default;
  std::vector<Node> nodes_;
};

/// True iff Inst(specific) is a subset of Inst(general): every position at
/// which `general` carries a label is labeled identically in `specific`.
/// Decided by the greatest simulation between the two graphs; hole names
/// are irrelevant here.
bool weak_subsumes(const TermGraph& general, const TermGraph& specific);

/// True iff both graphs denote the same rational tree (hole names included).
bool graph_equal(const TermGraph& s, const TermGraph& t);

/// Bounded reading of the weak instance relation: `tree` agrees with
/// `pattern` on every labeled position of `pattern` of length <= depth.
bool instance_member(const TermGraph& tree, const TermGraph& pattern, int depth);

/// A graph whose weak instances are Inst(s) ∩ Inst(t), or nullopt when the
/// intersection is empty.
std::optional<TermGraph> instance_meet(const TermGraph& s, const TermGraph& t);

/// Minimal graph for the same rational tree, numbered canonically. Two graphs
/// are graph_equal iff their canonical forms are structurally identical.
TermGraph minimize(const TermGraph& t);

/// A string that identifies the denoted tree (the printed minimal form).
std::string canonical_key(const TermGraph& t);

class TermSyntaxError : public std::runtime_error {
 public:
  TermSyntaxError(const std::string& what, std::size_t offset)
      : std::runtime_error(what), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Textual term syntax:
///
///   term  ::= 'rec' IDENT '.' term
///           | IDENT '(' [term {',' term}] ')'
///           | IDENT
///
/// A bare identifier is a back-reference when bound by an enclosing `rec`,
/// and a hole otherwise. `rec X. X` is rejected.
TermGraph parse_term(std::string_view text);

/// Prints in the syntax accepted by parse_term. Shared acyclic subgraphs are
/// printed once per occurrence; cycles get `rec` binders.
std::string print_term(const TermGraph& t);

}  // namespace wsc
