#include "wsc/terms.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace wsc {

namespace {

constexpr TermGraph::NodeId kUnset = std::numeric_limits<TermGraph::NodeId>::max();

std::uint64_t pair_key(std::uint32_t a, std::uint32_t b) {
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

// Decides whether the pair (a, b) belongs to the greatest fixed point of a
// pair relation. `expand` reports whether a pair is locally consistent and,
// if so, which pairs it depends on. The candidate relation starts as all
// pairs reachable from (a, b) and is refined by deleting inconsistent pairs
// and, transitively, every pair depending on a deleted one.
template <class Expand>
bool in_greatest_fixpoint(std::uint32_t a, std::uint32_t b, Expand expand) {
  std::unordered_map<std::uint64_t, std::size_t> index;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  std::vector<std::vector<std::size_t>> dependents;
  std::vector<bool> alive;
  std::vector<std::size_t> dead;

  auto intern = [&](std::uint32_t x, std::uint32_t y) {
    auto [it, inserted] = index.emplace(pair_key(x, y), pairs.size());
    if (inserted) {
      pairs.emplace_back(x, y);
      dependents.emplace_back();
      alive.push_back(true);
    }
    return it->second;
  };

  intern(a, b);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> successors;
  for (std::size_t cur = 0; cur < pairs.size(); ++cur) {
    successors.clear();
    auto [x, y] = pairs[cur];
    if (!expand(x, y, successors)) {
      alive[cur] = false;
      dead.push_back(cur);
      continue;
    }
    for (auto [sx, sy] : successors) dependents[intern(sx, sy)].push_back(cur);
  }

  while (!dead.empty()) {
    std::size_t d = dead.back();
    dead.pop_back();
    for (std::size_t p : dependents[d]) {
      if (alive[p]) {
        alive[p] = false;
        dead.push_back(p);
      }
    }
  }
  return alive[0];
}

bool is_ident_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}

bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }

}  // namespace

std::string to_string(const Symbol& symbol) {
  return symbol.name + "/" + std::to_string(symbol.arity);
}

// --- construction -----------------------------------------------------------

TermGraph::NodeId TermGraph::Builder::add_hole(std::string name) {
  if (name.empty()) throw std::invalid_argument("hole name must be nonempty");
  nodes_.push_back(Node{std::nullopt, {}, std::move(name)});
  return static_cast<NodeId>(nodes_.size() - 1);
}

TermGraph::NodeId TermGraph::Builder::add_node(Symbol label) {
  std::vector<NodeId> children(label.arity, kUnset);
  nodes_.push_back(Node{std::move(label), std::move(children), {}});
  return static_cast<NodeId>(nodes_.size() - 1);
}

void TermGraph::Builder::set_child(NodeId parent, std::size_t position, NodeId child) {
  if (parent >= nodes_.size() || child >= nodes_.size())
    throw std::out_of_range("set_child: unknown node");
  auto& children = nodes_[parent].children;
  if (position >= children.size()) throw std::out_of_range("set_child: position exceeds arity");
  children[position] = child;
}

TermGraph TermGraph::Builder::build(NodeId root) const {
  if (root >= nodes_.size()) throw std::out_of_range("build: unknown root");
  std::vector<NodeId> renumber(nodes_.size(), kUnset);
  std::vector<NodeId> order;
  renumber[root] = 0;
  order.push_back(root);
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (NodeId c : nodes_[order[i]].children) {
      if (c == kUnset) throw std::invalid_argument("build: labeled node with a missing child");
      if (renumber[c] == kUnset) {
        renumber[c] = static_cast<NodeId>(order.size());
        order.push_back(c);
      }
    }
  }
  TermGraph g;
  g.nodes_.reserve(order.size());
  for (NodeId old : order) {
    Node n = nodes_[old];
    for (NodeId& c : n.children) c = renumber[c];
    g.nodes_.push_back(std::move(n));
  }
  return g;
}

TermGraph TermGraph::hole(std::string name) {
  Builder b;
  return b.build(b.add_hole(std::move(name)));
}

TermGraph TermGraph::apply(const Symbol& label, std::span<const TermGraph> args) {
  if (args.size() != label.arity)
    throw std::invalid_argument("apply: " + to_string(label) + " given " +
                                std::to_string(args.size()) + " arguments");
  Builder b;
  NodeId root = b.add_node(label);
  for (std::size_t i = 0; i < args.size(); ++i) {
    const TermGraph& arg = args[i];
    NodeId offset = static_cast<NodeId>(b.nodes_.size());
    for (const Node& n : arg.nodes_) {
      Node copy = n;
      for (NodeId& c : copy.children) c += offset;
      b.nodes_.push_back(std::move(copy));
    }
    b.set_child(root, i, offset + arg.root());
  }
  return b.build(root);
}

TermGraph TermGraph::subgraph(NodeId id) const {
  Builder b;
  b.nodes_ = nodes_;
  return b.build(id);
}

bool TermGraph::cyclic() const {
  // 0 = unvisited, 1 = on stack, 2 = done
  std::vector<int> color(nodes_.size(), 0);
  std::vector<std::pair<NodeId, std::size_t>> stack{{0, 0}};
  color[0] = 1;
  while (!stack.empty()) {
    auto& [n, next] = stack.back();
    if (next == nodes_[n].children.size()) {
      color[n] = 2;
      stack.pop_back();
      continue;
    }
    NodeId c = nodes_[n].children[next++];
    if (color[c] == 1) return true;
    if (color[c] == 0) {
      color[c] = 1;
      stack.emplace_back(c, 0);
    }
  }
  return false;
}

// --- relations ----------------------------------------------------------------

bool weak_subsumes(const TermGraph& general, const TermGraph& specific) {
  return in_greatest_fixpoint(
      general.root(), specific.root(),
      [&](std::uint32_t g, std::uint32_t s, auto& successors) {
        const auto& gn = general.node(g);
        if (!gn.label) return true;  // a hole admits every tree
        const auto& sn = specific.node(s);
        if (!sn.label || *sn.label != *gn.label) return false;
        for (std::size_t i = 0; i < gn.children.size(); ++i)
          successors.emplace_back(gn.children[i], sn.children[i]);
        return true;
      });
}

bool graph_equal(const TermGraph& s, const TermGraph& t) {
  return in_greatest_fixpoint(
      s.root(), t.root(), [&](std::uint32_t a, std::uint32_t b, auto& successors) {
        const auto& an = s.node(a);
        const auto& bn = t.node(b);
        if (!an.label || !bn.label) return !an.label && !bn.label && an.hole == bn.hole;
        if (*an.label != *bn.label) return false;
        for (std::size_t i = 0; i < an.children.size(); ++i)
          successors.emplace_back(an.children[i], bn.children[i]);
        return true;
      });
}

bool instance_member(const TermGraph& tree, const TermGraph& pattern, int depth) {
  if (depth < 0) throw std::invalid_argument("instance_member: negative depth");
  struct Item {
    TermGraph::NodeId t, p;
    int remaining;
  };
  std::set<std::tuple<TermGraph::NodeId, TermGraph::NodeId, int>> seen;
  std::vector<Item> todo{{tree.root(), pattern.root(), depth}};
  while (!todo.empty()) {
    Item it = todo.back();
    todo.pop_back();
    if (!seen.emplace(it.t, it.p, it.remaining).second) continue;
    const auto& pn = pattern.node(it.p);
    if (!pn.label) continue;
    const auto& tn = tree.node(it.t);
    if (!tn.label || *tn.label != *pn.label) return false;
    if (it.remaining == 0) continue;
    for (std::size_t i = 0; i < pn.children.size(); ++i)
      todo.push_back({tn.children[i], pn.children[i], it.remaining - 1});
  }
  return true;
}

std::optional<TermGraph> instance_meet(const TermGraph& s, const TermGraph& t) {
  // Product construction; kUnset on one side means "unconstrained below".
  using NodeId = TermGraph::NodeId;
  TermGraph::Builder b;
  std::unordered_map<std::uint64_t, NodeId> made;
  std::deque<std::tuple<NodeId, NodeId, NodeId>> todo;  // (s node, t node, result node)
  std::vector<std::tuple<NodeId, std::size_t, NodeId, NodeId>> edges;

  auto label_of = [](const TermGraph& g, NodeId n) -> const std::optional<Symbol>* {
    return n == kUnset ? nullptr : &g.node(n).label;
  };

  auto visit = [&](NodeId a, NodeId c) -> std::optional<NodeId> {
    auto [it, inserted] = made.emplace(pair_key(a, c), 0);
    if (!inserted) return it->second;
    const auto* la = label_of(s, a);
    const auto* lc = label_of(t, c);
    bool sa = la && la->has_value();
    bool tc = lc && lc->has_value();
    NodeId id;
    if (!sa && !tc) {
      id = b.add_hole(a != kUnset ? s.node(a).hole : t.node(c).hole);
    } else if (sa && tc) {
      if (**la != **lc) return std::nullopt;
      id = b.add_node(**la);
    } else {
      id = b.add_node(sa ? **la : **lc);
    }
    it->second = id;
    todo.emplace_back(a, c, id);
    return id;
  };

  auto root = visit(s.root(), t.root());
  if (!root) return std::nullopt;
  while (!todo.empty()) {
    auto [a, c, id] = todo.front();
    todo.pop_front();
    bool sa = a != kUnset && s.node(a).label.has_value();
    bool tc = c != kUnset && t.node(c).label.has_value();
    if (!sa && !tc) continue;
    std::size_t arity = sa ? s.node(a).children.size() : t.node(c).children.size();
    for (std::size_t i = 0; i < arity; ++i) {
      NodeId ca = sa ? s.node(a).children[i] : kUnset;
      NodeId cc = tc ? t.node(c).children[i] : kUnset;
      auto child = visit(ca, cc);
      if (!child) return std::nullopt;
      b.set_child(id, i, *child);
    }
  }
  return b.build(*root);
}

TermGraph minimize(const TermGraph& t) {
  using NodeId = TermGraph::NodeId;
  const std::size_t n = t.size();

  // Initial blocks by local label; refine by children's blocks until stable.
  std::vector<std::size_t> block(n);
  {
    std::map<std::pair<std::optional<Symbol>, std::string>, std::size_t> initial;
    for (NodeId i = 0; i < n; ++i) {
      const auto& node = t.node(i);
      auto key = std::make_pair(node.label, node.hole);
      auto [it, _] = initial.emplace(key, initial.size());
      block[i] = it->second;
    }
  }
  for (std::size_t count = 0;;) {
    std::map<std::vector<std::size_t>, std::size_t> sigs;
    std::vector<std::size_t> next(n);
    for (NodeId i = 0; i < n; ++i) {
      std::vector<std::size_t> sig{block[i]};
      for (NodeId c : t.node(i).children) sig.push_back(block[c]);
      auto [it, _] = sigs.emplace(std::move(sig), sigs.size());
      next[i] = it->second;
    }
    block = std::move(next);
    if (sigs.size() == count) break;
    count = sigs.size();
  }

  TermGraph::Builder b;
  std::map<std::size_t, NodeId> rep;
  std::vector<NodeId> made(n, kUnset);
  for (NodeId i = 0; i < n; ++i) {
    auto it = rep.find(block[i]);
    if (it != rep.end()) {
      made[i] = it->second;
      continue;
    }
    const auto& node = t.node(i);
    NodeId id = node.label ? b.add_node(*node.label) : b.add_hole(node.hole);
    rep.emplace(block[i], id);
    made[i] = id;
  }
  for (auto [blk, id] : rep) {
    NodeId member = 0;
    while (block[member] != blk) ++member;
    const auto& children = t.node(member).children;
    for (std::size_t c = 0; c < children.size(); ++c) b.set_child(id, c, made[children[c]]);
  }
  return b.build(made[t.root()]);
}

std::string canonical_key(const TermGraph& t) { return print_term(minimize(t)); }

// --- syntax -------------------------------------------------------------------

namespace {

class TermParser {
 public:
  explicit TermParser(std::string_view text) : text_(text) {}

  TermGraph parse() {
    std::size_t root = term();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return finish(root);
  }

 private:
  struct PNode {
    enum Kind { Hole, App, Forward } kind;
    std::string name;
    std::vector<std::size_t> children;
    std::size_t forward = 0;
    std::size_t offset = 0;
  };

  [[noreturn]] void fail(const std::string& what) const {
    throw TermSyntaxError("term syntax error at offset " + std::to_string(pos_) + ": " + what,
                          pos_);
  }

  void skip_ws() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' ||
                                   text_[pos_] == '\n' || text_[pos_] == '\r'))
      ++pos_;
  }

  std::string ident() {
    skip_ws();
    if (pos_ >= text_.size() || !is_ident_start(text_[pos_])) fail("expected identifier");
    std::size_t start = pos_;
    while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  std::size_t push(PNode n) {
    nodes_.push_back(std::move(n));
    return nodes_.size() - 1;
  }

  std::size_t term() {
    skip_ws();
    std::size_t start = pos_;
    std::string name = ident();
    if (name == "rec") {
      std::string binder = ident();
      expect('.');
      std::size_t placeholder = push({PNode::Forward, binder, {}, 0, start});
      env_.emplace_back(binder, placeholder);
      std::size_t body = term();
      env_.pop_back();
      nodes_[placeholder].forward = body;
      return placeholder;
    }
    if (accept('(')) {
      std::vector<std::size_t> children;
      if (!accept(')')) {
        do {
          children.push_back(term());
        } while (accept(','));
        expect(')');
      }
      return push({PNode::App, std::move(name), std::move(children), 0, start});
    }
    for (auto it = env_.rbegin(); it != env_.rend(); ++it)
      if (it->first == name) return it->second;
    return push({PNode::Hole, std::move(name), {}, 0, start});
  }

  std::size_t resolve(std::size_t id) const {
    std::size_t steps = 0;
    while (nodes_[id].kind == PNode::Forward) {
      if (++steps > nodes_.size())
        throw TermSyntaxError("term syntax error: 'rec " + nodes_[id].name +
                                  ".' does not reach a constructor or hole",
                              nodes_[id].offset);
      id = nodes_[id].forward;
    }
    return id;
  }

  TermGraph finish(std::size_t root) {
    TermGraph::Builder b;
    std::vector<TermGraph::NodeId> made(nodes_.size(), kUnset);
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const PNode& n = nodes_[i];
      if (n.kind == PNode::Hole) made[i] = b.add_hole(n.name);
      if (n.kind == PNode::App)
        made[i] = b.add_node(Symbol{n.name, static_cast<std::uint32_t>(n.children.size())});
    }
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const PNode& n = nodes_[i];
      if (n.kind != PNode::App) continue;
      for (std::size_t c = 0; c < n.children.size(); ++c)
        b.set_child(made[i], c, made[resolve(n.children[c])]);
    }
    return b.build(made[resolve(root)]);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::vector<PNode> nodes_;
  std::vector<std::pair<std::string, std::size_t>> env_;
};

class TermPrinter {
 public:
  explicit TermPrinter(const TermGraph& g) : g_(g), needs_binder_(g.size(), false) {
    std::unordered_set<std::string> holes;
    for (TermGraph::NodeId i = 0; i < g.size(); ++i)
      if (!g.node(i).label) holes.insert(g.node(i).hole);
    for (TermGraph::NodeId i = 0; i < g.size(); ++i) {
      std::string name = "R" + std::to_string(i);
      while (holes.count(name)) name += "_";
      binders_.push_back(std::move(name));
    }
  }

  std::string print(TermGraph::NodeId n) {
    const auto& node = g_.node(n);
    if (!node.label) return node.hole;
    if (std::find(stack_.begin(), stack_.end(), n) != stack_.end()) {
      needs_binder_[n] = true;
      return binders_[n];
    }
    stack_.push_back(n);
    std::string body = node.label->name + "(";
    for (std::size_t i = 0; i < node.children.size(); ++i) {
      if (i) body += ", ";
      body += print(node.children[i]);
    }
    body += ")";
    stack_.pop_back();
    if (needs_binder_[n]) {
      needs_binder_[n] = false;
      return "rec " + binders_[n] + ". " + body;
    }
    return body;
  }

 private:
  const TermGraph& g_;
  std::vector<bool> needs_binder_;
  std::vector<std::string> binders_;
  std::vector<TermGraph::NodeId> stack_;
};

}  // namespace

TermGraph parse_term(std::string_view text) { return TermParser(text).parse(); }

std::string print_term(const TermGraph& t) { return TermPrinter(t).print(t.root()); }

}  // namespace wsc
