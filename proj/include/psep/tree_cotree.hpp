#pragma once

// Spanning trees of G, their cotrees in G*, fundamental cycles and cuts.

#include <algorithm>
#include <deque>
#include <sstream>
#include <string>
#include <vector>

#include "psep/planar_ops.hpp"

namespace psep {

struct RootedTree {
  VertexId root = kNone;
  std::vector<VertexId> parent;    // kNone at the root
  std::vector<EdgeId> parent_edge;  // kNone at the root
  std::vector<std::int32_t> depth;
  std::vector<VertexId> order;  // top-down (parents before children)

  std::int32_t height() const { return depth.empty() ? 0 : *std::max_element(depth.begin(), depth.end()); }

  std::vector<char> edge_mask(EdgeId m) const {
    std::vector<char> mask(m, 0);
    for (EdgeId e : parent_edge) {
      if (e != kNone) mask[e] = 1;
    }
    return mask;
  }
};

/// BFS tree over real edges; each vertex picks the smallest-id neighbour one level up.
inline RootedTree bfs_tree(const EmbeddedPlanarGraph& g, VertexId root) {
  if (root < 0 || root >= g.n()) throw Error(Errc::UnknownRoot, "root " + std::to_string(root));
  RootedTree t;
  t.root = root;
  t.parent.assign(g.n(), kNone);
  t.parent_edge.assign(g.n(), kNone);
  t.depth.assign(g.n(), -1);
  t.depth[root] = 0;
  std::deque<VertexId> queue{root};
  while (!queue.empty()) {
    const VertexId v = queue.front();
    queue.pop_front();
    t.order.push_back(v);
    for (DartId d : g.rotation(v)) {
      if (g.is_virtual_edge(edge_of(d))) continue;
      const VertexId w = g.head(d);
      if (t.depth[w] == -1) {
        t.depth[w] = t.depth[v] + 1;
        queue.push_back(w);
      }
    }
  }
  if (static_cast<VertexId>(t.order.size()) != g.n()) throw Error(Errc::NotConnected, "BFS did not reach every vertex");
  for (VertexId v = 0; v < g.n(); ++v) {
    if (v == root) continue;
    for (DartId d : g.rotation(v)) {
      if (g.is_virtual_edge(edge_of(d))) continue;
      const VertexId w = g.head(d);
      if (t.depth[w] + 1 == t.depth[v] && (t.parent[v] == kNone || w < t.parent[v])) {
        t.parent[v] = w;
        t.parent_edge[v] = edge_of(d);
      }
    }
  }
  return t;
}

/// Roots the spanning tree given by an edge set; throws NotSpanningTree otherwise.
inline RootedTree rooted_tree_from_edges(const EmbeddedPlanarGraph& g, const std::vector<EdgeId>& edges,
                                         VertexId root) {
  if (root < 0 || root >= g.n()) throw Error(Errc::UnknownRoot, "root " + std::to_string(root));
  if (static_cast<VertexId>(edges.size()) != g.n() - 1) {
    throw Error(Errc::NotSpanningTree, std::to_string(edges.size()) + " edges for " + std::to_string(g.n()) + " vertices");
  }
  std::vector<char> mask(g.m(), 0);
  for (EdgeId e : edges) {
    if (e < 0 || e >= g.m() || mask[e]) throw Error(Errc::NotSpanningTree, "bad or repeated edge " + std::to_string(e));
    mask[e] = 1;
  }
  RootedTree t;
  t.root = root;
  t.parent.assign(g.n(), kNone);
  t.parent_edge.assign(g.n(), kNone);
  t.depth.assign(g.n(), -1);
  t.depth[root] = 0;
  std::deque<VertexId> queue{root};
  while (!queue.empty()) {
    const VertexId v = queue.front();
    queue.pop_front();
    t.order.push_back(v);
    for (DartId d : g.rotation(v)) {
      if (!mask[edge_of(d)]) continue;
      const VertexId w = g.head(d);
      if (t.depth[w] == -1) {
        t.depth[w] = t.depth[v] + 1;
        t.parent[w] = v;
        t.parent_edge[w] = edge_of(d);
        queue.push_back(w);
      }
    }
  }
  if (static_cast<VertexId>(t.order.size()) != g.n()) throw Error(Errc::NotSpanningTree, "tree does not reach every vertex");
  return t;
}

/// Vertex path from a to b in a rooted tree, via depth-equalised pointer walks.
inline std::vector<VertexId> tree_path(const RootedTree& t, VertexId a, VertexId b) {
  std::vector<VertexId> up_a{a}, up_b{b};
  while (t.depth[a] > t.depth[b]) up_a.push_back(a = t.parent[a]);
  while (t.depth[b] > t.depth[a]) up_b.push_back(b = t.parent[b]);
  while (a != b) {
    up_a.push_back(a = t.parent[a]);
    up_b.push_back(b = t.parent[b]);
  }
  up_b.pop_back();
  up_a.insert(up_a.end(), up_b.rbegin(), up_b.rend());
  return up_a;
}

struct TreeCotreePair {
  const EmbeddedPlanarGraph* graph = nullptr;
  RootedTree primal;
  std::vector<char> in_tree;  // per edge
  FaceId dual_root = kNone;
  std::vector<FaceId> dual_parent;
  std::vector<EdgeId> dual_parent_edge;
  std::vector<std::int32_t> dual_depth;
  std::vector<FaceId> dual_order;  // top-down

  bool in_cotree(EdgeId e) const { return !in_tree[e]; }

  /// Child endpoint of a cotree edge in the rooted dual tree.
  FaceId dual_child(EdgeId e) const {
    const FaceId a = graph->face_of(2 * e);
    const FaceId b = graph->face_of(2 * e + 1);
    return dual_parent_edge[a] == e ? a : b;
  }
};

/// T* = E \ T, checked to span G*, rooted at the maximum face id.
inline TreeCotreePair cotree(const EmbeddedPlanarGraph& g, const RootedTree& t) {
  if (static_cast<VertexId>(t.parent.size()) != g.n()) throw Error(Errc::NotSpanningTree, "tree sized for another graph");
  TreeCotreePair pair;
  pair.graph = &g;
  pair.primal = t;
  pair.in_tree.assign(g.m(), 0);
  EdgeId tree_edges = 0;
  for (VertexId v = 0; v < g.n(); ++v) {
    const EdgeId e = t.parent_edge[v];
    if (v == t.root) continue;
    if (e == kNone || e >= g.m() || pair.in_tree[e]) throw Error(Errc::NotSpanningTree, "vertex " + std::to_string(v) + " has no tree edge");
    const VertexId a = g.tail(2 * e), b = g.head(2 * e);
    if (!((a == v && b == t.parent[v]) || (b == v && a == t.parent[v]))) {
      throw Error(Errc::NotSpanningTree, "parent edge of " + std::to_string(v) + " does not reach its parent");
    }
    pair.in_tree[e] = 1;
    ++tree_edges;
  }
  if (tree_edges != g.n() - 1 || static_cast<VertexId>(t.order.size()) != g.n()) {
    throw Error(Errc::NotSpanningTree, "tree does not span G");
  }
  const FaceId f = g.num_faces();
  pair.dual_root = f - 1;
  pair.dual_parent.assign(f, kNone);
  pair.dual_parent_edge.assign(f, kNone);
  pair.dual_depth.assign(f, -1);
  pair.dual_depth[pair.dual_root] = 0;
  std::deque<FaceId> queue{pair.dual_root};
  EdgeId cotree_edges = 0;
  while (!queue.empty()) {
    const FaceId x = queue.front();
    queue.pop_front();
    pair.dual_order.push_back(x);
    for (DartId d : g.face(x).boundary) {
      const EdgeId e = edge_of(d);
      if (pair.in_tree[e] || e == pair.dual_parent_edge[x]) continue;
      const FaceId y = g.face_of(rev(d));
      if (y == x || pair.dual_depth[y] != -1) {
        throw Error(Errc::NotSpanningTree, "cotree has a cycle; T is not a spanning tree");
      }
      pair.dual_depth[y] = pair.dual_depth[x] + 1;
      pair.dual_parent[y] = x;
      pair.dual_parent_edge[y] = e;
      ++cotree_edges;
      queue.push_back(y);
    }
  }
  if (static_cast<FaceId>(pair.dual_order.size()) != f || cotree_edges != g.m() - g.n() + 1) {
    throw Error(Errc::NotSpanningTree, "cotree does not span the dual");
  }
  return pair;
}

/// Per-node sums over subtrees of a forest given by parent links (kNone at roots).
inline std::vector<Weight> subtree_sums(std::span<const std::int32_t> parent, std::span<const Weight> values) {
  const auto n = static_cast<std::int32_t>(parent.size());
  std::vector<std::vector<std::int32_t>> children(n);
  std::vector<std::int32_t> order;
  order.reserve(n);
  for (std::int32_t v = 0; v < n; ++v) {
    if (parent[v] == kNone) order.push_back(v);
    else children[parent[v]].push_back(v);
  }
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::int32_t c : children[order[i]]) order.push_back(c);
  }
  if (static_cast<std::int32_t>(order.size()) != n) throw Error(Errc::NotSpanningTree, "parent links contain a cycle");
  std::vector<Weight> sums(values.begin(), values.end());
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (parent[*it] != kNone) sums[parent[*it]] += sums[*it];
  }
  return sums;
}

struct FundamentalCycle {
  VertexId u = kNone;  // tail of dart 2e
  VertexId v = kNone;  // head of dart 2e
  std::vector<VertexId> path;  // tree path u .. v
  std::vector<EdgeId> edges;   // path edges plus e, sorted
};

inline FundamentalCycle fundamental_cycle(const TreeCotreePair& pair, EdgeId e) {
  const auto& g = *pair.graph;
  if (e < 0 || e >= g.m()) throw Error(Errc::BadParams, "no edge " + std::to_string(e));
  if (pair.in_tree[e]) throw Error(Errc::EdgeInTree, "edge " + std::to_string(e));
  FundamentalCycle c;
  c.u = g.tail(2 * e);
  c.v = g.head(2 * e);
  c.path = tree_path(pair.primal, c.u, c.v);
  c.edges.push_back(e);
  for (std::size_t i = 0; i + 1 < c.path.size(); ++i) {
    const VertexId a = c.path[i], b = c.path[i + 1];
    c.edges.push_back(pair.primal.parent[a] == b ? pair.primal.parent_edge[a] : pair.primal.parent_edge[b]);
  }
  std::sort(c.edges.begin(), c.edges.end());
  return c;
}

/// Faces of T*_f, where f is the child endpoint of cotree edge e; sorted.
inline std::vector<FaceId> interior_faces(const TreeCotreePair& pair, EdgeId e) {
  const auto& g = *pair.graph;
  if (e < 0 || e >= g.m()) throw Error(Errc::BadParams, "no edge " + std::to_string(e));
  if (pair.in_tree[e]) throw Error(Errc::EdgeNotInCotree, "edge " + std::to_string(e));
  const FaceId child = pair.dual_child(e);
  std::vector<char> inside(g.num_faces(), 0);
  inside[child] = 1;
  std::vector<FaceId> out;
  for (FaceId f : pair.dual_order) {
    if (f == child || (pair.dual_parent[f] != kNone && inside[pair.dual_parent[f]])) {
      inside[f] = 1;
      out.push_back(f);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Primal edges crossing the two components of T* minus e; sorted.
inline std::vector<EdgeId> fundamental_cut(const TreeCotreePair& pair, EdgeId e) {
  const auto& g = *pair.graph;
  if (e < 0 || e >= g.m()) throw Error(Errc::BadParams, "no edge " + std::to_string(e));
  if (pair.in_tree[e]) throw Error(Errc::EdgeNotInCotree, "edge " + std::to_string(e));
  std::vector<char> side(g.num_faces(), 0);
  for (FaceId f : interior_faces(pair, e)) side[f] = 1;
  std::vector<EdgeId> cut;
  for (EdgeId x = 0; x < g.m(); ++x) {
    if (side[g.face_of(2 * x)] != side[g.face_of(2 * x + 1)]) cut.push_back(x);
  }
  return cut;
}

/// Debug rendering; edge style distinguishes tree, cotree and virtual edges.
inline std::string to_dot(const TreeCotreePair& pair) {
  const auto& g = *pair.graph;
  std::ostringstream out;
  out << "graph G {\n";
  for (EdgeId e = 0; e < g.m(); ++e) {
    out << "  " << g.tail(2 * e) << " -- " << g.head(2 * e) << " [kind="
        << (pair.in_tree[e] ? "tree" : "cotree") << (g.is_virtual_edge(e) ? ",style=dashed" : "")
        << (pair.in_tree[e] ? ",penwidth=2" : "") << "];\n";
  }
  out << "}\n";
  out << "graph Dual {\n";
  for (FaceId f = 0; f < g.num_faces(); ++f) {
    if (pair.dual_parent[f] != kNone) out << "  f" << f << " -- f" << pair.dual_parent[f] << ";\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace psep
