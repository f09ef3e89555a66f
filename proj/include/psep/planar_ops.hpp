#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

#include "psep/planar.hpp"

namespace psep {

/// Builds an embedding from per-vertex neighbour lists in clockwise order.
///
/// The k-th occurrence of b in the list of a pairs with the k-th occurrence of a
/// in the list of b; repeated neighbours get increasing copy indices. Edge ids are
/// assigned in order of first appearance from the smaller endpoint.
inline EmbeddedPlanarGraph build_embedding(VertexId n, const std::vector<std::vector<VertexId>>& rotation,
                                           std::vector<Weight> weights = {},
                                           std::optional<std::pair<VertexId, VertexId>> outer_hint = std::nullopt,
                                           GraphOptions options = {}) {
  if (static_cast<VertexId>(rotation.size()) != n) {
    throw Error(Errc::InconsistentRotation, "expected " + std::to_string(n) + " rotation lists");
  }
  using Key = std::tuple<VertexId, VertexId, std::int32_t>;
  std::map<Key, DartId> index;
  std::vector<Dart> darts;
  std::vector<std::vector<DartId>> rot(n);
  std::vector<char> reverse_seen;

  // Edges are created from the smaller endpoint; the larger endpoint must mirror them.
  for (VertexId v = 0; v < n; ++v) {
    std::map<VertexId, std::int32_t> seen;
    for (VertexId h : rotation[v]) {
      if (h < 0 || h >= n) throw Error(Errc::InconsistentRotation, "neighbour out of range at " + std::to_string(v));
      if (h == v) throw Error(Errc::InconsistentRotation, "self-loop at " + std::to_string(v));
      const std::int32_t copy = seen[h]++;
      if (v < h) {
        const auto e = static_cast<EdgeId>(darts.size() / 2);
        darts.push_back({v, h, copy, copy > 0});
        darts.push_back({h, v, copy, copy > 0});
        index[{v, h, copy}] = 2 * e;
        index[{h, v, copy}] = 2 * e + 1;
        reverse_seen.push_back(0);
        rot[v].push_back(2 * e);
      } else {
        auto it = index.find({v, h, copy});
        if (it == index.end()) {
          throw Error(Errc::InconsistentRotation, "dart (" + std::to_string(v) + "," + std::to_string(h) +
                                                      ") has no reverse at vertex " + std::to_string(h));
        }
        reverse_seen[edge_of(it->second)] = 1;
        rot[v].push_back(it->second);
      }
    }
  }
  for (EdgeId e = 0; e < static_cast<EdgeId>(reverse_seen.size()); ++e) {
    if (!reverse_seen[e]) {
      throw Error(Errc::InconsistentRotation, "dart (" + std::to_string(darts[2 * e].tail) + "," +
                                                  std::to_string(darts[2 * e].head) + ") has no reverse at vertex " +
                                                  std::to_string(darts[2 * e].head));
    }
  }
  std::optional<DartId> hint;
  if (outer_hint) {
    auto it = index.find({outer_hint->first, outer_hint->second, 0});
    if (it == index.end()) throw Error(Errc::BadParams, "outer hint dart does not exist");
    hint = it->second;
  }
  return EmbeddedPlanarGraph(n, std::move(darts), std::move(rot), std::move(weights), hint, options);
}

/// Neighbour lists in rotation order, the inverse of build_embedding.
inline std::vector<std::vector<VertexId>> neighbour_rotation(const EmbeddedPlanarGraph& g) {
  std::vector<std::vector<VertexId>> out(g.n());
  for (VertexId v = 0; v < g.n(); ++v) {
    for (DartId d : g.rotation(v)) out[v].push_back(g.head(d));
  }
  return out;
}

inline EmbeddedPlanarGraph with_weights(const EmbeddedPlanarGraph& g, std::vector<Weight> weights) {
  std::vector<Dart> darts(g.darts().begin(), g.darts().end());
  return EmbeddedPlanarGraph(g.n(), std::move(darts), g.rotations(), std::move(weights), g.outer_hint());
}

struct DualGraph {
  FaceId num_nodes = 0;
  std::vector<std::pair<FaceId, FaceId>> edges;  // indexed by primal edge id
  std::vector<std::int32_t> degree;

  bool is_self_loop(EdgeId e) const { return edges[e].first == edges[e].second; }
};

inline DualGraph build_dual(const EmbeddedPlanarGraph& g) {
  DualGraph dual;
  dual.num_nodes = g.num_faces();
  dual.degree.assign(dual.num_nodes, 0);
  dual.edges.reserve(g.m());
  for (EdgeId e = 0; e < g.m(); ++e) {
    const FaceId a = g.face_of(2 * e);
    const FaceId b = g.face_of(2 * e + 1);
    dual.edges.emplace_back(a, b);
    dual.degree[a]++;
    dual.degree[b]++;
  }
  return dual;
}

inline EmbeddingReport validate_embedding(const EmbeddedPlanarGraph& g) { return g.validate(); }

namespace detail {

struct BlockInfo {
  std::vector<std::int32_t> block_of_edge;
  std::vector<char> articulation;
};

// Iterative Hopcroft-Tarjan over a dart/rotation multigraph.
inline BlockInfo compute_blocks(VertexId n, const std::vector<Dart>& darts,
                                const std::vector<std::vector<DartId>>& rot) {
  const auto m = static_cast<EdgeId>(darts.size() / 2);
  BlockInfo info;
  info.block_of_edge.assign(m, kNone);
  info.articulation.assign(n, 0);
  std::vector<std::int32_t> disc(n, -1), low(n, 0);
  struct Frame {
    VertexId v;
    EdgeId parent_edge;
    std::size_t next;
  };
  std::vector<Frame> stack;
  std::vector<EdgeId> edge_stack;
  std::int32_t clock = 0;
  std::int32_t blocks = 0;
  for (VertexId root = 0; root < n; ++root) {
    if (disc[root] != -1) continue;
    disc[root] = low[root] = clock++;
    stack.push_back({root, kNone, 0});
    std::int32_t root_children = 0;
    while (!stack.empty()) {
      Frame& top = stack.back();
      const VertexId v = top.v;
      if (top.next < rot[v].size()) {
        const DartId d = rot[v][top.next++];
        const EdgeId e = edge_of(d);
        if (e == top.parent_edge) continue;
        const VertexId w = darts[d].head;
        if (disc[w] == -1) {
          edge_stack.push_back(e);
          disc[w] = low[w] = clock++;
          if (v == root) ++root_children;
          stack.push_back({w, e, 0});
        } else if (disc[w] < disc[v]) {
          edge_stack.push_back(e);
          low[v] = std::min(low[v], disc[w]);
        }
        continue;
      }
      const EdgeId via = top.parent_edge;
      stack.pop_back();
      if (stack.empty()) break;
      const VertexId u = stack.back().v;
      low[u] = std::min(low[u], low[v]);
      if (low[v] >= disc[u]) {
        if (u != root) info.articulation[u] = 1;
        while (!edge_stack.empty()) {
          const EdgeId e = edge_stack.back();
          edge_stack.pop_back();
          info.block_of_edge[e] = blocks;
          if (e == via) break;
        }
        ++blocks;
      }
    }
    if (root_children > 1) info.articulation[root] = 1;
  }
  return info;
}

}  // namespace detail

inline std::vector<VertexId> articulation_points(const EmbeddedPlanarGraph& g) {
  std::vector<Dart> darts(g.darts().begin(), g.darts().end());
  const auto info = detail::compute_blocks(g.n(), darts, g.rotations());
  std::vector<VertexId> out;
  for (VertexId v = 0; v < g.n(); ++v) {
    if (info.articulation[v]) out.push_back(v);
  }
  return out;
}

/// Adds virtual edges inside faces until no cut vertex remains.
///
/// Repeatedly takes the smallest cut vertex v and the first pair of rotation-
/// consecutive darts (v,a), (v,b) lying in different blocks, and embeds a virtual
/// edge (a,b) in the face corner between them. Original edge ids are preserved;
/// virtual edges are appended.
inline EmbeddedPlanarGraph biconnect(const EmbeddedPlanarGraph& g) {
  std::vector<Dart> darts(g.darts().begin(), g.darts().end());
  std::vector<std::vector<DartId>> rot = g.rotations();
  bool changed = false;
  for (;;) {
    const auto info = detail::compute_blocks(g.n(), darts, rot);
    VertexId cut = kNone;
    for (VertexId v = 0; v < g.n(); ++v) {
      if (info.articulation[v]) {
        cut = v;
        break;
      }
    }
    if (cut == kNone) break;
    const auto& around = rot[cut];
    const std::size_t deg = around.size();
    std::size_t i = 0;
    for (; i < deg; ++i) {
      if (info.block_of_edge[edge_of(around[i])] != info.block_of_edge[edge_of(around[(i + 1) % deg])]) break;
    }
    if (i == deg) throw Error(Errc::InvariantViolation, "cut vertex without a block change in its rotation");
    const DartId d1 = around[i];
    const DartId d2 = around[(i + 1) % deg];
    const VertexId a = darts[d1].head;
    const VertexId b = darts[d2].head;
    std::int32_t copy = 0;
    for (DartId d : rot[a]) {
      if (darts[d].head == b) copy = std::max(copy, darts[d].copy + 1);
    }
    const auto e = static_cast<EdgeId>(darts.size() / 2);
    const VertexId lo = std::min(a, b);
    const VertexId hi = std::max(a, b);
    darts.push_back({lo, hi, copy, true});
    darts.push_back({hi, lo, copy, true});
    const DartId ab = (a == lo) ? 2 * e : 2 * e + 1;
    const DartId ba = rev(ab);
    // At a: immediately before (a,v). At b: immediately after (b,v).
    auto& rot_a = rot[a];
    rot_a.insert(std::find(rot_a.begin(), rot_a.end(), rev(d1)), ab);
    auto& rot_b = rot[b];
    rot_b.insert(std::find(rot_b.begin(), rot_b.end(), rev(d2)) + 1, ba);
    changed = true;
  }
  if (!changed) return g;
  return EmbeddedPlanarGraph(g.n(), std::move(darts), std::move(rot),
                             std::vector<Weight>(g.weights().begin(), g.weights().end()), g.outer_hint());
}

inline std::int32_t virtual_edge_count(const EmbeddedPlanarGraph& g) {
  std::int32_t count = 0;
  for (EdgeId e = 0; e < g.m(); ++e) count += g.is_virtual_edge(e) ? 1 : 0;
  return count;
}

}  // namespace psep
