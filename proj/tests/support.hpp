#pragma once

// Independent brute-force helpers shared by the tests.

#include <set>
#include <vector>

#include "psep/planar.hpp"

namespace psep::brute {

/// Components of g after deleting `removed` (real and virtual edges alike).
inline std::int32_t components_without(const EmbeddedPlanarGraph& g, const std::vector<char>& removed) {
  std::vector<char> seen(g.n(), 0);
  std::int32_t count = 0;
  for (VertexId s = 0; s < g.n(); ++s) {
    if (seen[s] || removed[s]) continue;
    ++count;
    std::vector<VertexId> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      const VertexId v = stack.back();
      stack.pop_back();
      for (DartId d : g.rotation(v)) {
        const VertexId w = g.head(d);
        if (!seen[w] && !removed[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
      }
    }
  }
  return count;
}

/// Vertices whose deletion disconnects the graph, by trying each one.
inline std::vector<VertexId> brute_articulation_points(const EmbeddedPlanarGraph& g) {
  std::vector<VertexId> out;
  std::vector<char> removed(g.n(), 0);
  const auto base = components_without(g, removed);
  for (VertexId v = 0; v < g.n(); ++v) {
    removed[v] = 1;
    if (components_without(g, removed) > base) out.push_back(v);
    removed[v] = 0;
  }
  return out;
}

/// Face count by walking darts without the library's face table.
inline std::int32_t brute_face_count(const EmbeddedPlanarGraph& g) {
  std::vector<char> used(g.num_darts(), 0);
  std::int32_t faces = 0;
  for (DartId s = 0; s < g.num_darts(); ++s) {
    if (used[s]) continue;
    ++faces;
    DartId d = s;
    while (!used[d]) {
      used[d] = 1;
      const auto rot = g.rotation(g.head(d));
      const auto it = std::find(rot.begin(), rot.end(), rev(d));
      d = rot[(static_cast<std::size_t>(it - rot.begin()) + 1) % rot.size()];
    }
  }
  return faces;
}

/// Random rooted tree on n nodes: parent[i] < i, so node 0 is the root.
template <class Rng>
std::vector<std::int32_t> random_parent_array(std::int32_t n, Rng& rng) {
  std::vector<std::int32_t> parent(n, kNone);
  for (std::int32_t i = 1; i < n; ++i) parent[i] = static_cast<std::int32_t>(rng() % static_cast<std::uint64_t>(i));
  return parent;
}

inline std::vector<std::int64_t> brute_subtree_sums(const std::vector<std::int32_t>& parent,
                                                    const std::vector<std::int64_t>& values) {
  std::vector<std::int64_t> out(parent.size(), 0);
  for (std::size_t v = 0; v < parent.size(); ++v) {
    for (std::int32_t x = static_cast<std::int32_t>(v); x != kNone; x = parent[x]) out[x] += values[v];
  }
  return out;
}

}  // namespace psep::brute
