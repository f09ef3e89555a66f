#pragma once

// Brute-force checks that avoid the cotree machinery: cycles come from a plain
// search in T, sides of a cycle from a face flood fill blocked at cycle edges.

#include <deque>
#include <vector>

#include "psep/separator.hpp"

namespace psep {

struct CycleSides {
  std::vector<char> inside_face;     // per face: not reachable from the start face
  std::vector<char> on_cycle;        // per vertex
  std::vector<char> strict_inside;   // per vertex
  std::vector<char> strict_outside;  // per vertex
};

/// Splits faces by flood fill from `outside_face` without crossing `cycle_edges`.
inline CycleSides cycle_sides(const EmbeddedPlanarGraph& g, const std::vector<EdgeId>& cycle_edges,
                              FaceId outside_face) {
  CycleSides s;
  std::vector<char> blocked(g.m(), 0);
  for (EdgeId e : cycle_edges) blocked[e] = 1;
  std::vector<char> reached(g.num_faces(), 0);
  std::deque<FaceId> queue{outside_face};
  reached[outside_face] = 1;
  while (!queue.empty()) {
    const FaceId f = queue.front();
    queue.pop_front();
    for (DartId d : g.face(f).boundary) {
      if (blocked[edge_of(d)]) continue;
      const FaceId h = g.face_of(rev(d));
      if (!reached[h]) {
        reached[h] = 1;
        queue.push_back(h);
      }
    }
  }
  s.inside_face.assign(g.num_faces(), 0);
  for (FaceId f = 0; f < g.num_faces(); ++f) s.inside_face[f] = !reached[f];
  s.on_cycle.assign(g.n(), 0);
  for (EdgeId e : cycle_edges) {
    s.on_cycle[g.tail(2 * e)] = 1;
    s.on_cycle[g.head(2 * e)] = 1;
  }
  s.strict_inside.assign(g.n(), 0);
  s.strict_outside.assign(g.n(), 0);
  for (VertexId v = 0; v < g.n(); ++v) {
    if (s.on_cycle[v] || g.degree(v) == 0) continue;
    // Off the cycle, all faces around v lie on one side.
    (s.inside_face[g.face_of(g.rotation(v)[0])] ? s.strict_inside : s.strict_outside)[v] = 1;
  }
  return s;
}

/// Cycle of T + e found by a plain BFS inside T (no LCA walk); sorted edge ids.
inline std::vector<EdgeId> brute_force_cycle(const EmbeddedPlanarGraph& g, const std::vector<char>& in_tree, EdgeId e) {
  const VertexId src = g.tail(2 * e), dst = g.head(2 * e);
  std::vector<DartId> via(g.n(), kNone);
  std::vector<char> seen(g.n(), 0);
  std::deque<VertexId> queue{src};
  seen[src] = 1;
  while (!queue.empty()) {
    const VertexId v = queue.front();
    queue.pop_front();
    for (DartId d : g.rotation(v)) {
      if (!in_tree[edge_of(d)]) continue;
      const VertexId w = g.head(d);
      if (!seen[w]) {
        seen[w] = 1;
        via[w] = d;
        queue.push_back(w);
      }
    }
  }
  std::vector<EdgeId> edges{e};
  for (VertexId x = dst; x != src; x = g.tail(via[x])) edges.push_back(edge_of(via[x]));
  std::sort(edges.begin(), edges.end());
  return edges;
}

struct FundamentalCycleRow {
  EdgeId edge = kNone;
  std::vector<EdgeId> cycle_edges;
  std::vector<FaceId> interior_faces;  // sorted
  Weight interior_strict = 0;           // w_V(S_in^-)
  Weight exterior_strict = 0;           // w_V(S_out^-)
  Weight cycle_weight = 0;
  Weight interior_face_weight = 0;      // w_F(S_in)
};

/// For every non-tree edge: its cycle and the vertex/face weights on each side.
/// The side containing `outside_face` (default: the infinite face) is exterior.
inline std::vector<FundamentalCycleRow> oracle_all_fundamental_cycles(const EmbeddedPlanarGraph& g,
                                                                      const RootedTree& t,
                                                                      const FaceWeighting& fw,
                                                                      FaceId outside_face = kNone) {
  if (outside_face == kNone) outside_face = g.infinite_face();
  const auto in_tree = t.edge_mask(g.m());
  std::vector<FundamentalCycleRow> rows;
  for (EdgeId e = 0; e < g.m(); ++e) {
    if (in_tree[e]) continue;
    FundamentalCycleRow row;
    row.edge = e;
    row.cycle_edges = brute_force_cycle(g, in_tree, e);
    const auto sides = cycle_sides(g, row.cycle_edges, outside_face);
    for (FaceId f = 0; f < g.num_faces(); ++f) {
      if (!sides.inside_face[f]) continue;
      row.interior_faces.push_back(f);
      row.interior_face_weight += fw.face_weight[f];
    }
    for (VertexId v = 0; v < g.n(); ++v) {
      if (sides.on_cycle[v]) row.cycle_weight += g.weight(v);
      if (sides.strict_inside[v]) row.interior_strict += g.weight(v);
      if (sides.strict_outside[v]) row.exterior_strict += g.weight(v);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace psep
