#pragma once

// Sequential fundamental-cycle separator for vertex-weighted embedded planar graphs.
//
// Vertex weights move to faces, a (1/4,3/4)-balanced or critical node is located in
// the rooted cotree, and the fundamental cycle it defines (closed by a virtual edge
// inside the critical face when needed) yields a 3/4-balanced path separator.

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "psep/tree_cotree.hpp"

namespace psep {

enum class FacePolicy { MinFaceId, MaxFaceId };

struct FaceWeighting {
  std::vector<FaceId> chosen_face;  // per vertex
  std::vector<Weight> face_weight;  // per face
  Weight total = 0;
};

inline FaceWeighting transfer_weights(const EmbeddedPlanarGraph& g, FacePolicy policy = FacePolicy::MinFaceId) {
  FaceWeighting fw;
  fw.chosen_face.assign(g.n(), kNone);
  fw.face_weight.assign(g.num_faces(), 0);
  for (VertexId v = 0; v < g.n(); ++v) {
    FaceId pick = kNone;
    for (DartId d : g.rotation(v)) {
      const FaceId f = g.face_of(d);
      if (pick == kNone || (policy == FacePolicy::MinFaceId ? f < pick : f > pick)) pick = f;
    }
    fw.chosen_face[v] = pick;
    if (pick != kNone) fw.face_weight[pick] += g.weight(v);
  }
  for (Weight w : fw.face_weight) fw.total += w;
  return fw;
}

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;
};

struct ProperVerdict {
  bool proper = false;
  bool degenerate_total = false;
  Weight max_weight = 0;
  Weight total = 0;
};

/// True iff no single weight exceeds alpha times the total. All-zero input is
/// vacuously proper and flagged as a degenerate total.
inline ProperVerdict check_proper(std::span<const Weight> weights, Rational alpha) {
  ProperVerdict out;
  for (Weight w : weights) {
    out.total += w;
    out.max_weight = std::max(out.max_weight, w);
  }
  out.degenerate_total = out.total == 0;
  out.proper = static_cast<__int128>(out.max_weight) * alpha.den <= static_cast<__int128>(out.total) * alpha.num;
  return out;
}

enum class VerdictKind { Balanced, Critical };

struct NodeVerdict {
  VerdictKind kind = VerdictKind::Balanced;
  std::int32_t node = kNone;
  Weight subtree_weight = 0;
  Weight total = 0;
};

inline bool is_balanced_weight(Weight sub, Weight total) { return 4 * sub >= total && 4 * sub <= 3 * total; }

/// Balanced node with the largest id if any; otherwise the deepest node whose
/// subtree exceeds 3/4 of the total (largest id on ties), which is critical.
inline NodeVerdict find_balanced_or_critical(std::span<const std::int32_t> parent,
                                             std::span<const Weight> node_weight) {
  const auto n = static_cast<std::int32_t>(parent.size());
  const auto sums = subtree_sums(parent, node_weight);
  std::vector<std::int32_t> depth(n, -1);
  Weight total = 0;
  for (std::int32_t v = 0; v < n; ++v) {
    if (parent[v] == kNone) total += sums[v];
  }
  if (total == 0) throw Error(Errc::DegenerateTotal, "total weight is zero");
  auto depth_of = [&](auto&& self, std::int32_t v) -> std::int32_t {
    if (depth[v] >= 0) return depth[v];
    return depth[v] = parent[v] == kNone ? 0 : self(self, parent[v]) + 1;
  };
  NodeVerdict verdict;
  verdict.total = total;
  for (std::int32_t v = n - 1; v >= 0; --v) {
    if (is_balanced_weight(sums[v], total)) {
      verdict.kind = VerdictKind::Balanced;
      verdict.node = v;
      verdict.subtree_weight = sums[v];
      return verdict;
    }
  }
  std::int32_t best = kNone;
  for (std::int32_t v = 0; v < n; ++v) {
    if (4 * sums[v] <= 3 * total) continue;
    // Iterative depth fill keeps deep paths off the call stack.
    std::vector<std::int32_t> chain;
    for (std::int32_t x = v; x != kNone && depth[x] < 0; x = parent[x]) chain.push_back(x);
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) depth_of(depth_of, *it);
    if (best == kNone || depth[v] > depth[best] || (depth[v] == depth[best] && v > best)) best = v;
  }
  if (best == kNone) throw Error(Errc::InvariantViolation, "neither balanced nor heavy node exists");
  for (std::int32_t v = 0; v < n; ++v) {
    if (parent[v] == best && 4 * sums[v] >= total) {
      throw Error(Errc::InvariantViolation, "deepest heavy node has a heavy child");
    }
  }
  verdict.kind = VerdictKind::Critical;
  verdict.node = best;
  verdict.subtree_weight = sums[best];
  return verdict;
}

inline NodeVerdict find_balanced_or_critical(const TreeCotreePair& pair, const FaceWeighting& fw) {
  return find_balanced_or_critical(pair.dual_parent, fw.face_weight);
}

enum class SeparatorCase { Balanced, Critical, LeafCritical };

inline const char* to_string(SeparatorCase c) {
  switch (c) {
    case SeparatorCase::Balanced: return "balanced";
    case SeparatorCase::Critical: return "critical";
    case SeparatorCase::LeafCritical: return "leaf-critical";
  }
  return "?";
}

/// Edge closing P into a cycle. Virtual edges embed right after slot_u in the
/// rotation of u and right after slot_v in the rotation of v.
struct ClosingEdge {
  bool is_virtual = false;
  VertexId u = kNone;
  VertexId v = kNone;
  EdgeId edge = kNone;  // edge of the augmented graph, or kNone for a new virtual edge
  DartKey slot_u;
  DartKey slot_v;
};

struct CriticalDetails {
  bool root_face = false;
  std::vector<VertexId> boundary;          // v_1 .. v_k
  std::vector<Weight> triangle_weight;     // f_1 .. f_{k-2}
  std::vector<Weight> triangle_subtree;    // subtree weight of each f_i
  std::int32_t j = kNone;                  // f_j is the last heavy triangle
};

struct SeparatorResult {
  SeparatorCase kind = SeparatorCase::Balanced;
  FaceId face = kNone;
  DartKey face_key;
  VertexId u = kNone;
  VertexId v = kNone;
  std::vector<VertexId> path;  // u .. v in T
  ClosingEdge closing;
  Weight interior_weight = 0;  // face weight on the subtree side
  Weight exterior_weight = 0;
  Weight total_weight = 0;
  std::int32_t virtual_edges_added = 0;
  std::optional<CriticalDetails> critical;

  Rational balance_ratio() const { return {std::max(interior_weight, exterior_weight), total_weight}; }
};

inline std::string serialize(const SeparatorResult& r) {
  std::ostringstream out;
  out << "separator " << to_string(r.kind) << '\n';
  out << "face " << r.face_key.tail << ' ' << r.face_key.head << ' ' << r.face_key.copy << '\n';
  out << "endpoints " << r.u << ' ' << r.v << '\n';
  if (r.closing.is_virtual) {
    out << "closing virtual " << r.closing.u << ' ' << r.closing.v << " after " << r.closing.slot_u.tail << ' '
        << r.closing.slot_u.head << ' ' << r.closing.slot_u.copy << " after " << r.closing.slot_v.tail << ' '
        << r.closing.slot_v.head << ' ' << r.closing.slot_v.copy << '\n';
  } else {
    out << "closing real " << r.closing.u << ' ' << r.closing.v << '\n';
  }
  out << "path " << r.path.size();
  for (VertexId x : r.path) out << ' ' << x;
  out << '\n';
  out << "weights interior " << r.interior_weight << " exterior " << r.exterior_weight << " total " << r.total_weight
      << '\n';
  return out.str();
}

namespace detail {

inline ClosingEdge closing_for_edge(const EmbeddedPlanarGraph& g, EdgeId e, VertexId u, VertexId v) {
  ClosingEdge c;
  c.u = u;
  c.v = v;
  c.edge = e;
  c.is_virtual = g.is_virtual_edge(e);
  if (c.is_virtual) {
    const DartId uv = g.tail(2 * e) == u ? 2 * e : 2 * e + 1;
    c.slot_u = g.key(g.prev_in_rotation(uv));
    c.slot_v = g.key(g.prev_in_rotation(rev(uv)));
  }
  return c;
}

// Boundary darts of f starting at its parent dart (or canonical dart at the root).
inline std::vector<DartId> boundary_from_parent(const TreeCotreePair& pair, FaceId f) {
  const auto& g = *pair.graph;
  std::vector<DartId> darts = g.face(f).boundary;
  if (pair.dual_parent_edge[f] != kNone) {
    auto it = std::find_if(darts.begin(), darts.end(),
                           [&](DartId d) { return edge_of(d) == pair.dual_parent_edge[f]; });
    std::rotate(darts.begin(), it, darts.end());
  }
  return darts;
}

}  // namespace detail

inline SeparatorResult separator_from_balanced(const TreeCotreePair& pair, const FaceWeighting& fw,
                                               const NodeVerdict& verdict) {
  if (verdict.kind != VerdictKind::Balanced) throw Error(Errc::BadParams, "verdict is not balanced");
  const auto& g = *pair.graph;
  const EdgeId e = pair.dual_parent_edge[verdict.node];
  if (e == kNone) throw Error(Errc::InvariantViolation, "balanced node is the dual root");
  SeparatorResult r;
  r.kind = SeparatorCase::Balanced;
  r.face = verdict.node;
  r.face_key = g.face(verdict.node).key;
  r.u = std::min(g.tail(2 * e), g.head(2 * e));
  r.v = std::max(g.tail(2 * e), g.head(2 * e));
  r.path = tree_path(pair.primal, r.u, r.v);
  r.closing = detail::closing_for_edge(g, e, r.u, r.v);
  r.total_weight = fw.total;
  r.interior_weight = verdict.subtree_weight;
  r.exterior_weight = fw.total - verdict.subtree_weight;
  return r;
}

struct FanChain {
  std::vector<Weight> triangle_weight;   // 1-based, f_1 .. f_{k-2}
  std::vector<Weight> triangle_subtree;  // 1-based
  std::int32_t j = kNone;                // last triangle heavier than 3/4
};

/// Fan triangulation of a k-face from v_k. corner[i] is the weight v_i gave the
/// face (1-based, i = 1..k); child[t] the subtree hanging off boundary edge
/// (v_t, v_{t+1}) for t = 1..k-1. Weight moves v_1 -> f_1, v_i -> f_{i-1},
/// v_k -> f_{k-2}; edge t hangs off f_min(t, k-2).
inline FanChain fan_chain(const std::vector<Weight>& corner, const std::vector<Weight>& child, Weight total) {
  const auto k = static_cast<std::int32_t>(corner.size()) - 1;
  if (k < 3 || static_cast<std::int32_t>(child.size()) < k) throw Error(Errc::BadParams, "fan needs k >= 3");
  const std::int32_t tri = k - 2;
  FanChain out;
  out.triangle_weight.assign(tri + 1, 0);
  out.triangle_weight[1] += corner[1];
  for (std::int32_t i = 2; i < k; ++i) out.triangle_weight[i - 1] += corner[i];
  out.triangle_weight[tri] += corner[k];

  std::vector<std::int32_t> parent(tri + 1 + k, kNone);
  std::vector<Weight> node_weight(tri + 1 + k, 0);
  for (std::int32_t i = 1; i <= tri; ++i) {
    parent[i] = i == 1 ? kNone : i - 1;
    node_weight[i] = out.triangle_weight[i];
  }
  for (std::int32_t t = 1; t < k; ++t) {
    parent[tri + t] = std::min(t, tri);
    node_weight[tri + t] = child[t];
  }
  const auto sums = subtree_sums(parent, node_weight);
  out.triangle_subtree.assign(sums.begin(), sums.begin() + tri + 1);
  out.triangle_subtree[0] = 0;

  if (4 * sums[1] <= 3 * total) throw Error(Errc::InvariantViolation, "critical face is not heavy");
  std::int32_t j = 1;
  while (j + 1 <= tri && 4 * sums[j + 1] > 3 * total) ++j;
  if (j + 1 > tri) throw Error(Errc::InvariantViolation, "no balanced triangle inside the critical face");
  out.j = j;
  return out;
}

/// Critical face f: split f by a fan of virtual edges from v_k into triangles
/// f_1..f_{k-2}, push weight that chose f onto the triangles, and close the cycle
/// with (v_{j+1}, v_k), where f_j is the last triangle whose subtree is still
/// heavier than 3/4 of the total.
inline SeparatorResult separator_from_critical(const TreeCotreePair& pair, const FaceWeighting& fw,
                                               const NodeVerdict& verdict) {
  if (verdict.kind != VerdictKind::Critical) throw Error(Errc::BadParams, "verdict is not critical");
  const auto& g = *pair.graph;
  const FaceId f = verdict.node;
  const Weight total = fw.total;
  const auto darts = detail::boundary_from_parent(pair, f);
  const auto k = static_cast<std::int32_t>(darts.size());

  // darts[0] = (v_k, v_1); darts[t] = (v_t, v_{t+1}).
  std::vector<VertexId> vs(k + 1, kNone);
  for (std::int32_t t = 1; t < k; ++t) vs[t] = g.tail(darts[t]);
  vs[k] = g.tail(darts[0]);
  {
    std::vector<VertexId> sorted(vs.begin() + 1, vs.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end() || k < 3) {
      throw Error(Errc::NotBiconnected, "critical face boundary is not a simple cycle");
    }
  }

  const auto sums = subtree_sums(pair.dual_parent, fw.face_weight);
  // child_weight[t]: subtree weight hanging off boundary edge t (t = 1..k-1).
  std::vector<Weight> child_weight(k, 0);
  bool has_children = false;
  for (std::int32_t t = 1; t < k; ++t) {
    const EdgeId e = edge_of(darts[t]);
    if (pair.in_tree[e]) continue;
    const FaceId other = g.face_of(rev(darts[t]));
    if (pair.dual_parent[other] == f && pair.dual_parent_edge[other] == e) {
      child_weight[t] = sums[other];
      has_children = true;
    }
  }

  SeparatorResult r;
  r.face = f;
  r.face_key = g.face(f).key;
  r.total_weight = total;

  const bool root_face = pair.dual_parent_edge[f] == kNone;
  if (!has_children && !root_face) {
    // The face itself carries > 3/4 of the weight; its boundary minus the parent edge separates.
    const EdgeId e = edge_of(darts[0]);
    r.kind = SeparatorCase::LeafCritical;
    r.u = std::min(vs[1], vs[k]);
    r.v = std::max(vs[1], vs[k]);
    r.path = tree_path(pair.primal, r.u, r.v);
    r.closing = detail::closing_for_edge(g, e, r.u, r.v);
    r.interior_weight = sums[f];
    r.exterior_weight = total - sums[f];
    return r;
  }

  CriticalDetails cd;
  cd.root_face = root_face;
  cd.boundary.assign(vs.begin() + 1, vs.end());
  std::vector<Weight> corner(k + 1, 0);
  for (std::int32_t i = 1; i <= k; ++i) corner[i] = fw.chosen_face[vs[i]] == f ? g.weight(vs[i]) : Weight{0};
  const auto chain = fan_chain(corner, child_weight, total);
  cd.triangle_weight = chain.triangle_weight;
  cd.triangle_subtree = chain.triangle_subtree;
  cd.j = chain.j;
  const std::int32_t j = chain.j;
  const auto& tri_sums = chain.triangle_subtree;

  r.kind = SeparatorCase::Critical;
  r.u = vs[j + 1];
  r.v = vs[k];
  r.path = tree_path(pair.primal, r.u, r.v);
  r.closing.is_virtual = true;
  r.closing.u = r.u;
  r.closing.v = r.v;
  r.closing.slot_u = g.key(g.prev_in_rotation(darts[j + 1]));
  r.closing.slot_v = g.key(g.prev_in_rotation(darts[0]));
  r.interior_weight = tri_sums[j + 1];
  r.exterior_weight = total - tri_sums[j + 1];
  r.critical = std::move(cd);
  return r;
}

struct SeparatorOptions {
  FacePolicy policy = FacePolicy::MinFaceId;
};

/// Runs the separator on an already bi-connected graph with spanning tree t.
inline SeparatorResult separator_on_biconnected(const EmbeddedPlanarGraph& g, const RootedTree& t) {
  const auto pair = cotree(g, t);
  const auto fw = transfer_weights(g);
  const auto verdict = find_balanced_or_critical(pair, fw);
  return verdict.kind == VerdictKind::Balanced ? separator_from_balanced(pair, fw, verdict)
                                               : separator_from_critical(pair, fw, verdict);
}

inline void require_proper_weights(std::span<const Weight> weights) {
  const auto proper = check_proper(weights, {1, 12});
  if (proper.degenerate_total) throw Error(Errc::DegenerateTotal, "total vertex weight is zero");
  if (!proper.proper) {
    throw Error(Errc::NotProper, "max weight " + std::to_string(proper.max_weight) + " exceeds 1/12 of " +
                                     std::to_string(proper.total));
  }
}

/// Bi-connects g with virtual edges, then separates. T must be a spanning tree of g.
inline SeparatorResult compute_separator(const EmbeddedPlanarGraph& g, const RootedTree& t) {
  require_proper_weights(g.weights());
  const auto augmented = biconnect(g);
  auto r = separator_on_biconnected(augmented, t);
  r.virtual_edges_added = virtual_edge_count(augmented) - virtual_edge_count(g);
  return r;
}

struct BalanceReport {
  std::vector<Weight> component_weights;  // descending
  Weight max_component = 0;
  Weight total = 0;
  bool pass = false;

  Rational ratio() const { return {max_component, total}; }
};

/// Components of g minus the separator vertices; pass iff each weighs at most 3/4 of the total.
inline BalanceReport verify_separator(const EmbeddedPlanarGraph& g, std::span<const Weight> weights,
                                      std::span<const VertexId> separator) {
  BalanceReport report;
  std::vector<char> removed(g.n(), 0);
  for (VertexId v : separator) removed[v] = 1;
  for (Weight w : weights) report.total += w;
  std::vector<char> seen(g.n(), 0);
  std::vector<VertexId> stack;
  for (VertexId s = 0; s < g.n(); ++s) {
    if (removed[s] || seen[s]) continue;
    Weight sum = 0;
    seen[s] = 1;
    stack.push_back(s);
    while (!stack.empty()) {
      const VertexId v = stack.back();
      stack.pop_back();
      sum += weights[v];
      for (DartId d : g.rotation(v)) {
        const VertexId w = g.head(d);
        if (!removed[w] && !seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
      }
    }
    report.component_weights.push_back(sum);
  }
  std::sort(report.component_weights.rbegin(), report.component_weights.rend());
  report.max_component = report.component_weights.empty() ? 0 : report.component_weights.front();
  report.pass = 4 * report.max_component <= 3 * report.total;
  return report;
}

}  // namespace psep
