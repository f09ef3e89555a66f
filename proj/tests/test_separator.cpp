#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "psep/generators.hpp"
#include "psep/graph_io.hpp"
#include "psep/oracles.hpp"
#include "support.hpp"

using namespace psep;

namespace {

template <class F>
void expect_code(Errc code, F&& f) {
  try {
    f();
    ADD_FAILURE() << "no error thrown";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

EmbeddedPlanarGraph heavy_fan() { return parse_graph(slurp(std::string(PSEP_DATA_DIR) + "/heavy_fan.graph")); }

std::vector<EmbeddedPlanarGraph> suite() {
  std::vector<EmbeddedPlanarGraph> out{gen::grid(4, 4), gen::grid(9, 9), gen::grid(3, 17), gen::wheel(30),
                                       gen::cylinder(4, 12), gen::cycle_chords(12, 0, 0), heavy_fan()};
  for (std::uint64_t s = 1; s <= 12; ++s) {
    out.push_back(gen::random_triangulation(30 + 20 * static_cast<std::int32_t>(s), s));
    out.push_back(gen::cycle_chords(24 + static_cast<std::int32_t>(s), static_cast<std::int32_t>(s % 5), s));
    out.push_back(gen::blocks(60, s));
    out.push_back(gen::two_triangulations(20, s));
    auto g = gen::random_triangulation(80, s + 100);
    out.push_back(with_weights(g, gen::random_proper_weights(g.n(), s)));
  }
  return out;
}

// Adds the virtual closing edge at its recorded slots and rebuilds the embedding.
EmbeddedPlanarGraph insert_closing(const EmbeddedPlanarGraph& g, const ClosingEdge& c) {
  std::vector<Dart> darts(g.darts().begin(), g.darts().end());
  std::int32_t copy = 0;
  for (const auto& d : darts) {
    if (d.tail == c.u && d.head == c.v) copy = std::max(copy, d.copy + 1);
  }
  const auto uv = static_cast<DartId>(darts.size());
  darts.push_back({c.u, c.v, copy, true});
  darts.push_back({c.v, c.u, copy, true});
  auto rot = g.rotations();
  auto place = [&](VertexId x, DartKey slot, DartId d) {
    const DartId after = *g.find_dart(slot.tail, slot.head, slot.copy);
    EXPECT_EQ(slot.tail, x);
    rot[x].insert(rot[x].begin() + g.position(after) + 1, d);
  };
  place(c.u, c.slot_u, uv);
  place(c.v, c.slot_v, uv + 1);
  GraphOptions loose;
  loose.require_planar = false;
  return EmbeddedPlanarGraph(g.n(), darts, rot, std::vector<Weight>(g.weights().begin(), g.weights().end()),
                             std::nullopt, loose);
}

bool is_tree_path(const RootedTree& t, const std::vector<VertexId>& p) {
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    if (t.parent[p[i]] != p[i + 1] && t.parent[p[i + 1]] != p[i]) return false;
  }
  return std::set<VertexId>(p.begin(), p.end()).size() == p.size();
}

}  // namespace

TEST(TransferWeights, Conservation) {
  for (const auto& g : suite()) {
    for (auto policy : {FacePolicy::MinFaceId, FacePolicy::MaxFaceId}) {
      const auto fw = transfer_weights(g, policy);
      EXPECT_EQ(fw.total, g.total_weight());
    }
  }
}

TEST(TransferWeights, TriangleMinIdTakesAll) {
  const auto fw = transfer_weights(build_embedding(3, {{1, 2}, {2, 0}, {0, 1}}));
  EXPECT_EQ(fw.face_weight, (std::vector<Weight>{3, 0}));
}

TEST(CheckProper, Examples) {
  EXPECT_TRUE(check_proper(std::vector<Weight>(16, 1), {1, 12}).proper);
  std::vector<Weight> w(12, 1);
  w[0] = 13;
  EXPECT_FALSE(check_proper(w, {1, 12}).proper);
  const auto zero = check_proper(std::vector<Weight>(5, 0), {1, 12});
  EXPECT_TRUE(zero.proper);
  EXPECT_TRUE(zero.degenerate_total);
}

TEST(FindBalancedOrCritical, StarIsCriticalAtRoot) {
  std::vector<std::int32_t> parent(9, 0);
  parent[0] = kNone;
  std::vector<Weight> w(9, 1);
  w[0] = 0;
  const auto v = find_balanced_or_critical(parent, w);
  EXPECT_EQ(v.kind, VerdictKind::Critical);
  EXPECT_EQ(v.node, 0);
}

TEST(FindBalancedOrCritical, PathPicksLargestBalancedId) {
  const std::vector<std::int32_t> parent{kNone, 0, 1, 2};
  const std::vector<Weight> w{1, 1, 1, 1};
  EXPECT_TRUE(is_balanced_weight(2, 4));
  // Node 3 (subtree 1 = W/4) is balanced too and wins on id.
  const auto v = find_balanced_or_critical(parent, w);
  EXPECT_EQ(v.kind, VerdictKind::Balanced);
  EXPECT_EQ(v.node, 3);
  EXPECT_EQ(v.subtree_weight, 1);
}

TEST(FindBalancedOrCritical, ZeroTotal) {
  const std::vector<std::int32_t> parent{kNone, 0};
  const std::vector<Weight> w{0, 0};
  expect_code(Errc::DegenerateTotal, [&] { find_balanced_or_critical(parent, w); });
}

TEST(FindBalancedOrCritical, MatchesExhaustiveScan) {
  for (const auto& g0 : suite()) {
    const auto g = biconnect(g0);
    const auto pair = cotree(g, bfs_tree(g, 0));
    const auto fw = transfer_weights(g);
    const auto v = find_balanced_or_critical(pair, fw);
    const auto sums = brute::brute_subtree_sums(pair.dual_parent, fw.face_weight);
    const Weight W = fw.total;
    FaceId best_balanced = kNone;
    for (FaceId f = 0; f < g.num_faces(); ++f) {
      if (4 * sums[f] >= W && 4 * sums[f] <= 3 * W) best_balanced = f;
    }
    if (best_balanced != kNone) {
      EXPECT_EQ(v.kind, VerdictKind::Balanced);
      EXPECT_EQ(v.node, best_balanced);
      continue;
    }
    ASSERT_EQ(v.kind, VerdictKind::Critical);
    EXPECT_GT(4 * sums[v.node], 3 * W);
    for (FaceId f = 0; f < g.num_faces(); ++f) {
      if (pair.dual_parent[f] == v.node) {
        EXPECT_LT(4 * sums[f], W);
      }
      if (4 * sums[f] > 3 * W) {
        const bool deeper = pair.dual_depth[f] > pair.dual_depth[v.node];
        const bool tie_larger = pair.dual_depth[f] == pair.dual_depth[v.node] && f > v.node;
        EXPECT_FALSE(deeper || tie_larger);
      }
    }
  }
}

TEST(Separator, BalancedCaseMatchesOracle) {
  std::int32_t balanced = 0;
  for (const auto& g0 : suite()) {
    const auto g = biconnect(g0);
    const auto t = bfs_tree(g, 0);
    const auto r = separator_on_biconnected(g, t);
    if (r.kind != SeparatorCase::Balanced) continue;
    ++balanced;
    const auto pair = cotree(g, t);
    const auto fw = transfer_weights(g);
    ASSERT_NE(r.closing.edge, kNone);
    EXPECT_EQ(r.closing.edge, pair.dual_parent_edge[r.face]);
    const auto cyc = fundamental_cycle(pair, r.closing.edge);
    EXPECT_EQ(std::set<VertexId>(cyc.path.begin(), cyc.path.end()), std::set<VertexId>(r.path.begin(), r.path.end()));
    bool found = false;
    for (const auto& row : oracle_all_fundamental_cycles(g, t, fw, pair.dual_root)) {
      if (row.edge != r.closing.edge) continue;
      found = true;
      EXPECT_EQ(row.interior_face_weight, r.interior_weight);
      EXPECT_GE(4 * row.interior_face_weight, fw.total);
      EXPECT_LE(4 * row.interior_face_weight, 3 * fw.total);
    }
    EXPECT_TRUE(found);
  }
  EXPECT_GT(balanced, 0);
}

TEST(Separator, GridGolden) {
  const auto g = gen::grid(4, 4);
  const auto r = compute_separator(g, bfs_tree(g, 0));
  EXPECT_EQ(serialize(r), slurp(std::string(PSEP_DATA_DIR) + "/grid4.sep"));
  const auto rep = verify_separator(g, g.weights(), r.path);
  EXPECT_TRUE(rep.pass);
  EXPECT_LE(rep.max_component, 12);
}

TEST(Separator, LeafCriticalCycle) {
  const auto g = gen::cycle_chords(12, 0, 0);
  const auto t = bfs_tree(g, 0);
  const auto r = compute_separator(g, t);
  EXPECT_EQ(r.kind, SeparatorCase::LeafCritical);
  EXPECT_EQ(r.path.size(), 12u);
  EXPECT_FALSE(r.closing.is_virtual);
  const auto pair = cotree(g, t);
  const auto rows = oracle_all_fundamental_cycles(g, t, transfer_weights(g), pair.dual_root);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].interior_strict, 0);
  EXPECT_TRUE(verify_separator(g, g.weights(), r.path).pass);
}

TEST(Separator, HeavyFanFace) {
  const auto g = heavy_fan();
  const auto r = compute_separator(g, bfs_tree(g, 0));
  ASSERT_EQ(r.kind, SeparatorCase::Critical);
  ASSERT_TRUE(r.critical);
  // Labels: v1 = 9, v2..v9 = 1..8, v10 = 10.
  EXPECT_EQ(r.critical->boundary, (std::vector<VertexId>{9, 1, 2, 3, 4, 5, 6, 7, 8, 10}));
  EXPECT_EQ(r.critical->j, 4);
  EXPECT_TRUE(r.closing.is_virtual);
  EXPECT_EQ(std::set<VertexId>({r.closing.u, r.closing.v}), std::set<VertexId>({4, 10}));
  EXPECT_TRUE(verify_separator(g, g.weights(), r.path).pass);
}

TEST(Separator, HeavyHubWheel) {
  const auto g = gen::wheel(40);
  const auto r = compute_separator(g, bfs_tree(g, 0));
  EXPECT_TRUE(verify_separator(g, g.weights(), r.path).pass);
}

TEST(Separator, Errors) {
  const auto g = gen::grid(4, 4);
  expect_code(Errc::NotProper, [&] { compute_separator(with_weights(g, gen::adversarial_weights(16)), bfs_tree(g, 0)); });
  expect_code(Errc::DegenerateTotal,
              [&] { compute_separator(with_weights(g, std::vector<Weight>(16, 0)), bfs_tree(g, 0)); });
  const auto star = gen::star(12);
  expect_code(Errc::NotBiconnected, [&] { separator_on_biconnected(star, bfs_tree(star, 0)); });
}

TEST(Separator, SuiteInvariants) {
  std::int32_t critical = 0;
  for (const auto& g : suite()) {
    for (VertexId root : {0, g.n() / 2}) {
      const auto t = bfs_tree(g, root);
      const auto r = compute_separator(g, t);
      EXPECT_EQ(serialize(r), serialize(compute_separator(g, t)));
      EXPECT_TRUE(verify_separator(g, g.weights(), r.path).pass);
      EXPECT_LE(static_cast<std::int32_t>(r.path.size()), 2 * t.height() + 1);
      EXPECT_TRUE(is_tree_path(t, r.path));
      EXPECT_EQ(r.path.front(), r.u);
      EXPECT_EQ(r.path.back(), r.v);
      EXPECT_EQ(r.interior_weight + r.exterior_weight, r.total_weight);
      if (r.kind != SeparatorCase::Critical) continue;
      ++critical;
      const auto& cd = *r.critical;
      const Weight W = r.total_weight;
      for (std::size_t i = 1; i < cd.triangle_weight.size(); ++i) EXPECT_LE(4 * cd.triangle_weight[i], W);
      EXPECT_GT(4 * cd.triangle_subtree[cd.j + 1], W);
      EXPECT_LE(4 * cd.triangle_subtree[cd.j + 1], 3 * W);
      const auto aug = biconnect(g);
      EXPECT_EQ(validate_embedding(insert_closing(aug, r.closing)).euler_residual, 0);
    }
  }
  EXPECT_GT(critical, 0);
}

TEST(VerifySeparator, Extremes) {
  const auto g = gen::grid(4, 4);
  std::vector<VertexId> all(16);
  std::iota(all.begin(), all.end(), 0);
  const auto full = verify_separator(g, g.weights(), all);
  EXPECT_TRUE(full.pass);
  EXPECT_TRUE(full.component_weights.empty());
  const auto none = verify_separator(g, g.weights(), {});
  EXPECT_FALSE(none.pass);
  EXPECT_EQ(none.max_component, 16);
}

TEST(FanChain, InvariantsOnSyntheticFaces) {
  std::mt19937_64 rng(5);
  for (std::int32_t trial = 0; trial < 2000; ++trial) {
    const std::int32_t k = 3 + static_cast<std::int32_t>(rng() % 20);
    const Weight W = 1200;
    std::vector<Weight> corner(k + 1, 0), child(k, 0);
    for (std::int32_t i = 1; i <= k; ++i) corner[i] = static_cast<Weight>(rng() % (W / 12 + 1));
    for (std::int32_t t = 1; t < k; ++t) child[t] = static_cast<Weight>(rng() % (W / 4));
    Weight face = 0;
    for (auto x : corner) face += x;
    for (auto x : child) face += x;
    if (4 * face <= 3 * W || face > W) continue;
    const auto chain = fan_chain(corner, child, W);
    for (std::size_t i = 1; i < chain.triangle_weight.size(); ++i) EXPECT_LE(4 * chain.triangle_weight[i], W);
    EXPECT_GT(4 * chain.triangle_subtree[chain.j + 1], W);
    EXPECT_LE(4 * chain.triangle_subtree[chain.j + 1], 3 * W);
  }
}
