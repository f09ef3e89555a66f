#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "psep/dist_separator.hpp"
#include "psep/generators.hpp"
#include "psep/graph_io.hpp"

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

EmbeddedPlanarGraph heavy_fan() {
  std::ifstream in(std::string(PSEP_DATA_DIR) + "/heavy_fan.graph");
  std::ostringstream os;
  os << in.rdbuf();
  return parse_graph(os.str());
}

DistEngine engine_for(const EmbeddedPlanarGraph& g, VertexId root, DistConfig cfg = {}) {
  return DistEngine(g, Partition::whole(g.n()), std::vector<VertexId>(g.n(), root), cfg);
}

std::vector<EmbeddedPlanarGraph> suite() {
  std::vector<EmbeddedPlanarGraph> out{gen::grid(4, 4), gen::grid(8, 8), gen::grid(5, 13), gen::wheel(25),
                                       gen::cylinder(3, 10), gen::cycle_chords(12, 0, 0), heavy_fan()};
  for (std::uint64_t s = 1; s <= 8; ++s) {
    out.push_back(gen::random_triangulation(40 + 25 * static_cast<std::int32_t>(s), s));
    out.push_back(gen::cycle_chords(20 + static_cast<std::int32_t>(s), static_cast<std::int32_t>(s % 4), s));
    out.push_back(gen::blocks(50, s));
    out.push_back(gen::two_triangulations(15, s));
    auto g = gen::random_triangulation(70, s + 50);
    out.push_back(with_weights(g, gen::random_proper_weights(g.n(), s)));
  }
  return out;
}

std::set<EdgeId> path_edges(const EmbeddedPlanarGraph& g, const std::vector<VertexId>& p) {
  std::set<EdgeId> out;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    for (DartId d : g.rotation(p[i])) {
      if (g.head(d) == p[i + 1] && !g.dart(d).is_virtual) out.insert(edge_of(d));
    }
  }
  return out;
}

}  // namespace

TEST(DistBfs, GridMatchesSequentialParents) {
  for (const auto& g : {gen::grid(4, 4), biconnect(gen::random_triangulation(200, 4))}) {
    auto eng = engine_for(g, 0);
    eng.bfs();
    const auto t = bfs_tree(g, 0);
    for (VertexId v = 0; v < g.n(); ++v) {
      const auto& s = eng.states()[v];
      EXPECT_EQ(s.depth, t.depth[v]);
      if (v == 0) {
        EXPECT_EQ(s.parent, -1);
      } else {
        EXPECT_EQ(s.k.darts[s.parent].head, t.parent[v]);
      }
    }
    EXPECT_EQ(eng.diameter(), t.height());
  }
}

TEST(DistBfs, PathRounds) {
  const auto g = gen::path(20);
  auto eng = engine_for(g, 0);
  eng.bfs();
  EXPECT_LE(eng.trace().rounds_executed, 19 + 2);
  EXPECT_GE(eng.trace().rounds_executed, 19);
}

TEST(DistBfs, ConflictingRoot) {
  const auto g = gen::grid(4, 4);
  std::vector<VertexId> roots(16, 0);
  roots[15] = 15;
  DistEngine eng(g, Partition::whole(16), roots, {});
  expect_code(Errc::ConflictingRoot, [&] { eng.bfs(); });
}

TEST(DistFaces, IdsAndDualEndpointsMatchSequential) {
  for (const auto& g0 : suite()) {
    const auto g = biconnect(g0);
    auto eng = engine_for(g, 0);
    eng.bfs();
    eng.learn_faces();
    eng.learn_cotree();
    const auto t = bfs_tree(g, 0);
    const auto mask = t.edge_mask(g.m());
    for (VertexId v = 0; v < g.n(); ++v) {
      const auto& s = eng.states()[v];
      for (std::int32_t i = 0; i < s.deg(); ++i) {
        const DartId d = s.id_of(i);
        EXPECT_EQ(s.k.codec.decode(s.d[i].face), g.face(g.face_of(d)).key);
        EXPECT_EQ(s.k.codec.decode(s.d[i].opp), g.face(g.face_of(rev(d))).key);
        EXPECT_EQ(s.d[i].tree, mask[edge_of(d)] != 0);
      }
    }
  }
}

TEST(DistFaces, TriangleVerticesLearnTwoFaces) {
  const auto g = build_embedding(3, {{1, 2}, {2, 0}, {0, 1}});
  auto eng = engine_for(g, 0);
  eng.bfs();
  eng.learn_faces();
  for (const auto& s : eng.states()) {
    std::set<std::uint64_t> faces;
    for (const auto& x : s.d) faces.insert(x.face);
    EXPECT_EQ(faces.size(), 2u);
  }
}

TEST(DistSubtrees, FaceWeightsAndSubtreeTableMatch) {
  for (const auto& g0 : suite()) {
    const auto g = biconnect(g0);
    auto eng = engine_for(g, 0);
    eng.bfs();
    eng.learn_faces();
    eng.learn_cotree();
    eng.check_weights();
    eng.face_weights();
    eng.elect_root();
    eng.dual_subtree_sums();
    const auto pair = cotree(g, bfs_tree(g, 0));
    const auto fw = transfer_weights(g);
    const auto sums = subtree_sums(pair.dual_parent, fw.face_weight);
    Weight total = 0;
    std::set<std::uint64_t> counted;
    for (VertexId v = 0; v < g.n(); ++v) {
      const auto& s = eng.states()[v];
      EXPECT_EQ(s.k.codec.decode(s.root_face), g.face(pair.dual_root).key);
      for (std::int32_t i = 0; i < s.deg(); ++i) {
        const FaceId f = g.face_of(s.id_of(i));
        EXPECT_EQ(s.d[i].face_weight, fw.face_weight[f]);
        EXPECT_EQ(s.d[i].face_depth, pair.dual_depth[f]);
        EXPECT_TRUE(s.d[i].subtree_known);
        EXPECT_EQ(s.d[i].subtree, sums[f]);
        const bool is_parent_dart = pair.dual_parent_edge[f] == edge_of(s.id_of(i));
        EXPECT_EQ(s.d[i].parent_dart, is_parent_dart);
        if (counted.insert(s.d[i].face).second) total += s.d[i].face_weight;
      }
    }
    EXPECT_EQ(total, g.total_weight());
  }
}

TEST(DistSeparator, MatchesSequentialOnSuite) {
  for (const auto& g : suite()) {
    for (auto backend : {PaBackend::Honest, PaBackend::Charged}) {
      DistConfig cfg;
      cfg.backend = backend;
      const auto out = dist_compute_separator(g, 0, cfg);
      const auto seq = compute_separator(g, bfs_tree(g, 0));
      ASSERT_EQ(serialize(out.result()), serialize(seq));
      EXPECT_LE(out.trace.max_bits_per_edge_per_round, default_bit_budget(g.n()));
      // Output contract: exactly the path vertices flag path darts, path darts are P's edges.
      const auto aug = biconnect(g);
      const auto want = path_edges(aug, seq.path);
      std::set<EdgeId> got;
      std::set<VertexId> flagged;
      for (VertexId v = 0; v < g.n(); ++v) {
        for (DartId d : out.vertex[v].path_darts) {
          got.insert(edge_of(d));
          flagged.insert(v);
        }
      }
      EXPECT_EQ(got, want);
      if (seq.path.size() > 1) {
        EXPECT_EQ(flagged, std::set<VertexId>(seq.path.begin(), seq.path.end()));
      }
      EXPECT_TRUE(out.vertex[seq.u].is_u);
      EXPECT_TRUE(out.vertex[seq.v].is_v);
      if (seq.closing.is_virtual) {
        EXPECT_EQ(out.vertex[seq.u].other, seq.v);
        EXPECT_EQ(out.vertex[seq.v].other, seq.u);
        EXPECT_EQ(out.vertex[seq.u].slot, seq.closing.slot_u);
        EXPECT_EQ(out.vertex[seq.v].slot, seq.closing.slot_v);
      }
    }
  }
}

TEST(DistSeparator, HeavyFanFace) {
  const auto g = heavy_fan();
  const auto out = dist_compute_separator(g, 0);
  const auto& r = out.result();
  EXPECT_EQ(r.kind, SeparatorCase::Critical);
  EXPECT_TRUE(r.closing.is_virtual);
  EXPECT_EQ(std::set<VertexId>({r.closing.u, r.closing.v}), std::set<VertexId>({4, 10}));
  EXPECT_GE(out.parts.front().probes, 1);
  EXPECT_LE(out.parts.front().probes, ceil_log2(10) + 1);
  const auto records = format_records(g, out.vertex);
  EXPECT_NE(records.find("close 4 10 after"), std::string::npos);
  EXPECT_NE(records.find("close 10 4 after"), std::string::npos);
}

TEST(DistSeparator, Errors) {
  const auto g = gen::grid(4, 4);
  expect_code(Errc::NotProper, [&] { dist_compute_separator(with_weights(g, gen::adversarial_weights(16)), 0); });
  expect_code(Errc::DegenerateTotal, [&] { dist_compute_separator(with_weights(g, std::vector<Weight>(16, 0)), 0); });
  DistConfig narrow;
  narrow.sim.bit_budget = 20;
  expect_code(Errc::OperatorOverflow,
              [&] { dist_compute_separator(with_weights(g, std::vector<Weight>(16, Weight{1} << 14)), 0, narrow); });
  expect_code(Errc::UnknownRoot, [&] { dist_compute_separator(g, 99); });
}

TEST(DistSeparator, DeterministicTraces) {
  const auto g = gen::random_triangulation(150, 8);
  const auto a = dist_compute_separator(g, 0);
  DistConfig shuffled;
  shuffled.sim.order = IterationOrder::Shuffled;
  shuffled.sim.order_seed = 77;
  const auto b = dist_compute_separator(g, 0, shuffled);
  EXPECT_EQ(serialize(a.result()), serialize(b.result()));
  EXPECT_EQ(format_records(g, a.vertex), format_records(g, b.vertex));
  ASSERT_EQ(a.trace.phases.size(), b.trace.phases.size());
  for (std::size_t i = 0; i < a.trace.phases.size(); ++i) {
    EXPECT_EQ(a.trace.phases[i].honest_rounds, b.trace.phases[i].honest_rounds);
    EXPECT_EQ(a.trace.phases[i].messages, b.trace.phases[i].messages);
  }
}

TEST(DistMulti, FourPartsOf32Grid) {
  const auto pg = gen::two_level_parts(32, 32, 2, 2);
  const Partition p{pg.part_of};
  const auto out = dist_multi(pg.graph, p);
  const auto parts = split_parts(pg.graph, p);
  ASSERT_EQ(out.parts.size(), 4u);
  std::int64_t max_standalone = 0;
  for (std::size_t q = 0; q < 4; ++q) {
    const auto& part = parts[q];
    const auto standalone = dist_compute_separator(part.graph, 0);
    max_standalone = std::max(max_standalone, standalone.trace.rounds_executed);
    // Back to local ids for verification.
    std::map<VertexId, VertexId> local;
    for (VertexId i = 0; i < part.graph.n(); ++i) local[part.vertices[i]] = i;
    std::vector<VertexId> path;
    for (VertexId x : out.parts[q].result.path) path.push_back(local.at(x));
    EXPECT_TRUE(verify_separator(part.graph, part.graph.weights(), path).pass);
    EXPECT_EQ(path, standalone.result().path);
  }
  EXPECT_LE(out.trace.rounds_executed, 2 * max_standalone);
}

TEST(DistMulti, TwoDisjointGridsMatchStandalone) {
  const auto a = gen::grid(6, 6);
  const auto b = gen::grid(5, 9);
  const auto g = union_parts(a.n() + b.n(), {{[&] {
                                                std::vector<VertexId> v(a.n());
                                                std::iota(v.begin(), v.end(), 0);
                                                return v;
                                              }(),
                                              a},
                                             {[&] {
                                                std::vector<VertexId> v(b.n());
                                                std::iota(v.begin(), v.end(), a.n());
                                                return v;
                                              }(),
                                              b}});
  Partition p;
  for (VertexId v = 0; v < g.n(); ++v) p.part_of.push_back(v < a.n() ? 0 : 1);
  const auto out = dist_multi(g, p);
  const auto ra = compute_separator(a, bfs_tree(a, 0));
  const auto rb = compute_separator(b, bfs_tree(b, 0));
  EXPECT_EQ(out.parts[0].result.path, ra.path);
  std::vector<VertexId> shifted;
  for (VertexId x : rb.path) shifted.push_back(x + a.n());
  EXPECT_EQ(out.parts[1].result.path, shifted);
  EXPECT_EQ(out.parts[0].kind, ra.kind);
  EXPECT_EQ(out.parts[1].kind, rb.kind);
}

TEST(DistMulti, PartErrorsAreAttributed) {
  const auto pg = gen::two_level_parts(8, 8, 2, 2);
  auto w = gen::unit_weights(64);
  w[63] = 100;
  try {
    dist_multi(with_weights(pg.graph, w), Partition{pg.part_of});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotProper);
    EXPECT_NE(std::string(e.what()).find("part 3"), std::string::npos);
  }
  Partition broken{pg.part_of};
  broken.part_of[0] = 3;
  expect_code(Errc::InvalidPartition, [&] { dist_multi(pg.graph, broken); });
}
