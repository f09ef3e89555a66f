#include <gtest/gtest.h>

#include "psep/generators.hpp"
#include "psep/graph_io.hpp"
#include "support.hpp"

using namespace psep;

namespace {

EmbeddedPlanarGraph c3() { return build_embedding(3, {{1, 2}, {2, 0}, {0, 1}}); }

std::vector<EmbeddedPlanarGraph> sample_graphs() {
  std::vector<EmbeddedPlanarGraph> out{c3(), gen::grid(4, 4), gen::grid(7, 3), gen::wheel(9), gen::cylinder(3, 5),
                                       gen::path(5), gen::star(4), gen::bowtie()};
  for (std::uint64_t s = 1; s <= 5; ++s) {
    out.push_back(gen::random_triangulation(40, s));
    out.push_back(gen::cycle_chords(20, 6, s));
    out.push_back(gen::blocks(50, s));
  }
  return out;
}

}  // namespace

TEST(BuildEmbedding, TriangleHasTwoFaces) {
  const auto g = c3();
  EXPECT_EQ(g.m(), 3);
  EXPECT_EQ(g.num_faces(), 2);
  for (const auto& f : g.faces()) EXPECT_EQ(f.size(), 3u);
}

TEST(BuildEmbedding, GridCounts) {
  const auto g = gen::grid(4, 4);
  const auto r = validate_embedding(g);
  EXPECT_EQ(r.n, 16);
  EXPECT_EQ(r.m, 24);
  EXPECT_EQ(r.f, 10);
  EXPECT_EQ(r.euler_residual, 0);
  std::int32_t squares = 0;
  for (const auto& f : g.faces()) squares += f.size() == 4;
  EXPECT_EQ(squares, 9);
  EXPECT_EQ(g.face(g.infinite_face()).size(), 12u);
}

TEST(BuildEmbedding, MissingReverseIsRejected) {
  try {
    build_embedding(3, {{1, 2}, {2}, {0, 1}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::InconsistentRotation);
  }
}

TEST(BuildEmbedding, DisconnectedAndNegativeWeight) {
  try {
    build_embedding(4, {{1}, {0}, {3}, {2}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotConnected);
  }
  try {
    build_embedding(3, {{1, 2}, {2, 0}, {0, 1}}, {1, -1, 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NegativeWeight);
  }
}

TEST(BuildEmbedding, NonPlanarRotationOfK4) {
  const auto k4 = gen::wheel(4);
  EXPECT_EQ(validate_embedding(k4).euler_residual, 0);
  auto rot = neighbour_rotation(k4);
  std::swap(rot[0][0], rot[0][1]);
  try {
    build_embedding(4, rot);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::EulerViolation);
  }
  GraphOptions loose;
  loose.require_planar = false;
  const auto bad = build_embedding(4, rot, {}, std::nullopt, loose);
  EXPECT_NE(validate_embedding(bad).euler_residual, 0);
  EXPECT_EQ(bad.num_faces(), brute::brute_face_count(bad));
}

TEST(BuildEmbedding, OuterHintSelectsFace) {
  const auto g = build_embedding(3, {{1, 2}, {2, 0}, {0, 1}}, {}, std::make_pair(1, 0));
  EXPECT_EQ(g.infinite_face(), g.face_of(*g.find_dart(1, 0)));
}

TEST(Faces, PathHasOneFaceOfSizeFour) {
  const auto g = gen::path(3);
  ASSERT_EQ(g.num_faces(), 1);
  EXPECT_EQ(g.face(0).size(), 4u);
}

TEST(Faces, CanonicalIdsAreSortedByMinimumDart) {
  for (const auto& g : sample_graphs()) {
    for (FaceId f = 0; f < g.num_faces(); ++f) {
      const auto& face = g.face(f);
      for (DartId d : face.boundary) EXPECT_LE(face.key, g.key(d));
      if (f > 0) {
        EXPECT_LT(g.face(f - 1).key, face.key);
      }
    }
  }
}

TEST(Faces, PartitionAndSuccessorClosure) {
  for (const auto& g : sample_graphs()) {
    std::size_t total = 0;
    std::vector<std::int32_t> hits(g.num_darts(), 0);
    for (const auto& f : g.faces()) {
      total += f.size();
      DartId d = f.boundary.front();
      for (std::size_t i = 0; i < f.size(); ++i) {
        EXPECT_EQ(d, f.boundary[i]);
        hits[d]++;
        d = g.face_succ(d);
      }
      EXPECT_EQ(d, f.boundary.front());
    }
    EXPECT_EQ(total, 2u * static_cast<std::size_t>(g.m()));
    for (auto h : hits) EXPECT_EQ(h, 1);
    EXPECT_EQ(g.num_faces(), brute::brute_face_count(g));
    EXPECT_EQ(validate_embedding(g).euler_residual, 0);
  }
}

TEST(Dual, TriangleGivesThreeParallelEdges) {
  const auto d = build_dual(c3());
  EXPECT_EQ(d.num_nodes, 2);
  ASSERT_EQ(d.edges.size(), 3u);
  for (EdgeId e = 0; e < 3; ++e) EXPECT_FALSE(d.is_self_loop(e));
}

TEST(Dual, PathGivesSelfLoops) {
  const auto d = build_dual(gen::path(3));
  EXPECT_EQ(d.num_nodes, 1);
  ASSERT_EQ(d.edges.size(), 2u);
  EXPECT_TRUE(d.is_self_loop(0));
  EXPECT_TRUE(d.is_self_loop(1));
}

TEST(Dual, GridOuterDegree) {
  const auto g = gen::grid(4, 4);
  const auto d = build_dual(g);
  EXPECT_EQ(d.num_nodes, 10);
  EXPECT_EQ(d.edges.size(), 24u);
  EXPECT_EQ(d.degree[g.infinite_face()], 12);
}

TEST(Dual, DegreeEqualsBoundarySizeAndEndpointsMatch) {
  for (const auto& g : sample_graphs()) {
    const auto d = build_dual(g);
    ASSERT_EQ(static_cast<EdgeId>(d.edges.size()), g.m());
    for (EdgeId e = 0; e < g.m(); ++e) {
      const std::set<FaceId> got{d.edges[e].first, d.edges[e].second};
      const std::set<FaceId> want{g.face_of(2 * e), g.face_of(2 * e + 1)};
      EXPECT_EQ(got, want);
    }
    for (FaceId f = 0; f < g.num_faces(); ++f) {
      EXPECT_EQ(static_cast<std::size_t>(d.degree[f]), g.face(f).size());
    }
  }
}

TEST(Biconnect, GridIsUnchanged) {
  const auto g = gen::grid(4, 4);
  const auto b = biconnect(g);
  EXPECT_EQ(virtual_edge_count(b), 0);
  EXPECT_EQ(write_graph(b), write_graph(g));
}

TEST(Biconnect, BowtieGetsOneVirtualEdge) {
  const auto g = gen::bowtie();
  ASSERT_EQ(brute::brute_articulation_points(g).size(), 1u);
  const auto b = biconnect(g);
  EXPECT_EQ(virtual_edge_count(b), 1);
  EXPECT_TRUE(brute::brute_articulation_points(b).empty());
  EXPECT_EQ(validate_embedding(b).euler_residual, 0);
}

TEST(Biconnect, StarBecomesCycleThroughLeaves) {
  const auto g = gen::star(3);
  const auto b = biconnect(g);
  EXPECT_TRUE(brute::brute_articulation_points(b).empty());
  EXPECT_EQ(validate_embedding(b).euler_residual, 0);
  for (EdgeId e = 0; e < b.m(); ++e) {
    if (!b.is_virtual_edge(e)) continue;
    EXPECT_NE(b.tail(2 * e), 0);
    EXPECT_NE(b.head(2 * e), 0);
  }
  EXPECT_EQ(virtual_edge_count(b), 2);
}

TEST(Biconnect, RandomBlockGraphs) {
  for (std::uint64_t s = 1; s <= 40; ++s) {
    const auto g = gen::blocks(30 + static_cast<std::int32_t>(s) * 7, s);
    const auto b = biconnect(g);
    EXPECT_TRUE(brute::brute_articulation_points(b).empty()) << "seed " << s;
    EXPECT_EQ(validate_embedding(b).euler_residual, 0);
    EXPECT_EQ(articulation_points(g), brute::brute_articulation_points(g));
    for (VertexId v = 0; v < g.n(); ++v) EXPECT_EQ(b.weight(v), g.weight(v));
    for (EdgeId e = g.m(); e < b.m(); ++e) EXPECT_TRUE(b.is_virtual_edge(e));
  }
}

TEST(Biconnect, Deterministic) {
  const auto g = gen::blocks(120, 9);
  EXPECT_EQ(write_graph(biconnect(g)), write_graph(biconnect(g)));
}

TEST(GraphIo, RoundTripIsExact) {
  for (auto g : sample_graphs()) {
    std::vector<Weight> w(g.n());
    for (VertexId v = 0; v < g.n(); ++v) w[v] = v % 3;
    g = with_weights(g, w);
    const auto text = write_graph(g);
    const auto back = parse_graph(text);
    EXPECT_EQ(write_graph(back), text);
    EXPECT_EQ(back.num_faces(), g.num_faces());
  }
}

TEST(GraphIo, ParseErrors) {
  for (const char* bad : {"rot 0 1\n", "planar 2 1\nrot 0 5\n", "planar 2 1\nfoo\n", "planar x\n"}) {
    try {
      parse_graph(bad);
      FAIL() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::ParseError) << bad;
    }
  }
}
