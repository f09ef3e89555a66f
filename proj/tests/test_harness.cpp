#include <gtest/gtest.h>

#include "psep/harness.hpp"

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

GeneratorSpec spec_of(std::string kind, std::map<std::string, std::int64_t> params, std::uint64_t seed = 0) {
  GeneratorSpec s;
  s.kind = std::move(kind);
  s.params = std::move(params);
  s.seed = seed;
  return s;
}

ExperimentSpec small_experiment() {
  ExperimentSpec e;
  e.instances = {spec_of("grid", {{"rows", 4}, {"cols", 4}}),
                 spec_of("random-triangulation", {{"n", 60}}, 3),
                 spec_of("cycle-chords", {{"n", 12}, {"chords", 0}}),
                 spec_of("blocks", {{"n", 40}}, 2),
                 spec_of("two-level-parts", {{"rows", 8}, {"cols", 8}, {"part_rows", 2}, {"part_cols", 2}})};
  e.weights = WeightScheme::RandomProper;
  e.weight_seed = 5;
  return e;
}

}  // namespace

TEST(Generate, RandomTriangulationShape) {
  const auto inst = generate(spec_of("random-triangulation", {{"n", 500}}, 7));
  const auto& g = inst.graph;
  EXPECT_EQ(g.n(), 500);
  EXPECT_EQ(g.validate().euler_residual, 0);
  std::int32_t non_triangles = 0;
  for (FaceId f = 0; f < g.num_faces(); ++f) non_triangles += g.face(f).size() != 3;
  EXPECT_LE(non_triangles, 1);
}

TEST(Generate, CycleChordsAndUnknownKind) {
  const auto inst = generate(spec_of("cycle-chords", {{"n", 12}, {"chords", 0}}));
  EXPECT_EQ(inst.graph.n(), 12);
  EXPECT_EQ(inst.graph.m(), 12);
  EXPECT_EQ(inst.graph.num_faces(), 2);
  expect_code(Errc::BadParams, [] { generate(spec_of("hexagon", {})); });
  expect_code(Errc::BadParams, [] { generate(spec_of("grid", {{"rows", 3}})); });
}

TEST(Generate, PartitionedInstanceCarriesParts) {
  const auto inst = generate(spec_of("two-level-parts", {{"rows", 8}, {"cols", 8}, {"part_rows", 2}, {"part_cols", 2}}));
  ASSERT_TRUE(inst.partition.has_value());
  EXPECT_EQ(inst.partition->num_parts(), 4);
}

TEST(Spec, JsonRoundTrip) {
  auto e = small_experiment();
  e.engine = EngineChoice::Distributed;
  e.backend = PaBackend::Charged;
  e.repetitions = 3;
  const auto j = to_json_value(e);
  const auto back = spec_from_json(j);
  EXPECT_EQ(to_json_value(back), j);
  EXPECT_EQ(back.instances.size(), e.instances.size());
  EXPECT_EQ(back.instances[1].label(), e.instances[1].label());
  expect_code(Errc::BadParams, [] { spec_from_json(json{{"instances", json::array()}, {"weights", "heavy"}}); });
}

TEST(Experiment, RunsCleanAndIsDeterministic) {
  const auto e = small_experiment();
  const auto a = run_experiment(e);
  const auto b = run_experiment(e);
  EXPECT_TRUE(a.ok) << a.ndjson();
  EXPECT_EQ(a.ndjson(), b.ndjson());
  EXPECT_EQ(a.records.size(), e.instances.size());
  EXPECT_GT(a.coverage.biconnect, 0);
  EXPECT_GT(a.coverage.multi_part, 0);
  for (const auto& r : a.records) {
    EXPECT_TRUE(r.at("ok").get<bool>()) << r.dump();
    if (r.contains("engines_equal")) {
      EXPECT_TRUE(r.at("engines_equal").get<bool>());
    }
  }
}

TEST(Experiment, AdversarialWeightsFailWithAttribution) {
  auto e = small_experiment();
  e.instances.resize(1);
  e.weights = WeightScheme::Adversarial;
  const auto rep = run_experiment(e);
  EXPECT_FALSE(rep.ok);
  ASSERT_EQ(rep.records.size(), 1u);
  EXPECT_EQ(rep.records[0].at("error"), "NotProper");
  EXPECT_EQ(rep.records[0].at("instance"), e.instances[0].label());
  EXPECT_FALSE(rep.summary.at("ok").get<bool>());
}

TEST(Scaling, NeedsFourSizes) {
  expect_code(Errc::InsufficientData, [] { scaling_report({{16, 6, 100, 10, 0}, {64, 14, 500, 20, 0}}); });
}

TEST(Scaling, DriftIsRatioOfConstants) {
  // c = charged / (D * ceil(log2 n)^2): 16 -> 2, 64 -> 2, 256 -> 3, 1024 -> 4.
  const auto rep = scaling_report({{16, 1, 32, 0, 0}, {64, 1, 72, 0, 0}, {256, 1, 192, 0, 0}, {1024, 1, 400, 0, 0}});
  EXPECT_DOUBLE_EQ(rep.c_min, 2.0);
  EXPECT_DOUBLE_EQ(rep.c_max, 4.0);
  EXPECT_DOUBLE_EQ(rep.drift, 2.0);
  EXPECT_TRUE(rep.pass);
}

TEST(Scaling, RowsFromChargedRun) {
  ExperimentSpec e;
  for (std::int64_t k : {4, 6, 8, 10}) e.instances.push_back(spec_of("grid", {{"rows", k}, {"cols", k}}));
  e.engine = EngineChoice::Distributed;
  e.backend = PaBackend::Charged;
  const auto rep = run_experiment(e);
  ASSERT_TRUE(rep.ok);
  const auto rows = scaling_rows(rep.records);
  ASSERT_EQ(rows.size(), 4u);
  for (const auto& r : rows) EXPECT_GT(r.charged, 0);
  EXPECT_NO_THROW(scaling_report(rows));
}

TEST(Checks, DualityAndSandwichHoldOnSmallGraphs) {
  for (const auto& g : {gen::grid(5, 5), biconnect(gen::blocks(40, 3)), gen::wheel(9)}) {
    const auto pair = cotree(g, bfs_tree(g, 0));
    EXPECT_TRUE(check_duality(pair));
    EXPECT_TRUE(check_sandwich(pair, transfer_weights(g)));
  }
}
