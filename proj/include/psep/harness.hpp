#pragma once

// Experiment specs, the verification pipeline and NDJSON reports.

#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "psep/dist_separator.hpp"
#include "psep/generators.hpp"
#include "psep/graph_io.hpp"
#include "psep/oracles.hpp"

namespace psep {

using json = nlohmann::json;

// ---- instances ----

struct GeneratorSpec {
  std::string kind;  // grid | cylinder | random-triangulation | cycle-chords | two-level-parts | ...
  std::map<std::string, std::int64_t> params;
  std::uint64_t seed = 0;
  std::string file;  // kind == "file"

  std::int64_t get(const std::string& key) const {
    auto it = params.find(key);
    if (it == params.end()) throw Error(Errc::BadParams, kind + " needs parameter '" + key + "'");
    return it->second;
  }
  std::string label() const {
    std::ostringstream os;
    os << kind;
    for (const auto& [k, v] : params) os << ' ' << k << '=' << v;
    if (kind == "file") os << ' ' << file;
    os << " seed=" << seed;
    return os.str();
  }
};

inline void to_json(json& j, const GeneratorSpec& g) {
  j = json{{"kind", g.kind}, {"params", g.params}, {"seed", g.seed}};
  if (!g.file.empty()) j["file"] = g.file;
}
inline void from_json(const json& j, GeneratorSpec& g) {
  g.kind = j.at("kind").get<std::string>();
  g.params = j.value("params", std::map<std::string, std::int64_t>{});
  g.seed = j.value("seed", std::uint64_t{0});
  g.file = j.value("file", std::string{});
}

struct Instance {
  std::string label;
  EmbeddedPlanarGraph graph;
  std::optional<Partition> partition;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::BadParams, "cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline Instance generate(const GeneratorSpec& s) {
  auto i32 = [&](const std::string& key) { return static_cast<std::int32_t>(s.get(key)); };
  const auto& k = s.kind;
  Instance out{s.label(), build_embedding(1, {{}}), std::nullopt};
  if (k == "grid") {
    out.graph = gen::grid(i32("rows"), i32("cols"));
  } else if (k == "cylinder") {
    out.graph = gen::cylinder(i32("height"), i32("width"));
  } else if (k == "random-triangulation") {
    out.graph = gen::random_triangulation(i32("n"), s.seed);
  } else if (k == "cycle-chords") {
    out.graph = gen::cycle_chords(i32("n"), i32("chords"), s.seed);
  } else if (k == "two-level-parts") {
    auto pg = gen::two_level_parts(i32("rows"), i32("cols"), i32("part_rows"), i32("part_cols"));
    out.graph = std::move(pg.graph);
    out.partition = Partition{std::move(pg.part_of)};
  } else if (k == "blocks") {
    out.graph = gen::blocks(i32("n"), s.seed);
  } else if (k == "two-triangulations") {
    out.graph = gen::two_triangulations(i32("each"), s.seed);
  } else if (k == "wheel") {
    out.graph = gen::wheel(i32("n"));
  } else if (k == "file") {
    out.graph = parse_graph(read_file(s.file));
  } else {
    throw Error(Errc::BadParams, "unknown generator '" + k + "'");
  }
  return out;
}

enum class WeightScheme { Unit, RandomProper, Adversarial };

inline WeightScheme parse_weight_scheme(const std::string& s) {
  if (s == "unit") return WeightScheme::Unit;
  if (s == "random-proper") return WeightScheme::RandomProper;
  if (s == "adversarial") return WeightScheme::Adversarial;
  throw Error(Errc::BadParams, "unknown weight scheme '" + s + "'");
}
inline const char* to_string(WeightScheme w) {
  switch (w) {
    case WeightScheme::Unit: return "unit";
    case WeightScheme::RandomProper: return "random-proper";
    case WeightScheme::Adversarial: return "adversarial";
  }
  return "?";
}

/// File instances keep their own weights under the unit scheme. Partitioned instances draw proper weights per part.
inline EmbeddedPlanarGraph apply_weights(const Instance& inst, WeightScheme scheme, std::uint64_t seed,
                                         bool keep_existing) {
  const VertexId n = inst.graph.n();
  switch (scheme) {
    case WeightScheme::Unit:
      return keep_existing ? inst.graph : with_weights(inst.graph, gen::unit_weights(n));
    case WeightScheme::RandomProper: {
      if (!inst.partition) return with_weights(inst.graph, gen::random_proper_weights(n, seed));
      // Each part must be proper on its own.
      const auto& p = *inst.partition;
      std::vector<std::vector<VertexId>> members(p.num_parts());
      for (VertexId v = 0; v < n; ++v) members[p.part_of[v]].push_back(v);
      std::vector<Weight> w(n, 0);
      for (std::size_t q = 0; q < members.size(); ++q) {
        const auto local = gen::random_proper_weights(static_cast<VertexId>(members[q].size()), seed + q);
        for (std::size_t i = 0; i < local.size(); ++i) w[members[q][i]] = local[i];
      }
      return with_weights(inst.graph, w);
    }
    case WeightScheme::Adversarial: return with_weights(inst.graph, gen::adversarial_weights(n));
  }
  return inst.graph;
}

enum class EngineChoice { Sequential, Distributed, Both };

inline EngineChoice parse_engine(const std::string& s) {
  if (s == "sequential") return EngineChoice::Sequential;
  if (s == "distributed") return EngineChoice::Distributed;
  if (s == "both") return EngineChoice::Both;
  throw Error(Errc::BadParams, "unknown engine '" + s + "'");
}
inline const char* to_string(EngineChoice e) {
  switch (e) {
    case EngineChoice::Sequential: return "sequential";
    case EngineChoice::Distributed: return "distributed";
    case EngineChoice::Both: return "both";
  }
  return "?";
}

inline PaBackend parse_backend(const std::string& s) {
  if (s == "honest") return PaBackend::Honest;
  if (s == "charged") return PaBackend::Charged;
  throw Error(Errc::BadParams, "unknown PA backend '" + s + "'");
}

struct ExperimentSpec {
  std::vector<GeneratorSpec> instances;
  WeightScheme weights = WeightScheme::Unit;
  std::uint64_t weight_seed = 1;
  EngineChoice engine = EngineChoice::Both;
  PaBackend backend = PaBackend::Honest;
  std::int32_t repetitions = 1;
  std::int32_t bit_budget = 0;
  std::int64_t max_rounds = 1'000'000;
  VertexId root = 0;
  std::int32_t exhaustive_limit = 200;  // duality and sandwich checks up to this n
  std::string dot_dir;                  // empty: no DOT output
};

inline json to_json_value(const ExperimentSpec& s) {
  return json{{"instances", s.instances},
              {"weights", to_string(s.weights)},
              {"weight_seed", s.weight_seed},
              {"engine", to_string(s.engine)},
              {"pa_backend", to_string(s.backend)},
              {"repetitions", s.repetitions},
              {"bit_budget", s.bit_budget},
              {"max_rounds", s.max_rounds},
              {"root", s.root},
              {"exhaustive_limit", s.exhaustive_limit}};
}

inline ExperimentSpec spec_from_json(const json& j) {
  ExperimentSpec s;
  s.instances = j.at("instances").get<std::vector<GeneratorSpec>>();
  s.weights = parse_weight_scheme(j.value("weights", std::string("unit")));
  s.weight_seed = j.value("weight_seed", std::uint64_t{1});
  s.engine = parse_engine(j.value("engine", std::string("both")));
  s.backend = parse_backend(j.value("pa_backend", std::string("honest")));
  s.repetitions = j.value("repetitions", 1);
  s.bit_budget = j.value("bit_budget", 0);
  s.max_rounds = j.value("max_rounds", std::int64_t{1'000'000});
  s.root = j.value("root", 0);
  s.exhaustive_limit = j.value("exhaustive_limit", 200);
  s.dot_dir = j.value("dot_dir", std::string{});
  return s;
}

// ---- checks ----

/// Every fundamental cycle equals its fundamental cut and the brute-force cycle.
inline bool check_duality(const TreeCotreePair& pair) {
  const auto& g = *pair.graph;
  for (EdgeId e = 0; e < g.m(); ++e) {
    if (pair.in_tree[e]) continue;
    const auto cycle = fundamental_cycle(pair, e).edges;
    if (cycle != fundamental_cut(pair, e)) return false;
    if (cycle != brute_force_cycle(g, pair.in_tree, e)) return false;
  }
  return true;
}

/// w_V(S_in^-) <= w_F(S_in) <= w_V(S_in) for every fundamental cycle, interior taken
/// as the side away from the dual root; interior faces must match the flood fill.
inline bool check_sandwich(const TreeCotreePair& pair, const FaceWeighting& fw) {
  const auto& g = *pair.graph;
  for (const auto& row : oracle_all_fundamental_cycles(g, pair.primal, fw, pair.dual_root)) {
    if (row.interior_strict > row.interior_face_weight) return false;
    if (row.interior_face_weight > row.interior_strict + row.cycle_weight) return false;
    if (row.interior_faces != interior_faces(pair, row.edge)) return false;
  }
  return true;
}

inline SeparatorResult relabel(SeparatorResult r, const std::vector<VertexId>& map) {
  auto m = [&](VertexId x) { return x == kNone ? kNone : map[x]; };
  auto mk = [&](DartKey k) { return k.tail == kNone ? k : DartKey{m(k.tail), m(k.head), k.copy}; };
  r.u = m(r.u);
  r.v = m(r.v);
  for (auto& x : r.path) x = m(x);
  r.closing.u = m(r.closing.u);
  r.closing.v = m(r.closing.v);
  r.closing.slot_u = mk(r.closing.slot_u);
  r.closing.slot_v = mk(r.closing.slot_v);
  r.face_key = mk(r.face_key);
  return r;
}

struct Coverage {
  std::int64_t balanced = 0;
  std::int64_t critical = 0;
  std::int64_t leaf_critical = 0;
  std::int64_t biconnect = 0;
  std::int64_t multi_part = 0;

  void count(const SeparatorResult& r) {
    (r.kind == SeparatorCase::Balanced ? balanced : r.kind == SeparatorCase::Critical ? critical : leaf_critical)++;
  }
  bool complete() const { return balanced > 0 && critical > 0 && leaf_critical > 0 && biconnect > 0 && multi_part > 0; }
};

struct Report {
  std::vector<json> records;
  json summary;
  bool ok = true;
  Coverage coverage;

  std::string ndjson() const {
    std::string out;
    for (const auto& r : records) out += r.dump() + '\n';
    out += summary.dump() + '\n';
    return out;
  }
};

namespace detail {

inline json trace_json(const RoundTrace& t) {
  json phases = json::array();
  for (const auto& p : t.phases) {
    phases.push_back({{"phase", p.name},
                      {"honest", p.honest_rounds},
                      {"charged", p.charged_rounds},
                      {"max_bits", p.max_bits},
                      {"pa_calls", p.pa_calls},
                      {"interval", p.interval}});
  }
  return phases;
}

inline void write_dot(const std::string& dir, const std::string& name, const TreeCotreePair& pair,
                      const SeparatorResult& r) {
  std::ofstream out(dir + "/" + name + ".dot");
  out << to_dot(pair);
  out << "graph P {\n";
  for (std::size_t i = 0; i + 1 < r.path.size(); ++i) out << "  " << r.path[i] << " -- " << r.path[i + 1] << ";\n";
  out << "}\n";
}

inline void run_single(const ExperimentSpec& spec, const EmbeddedPlanarGraph& g, json& rec, Report& report,
                       const std::string& name) {
  const auto t = bfs_tree(g, spec.root);
  const std::int32_t depth = t.height();
  rec["D"] = depth;
  std::optional<SeparatorResult> seq;
  if (spec.engine != EngineChoice::Distributed) {
    seq = compute_separator(g, t);
    const auto augmented = biconnect(g);
    const auto pair = cotree(augmented, t);
    const auto balance = verify_separator(g, g.weights(), seq->path);
    const bool size_ok = static_cast<std::int32_t>(seq->path.size()) <= 2 * depth + 1;
    rec["kind"] = to_string(seq->kind);
    rec["path_size"] = seq->path.size();
    rec["balance"] = {balance.max_component, balance.total};
    rec["verify"] = balance.pass;
    rec["size_bound"] = size_ok;
    rec["virtual_edges"] = seq->virtual_edges_added;
    bool fine = balance.pass && size_ok;
    if (g.n() <= spec.exhaustive_limit) {
      const bool dual = check_duality(pair);
      const bool sandwich = check_sandwich(pair, transfer_weights(augmented));
      rec["duality"] = dual;
      rec["sandwich"] = sandwich;
      fine = fine && dual && sandwich;
    }
    report.coverage.count(*seq);
    if (seq->virtual_edges_added > 0) report.coverage.biconnect++;
    if (!spec.dot_dir.empty()) write_dot(spec.dot_dir, name, pair, *seq);
    report.ok = report.ok && fine;
  }
  if (spec.engine != EngineChoice::Sequential) {
    DistConfig cfg;
    cfg.backend = spec.backend;
    cfg.sim.bit_budget = spec.bit_budget;
    cfg.sim.max_rounds = spec.max_rounds;
    const auto out = dist_compute_separator(g, spec.root, cfg);
    const std::int32_t budget = spec.bit_budget > 0 ? spec.bit_budget : default_bit_budget(g.n());
    rec["honest_rounds"] = out.trace.rounds_executed;
    rec["charged_rounds"] = out.trace.charged_rounds;
    rec["max_bits"] = out.trace.max_bits_per_edge_per_round;
    rec["bit_budget"] = budget;
    rec["probes"] = out.parts.front().probes;
    rec["phases"] = trace_json(out.trace);
    bool fine = out.trace.max_bits_per_edge_per_round <= budget;
    if (seq) {
      const bool equal = serialize(out.result()) == serialize(*seq);
      rec["engines_equal"] = equal;
      fine = fine && equal;
    } else {
      const auto balance = verify_separator(g, g.weights(), out.result().path);
      rec["kind"] = to_string(out.result().kind);
      rec["path_size"] = out.result().path.size();
      rec["verify"] = balance.pass;
      fine = fine && balance.pass;
      report.coverage.count(out.result());
    }
    report.ok = report.ok && fine;
  }
}

inline void run_multi(const ExperimentSpec& spec, const EmbeddedPlanarGraph& g, const Partition& p, json& rec,
                      Report& report) {
  const auto parts = split_parts(g, p);
  json rows = json::array();
  bool fine = true;
  std::optional<DistMultiOutput> multi;
  if (spec.engine != EngineChoice::Sequential) {
    DistConfig cfg;
    cfg.backend = spec.backend;
    cfg.sim.bit_budget = spec.bit_budget;
    cfg.sim.max_rounds = spec.max_rounds;
    multi = dist_multi(g, p, cfg);
    rec["honest_rounds"] = multi->trace.rounds_executed;
    rec["charged_rounds"] = multi->trace.charged_rounds;
    rec["max_bits"] = multi->trace.max_bits_per_edge_per_round;
    rec["phases"] = trace_json(multi->trace);
  }
  for (std::size_t q = 0; q < parts.size(); ++q) {
    const auto& part = parts[q];
    json row{{"part", q}, {"n", part.graph.n()}};
    const auto local = compute_separator(part.graph, bfs_tree(part.graph, 0));
    const auto global = relabel(local, part.vertices);
    const auto balance = verify_separator(part.graph, part.graph.weights(), local.path);
    row["kind"] = to_string(local.kind);
    row["verify"] = balance.pass;
    fine = fine && balance.pass;
    report.coverage.count(local);
    if (local.virtual_edges_added > 0) report.coverage.biconnect++;
    if (multi) {
      const bool equal = serialize(multi->parts[q].result) == serialize(global);
      row["engines_equal"] = equal;
      fine = fine && equal;
    }
    rows.push_back(row);
  }
  rec["parts"] = rows;
  report.coverage.multi_part++;
  report.ok = report.ok && fine;
}

}  // namespace detail

/// Runs every instance of the spec; failures are recorded with instance attribution.
inline Report run_experiment(const ExperimentSpec& spec) {
  Report report;
  std::int64_t id = 0;
  std::int64_t failures = 0;
  for (std::int32_t rep = 0; rep < spec.repetitions; ++rep) {
    for (const auto& gs : spec.instances) {
      json rec{{"type", "instance"}, {"id", id}, {"instance", gs.label()}, {"repetition", rep}};
      const bool before = report.ok;
      try {
        const auto inst = generate(gs);
        const auto g = apply_weights(inst, spec.weights, spec.weight_seed + static_cast<std::uint64_t>(rep) + gs.seed,
                                     gs.kind == "file");
        rec["n"] = g.n();
        rec["m"] = g.m();
        if (inst.partition) {
          detail::run_multi(spec, g, *inst.partition, rec, report);
        } else {
          detail::run_single(spec, g, rec, report, "instance" + std::to_string(id));
        }
      } catch (const Error& e) {
        rec["error"] = to_string(e.code());
        rec["message"] = e.what();
        report.ok = false;
      }
      rec["ok"] = report.ok && before;
      if (!(report.ok && before)) ++failures;
      report.records.push_back(std::move(rec));
      ++id;
    }
  }
  const auto& c = report.coverage;
  report.summary = {{"type", "summary"},
                    {"instances", id},
                    {"failures", failures},
                    {"ok", report.ok},
                    {"coverage",
                     {{"balanced", c.balanced},
                      {"critical", c.critical},
                      {"leaf_critical", c.leaf_critical},
                      {"biconnect", c.biconnect},
                      {"multi_part", c.multi_part}}}};
  return report;
}

// ---- scaling ----

struct ScalingRow {
  VertexId n = 0;
  std::int64_t diameter = 0;
  std::int64_t charged = 0;
  std::int64_t honest = 0;
  double c = 0;  // charged / (D * ceil(log2 n)^2)
};

struct ScalingReport {
  std::vector<ScalingRow> rows;
  double c_min = 0;
  double c_max = 0;
  double drift = 0;  // c_max / c_min
  bool pass = false;

  json to_json() const {
    json r = json::array();
    for (const auto& x : rows) r.push_back({{"n", x.n}, {"D", x.diameter}, {"charged", x.charged}, {"honest", x.honest}, {"c", x.c}});
    return {{"type", "scaling"}, {"rows", r}, {"c_min", c_min}, {"c_max", c_max}, {"drift", drift}, {"pass", pass}};
  }
};

/// Fits charged = c * D * log^2 n per size; passes iff c varies by at most 2x.
inline ScalingReport scaling_report(const std::vector<ScalingRow>& input) {
  std::map<VertexId, ScalingRow> by_size;
  for (const auto& r : input) by_size[r.n] = r;
  if (by_size.size() < 4) {
    throw Error(Errc::InsufficientData, "need at least 4 sizes, got " + std::to_string(by_size.size()));
  }
  ScalingReport rep;
  for (auto& [n, r] : by_size) {
    const double lg = std::max(1, ceil_log2(static_cast<std::uint64_t>(n)));
    r.c = static_cast<double>(r.charged) / (static_cast<double>(std::max<std::int64_t>(r.diameter, 1)) * lg * lg);
    rep.rows.push_back(r);
  }
  rep.c_min = rep.c_max = rep.rows.front().c;
  for (const auto& r : rep.rows) {
    rep.c_min = std::min(rep.c_min, r.c);
    rep.c_max = std::max(rep.c_max, r.c);
  }
  rep.drift = rep.c_min > 0 ? rep.c_max / rep.c_min : INFINITY;
  rep.pass = rep.drift <= 2.0;
  return rep;
}

/// Scaling rows from report records (distributed runs only).
inline std::vector<ScalingRow> scaling_rows(const std::vector<json>& records) {
  std::vector<ScalingRow> rows;
  for (const auto& r : records) {
    if (!r.contains("charged_rounds") || !r.contains("D")) continue;
    rows.push_back({r.at("n").get<VertexId>(), r.at("D").get<std::int64_t>(), r.at("charged_rounds").get<std::int64_t>(),
                    r.at("honest_rounds").get<std::int64_t>(), 0});
  }
  return rows;
}

}  // namespace psep
