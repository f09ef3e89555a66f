// psep command line: gen, run, verify, scale.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "psep/harness.hpp"

namespace {

using namespace psep;

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error(Errc::BadParams, "cannot write " + path);
  out << text;
}

std::map<std::string, std::int64_t> parse_params(const std::vector<std::string>& items) {
  std::map<std::string, std::int64_t> out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(Errc::BadParams, "parameter '" + item + "' is not key=value");
    try {
      out[item.substr(0, eq)] = std::stoll(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw Error(Errc::BadParams, "parameter '" + item + "' has a non-integer value");
    }
  }
  return out;
}

struct Common {
  std::string engine = "both";
  std::string backend = "honest";
  std::uint64_t seed = 0;
  std::int32_t bit_budget = 0;
  std::int64_t max_rounds = 1'000'000;
  std::string out;

  void add_to(CLI::App* app) {
    app->add_option("--engine", engine, "sequential | distributed | both");
    app->add_option("--pa-backend", backend, "honest | charged");
    app->add_option("--seed", seed, "generator seed");
    app->add_option("--bit-budget", bit_budget, "bits per dart per round (0: 8*ceil(log2(n+1)))");
    app->add_option("--max-rounds", max_rounds, "round limit per phase");
    app->add_option("--out", out, "output file (default stdout)");
  }
};

int cmd_gen(const std::string& kind, const std::vector<std::string>& params, const std::string& weights,
            const Common& c) {
  GeneratorSpec gs{kind, parse_params(params), c.seed, ""};
  const auto inst = generate(gs);
  const auto g = apply_weights(inst, parse_weight_scheme(weights), c.seed, false);
  std::string text = write_graph(g);
  emit(text, c.out);
  if (inst.partition) {
    std::string parts;
    for (VertexId v = 0; v < g.n(); ++v) parts += "part " + std::to_string(v) + ' ' + std::to_string(inst.partition->part_of[v]) + '\n';
    emit(parts, c.out.empty() ? "" : c.out + ".parts");
  }
  return 0;
}

int cmd_run(const std::string& spec_path, const std::string& kind, const std::vector<std::string>& params,
            const std::string& weights, std::int32_t reps, const std::string& dot_dir, const Common& c) {
  ExperimentSpec spec;
  if (!spec_path.empty()) {
    spec = spec_from_json(json::parse(read_file(spec_path)));
  } else {
    if (kind.empty()) throw Error(Errc::BadParams, "run needs --spec or --kind");
    spec.instances.push_back({kind, parse_params(params), c.seed, ""});
    spec.weights = parse_weight_scheme(weights);
    spec.repetitions = reps;
  }
  spec.engine = parse_engine(c.engine);
  spec.backend = parse_backend(c.backend);
  if (c.bit_budget > 0) spec.bit_budget = c.bit_budget;
  spec.max_rounds = c.max_rounds;
  if (!dot_dir.empty()) spec.dot_dir = dot_dir;
  const auto report = run_experiment(spec);
  emit(report.ndjson(), c.out);
  return report.ok ? 0 : 1;
}

int cmd_verify(const std::string& path, VertexId root, bool records, const Common& c) {
  const auto g = parse_graph(read_file(path));
  const auto engine = parse_engine(c.engine);
  std::string text;
  bool ok = true;
  std::optional<SeparatorResult> seq;
  if (engine != EngineChoice::Distributed) {
    seq = compute_separator(g, bfs_tree(g, root));
    text += serialize(*seq);
  }
  if (engine != EngineChoice::Sequential) {
    DistConfig cfg;
    cfg.backend = parse_backend(c.backend);
    cfg.sim.bit_budget = c.bit_budget;
    cfg.sim.max_rounds = c.max_rounds;
    const auto out = dist_compute_separator(g, root, cfg);
    if (seq) {
      const bool equal = serialize(out.result()) == serialize(*seq);
      text += std::string("engines ") + (equal ? "equal" : "differ") + '\n';
      ok = ok && equal;
    } else {
      text += serialize(out.result());
    }
    if (records) text += format_records(g, out.vertex);
    for (const auto& p : out.trace.phases) {
      text += "phase " + p.name + " honest " + std::to_string(p.honest_rounds) + " charged " +
              std::to_string(p.charged_rounds) + " max_bits " + std::to_string(p.max_bits) + '\n';
    }
    if (!seq) seq = out.result();
  }
  const auto balance = verify_separator(g, g.weights(), seq->path);
  text += "verify " + std::string(balance.pass ? "pass" : "fail") + " max_component " +
          std::to_string(balance.max_component) + " total " + std::to_string(balance.total) + '\n';
  emit(text, c.out);
  return ok && balance.pass ? 0 : 1;
}

int cmd_scale(const std::string& family, const std::vector<std::int32_t>& sizes, std::int32_t height, const Common& c) {
  ExperimentSpec spec;
  for (const auto s : sizes) {
    if (family == "grid") {
      spec.instances.push_back({"grid", {{"rows", s}, {"cols", s}}, c.seed, ""});
    } else if (family == "cylinder") {
      spec.instances.push_back({"cylinder", {{"height", height}, {"width", s}}, c.seed, ""});
    } else {
      throw Error(Errc::BadParams, "unknown family '" + family + "'");
    }
  }
  spec.engine = EngineChoice::Distributed;
  spec.backend = parse_backend(c.backend);
  spec.bit_budget = c.bit_budget;
  spec.max_rounds = c.max_rounds;
  const auto report = run_experiment(spec);
  const auto fit = scaling_report(scaling_rows(report.records));
  emit(report.ndjson() + fit.to_json().dump() + '\n', c.out);
  return report.ok && fit.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"planar separators, sequential and simulated CONGEST"};
  app.require_subcommand(1);

  Common gen_c, run_c, verify_c, scale_c;
  scale_c.backend = "charged";  // the fit is defined on charged rounds
  std::string kind, weights = "unit", spec_path, dot_dir, graph_path, family = "grid";
  std::vector<std::string> params;
  std::int32_t reps = 1, height = 4;
  VertexId root = 0;
  bool records = false;
  std::vector<std::int32_t> sizes{8, 16, 32, 64};

  auto* gen = app.add_subcommand("gen", "write a generated graph");
  gen->add_option("kind", kind, "generator")->required();
  gen->add_option("--param,-p", params, "key=value");
  gen->add_option("--weights", weights, "unit | random-proper | adversarial");
  gen_c.add_to(gen);

  auto* run = app.add_subcommand("run", "run an experiment and write NDJSON");
  run->add_option("--spec", spec_path, "experiment spec (JSON)");
  run->add_option("--kind", kind, "single generator instead of a spec");
  run->add_option("--param,-p", params, "key=value");
  run->add_option("--weights", weights, "unit | random-proper | adversarial");
  run->add_option("--repetitions", reps);
  run->add_option("--dot-dir", dot_dir, "write DOT renderings here");
  run_c.add_to(run);

  auto* verify = app.add_subcommand("verify", "compute and verify a separator for a graph file");
  verify->add_option("graph", graph_path)->required();
  verify->add_option("--root", root);
  verify->add_flag("--records", records, "print per-vertex output records");
  verify_c.add_to(verify);

  auto* scale = app.add_subcommand("scale", "fit charged rounds against D log^2 n");
  scale->add_option("--family", family, "grid | cylinder");
  scale->add_option("--sizes", sizes);
  scale->add_option("--height", height, "cylinder height");
  scale_c.add_to(scale);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*gen) return cmd_gen(kind, params, weights, gen_c);
    if (*run) return cmd_run(spec_path, kind, params, weights, reps, dot_dir, run_c);
    if (*verify) return cmd_verify(graph_path, root, records, verify_c);
    if (*scale) return cmd_scale(family, sizes, height, scale_c);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
