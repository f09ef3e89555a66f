#pragma once

// Line-based graph text format:
//
//   planar <n> <m>
//   rot <v> <neighbours in clockwise order>     (one line per vertex)
//   w <v> <weight>                              (only for weights != 1)
//   outer <tail> <head>                         (optional infinite-face dart)

#include <sstream>
#include <string>

#include "psep/planar_ops.hpp"

namespace psep {

inline std::string write_graph(const EmbeddedPlanarGraph& g) {
  std::ostringstream out;
  out << "planar " << g.n() << ' ' << g.m() << '\n';
  for (VertexId v = 0; v < g.n(); ++v) {
    out << "rot " << v;
    for (DartId d : g.rotation(v)) out << ' ' << g.head(d);
    out << '\n';
  }
  for (VertexId v = 0; v < g.n(); ++v) {
    if (g.weight(v) != 1) out << "w " << v << ' ' << g.weight(v) << '\n';
  }
  if (auto hint = g.outer_hint()) out << "outer " << g.tail(*hint) << ' ' << g.head(*hint) << '\n';
  return out.str();
}

inline EmbeddedPlanarGraph parse_graph(const std::string& text, GraphOptions options = {}) {
  std::istringstream in(text);
  std::string line;
  std::int64_t n = -1;
  std::int64_t m = -1;
  std::vector<std::vector<VertexId>> rotation;
  std::vector<Weight> weights;
  std::optional<std::pair<VertexId, VertexId>> outer;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& why) {
    throw Error(Errc::ParseError, "line " + std::to_string(line_no) + ": " + why);
  };
  auto vertex = [&](std::int64_t v) {
    if (v < 0 || v >= n) fail("vertex " + std::to_string(v) + " out of range");
    return static_cast<VertexId>(v);
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;
    if (tag == "planar") {
      if (n >= 0) fail("duplicate header");
      if (!(ls >> n >> m) || n < 0 || m < 0) fail("bad header");
      rotation.assign(n, {});
      weights.assign(n, 1);
      continue;
    }
    if (n < 0) fail("missing 'planar' header");
    if (tag == "rot") {
      std::int64_t v = 0;
      if (!(ls >> v)) fail("rot without vertex");
      auto& list = rotation[vertex(v)];
      if (!list.empty()) fail("duplicate rot line");
      std::int64_t h = 0;
      while (ls >> h) list.push_back(vertex(h));
      if (!ls.eof()) fail("bad neighbour");
    } else if (tag == "w") {
      std::int64_t v = 0;
      Weight w = 0;
      if (!(ls >> v >> w)) fail("bad weight line");
      weights[vertex(v)] = w;
    } else if (tag == "outer") {
      std::int64_t t = 0, h = 0;
      if (!(ls >> t >> h)) fail("bad outer line");
      outer = std::make_pair(vertex(t), vertex(h));
    } else {
      fail("unknown record '" + tag + "'");
    }
  }
  if (n < 0) throw Error(Errc::ParseError, "empty input");
  auto g = build_embedding(static_cast<VertexId>(n), rotation, std::move(weights), outer, options);
  if (g.m() != m) throw Error(Errc::ParseError, "header declares " + std::to_string(m) + " edges, found " + std::to_string(g.m()));
  return g;
}

}  // namespace psep
