#pragma once

// Seeded instance generators. All of them emit rotation systems directly.

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "psep/separator.hpp"

namespace psep::gen {

using Rotation = std::vector<std::vector<VertexId>>;

inline void require(bool ok, const std::string& what) {
  if (!ok) throw Error(Errc::BadParams, what);
}

/// rows x cols grid, vertex (i, j) = i * cols + j.
inline EmbeddedPlanarGraph grid(std::int32_t rows, std::int32_t cols) {
  require(rows >= 1 && cols >= 1, "grid needs rows, cols >= 1");
  Rotation rot(rows * cols);
  for (std::int32_t i = 0; i < rows; ++i) {
    for (std::int32_t j = 0; j < cols; ++j) {
      auto& list = rot[i * cols + j];
      if (i > 0) list.push_back((i - 1) * cols + j);
      if (j + 1 < cols) list.push_back(i * cols + j + 1);
      if (i + 1 < rows) list.push_back((i + 1) * cols + j);
      if (j > 0) list.push_back(i * cols + j - 1);
    }
  }
  return build_embedding(rows * cols, rot);
}

/// Cylinder of `height` rings with `width` vertices each, capped by two apex
/// vertices (ids height*width and height*width+1). Diameter stays <= height + 1.
inline EmbeddedPlanarGraph cylinder(std::int32_t height, std::int32_t width) {
  require(height >= 1 && width >= 3, "cylinder needs height >= 1, width >= 3");
  const std::int32_t top = height * width;
  const std::int32_t bottom = top + 1;
  Rotation rot(height * width + 2);
  auto id = [&](std::int32_t i, std::int32_t j) { return i * width + ((j % width) + width) % width; };
  for (std::int32_t i = 0; i < height; ++i) {
    for (std::int32_t j = 0; j < width; ++j) {
      auto& list = rot[id(i, j)];
      list.push_back(i == 0 ? top : id(i - 1, j));
      list.push_back(id(i, j + 1));
      list.push_back(i + 1 == height ? bottom : id(i + 1, j));
      list.push_back(id(i, j - 1));
    }
  }
  for (std::int32_t j = width - 1; j >= 0; --j) rot[top].push_back(id(0, j));
  for (std::int32_t j = 0; j < width; ++j) rot[bottom].push_back(id(height - 1, j));
  return build_embedding(height * width + 2, rot);
}

/// Random triangulation: seeded point insertion into inner faces of the triangle
/// (0,1,2), followed by random edge flips that keep the outer face fixed.
inline EmbeddedPlanarGraph random_triangulation(std::int32_t n, std::uint64_t seed) {
  require(n >= 3, "random-triangulation needs n >= 3");
  std::mt19937_64 rng(seed);
  Rotation rot(n);
  rot[0] = {1, 2};
  rot[1] = {2, 0};
  rot[2] = {0, 1};
  // Inner faces as traversal triples (a -> b -> c); (0,1,2) is inner, (0,2,1) outer.
  std::vector<std::array<VertexId, 3>> inner{{0, 1, 2}};
  auto insert_after = [&](VertexId at, VertexId after, VertexId x) {
    auto& list = rot[at];
    list.insert(std::find(list.begin(), list.end(), after) + 1, x);
  };
  for (VertexId x = 3; x < n; ++x) {
    std::uniform_int_distribution<std::size_t> pick(0, inner.size() - 1);
    const std::size_t t = pick(rng);
    const auto [a, b, c] = inner[t];
    // Insert x inside face a->b->c: after a at b, after b at c, after c at a.
    insert_after(b, a, x);
    insert_after(c, b, x);
    insert_after(a, c, x);
    rot[x] = {a, c, b};
    inner[t] = {a, b, x};
    inner.push_back({b, c, x});
    inner.push_back({c, a, x});
  }
  auto next_of = [&](VertexId at, VertexId after) {
    const auto& list = rot[at];
    auto it = std::find(list.begin(), list.end(), after);
    return ++it == list.end() ? list.front() : *it;
  };
  auto adjacent = [&](VertexId a, VertexId b) {
    return std::find(rot[a].begin(), rot[a].end(), b) != rot[a].end();
  };
  auto is_outer = [&](VertexId a, VertexId b) {
    return (a < 3 && b < 3);  // the three outer edges
  };
  std::uniform_int_distribution<VertexId> vertex(0, n - 1);
  for (std::int32_t step = 0; step < n; ++step) {
    const VertexId a = vertex(rng);
    std::uniform_int_distribution<std::size_t> nb(0, rot[a].size() - 1);
    const VertexId b = rot[a][nb(rng)];
    if (is_outer(a, b) || rot[a].size() <= 3 || rot[b].size() <= 3) continue;
    const VertexId c = next_of(b, a);  // face a -> b -> c
    const VertexId d = next_of(a, b);  // face b -> a -> d
    if (c == d || adjacent(c, d)) continue;
    rot[a].erase(std::find(rot[a].begin(), rot[a].end(), b));
    rot[b].erase(std::find(rot[b].begin(), rot[b].end(), a));
    insert_after(d, a, c);
    insert_after(c, b, d);
  }
  return build_embedding(n, rot, {}, std::make_pair(VertexId{0}, VertexId{2}));
}

namespace detail {

// Non-crossing chords of a polygon with vertices 0..n-1.
inline std::vector<std::pair<VertexId, VertexId>> random_chords(std::int32_t n, std::int32_t count,
                                                                std::mt19937_64& rng) {
  std::vector<std::pair<VertexId, VertexId>> chords;
  if (n < 4) return chords;
  std::uniform_int_distribution<VertexId> pick(0, n - 1);
  const std::int32_t attempts = 50 * std::max(count, 1);
  for (std::int32_t i = 0; i < attempts && static_cast<std::int32_t>(chords.size()) < count; ++i) {
    VertexId a = pick(rng), b = pick(rng);
    if (a > b) std::swap(a, b);
    if (b - a < 2 || (a == 0 && b == n - 1)) continue;
    bool ok = true;
    for (auto [c, d] : chords) {
      if ((a == c && b == d) || (a < c && c < b && b < d) || (c < a && a < d && d < b)) {
        ok = false;
        break;
      }
    }
    if (ok) chords.emplace_back(a, b);
  }
  return chords;
}

// Rotation of a polygon 0..n-1 with chords: neighbours by increasing offset.
inline Rotation polygon_rotation(std::int32_t n, const std::vector<std::pair<VertexId, VertexId>>& chords) {
  Rotation rot(n);
  for (VertexId i = 0; i < n; ++i) {
    rot[i].push_back((i + 1) % n);
    rot[i].push_back((i + n - 1) % n);
  }
  for (auto [a, b] : chords) {
    rot[a].push_back(b);
    rot[b].push_back(a);
  }
  for (VertexId i = 0; i < n; ++i) {
    std::sort(rot[i].begin(), rot[i].end(),
              [&](VertexId x, VertexId y) { return (x - i + n) % n < (y - i + n) % n; });
  }
  return rot;
}

}  // namespace detail

/// Cycle C_n plus up to `chords` random non-crossing chords inside it.
inline EmbeddedPlanarGraph cycle_chords(std::int32_t n, std::int32_t chords, std::uint64_t seed) {
  require(n >= 3 && chords >= 0, "cycle-chords needs n >= 3, chords >= 0");
  std::mt19937_64 rng(seed);
  const auto list = detail::random_chords(n, chords, rng);
  return build_embedding(n, detail::polygon_rotation(n, list));
}

/// Hub vertex n-1 joined to every vertex of the cycle 0..n-2.
inline EmbeddedPlanarGraph wheel(std::int32_t n) {
  require(n >= 4, "wheel needs n >= 4");
  const std::int32_t rim = n - 1;
  Rotation rot = detail::polygon_rotation(rim, {});
  rot.emplace_back();
  for (VertexId i = 0; i < rim; ++i) {
    rot[i].insert(rot[i].begin() + 1, rim);
  }
  for (VertexId i = 0; i < rim; ++i) rot[rim].push_back(i);
  return build_embedding(n, rot);
}

/// Random tree of blocks glued at cut vertices: bridges and chorded cycles.
inline EmbeddedPlanarGraph blocks(std::int32_t n, std::uint64_t seed, std::int32_t max_block = 8) {
  require(n >= 2 && max_block >= 2, "blocks needs n >= 2, max_block >= 2");
  std::mt19937_64 rng(seed);
  Rotation rot(1);
  while (static_cast<std::int32_t>(rot.size()) < n) {
    const auto have = static_cast<std::int32_t>(rot.size());
    std::uniform_int_distribution<std::int32_t> size_pick(2, max_block);
    const std::int32_t size = std::min(size_pick(rng), n - have + 1);
    std::uniform_int_distribution<VertexId> at_pick(0, have - 1);
    const VertexId at = at_pick(rng);
    std::uniform_int_distribution<std::size_t> slot_pick(0, rot[at].size());
    const std::size_t slot = slot_pick(rng);
    // Block vertex 0 is `at`; block vertices 1.. are new.
    auto global = [&](VertexId local) { return local == 0 ? at : have + local - 1; };
    rot.resize(have + size - 1);
    Rotation local;
    if (size == 2) {
      local = {{1}, {0}};
    } else {
      std::uniform_int_distribution<std::int32_t> chord_pick(0, size - 3);
      local = detail::polygon_rotation(size, detail::random_chords(size, chord_pick(rng), rng));
    }
    std::vector<VertexId> run;
    for (VertexId x : local[0]) run.push_back(global(x));
    rot[at].insert(rot[at].begin() + static_cast<std::ptrdiff_t>(slot), run.begin(), run.end());
    for (VertexId l = 1; l < size; ++l) {
      for (VertexId x : local[l]) rot[global(l)].push_back(global(x));
    }
  }
  return build_embedding(n, rot);
}

inline EmbeddedPlanarGraph star(std::int32_t leaves) {
  require(leaves >= 1, "star needs at least one leaf");
  Rotation rot(leaves + 1);
  for (VertexId i = 1; i <= leaves; ++i) {
    rot[0].push_back(i);
    rot[i].push_back(0);
  }
  return build_embedding(leaves + 1, rot);
}

/// Two triangles sharing vertex 0.
inline EmbeddedPlanarGraph bowtie() {
  return build_embedding(5, {{1, 2, 3, 4}, {2, 0}, {0, 1}, {4, 0}, {0, 3}});
}

/// Identifies vertex 0 of a with vertex 0 of b; b's other vertices follow a's.
inline EmbeddedPlanarGraph glued(const EmbeddedPlanarGraph& a, const EmbeddedPlanarGraph& b) {
  const VertexId shift = a.n() - 1;
  auto map = [&](VertexId x) { return x == 0 ? 0 : x + shift; };
  Rotation rot(a.n() + b.n() - 1);
  for (VertexId v = 0; v < a.n(); ++v) {
    for (DartId d : a.rotation(v)) rot[v].push_back(a.head(d));
  }
  for (VertexId v = 0; v < b.n(); ++v) {
    for (DartId d : b.rotation(v)) rot[map(v)].push_back(map(b.head(d)));
  }
  return build_embedding(static_cast<VertexId>(rot.size()), rot);
}

/// Two random triangulations sharing one cut vertex.
inline EmbeddedPlanarGraph two_triangulations(std::int32_t each, std::uint64_t seed) {
  return glued(random_triangulation(each, seed), random_triangulation(each, seed + 1));
}

inline EmbeddedPlanarGraph path(std::int32_t n) {
  require(n >= 1, "path needs n >= 1");
  Rotation rot(n);
  for (VertexId i = 0; i + 1 < n; ++i) {
    rot[i].push_back(i + 1);
    rot[i + 1].push_back(i);
  }
  return build_embedding(n, rot);
}

struct PartitionedGraph {
  EmbeddedPlanarGraph graph;
  std::vector<std::int32_t> part_of;
};

/// Grid split into part_rows x part_cols rectangular parts.
inline PartitionedGraph two_level_parts(std::int32_t rows, std::int32_t cols, std::int32_t part_rows,
                                        std::int32_t part_cols) {
  require(part_rows >= 1 && part_cols >= 1 && part_rows <= rows && part_cols <= cols, "bad part counts");
  PartitionedGraph out{grid(rows, cols), std::vector<std::int32_t>(rows * cols)};
  for (std::int32_t i = 0; i < rows; ++i) {
    for (std::int32_t j = 0; j < cols; ++j) {
      const std::int32_t pi = i * part_rows / rows;
      const std::int32_t pj = j * part_cols / cols;
      out.part_of[i * cols + j] = pi * part_cols + pj;
    }
  }
  return out;
}

// ---- weights ----

inline std::vector<Weight> unit_weights(VertexId n) { return std::vector<Weight>(n, 1); }

/// Random weights in [0, K] that are 1/12-proper; unit weights if none found.
inline std::vector<Weight> random_proper_weights(VertexId n, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  const Weight cap = std::max<Weight>(1, n / 16);
  std::uniform_int_distribution<Weight> pick(0, cap);
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::vector<Weight> w(n);
    for (auto& x : w) x = pick(rng);
    const auto verdict = check_proper(w, {1, 12});
    if (verdict.proper && !verdict.degenerate_total) return w;
  }
  return unit_weights(n);
}

/// Vertex 0 holds 13/24 of the total weight.
inline std::vector<Weight> adversarial_weights(VertexId n) {
  std::vector<Weight> w(n, 11);
  w[0] = 13 * static_cast<Weight>(n - 1);
  return w;
}

}  // namespace psep::gen
