#pragma once

// Embedded planar graphs given by a rotation system.
//
// Every edge e owns darts 2e and 2e+1, which are mutual reverses. The rotation
// of a vertex lists its outgoing darts in clockwise order. Faces are traced with
// succ(d) = the dart following rev(d) in the rotation at head(d).

#include <algorithm>
#include <compare>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "psep/error.hpp"

namespace psep {

using VertexId = std::int32_t;
using DartId = std::int32_t;
using EdgeId = std::int32_t;
using FaceId = std::int32_t;
using Weight = std::int64_t;

inline constexpr std::int32_t kNone = -1;

struct Dart {
  VertexId tail = kNone;
  VertexId head = kNone;
  std::int32_t copy = 0;
  bool is_virtual = false;
};

/// Lexicographic identity of a dart; the smallest key on a face names the face.
struct DartKey {
  VertexId tail = kNone;
  VertexId head = kNone;
  std::int32_t copy = 0;

  auto operator<=>(const DartKey&) const = default;
};

struct Face {
  FaceId id = kNone;
  DartKey key;
  std::vector<DartId> boundary;  // starts at the canonical dart, in traversal order

  std::size_t size() const noexcept { return boundary.size(); }
};

struct EmbeddingReport {
  std::int32_t n = 0;
  std::int32_t m = 0;
  std::int32_t f = 0;
  std::int32_t components = 0;
  std::int32_t euler_residual = 0;  // n - m + f - 2 * components (each component traced on its own sphere)
  bool connected = false;
};

struct GraphOptions {
  bool require_planar = true;
  bool require_connected = true;
};

inline constexpr DartId rev(DartId d) noexcept { return d ^ 1; }
inline constexpr EdgeId edge_of(DartId d) noexcept { return d >> 1; }

class EmbeddedPlanarGraph {
 public:
  EmbeddedPlanarGraph() = default;

  EmbeddedPlanarGraph(VertexId n, std::vector<Dart> darts, std::vector<std::vector<DartId>> rotation,
                      std::vector<Weight> weights, std::optional<DartId> outer_hint = std::nullopt,
                      GraphOptions options = {})
      : n_(n), darts_(std::move(darts)), rotation_(std::move(rotation)), weights_(std::move(weights)),
        outer_hint_(outer_hint) {
    check_structure();
    trace_faces();
    count_components();
    const auto report = validate();
    if (options.require_connected && !report.connected) {
      throw Error(Errc::NotConnected, "graph has " + std::to_string(report.components) + " components");
    }
    if (options.require_planar && report.euler_residual != 0) {
      throw Error(Errc::EulerViolation, "n - m + f residual " + std::to_string(report.euler_residual));
    }
    choose_infinite_face();
  }

  VertexId n() const noexcept { return n_; }
  EdgeId m() const noexcept { return static_cast<EdgeId>(darts_.size() / 2); }
  DartId num_darts() const noexcept { return static_cast<DartId>(darts_.size()); }
  FaceId num_faces() const noexcept { return static_cast<FaceId>(faces_.size()); }

  const Dart& dart(DartId d) const { return darts_[d]; }
  std::span<const Dart> darts() const noexcept { return darts_; }
  DartKey key(DartId d) const { return {darts_[d].tail, darts_[d].head, darts_[d].copy}; }
  VertexId tail(DartId d) const { return darts_[d].tail; }
  VertexId head(DartId d) const { return darts_[d].head; }
  bool is_virtual_edge(EdgeId e) const { return darts_[2 * e].is_virtual; }

  std::span<const DartId> rotation(VertexId v) const { return rotation_[v]; }
  const std::vector<std::vector<DartId>>& rotations() const noexcept { return rotation_; }
  std::int32_t degree(VertexId v) const { return static_cast<std::int32_t>(rotation_[v].size()); }
  std::int32_t position(DartId d) const { return pos_[d]; }

  DartId next_in_rotation(DartId d) const {
    const auto& rot = rotation_[darts_[d].tail];
    return rot[(pos_[d] + 1) % rot.size()];
  }
  DartId prev_in_rotation(DartId d) const {
    const auto& rot = rotation_[darts_[d].tail];
    return rot[(pos_[d] + rot.size() - 1) % rot.size()];
  }
  DartId face_succ(DartId d) const { return next_in_rotation(rev(d)); }

  Weight weight(VertexId v) const { return weights_[v]; }
  std::span<const Weight> weights() const noexcept { return weights_; }
  Weight total_weight() const { return std::accumulate(weights_.begin(), weights_.end(), Weight{0}); }

  const std::vector<Face>& faces() const noexcept { return faces_; }
  const Face& face(FaceId f) const { return faces_[f]; }
  FaceId face_of(DartId d) const { return face_of_[d]; }
  FaceId infinite_face() const noexcept { return infinite_face_; }
  std::optional<DartId> outer_hint() const noexcept { return outer_hint_; }

  /// Dart with the given identity, if present.
  std::optional<DartId> find_dart(VertexId tail, VertexId head, std::int32_t copy = 0) const {
    if (tail < 0 || tail >= n_) return std::nullopt;
    for (DartId d : rotation_[tail]) {
      if (darts_[d].head == head && darts_[d].copy == copy) return d;
    }
    return std::nullopt;
  }

  EmbeddingReport validate() const {
    EmbeddingReport r;
    r.n = n_;
    r.m = m();
    r.f = num_faces();
    r.components = components_;
    r.connected = components_ <= 1;
    r.euler_residual = r.n - r.m + r.f + isolated_faces_ - 2 * components_;
    return r;
  }

 private:
  void check_structure() {
    if (n_ < 0) throw Error(Errc::BadParams, "negative vertex count");
    if (darts_.size() % 2 != 0) throw Error(Errc::InconsistentRotation, "odd dart count");
    if (static_cast<VertexId>(rotation_.size()) != n_) {
      throw Error(Errc::InconsistentRotation, "rotation list count differs from n");
    }
    if (weights_.empty()) weights_.assign(n_, 1);
    if (static_cast<VertexId>(weights_.size()) != n_) throw Error(Errc::BadParams, "weight count differs from n");
    for (VertexId v = 0; v < n_; ++v) {
      if (weights_[v] < 0) throw Error(Errc::NegativeWeight, "vertex " + std::to_string(v));
    }
    for (DartId d = 0; d < num_darts(); d += 2) {
      const Dart& a = darts_[d];
      const Dart& b = darts_[d + 1];
      if (a.tail != b.head || a.head != b.tail || a.copy != b.copy || a.is_virtual != b.is_virtual) {
        throw Error(Errc::InconsistentRotation, "dart " + std::to_string(d) + " has no matching reverse");
      }
      if (a.tail == a.head) throw Error(Errc::InconsistentRotation, "self-loop at " + std::to_string(a.tail));
      if (a.tail < 0 || a.tail >= n_ || a.head < 0 || a.head >= n_) {
        throw Error(Errc::InconsistentRotation, "dart endpoint out of range");
      }
    }
    pos_.assign(darts_.size(), kNone);
    for (VertexId v = 0; v < n_; ++v) {
      for (std::size_t i = 0; i < rotation_[v].size(); ++i) {
        const DartId d = rotation_[v][i];
        if (d < 0 || d >= num_darts() || darts_[d].tail != v || pos_[d] != kNone) {
          throw Error(Errc::InconsistentRotation, "bad dart in rotation of vertex " + std::to_string(v));
        }
        pos_[d] = static_cast<std::int32_t>(i);
      }
    }
    for (DartId d = 0; d < num_darts(); ++d) {
      if (pos_[d] == kNone) throw Error(Errc::InconsistentRotation, "dart " + std::to_string(d) + " not in any rotation");
    }
    // Identity uniqueness; parallel darts are tolerated only next to virtual copies.
    std::vector<DartId> order(darts_.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](DartId x, DartId y) { return key(x) < key(y); });
    for (std::size_t i = 1; i < order.size(); ++i) {
      const Dart& p = darts_[order[i - 1]];
      const Dart& q = darts_[order[i]];
      if (p.tail == q.tail && p.head == q.head) {
        if (p.copy == q.copy) throw Error(Errc::InconsistentRotation, "duplicate dart identity");
        if (!p.is_virtual && !q.is_virtual) throw Error(Errc::InconsistentRotation, "parallel real edges");
      }
    }
  }

  void trace_faces() {
    face_of_.assign(darts_.size(), kNone);
    std::vector<Face> traced;
    for (DartId start = 0; start < num_darts(); ++start) {
      if (face_of_[start] != kNone) continue;
      Face face;
      DartId d = start;
      do {
        face_of_[d] = 0;  // visited marker, replaced below
        face.boundary.push_back(d);
        d = face_succ(d);
      } while (d != start);
      auto best = std::min_element(face.boundary.begin(), face.boundary.end(),
                                   [&](DartId x, DartId y) { return key(x) < key(y); });
      std::rotate(face.boundary.begin(), best, face.boundary.end());
      face.key = key(face.boundary.front());
      traced.push_back(std::move(face));
    }
    std::sort(traced.begin(), traced.end(), [](const Face& a, const Face& b) { return a.key < b.key; });
    for (FaceId f = 0; f < static_cast<FaceId>(traced.size()); ++f) {
      traced[f].id = f;
      for (DartId d : traced[f].boundary) face_of_[d] = f;
    }
    faces_ = std::move(traced);
  }

  void count_components() {
    std::vector<char> seen(n_, 0);
    std::vector<VertexId> stack;
    components_ = 0;
    for (VertexId s = 0; s < n_; ++s) {
      if (seen[s]) continue;
      ++components_;
      seen[s] = 1;
      stack.push_back(s);
      while (!stack.empty()) {
        const VertexId v = stack.back();
        stack.pop_back();
        for (DartId d : rotation_[v]) {
          const VertexId w = darts_[d].head;
          if (!seen[w]) {
            seen[w] = 1;
            stack.push_back(w);
          }
        }
      }
    }
    // An isolated vertex has no darts; Euler still counts the face around it.
    for (VertexId v = 0; v < n_; ++v) {
      if (rotation_[v].empty()) isolated_faces_++;
    }
  }

  void choose_infinite_face() {
    if (faces_.empty()) return;
    if (outer_hint_) {
      if (*outer_hint_ < 0 || *outer_hint_ >= num_darts()) throw Error(Errc::BadParams, "outer hint is not a dart");
      infinite_face_ = face_of_[*outer_hint_];
      return;
    }
    infinite_face_ = 0;
    for (FaceId f = 1; f < num_faces(); ++f) {
      if (faces_[f].size() > faces_[infinite_face_].size()) infinite_face_ = f;
    }
  }

  VertexId n_ = 0;
  std::vector<Dart> darts_;
  std::vector<std::vector<DartId>> rotation_;
  std::vector<Weight> weights_;
  std::optional<DartId> outer_hint_;
  std::vector<std::int32_t> pos_;
  std::vector<Face> faces_;
  std::vector<FaceId> face_of_;
  FaceId infinite_face_ = kNone;
  std::int32_t components_ = 0;
  std::int32_t isolated_faces_ = 0;
};

}  // namespace psep
