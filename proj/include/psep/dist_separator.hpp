#pragma once

// Distributed separator as vertex programs on the CONGEST simulator.
//
// Pipeline: BFS tree -> face ids -> cotree flags -> face weights -> root face
// election -> dual depths and subtree sums -> balanced/critical election ->
// endpoint selection -> path marking by a subtree sum on T.
//
// Faces are named by the encoded key of their smallest dart, so "largest face id"
// and "largest key" coincide with the sequential engine's canonical order.

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "psep/congest.hpp"
#include "psep/separator.hpp"

namespace psep {

/// Order-preserving integer encoding of dart keys; 0 means "none".
struct KeyCodec {
  std::uint64_t n = 1;
  std::uint64_t radix = 1;  // copies per vertex pair

  std::uint64_t encode(VertexId t, VertexId h, std::int32_t c) const {
    return (static_cast<std::uint64_t>(t) * n + static_cast<std::uint64_t>(h)) * radix + static_cast<std::uint64_t>(c) + 1;
  }
  DartKey decode(std::uint64_t k) const {
    k -= 1;
    DartKey key;
    key.copy = static_cast<std::int32_t>(k % radix);
    k /= radix;
    key.head = static_cast<VertexId>(k % n);
    key.tail = static_cast<VertexId>(k / n);
    return key;
  }
  std::uint64_t limit() const { return n * n * radix + 1; }
};

struct LocalDart {
  DartId id = kNone;  // channel handle
  VertexId head = kNone;
  std::int32_t copy = 0;
  bool is_virtual = false;
};

/// What a vertex knows before the algorithm starts.
struct LocalKnowledge {
  VertexId id = kNone;
  Weight weight = 0;
  VertexId root_id = kNone;  // BFS root of its part
  std::int32_t part = 0;
  KeyCodec codec;
  std::int32_t bit_budget = 0;
  std::vector<LocalDart> darts;  // rotation order
};

namespace dist {

enum Tag : std::uint8_t {
  kBfs = 1, kChild, kRing, kOpp, kSumToken, kSumResult, kDepth, kDiscover,
  kToken, kReport, kResult, kPos, kProbe, kEndpoint, kEndpointBack
};

struct DartState {
  bool tree = false;     // edge in T
  bool t_child = false;  // edge to a child in T
  std::uint64_t face = 0;
  std::uint64_t opp = 0;  // face on the other side
  bool leader = false;    // canonical dart of its face
  Weight contribution = 0;
  Weight face_weight = 0;
  std::int64_t face_depth = -1;
  std::uint64_t parent_face = 0;
  bool parent_dart = false;
  bool origin = false;  // where the face's ring protocols start
  Weight child_sum = 0;
  bool child_ready = false;
  Weight subtree = 0;
  bool subtree_known = false;
  bool holding = false;
  Weight acc = 0;
  std::int32_t pos = -1;
  bool start = false;  // darts[0] of the chosen face
  bool path = false;
};

struct VertexState {
  LocalKnowledge k;
  std::map<DartId, std::int32_t> index;
  std::vector<DartState> d;
  SendQueue queue;

  // BFS
  bool reached = false;
  std::int32_t parent = -1;
  std::int64_t depth = -1;

  // global values learned by aggregation
  Weight total = 0;
  Weight max_weight = 0;
  std::uint64_t root_face = 0;
  std::uint64_t chosen = 0;  // face picked by the detection
  std::int64_t chosen_depth = -1;
  SeparatorCase kind = SeparatorCase::Balanced;

  // critical search (meaningful at the host of the start dart)
  std::int32_t ring_size = 0;
  std::int32_t lo = 0, hi = -1, ans = -1, probing = -1;
  std::vector<std::pair<std::int32_t, Weight>> probes;
  Weight interior = 0;

  // output
  bool is_u = false;
  bool is_v = false;
  VertexId other = kNone;
  bool closing_virtual = false;
  DartId closing_dart = kNone;
  DartKey slot;
  Weight mark = 0;
  std::int32_t heard = 0;
  bool sent_up = false;

  std::int32_t deg() const { return static_cast<std::int32_t>(k.darts.size()); }
  std::int32_t local(DartId id) const {
    auto it = index.find(id);
    if (it == index.end()) throw Error(Errc::InvariantViolation, "message on an unknown dart");
    return it->second;
  }
  std::int32_t next(std::int32_t i) const { return (i + 1) % deg(); }
  std::int32_t prev(std::int32_t i) const { return (i + deg() - 1) % deg(); }
  DartId id_of(std::int32_t i) const { return k.darts[i].id; }
  std::uint64_t own_key(std::int32_t i) const { return k.codec.encode(k.id, k.darts[i].head, k.darts[i].copy); }
  bool cotree(std::int32_t i) const { return !d[i].tree; }
  bool child_dart(std::int32_t i) const { return cotree(i) && !d[i].parent_dart; }
  Weight chosen_weight() const {
    std::uint64_t best = 0;
    for (const auto& x : d) best = best == 0 ? x.face : std::min(best, x.face);
    return best == chosen ? k.weight : 0;
  }
  void check_width(Weight x, const char* what) const {
    if (static_cast<std::int32_t>(std::bit_width(static_cast<std::uint64_t>(x))) + 4 > k.bit_budget) {
      throw Error(Errc::OperatorOverflow, std::string(what) + " " + std::to_string(x) + " exceeds the bit budget");
    }
  }
};

}  // namespace dist

struct DistConfig {
  PaBackend backend = PaBackend::Honest;
  double c_pa = 1.0;
  double exponent = 2.0;
  SimConfig sim;
};

struct DistVertexOutput {
  bool is_u = false;
  bool is_v = false;
  std::vector<DartId> path_darts;  // rotation order
  VertexId other = kNone;          // the other endpoint (endpoints only)
  bool closing_virtual = false;
  DartKey slot;  // virtual closing edge goes right after this dart
  Weight interior = 0;
};

struct DistPartSummary {
  std::int32_t part = 0;
  SeparatorCase kind = SeparatorCase::Balanced;
  DartKey face_key;
  Weight total = 0;
  std::int32_t probes = 0;
  SeparatorResult result;  // assembled from the vertex outputs
};

struct DistSeparatorOutput {
  std::vector<DistVertexOutput> vertex;
  std::vector<DistPartSummary> parts;
  RoundTrace trace;
  std::int32_t diameter = 0;  // eccentricity of the BFS root(s)
  std::int32_t virtual_edges_added = 0;

  const SeparatorResult& result() const { return parts.front().result; }
};

/// Runs the pipeline on a bi-connected graph (or a disjoint union of them, one per part).
class DistEngine {
 public:
  DistEngine(const EmbeddedPlanarGraph& g, Partition parts, std::vector<VertexId> root_of, DistConfig cfg)
      : g_(&g), parts_(std::move(parts)), cfg_(cfg) {
    part_forest(g, parts_);  // validates connectivity of parts
    std::int32_t radix = 1;
    for (const auto& dart : g.darts()) radix = std::max(radix, dart.copy + 1);
    const KeyCodec codec{static_cast<std::uint64_t>(std::max<VertexId>(g.n(), 1)), static_cast<std::uint64_t>(radix)};
    budget_ = cfg_.sim.bit_budget > 0 ? cfg_.sim.bit_budget : default_bit_budget(g.n());
    cfg_.sim.bit_budget = budget_;
    st_.resize(g.n());
    for (VertexId v = 0; v < g.n(); ++v) {
      auto& s = st_[v];
      s.k.id = v;
      s.k.weight = g.weight(v);
      s.k.root_id = root_of.at(v);
      s.k.part = parts_.part_of[v];
      s.k.codec = codec;
      s.k.bit_budget = budget_;
      for (DartId d : g.rotation(v)) {
        s.index[d] = static_cast<std::int32_t>(s.k.darts.size());
        s.k.darts.push_back({d, g.head(d), g.dart(d).copy, g.dart(d).is_virtual});
      }
      s.d.assign(s.k.darts.size(), {});
    }
  }

  const std::vector<dist::VertexState>& states() const { return st_; }
  const RoundTrace& trace() const { return trace_; }
  std::int32_t diameter() const { return diameter_; }

  void bfs();
  void learn_faces();
  void learn_cotree();
  void check_weights();
  void face_weights();
  void elect_root();
  void dual_subtree_sums();
  void detect();
  void mark();
  void run_all() {
    bfs();
    learn_faces();
    learn_cotree();
    check_weights();
    face_weights();
    elect_root();
    dual_subtree_sums();
    detect();
    mark();
  }

  /// Charges a step that was executed centrally (graph augmentation).
  void charge_central(const std::string& name, std::int64_t calls) {
    PhaseRecord rec;
    rec.name = name;
    rec.pa_calls = calls;
    rec.charged_rounds = calls * charged_pa_rounds(pa_config(), g_->n());
    trace_.add(rec);
  }

  std::vector<DistVertexOutput> outputs() const;
  std::vector<DistPartSummary> summaries() const;

 private:
  PaConfig pa_config() const {
    PaConfig pc;
    pc.backend = cfg_.backend;
    pc.c_pa = cfg_.c_pa;
    pc.exponent = cfg_.exponent;
    pc.diameter = std::max(diameter_, 1);
    pc.sim = cfg_.sim;
    return pc;
  }

  // Ring protocols stand in for part-wise aggregation over faces.
  void record_ring_phase(PhaseRecord rec, std::int64_t calls) {
    rec.pa_calls = calls;
    if (cfg_.backend == PaBackend::Charged) rec.charged_rounds = calls * charged_pa_rounds(pa_config(), g_->n());
    rec.interval = rec.honest_rounds;
    trace_.add(rec);
  }
  void record_local_phase(PhaseRecord rec) {
    rec.interval = rec.honest_rounds;
    trace_.add(rec);
  }

  template <class Step>
  PhaseRecord sim(Step&& step, const std::string& name) {
    return run(*g_, st_, std::forward<Step>(step), cfg_.sim, name);
  }

  std::vector<std::uint64_t> aggregate(const std::vector<std::uint64_t>& in, AggOp op, const std::string& name) {
    auto res = pa_aggregate(*g_, parts_, in, op, pa_config(), name);
    res.record.interval = res.record.honest_rounds;
    trace_.add(res.record);
    return res.value;
  }

  const EmbeddedPlanarGraph* g_;
  Partition parts_;
  DistConfig cfg_;
  std::int32_t budget_ = 0;
  std::int32_t diameter_ = 0;
  std::vector<dist::VertexState> st_;
  RoundTrace trace_;
};

// ---- phases ----

inline void DistEngine::bfs() {
  using namespace dist;
  auto step = [](std::int64_t round, VertexState& s, std::span<const Inbound> in, Outbox& out) {
    std::int32_t best = -1;
    std::uint64_t depth_in = 0;
    std::vector<char> from(s.deg(), 0);
    for (const auto& m : in) {
      const std::int32_t i = s.local(m.dart);
      if (m.msg.tag == kBfs) {
        if (static_cast<VertexId>(m.msg[0]) != s.k.root_id) {
          throw Error(Errc::ConflictingRoot, "vertex " + std::to_string(s.k.id) + " expects root " +
                                                 std::to_string(s.k.root_id) + ", heard root " +
                                                 std::to_string(m.msg[0]));
        }
        from[i] = 1;
        if (best < 0 || s.k.darts[i].head < s.k.darts[best].head) best = i;
        depth_in = m.msg[1];
      } else if (m.msg.tag == kChild) {
        s.d[i].tree = true;
        s.d[i].t_child = true;
      }
    }
    const bool is_root = s.k.id == s.k.root_id;
    if (!s.reached && ((is_root && round == 0) || (!is_root && best >= 0))) {
      s.reached = true;
      s.depth = is_root ? 0 : static_cast<std::int64_t>(depth_in) + 1;
      if (!is_root) {
        s.parent = best;
        s.d[best].tree = true;
        out.send(s.id_of(best), Message(kChild, {}));
      }
      for (std::int32_t i = 0; i < s.deg(); ++i) {
        if (!s.k.darts[i].is_virtual && !from[i]) {
          out.send(s.id_of(i), Message(kBfs, {static_cast<std::uint64_t>(s.k.root_id), static_cast<std::uint64_t>(s.depth)}));
        }
      }
    }
    return true;
  };
  record_local_phase(sim(step, "bfs"));
  diameter_ = 0;
  for (const auto& s : st_) {
    if (!s.reached) throw Error(Errc::NotConnected, "vertex " + std::to_string(s.k.id) + " not reached by BFS");
    diameter_ = std::max<std::int32_t>(diameter_, static_cast<std::int32_t>(s.depth));
  }
}

inline void DistEngine::learn_faces() {
  using namespace dist;
  // Each dart forwards the smallest key it has seen to its successor on the face.
  auto ring = [](std::int64_t round, VertexState& s, std::span<const Inbound> in, Outbox& out) {
    if (round == 0) {
      for (std::int32_t i = 0; i < s.deg(); ++i) {
        s.d[i].face = s.own_key(i);
        out.send(s.id_of(i), Message(kRing, {s.d[i].face}));
      }
    }
    for (const auto& m : in) {
      const std::int32_t nx = s.next(s.local(m.dart));
      if (m.msg[0] < s.d[nx].face) {
        s.d[nx].face = m.msg[0];
        out.send(s.id_of(nx), Message(kRing, {m.msg[0]}));
      }
    }
    return true;
  };
  PhaseRecord rec = sim(ring, "learn_faces");
  auto opp = [](std::int64_t round, VertexState& s, std::span<const Inbound> in, Outbox& out) {
    if (round == 0) {
      for (std::int32_t i = 0; i < s.deg(); ++i) {
        s.d[i].leader = s.d[i].face == s.own_key(i);
        out.send(s.id_of(i), Message(kOpp, {s.d[i].face}));
      }
    }
    for (const auto& m : in) s.d[s.local(m.dart)].opp = m.msg[0];
    return true;
  };
  const PhaseRecord rec2 = sim(opp, "learn_faces");
  rec.honest_rounds += rec2.honest_rounds;
  rec.messages += rec2.messages;
  rec.virtual_messages += rec2.virtual_messages;
  rec.max_bits = std::max(rec.max_bits, rec2.max_bits);
  record_ring_phase(rec, 1);
}

inline void DistEngine::learn_cotree() {
  // T* = E \ T: each vertex already holds its tree flags, nothing to send.
  PhaseRecord rec;
  rec.name = "learn_cotree";
  record_local_phase(rec);
}

inline void DistEngine::check_weights() {
  std::vector<std::uint64_t> w(g_->n());
  for (VertexId v = 0; v < g_->n(); ++v) {
    if (st_[v].k.weight < 0) throw Error(Errc::NegativeWeight, "vertex " + std::to_string(v));
    w[v] = static_cast<std::uint64_t>(st_[v].k.weight);
  }
  const auto sum = aggregate(w, AggOp::Sum, "total_weight");
  const auto mx = aggregate(w, AggOp::Max, "max_weight");
  for (VertexId v = 0; v < g_->n(); ++v) {
    auto& s = st_[v];
    s.total = static_cast<Weight>(sum[v]);
    s.max_weight = static_cast<Weight>(mx[v]);
    if (s.total == 0) throw Error(Errc::DegenerateTotal, "total vertex weight is zero in part " + std::to_string(s.k.part));
    if (12 * s.max_weight > s.total) {
      throw Error(Errc::NotProper, "max weight " + std::to_string(s.max_weight) + " exceeds 1/12 of " +
                                       std::to_string(s.total) + " in part " + std::to_string(s.k.part));
    }
  }
}

inline void DistEngine::face_weights() {
  using namespace dist;
  for (auto& s : st_) {
    std::int32_t pick = 0;
    for (std::int32_t i = 1; i < s.deg(); ++i) {
      if (s.d[i].face < s.d[pick].face) pick = i;
    }
    for (std::int32_t i = 0; i < s.deg(); ++i) s.d[i].contribution = i == pick ? s.k.weight : 0;
  }
  // A token collects contributions around each face, then a second pass spreads the sum.
  auto step = [](std::int64_t round, VertexState& s, std::span<const Inbound> in, Outbox& out) {
    if (round == 0) {
      for (std::int32_t i = 0; i < s.deg(); ++i) {
        if (s.d[i].leader) out.send(s.id_of(i), Message(kSumToken, {static_cast<std::uint64_t>(s.d[i].contribution)}));
      }
    }
    for (const auto& m : in) {
      const std::int32_t nx = s.next(s.local(m.dart));
      const auto value = static_cast<Weight>(m.msg[0]);
      if (m.msg.tag == kSumToken) {
        if (s.d[nx].leader) {
          s.d[nx].face_weight = value;
          out.send(s.id_of(nx), Message(kSumResult, {m.msg[0]}));
        } else {
          const Weight acc = value + s.d[nx].contribution;
          s.check_width(acc, "face weight");
          out.send(s.id_of(nx), Message(kSumToken, {static_cast<std::uint64_t>(acc)}));
        }
      } else if (!s.d[nx].leader) {
        s.d[nx].face_weight = value;
        out.send(s.id_of(nx), Message(kSumResult, {m.msg[0]}));
      }
    }
    return true;
  };
  record_ring_phase(sim(step, "face_weights"), 1);
}

inline void DistEngine::elect_root() {
  std::vector<std::uint64_t> in(g_->n(), 0);
  for (VertexId v = 0; v < g_->n(); ++v) {
    for (const auto& x : st_[v].d) in[v] = std::max(in[v], x.face);
  }
  const auto root = aggregate(in, AggOp::Max, "root_election");
  for (VertexId v = 0; v < g_->n(); ++v) st_[v].root_face = root[v];
}

inline void DistEngine::dual_subtree_sums() {
  using namespace dist;
  // Depths and parents flow down T*: around each face, then across to its children.
  auto rooting = [](std::int64_t round, VertexState& s, std::span<const Inbound> in, Outbox& out) {
    auto discover = [&](std::int32_t i) {
      if (s.child_dart(i)) s.queue.push(s.id_of(i), Message(kDiscover, {static_cast<std::uint64_t>(s.d[i].face_depth + 1)}));
    };
    if (round == 0) {
      for (std::int32_t i = 0; i < s.deg(); ++i) {
        if (s.d[i].leader && s.d[i].face == s.root_face) {
          s.d[i].face_depth = 0;
          s.d[i].origin = true;
          s.queue.push(s.id_of(i), Message(kDepth, {0, 0}));
          discover(i);
        }
      }
    }
    for (const auto& m : in) {
      const std::int32_t r = s.local(m.dart);
      if (m.msg.tag == kDiscover) {
        auto& x = s.d[r];
        x.parent_dart = true;
        x.origin = true;
        x.face_depth = static_cast<std::int64_t>(m.msg[0]);
        x.parent_face = x.opp;
        s.queue.push(s.id_of(r), Message(kDepth, {m.msg[0], x.parent_face}));
        continue;
      }
      const std::int32_t nx = s.next(r);
      if (s.d[nx].face_depth >= 0) continue;  // back at the origin
      s.d[nx].face_depth = static_cast<std::int64_t>(m.msg[0]);
      s.d[nx].parent_face = m.msg[1];
      discover(nx);
      s.queue.push(s.id_of(nx), Message(kDepth, {m.msg[0], m.msg[1]}));
    }
    s.queue.flush(out);
    return s.queue.empty();
  };
  PhaseRecord rec = sim(rooting, "dual_subtree_sums");

  // Subtree sums flow up: a token circles each face, waiting at every child dart for
  // the child's report, then the sum is spread around the face and reported upwards.
  auto sums = [](std::int64_t round, VertexState& s, std::span<const Inbound> in, Outbox& out) {
    auto complete = [&](std::int32_t i, Weight total) {
      s.d[i].subtree = total;
      s.d[i].subtree_known = true;
      s.queue.push(s.id_of(i), Message(kResult, {static_cast<std::uint64_t>(total)}));
      if (s.d[i].parent_dart) s.queue.push(s.id_of(i), Message(kReport, {static_cast<std::uint64_t>(total)}));
    };
    if (round == 0) {
      for (auto& x : s.d) {
        if (x.origin) {
          x.holding = true;
          x.acc = x.face_weight;
        }
      }
    }
    for (const auto& m : in) {
      const std::int32_t r = s.local(m.dart);
      const auto value = static_cast<Weight>(m.msg[0]);
      if (m.msg.tag == kReport) {
        s.d[r].child_sum = value;
        s.d[r].child_ready = true;
        continue;
      }
      const std::int32_t nx = s.next(r);
      if (m.msg.tag == kToken) {
        if (s.d[nx].origin) {
          complete(nx, value);
        } else {
          s.d[nx].holding = true;
          s.d[nx].acc = value;
        }
      } else if (!s.d[nx].origin) {
        s.d[nx].subtree = value;
        s.d[nx].subtree_known = true;
        s.queue.push(s.id_of(nx), Message(kResult, {m.msg[0]}));
      }
    }
    for (std::int32_t i = 0; i < s.deg(); ++i) {
      auto& x = s.d[i];
      if (!x.holding) continue;
      if (s.child_dart(i) && !x.child_ready) continue;
      x.holding = false;
      x.acc += s.child_dart(i) ? x.child_sum : 0;
      s.check_width(x.acc, "subtree sum");
      s.queue.push(s.id_of(i), Message(kToken, {static_cast<std::uint64_t>(x.acc)}));
    }
    s.queue.flush(out);
    return s.queue.empty();
  };
  const PhaseRecord rec2 = sim(sums, "dual_subtree_sums");
  rec.honest_rounds += rec2.honest_rounds;
  rec.messages += rec2.messages;
  rec.virtual_messages += rec2.virtual_messages;
  rec.max_bits = std::max(rec.max_bits, rec2.max_bits);
  record_ring_phase(rec, 2);
  for (const auto& s : st_) {
    for (const auto& x : s.d) {
      if (!x.subtree_known) throw Error(Errc::InvariantViolation, "dual subtree sum incomplete at " + std::to_string(s.k.id));
      if (x.face == s.root_face && x.subtree != s.total) {
        throw Error(Errc::InvariantViolation, "root face subtree differs from the total weight");
      }
    }
  }
}

inline void DistEngine::detect() {
  const VertexId n = g_->n();
  std::vector<std::uint64_t> balanced(n, 0), critical(n, 0);
  for (VertexId v = 0; v < n; ++v) {
    const auto& s = st_[v];
    const std::uint64_t span = s.k.codec.limit();
    for (const auto& x : s.d) {
      if (is_balanced_weight(x.subtree, s.total)) balanced[v] = std::max(balanced[v], x.face);
      if (4 * x.subtree > 3 * s.total) {
        critical[v] = std::max(critical[v], static_cast<std::uint64_t>(x.face_depth) * span + x.face);
      }
    }
  }
  const auto bal = aggregate(balanced, AggOp::Max, "detect_balanced");
  std::vector<std::uint64_t> crit(n, 0);
  bool need_critical = false;
  for (VertexId v = 0; v < n; ++v) need_critical = need_critical || bal[v] == 0;
  if (need_critical) crit = aggregate(critical, AggOp::Max, "detect_critical");

  std::vector<std::uint64_t> has_child(n, 0);
  for (VertexId v = 0; v < n; ++v) {
    auto& s = st_[v];
    if (bal[v] != 0) {
      s.kind = SeparatorCase::Balanced;
      s.chosen = bal[v];
    } else {
      if (crit[v] == 0) throw Error(Errc::InvariantViolation, "no heavy face found");
      const std::uint64_t span = s.k.codec.limit();
      s.kind = SeparatorCase::Critical;
      s.chosen = crit[v] % span;
      s.chosen_depth = static_cast<std::int64_t>(crit[v] / span);
      for (std::int32_t i = 0; i < s.deg(); ++i) {
        if (s.d[i].face == s.chosen && s.child_dart(i)) has_child[v] = 1;
      }
    }
  }
  if (need_critical) {
    const auto any = aggregate(has_child, AggOp::Or, "detect_children");
    for (VertexId v = 0; v < n; ++v) {
      auto& s = st_[v];
      if (s.kind == SeparatorCase::Critical && any[v] == 0 && s.chosen_depth > 0) s.kind = SeparatorCase::LeafCritical;
    }
  }
}

inline void DistEngine::mark() {
  using namespace dist;
  // Endpoints of the dual parent edge (balanced and leaf cases) are found locally.
  for (auto& s : st_) {
    if (s.kind == SeparatorCase::Critical) continue;
    for (std::int32_t i = 0; i < s.deg(); ++i) {
      const auto& x = s.d[i];
      const bool tail_side = x.face == s.chosen && x.parent_dart;
      const bool head_side = x.opp == s.chosen && s.child_dart(i);
      if (!tail_side && !head_side) continue;
      s.other = s.k.darts[i].head;
      if (s.other == s.k.id) throw Error(Errc::InvariantViolation, "closing edge endpoints coincide");
      (s.k.id < s.other ? s.is_u : s.is_v) = true;
      s.closing_dart = s.id_of(i);
      s.closing_virtual = s.k.darts[i].is_virtual;
      const std::int32_t p = s.prev(i);
      s.slot = {s.k.id, s.k.darts[p].head, s.k.darts[p].copy};
      s.interior = tail_side ? x.subtree : x.child_sum;
    }
  }

  bool any_critical = false;
  for (const auto& s : st_) any_critical = any_critical || s.kind == SeparatorCase::Critical;
  if (any_critical) {
    for (auto& s : st_) {
      if (s.kind != SeparatorCase::Critical) continue;
      for (std::int32_t i = 0; i < s.deg(); ++i) {
        auto& x = s.d[i];
        if (x.face == s.chosen && (x.parent_dart || (s.chosen_depth == 0 && x.leader))) {
          x.start = true;
          x.pos = 0;
        }
      }
    }
    // Positions around the chosen face, counted from the start dart.
    auto positions = [](std::int64_t round, VertexState& s, std::span<const Inbound> in, Outbox& out) {
      if (round == 0) {
        for (std::int32_t i = 0; i < s.deg(); ++i) {
          if (s.d[i].start) out.send(s.id_of(i), Message(kPos, {1}));
        }
      }
      for (const auto& m : in) {
        const std::int32_t nx = s.next(s.local(m.dart));
        const auto t = static_cast<std::int32_t>(m.msg[0]);
        if (s.d[nx].start) {
          s.ring_size = t;
        } else {
          s.d[nx].pos = t;
          out.send(s.id_of(nx), Message(kPos, {m.msg[0] + 1}));
        }
      }
      return true;
    };
    record_ring_phase(sim(positions, "critical_positions"), 1);

    // Binary search for the first boundary index whose enclosed weight is light.
    auto probe = [](std::int64_t round, VertexState& s, std::span<const Inbound> in, Outbox& out) {
      auto start_dart = [&]() {
        for (std::int32_t i = 0; i < s.deg(); ++i) {
          if (s.d[i].start) return i;
        }
        return -1;
      };
      auto launch = [&](std::int32_t i) {
        s.probing = (s.lo + s.hi) / 2;
        out.send(s.id_of(i), Message(kProbe, {static_cast<std::uint64_t>(s.probing), 0}));
      };
      if (round == 0) {
        const std::int32_t i = start_dart();
        if (i >= 0) {
          if (s.ring_size < 4) throw Error(Errc::InvariantViolation, "no balanced triangle inside the critical face");
          s.lo = 2;
          s.hi = s.ring_size - 2;
          launch(i);
        }
      }
      for (const auto& m : in) {
        const std::int32_t nx = s.next(s.local(m.dart));
        const auto idx = static_cast<std::int32_t>(m.msg[0]);
        auto acc = static_cast<Weight>(m.msg[1]);
        if (s.d[nx].start) {
          acc += s.chosen_weight();
          s.probes.emplace_back(idx, acc);
          if (4 * acc <= 3 * s.total) {
            s.ans = idx;
            s.interior = acc;
            s.hi = idx - 1;
          } else {
            s.lo = idx + 1;
          }
          if (s.lo <= s.hi) {
            launch(nx);
          } else if (s.ans < 0) {
            throw Error(Errc::InvariantViolation, "no balanced triangle inside the critical face");
          }
          continue;
        }
        const std::int32_t t = s.d[nx].pos;
        if (t >= idx && s.child_dart(nx)) acc += s.d[nx].child_sum;
        if (t >= idx + 1) acc += s.chosen_weight();
        s.check_width(acc, "probe");
        out.send(s.id_of(nx), Message(kProbe, {m.msg[0], static_cast<std::uint64_t>(acc)}));
      }
      return true;
    };
    PhaseRecord rec = sim(probe, "critical_probes");
    std::int64_t probes = 0;
    for (const auto& s : st_) {
      probes = std::max<std::int64_t>(probes, static_cast<std::int64_t>(s.probes.size()));
      // Enclosed weight must not increase with the boundary index.
      auto sorted = s.probes;
      std::sort(sorted.begin(), sorted.end());
      for (std::size_t a = 1; a < sorted.size(); ++a) {
        if (sorted[a].second > sorted[a - 1].second) throw Error(Errc::InvariantViolation, "probe weights not monotone");
      }
    }
    record_ring_phase(rec, probes);

    // Tell v_{j+1} who v_k is, and back.
    auto endpoint = [](std::int64_t round, VertexState& s, std::span<const Inbound> in, Outbox& out) {
      if (round == 0) {
        for (std::int32_t i = 0; i < s.deg(); ++i) {
          if (s.d[i].start) {
            out.send(s.id_of(i), Message(kEndpoint, {static_cast<std::uint64_t>(s.ans), static_cast<std::uint64_t>(s.k.id),
                                                     static_cast<std::uint64_t>(s.interior)}));
          }
        }
      }
      for (const auto& m : in) {
        const std::int32_t nx = s.next(s.local(m.dart));
        const std::int32_t p = s.prev(nx);
        if (m.msg.tag == kEndpoint) {
          if (s.d[nx].start) throw Error(Errc::InvariantViolation, "endpoint token found no target");
          if (s.d[nx].pos == static_cast<std::int32_t>(m.msg[0])) {
            s.is_u = true;
            s.other = static_cast<VertexId>(m.msg[1]);
            s.interior = static_cast<Weight>(m.msg[2]);
            s.closing_virtual = true;
            s.slot = {s.k.id, s.k.darts[p].head, s.k.darts[p].copy};
            out.send(s.id_of(nx), Message(kEndpointBack, {static_cast<std::uint64_t>(s.k.id)}));
          } else {
            out.send(s.id_of(nx), m.msg);
          }
        } else if (s.d[nx].start) {
          s.is_v = true;
          s.other = static_cast<VertexId>(m.msg[0]);
          s.closing_virtual = true;
          s.slot = {s.k.id, s.k.darts[p].head, s.k.darts[p].copy};
        } else {
          out.send(s.id_of(nx), m.msg);
        }
      }
      return true;
    };
    record_ring_phase(sim(endpoint, "critical_endpoints"), 1);
  }

  // Subtree sums on T with 1 at each endpoint: tree edges below exactly one endpoint form P.
  for (auto& s : st_) s.mark = (s.is_u ? 1 : 0) + (s.is_v ? 1 : 0);
  auto convergecast = [](std::int64_t, VertexState& s, std::span<const Inbound> in, Outbox& out) {
    for (const auto& m : in) {
      const std::int32_t r = s.local(m.dart);
      s.mark += static_cast<Weight>(m.msg[0]);
      if (m.msg[0] == 1) s.d[r].path = true;
      ++s.heard;
    }
    std::int32_t children = 0;
    for (const auto& x : s.d) children += x.t_child ? 1 : 0;
    if (!s.sent_up && s.heard == children) {
      s.sent_up = true;
      if (s.parent >= 0) {
        out.send(s.id_of(s.parent), Message(kToken, {static_cast<std::uint64_t>(s.mark)}));
        if (s.mark == 1) s.d[s.parent].path = true;
      }
    }
    return s.sent_up;
  };
  record_local_phase(sim(convergecast, "mark_path"));
}

inline std::vector<DistVertexOutput> DistEngine::outputs() const {
  std::vector<DistVertexOutput> out(st_.size());
  for (std::size_t v = 0; v < st_.size(); ++v) {
    const auto& s = st_[v];
    auto& o = out[v];
    o.is_u = s.is_u;
    o.is_v = s.is_v;
    o.other = s.other;
    o.closing_virtual = s.closing_virtual;
    o.slot = s.slot;
    o.interior = s.interior;
    for (std::int32_t i = 0; i < s.deg(); ++i) {
      if (s.d[i].path) o.path_darts.push_back(s.id_of(i));
    }
  }
  return out;
}

inline std::vector<DistPartSummary> DistEngine::summaries() const {
  const auto& g = *g_;
  const auto outs = outputs();
  std::vector<DistPartSummary> parts(parts_.num_parts());
  std::vector<VertexId> u(parts.size(), kNone), v(parts.size(), kNone);
  for (VertexId x = 0; x < g.n(); ++x) {
    const auto p = parts_.part_of[x];
    auto& sum = parts[p];
    const auto& s = st_[x];
    sum.part = p;
    sum.kind = s.kind;
    sum.face_key = s.k.codec.decode(s.chosen);
    sum.total = s.total;
    sum.probes = std::max(sum.probes, static_cast<std::int32_t>(s.probes.size()));
    if (s.is_u) u[p] = x;
    if (s.is_v) v[p] = x;
  }
  for (std::size_t p = 0; p < parts.size(); ++p) {
    auto& sum = parts[p];
    if (u[p] == kNone || v[p] == kNone) throw Error(Errc::InvariantViolation, "part " + std::to_string(p) + " has no endpoints");
    const auto& ou = outs[u[p]];
    const auto& ov = outs[v[p]];
    if (ou.other != v[p] || ov.other != u[p]) throw Error(Errc::InvariantViolation, "endpoints disagree on each other");
    SeparatorResult& r = sum.result;
    r.kind = sum.kind;
    r.face_key = sum.face_key;
    r.u = u[p];
    r.v = v[p];
    r.total_weight = sum.total;
    r.interior_weight = ou.interior;
    r.exterior_weight = sum.total - ou.interior;
    r.closing.u = u[p];
    r.closing.v = v[p];
    r.closing.is_virtual = ou.closing_virtual;
    if (r.closing.is_virtual) {
      r.closing.slot_u = ou.slot;
      r.closing.slot_v = ov.slot;
    }
    if (st_[u[p]].closing_dart != kNone) r.closing.edge = edge_of(st_[u[p]].closing_dart);
    // Walk the flagged darts from u.
    VertexId at = u[p];
    DartId came = kNone;
    r.path.push_back(at);
    while (at != v[p]) {
      DartId step = kNone;
      for (DartId d : outs[at].path_darts) {
        if (d != came) step = d;
      }
      if (step == kNone || static_cast<std::int32_t>(r.path.size()) > g.n()) {
        throw Error(Errc::InvariantViolation, "flagged edges do not form a u-v path");
      }
      came = rev(step);
      at = g.head(step);
      r.path.push_back(at);
    }
    r.face = kNone;
    for (const auto& f : g.faces()) {
      if (f.key == r.face_key) r.face = f.id;
    }
  }
  return parts;
}

/// One line per vertex: `sep <v> <flags> <P darts as v>w>`, plus `close` lines at the
/// endpoints of a virtual closing edge.
inline std::string format_records(const EmbeddedPlanarGraph& g, const std::vector<DistVertexOutput>& out) {
  std::ostringstream os;
  for (VertexId v = 0; v < static_cast<VertexId>(out.size()); ++v) {
    const auto& o = out[v];
    std::string flags;
    if (!o.path_darts.empty()) flags += 'p';
    if (o.is_u) flags += 'u';
    if (o.is_v) flags += 'v';
    if (flags.empty()) flags = "-";
    os << "sep " << v << ' ' << flags;
    for (DartId d : o.path_darts) os << ' ' << g.tail(d) << '>' << g.head(d);
    os << '\n';
    if ((o.is_u || o.is_v) && o.closing_virtual) {
      os << "close " << v << ' ' << o.other << " after " << o.slot.tail << ' ' << o.slot.head << ' ' << o.slot.copy
         << '\n';
    }
  }
  return os.str();
}

/// Bi-connects g (charged), then runs the distributed pipeline from BFS root `root`.
inline DistSeparatorOutput dist_compute_separator(const EmbeddedPlanarGraph& g, VertexId root,
                                                  const DistConfig& cfg = {}) {
  if (root < 0 || root >= g.n()) throw Error(Errc::UnknownRoot, "root " + std::to_string(root));
  const auto augmented = biconnect(g);
  DistEngine engine(augmented, Partition::whole(g.n()), std::vector<VertexId>(g.n(), root), cfg);
  engine.bfs();
  engine.charge_central("biconnect", 2);
  engine.learn_faces();
  engine.learn_cotree();
  engine.check_weights();
  engine.face_weights();
  engine.elect_root();
  engine.dual_subtree_sums();
  engine.detect();
  engine.mark();
  DistSeparatorOutput out;
  out.vertex = engine.outputs();
  out.parts = engine.summaries();
  out.trace = engine.trace();
  out.diameter = engine.diameter();
  out.virtual_edges_added = virtual_edge_count(augmented) - virtual_edge_count(g);
  out.parts.front().result.virtual_edges_added = out.virtual_edges_added;
  return out;
}

// ---- multiple parts ----

struct PartGraph {
  std::vector<VertexId> vertices;  // local id -> global id, increasing
  EmbeddedPlanarGraph graph;       // local ids, induced sub-embedding
};

/// Induced sub-embedding of each part, with vertices relabelled in increasing order.
inline std::vector<PartGraph> split_parts(const EmbeddedPlanarGraph& g, const Partition& p) {
  part_forest(g, p);
  const auto k = p.num_parts();
  std::vector<std::vector<VertexId>> members(k);
  std::vector<VertexId> local(g.n());
  for (VertexId v = 0; v < g.n(); ++v) {
    local[v] = static_cast<VertexId>(members[p.part_of[v]].size());
    members[p.part_of[v]].push_back(v);
  }
  std::vector<PartGraph> out;
  for (std::int32_t q = 0; q < k; ++q) {
    if (members[q].empty()) throw Error(Errc::InvalidPartition, "part " + std::to_string(q) + " is empty");
    std::vector<Dart> darts;
    std::vector<DartId> map(g.num_darts(), kNone);
    for (EdgeId e = 0; e < g.m(); ++e) {
      const auto& a = g.dart(2 * e);
      if (p.part_of[a.tail] != q || p.part_of[a.head] != q) continue;
      map[2 * e] = static_cast<DartId>(darts.size());
      darts.push_back({local[a.tail], local[a.head], a.copy, a.is_virtual});
      map[2 * e + 1] = static_cast<DartId>(darts.size());
      darts.push_back({local[a.head], local[a.tail], a.copy, a.is_virtual});
    }
    std::vector<std::vector<DartId>> rot(members[q].size());
    std::vector<Weight> w(members[q].size());
    for (VertexId v : members[q]) {
      w[local[v]] = g.weight(v);
      for (DartId d : g.rotation(v)) {
        if (map[d] != kNone) rot[local[v]].push_back(map[d]);
      }
    }
    out.push_back({members[q], EmbeddedPlanarGraph(static_cast<VertexId>(members[q].size()), std::move(darts),
                                                   std::move(rot), std::move(w), std::nullopt)});
  }
  return out;
}

/// Disjoint union of the part graphs under their global ids.
inline EmbeddedPlanarGraph union_parts(VertexId n, const std::vector<PartGraph>& parts) {
  std::vector<Dart> darts;
  std::vector<std::vector<DartId>> rot(n);
  std::vector<Weight> w(n, 0);
  for (const auto& part : parts) {
    const auto base = static_cast<DartId>(darts.size());
    const auto& pg = part.graph;
    for (const auto& d : pg.darts()) darts.push_back({part.vertices[d.tail], part.vertices[d.head], d.copy, d.is_virtual});
    for (VertexId v = 0; v < pg.n(); ++v) {
      w[part.vertices[v]] = pg.weight(v);
      for (DartId d : pg.rotation(v)) rot[part.vertices[v]].push_back(base + d);
    }
  }
  GraphOptions options;
  options.require_connected = false;
  return EmbeddedPlanarGraph(n, std::move(darts), std::move(rot), std::move(w), std::nullopt, options);
}

struct DistMultiOutput {
  std::vector<DistVertexOutput> vertex;
  std::vector<DistPartSummary> parts;  // results in global ids
  RoundTrace trace;
  EmbeddedPlanarGraph augmented;  // union of the bi-connected parts
};

/// Separates every part at once under one shared phase schedule. Each part is
/// bi-connected on its own; BFS roots default to the smallest vertex of each part.
inline DistMultiOutput dist_multi(const EmbeddedPlanarGraph& g, const Partition& p, const DistConfig& cfg = {},
                                  std::vector<VertexId> roots = {}) {
  auto parts = split_parts(g, p);
  for (std::size_t q = 0; q < parts.size(); ++q) {
    try {
      require_proper_weights(parts[q].graph.weights());
      parts[q].graph = biconnect(parts[q].graph);
    } catch (const Error& e) {
      throw Error(e.code(), "part " + std::to_string(q) + ": " + e.what());
    }
  }
  if (roots.empty()) {
    for (const auto& part : parts) roots.push_back(part.vertices.front());
  }
  if (roots.size() != parts.size()) throw Error(Errc::BadParams, "one root per part required");
  std::vector<VertexId> root_of(g.n());
  for (VertexId v = 0; v < g.n(); ++v) {
    root_of[v] = roots[p.part_of[v]];
    if (p.part_of[root_of[v]] != p.part_of[v]) throw Error(Errc::UnknownRoot, "root outside its part");
  }
  auto augmented = union_parts(g.n(), parts);
  DistEngine engine(augmented, p, root_of, cfg);
  engine.bfs();
  engine.charge_central("biconnect", 2);
  engine.learn_faces();
  engine.learn_cotree();
  engine.check_weights();
  engine.face_weights();
  engine.elect_root();
  engine.dual_subtree_sums();
  engine.detect();
  engine.mark();
  DistMultiOutput out{engine.outputs(), engine.summaries(), engine.trace(), std::move(augmented)};
  return out;
}

}  // namespace psep
