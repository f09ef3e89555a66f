#pragma once

// Synchronous CONGEST simulator.
//
// A vertex program sees only its own state and the messages delivered on its
// incident darts. Messages sent in round r are delivered at the start of round
// r + 1. Each dart may carry at most B bits per round in total.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "psep/tree_cotree.hpp"

namespace psep {

inline std::int32_t ceil_log2(std::uint64_t x) {
  return x <= 1 ? 0 : static_cast<std::int32_t>(std::bit_width(x - 1));
}

inline std::int32_t default_bit_budget(VertexId n) {
  return 8 * std::max(1, ceil_log2(static_cast<std::uint64_t>(n) + 1));
}

/// Tag plus up to four unsigned fields. Wire size: 4 tag bits plus the bit width
/// of each field (at least one bit each).
struct Message {
  std::uint8_t tag = 0;
  std::uint8_t size = 0;
  std::array<std::uint64_t, 4> field{};

  Message() = default;
  Message(std::uint8_t t, std::initializer_list<std::uint64_t> values) : tag(t) {
    if (t >= 16 || values.size() > field.size()) throw Error(Errc::BadParams, "message tag or arity out of range");
    for (std::uint64_t v : values) field[size++] = v;
  }

  std::uint64_t operator[](std::size_t i) const { return field[i]; }

  std::int32_t bits() const {
    std::int32_t b = 4;
    for (std::uint8_t i = 0; i < size; ++i) b += std::max(1, static_cast<std::int32_t>(std::bit_width(field[i])));
    return b;
  }

  friend bool operator==(const Message&, const Message&) = default;
};

/// A message as seen by the receiver: `dart` is the receiver's own dart towards the sender.
struct Inbound {
  DartId dart = kNone;
  Message msg;
};

class Outbox {
 public:
  Outbox(const EmbeddedPlanarGraph& g, VertexId v) : g_(&g), v_(v) {}

  void send(DartId d, const Message& m) {
    if (d < 0 || d >= g_->num_darts() || g_->tail(d) != v_) {
      throw Error(Errc::InvariantViolation, "vertex " + std::to_string(v_) + " sent on a foreign dart");
    }
    out_.push_back({d, m});
  }
  const std::vector<Inbound>& messages() const { return out_; }
  void clear() { out_.clear(); }

 private:
  const EmbeddedPlanarGraph* g_;
  VertexId v_;
  std::vector<Inbound> out_;  // dart = sending dart
};

/// Per-dart FIFO so a program can emit several messages on one dart; one is sent per round.
class SendQueue {
 public:
  void push(DartId d, const Message& m) { q_[d].push_back(m); }
  bool empty() const { return q_.empty(); }
  void flush(Outbox& out) {
    for (auto it = q_.begin(); it != q_.end();) {
      out.send(it->first, it->second.front());
      it->second.pop_front();
      it = it->second.empty() ? q_.erase(it) : std::next(it);
    }
  }

 private:
  std::map<DartId, std::deque<Message>> q_;
};

enum class IterationOrder { Ascending, Descending, Shuffled };

struct SimConfig {
  std::int32_t bit_budget = 0;  // 0: default_bit_budget(n)
  std::int64_t max_rounds = 1'000'000;
  IterationOrder order = IterationOrder::Ascending;
  std::uint64_t order_seed = 0;
  std::int32_t virtual_relay = 2;  // real rounds per round that used a virtual dart
};

struct PhaseRecord {
  std::string name;
  std::int64_t honest_rounds = 0;
  std::int64_t charged_rounds = 0;
  std::int32_t max_bits = 0;
  std::int64_t messages = 0;
  std::int64_t virtual_messages = 0;
  std::int64_t pa_calls = 0;
  std::int64_t interval = 0;  // super-round length when parts share a schedule
};

struct RoundTrace {
  std::int64_t rounds_executed = 0;
  std::int32_t max_bits_per_edge_per_round = 0;
  std::int64_t charged_rounds = 0;
  std::int64_t messages = 0;
  std::vector<PhaseRecord> phases;

  void add(const PhaseRecord& p) {
    rounds_executed += p.honest_rounds;
    charged_rounds += p.charged_rounds;
    max_bits_per_edge_per_round = std::max(max_bits_per_edge_per_round, p.max_bits);
    messages += p.messages;
    phases.push_back(p);
  }
  void append(const RoundTrace& other) {
    for (const auto& p : other.phases) add(p);
  }
};

/// Runs `step(round, state, inbox, outbox) -> halted` at every vertex in lock step until
/// all vertices are halted and no message is in flight. A halted vertex wakes on mail.
/// The returned record counts rounds up to the last round in which a message was sent.
template <class State, class Step>
PhaseRecord run(const EmbeddedPlanarGraph& g, std::vector<State>& states, Step&& step, const SimConfig& cfg,
                std::string name = "run") {
  const VertexId n = g.n();
  const std::int32_t budget = cfg.bit_budget > 0 ? cfg.bit_budget : default_bit_budget(n);
  std::vector<VertexId> order(n);
  std::iota(order.begin(), order.end(), 0);
  if (cfg.order == IterationOrder::Descending) std::reverse(order.begin(), order.end());
  if (cfg.order == IterationOrder::Shuffled) {
    std::mt19937_64 rng(cfg.order_seed);
    std::shuffle(order.begin(), order.end(), rng);
  }

  PhaseRecord rec;
  rec.name = std::move(name);
  std::vector<char> halted(n, 0);
  std::vector<std::vector<Inbound>> inbox(n), next(n);
  std::vector<std::int32_t> dart_bits(g.num_darts(), 0);
  std::int64_t relayed_rounds = 0;
  for (std::int64_t round = 0;; ++round) {
    bool any_active = false;
    for (VertexId v = 0; v < n; ++v) any_active = any_active || !halted[v] || !inbox[v].empty();
    if (!any_active) break;
    if (round >= cfg.max_rounds) {
      throw Error(Errc::RoundLimitExceeded, rec.name + ": no quiescence after " + std::to_string(round) + " rounds");
    }
    // Each vertex writes only to its own outbox; merge happens at the barrier in vertex order.
    std::vector<Outbox> outs;
    outs.reserve(n);
    for (VertexId v = 0; v < n; ++v) outs.emplace_back(g, v);
    for (VertexId v : order) {
      if (halted[v] && inbox[v].empty()) continue;
      std::sort(inbox[v].begin(), inbox[v].end(), [](const Inbound& a, const Inbound& b) { return a.dart < b.dart; });
      halted[v] = step(round, states[v], std::span<const Inbound>(inbox[v]), outs[v]) ? 1 : 0;
    }
    bool sent = false;
    bool used_virtual = false;
    std::vector<DartId> touched;
    for (VertexId v = 0; v < n; ++v) {
      inbox[v].clear();
      for (const auto& [d, m] : outs[v].messages()) {
        if (dart_bits[d] == 0) touched.push_back(d);
        dart_bits[d] += m.bits();
        if (dart_bits[d] > budget) {
          throw Error(Errc::BitBudgetExceeded, rec.name + ": round " + std::to_string(round) + " dart (" +
                                                   std::to_string(g.tail(d)) + "," + std::to_string(g.head(d)) +
                                                   ") carries " + std::to_string(dart_bits[d]) + " > " +
                                                   std::to_string(budget) + " bits");
        }
        rec.max_bits = std::max(rec.max_bits, dart_bits[d]);
        next[g.head(d)].push_back({rev(d), m});
        ++rec.messages;
        if (g.dart(d).is_virtual) {
          ++rec.virtual_messages;
          used_virtual = true;
        }
        sent = true;
      }
    }
    for (DartId d : touched) dart_bits[d] = 0;
    std::swap(inbox, next);
    if (sent) {
      rec.honest_rounds = round + 1;
      if (used_virtual) ++relayed_rounds;
    }
  }
  // A round that used a virtual dart is replayed over its real relay path.
  rec.honest_rounds += relayed_rounds * (cfg.virtual_relay - 1);
  rec.charged_rounds = rec.honest_rounds;
  return rec;
}

// ---- part-wise aggregation ----

enum class AggOp { Sum, Min, Max, Or, And };
enum class PaBackend { Honest, Charged };

inline const char* to_string(PaBackend b) { return b == PaBackend::Honest ? "honest" : "charged"; }
inline const char* to_string(AggOp op) {
  switch (op) {
    case AggOp::Sum: return "sum";
    case AggOp::Min: return "min";
    case AggOp::Max: return "max";
    case AggOp::Or: return "or";
    case AggOp::And: return "and";
  }
  return "?";
}

inline std::uint64_t identity(AggOp op) {
  switch (op) {
    case AggOp::Sum:
    case AggOp::Max:
    case AggOp::Or: return 0;
    case AggOp::Min:
    case AggOp::And: return ~std::uint64_t{0};
  }
  return 0;
}

inline std::uint64_t combine(AggOp op, std::uint64_t a, std::uint64_t b) {
  switch (op) {
    case AggOp::Sum: return a + b;
    case AggOp::Min: return std::min(a, b);
    case AggOp::Max: return std::max(a, b);
    case AggOp::Or: return a | b;
    case AggOp::And: return a & b;
  }
  return a;
}

struct Partition {
  std::vector<std::int32_t> part_of;

  static Partition whole(VertexId n) { return {std::vector<std::int32_t>(n, 0)}; }
  std::int32_t num_parts() const {
    std::int32_t k = 0;
    for (auto p : part_of) k = std::max(k, p + 1);
    return k;
  }
};

/// Per-part BFS forest rooted at each part's smallest vertex, over intra-part edges.
/// Throws InvalidPartition if a part is not connected.
inline RootedTree part_forest(const EmbeddedPlanarGraph& g, const Partition& p) {
  if (static_cast<VertexId>(p.part_of.size()) != g.n()) {
    throw Error(Errc::InvalidPartition, "partition size differs from vertex count");
  }
  for (auto x : p.part_of) {
    if (x < 0) throw Error(Errc::InvalidPartition, "negative part id");
  }
  RootedTree t;
  t.root = kNone;
  t.parent.assign(g.n(), kNone);
  t.parent_edge.assign(g.n(), kNone);
  t.depth.assign(g.n(), -1);
  for (VertexId s = 0; s < g.n(); ++s) {
    if (t.depth[s] >= 0) continue;
    t.depth[s] = 0;
    std::deque<VertexId> queue{s};
    while (!queue.empty()) {
      const VertexId v = queue.front();
      queue.pop_front();
      t.order.push_back(v);
      for (DartId d : g.rotation(v)) {
        const VertexId w = g.head(d);
        if (p.part_of[w] != p.part_of[v] || t.depth[w] >= 0) continue;
        t.depth[w] = t.depth[v] + 1;
        t.parent[w] = v;
        t.parent_edge[w] = edge_of(d);
        queue.push_back(w);
      }
    }
  }
  std::vector<VertexId> first(p.num_parts(), kNone);
  for (VertexId v = 0; v < g.n(); ++v) {
    if (t.parent[v] != kNone) continue;
    auto& slot = first[p.part_of[v]];
    if (slot != kNone) {
      throw Error(Errc::InvalidPartition, "part " + std::to_string(p.part_of[v]) + " is disconnected");
    }
    slot = v;
  }
  return t;
}

struct PaConfig {
  PaBackend backend = PaBackend::Honest;
  double c_pa = 1.0;
  double exponent = 2.0;
  std::int64_t diameter = 1;  // D used by the charged cost formula
  SimConfig sim;
};

inline std::int64_t charged_pa_rounds(const PaConfig& cfg, VertexId n) {
  const double lg = std::max(1, ceil_log2(static_cast<std::uint64_t>(n)));
  return static_cast<std::int64_t>(
      std::ceil(cfg.c_pa * static_cast<double>(std::max<std::int64_t>(cfg.diameter, 1)) * std::pow(lg, cfg.exponent)));
}

struct PaResult {
  std::vector<std::uint64_t> value;  // per vertex: the aggregate of its part
  PhaseRecord record;
};

namespace detail {

struct PaState {
  // local knowledge
  DartId parent_dart = kNone;
  std::int32_t children = 0;
  bool is_root = false;
  AggOp op = AggOp::Sum;
  // protocol
  std::uint64_t acc = 0;
  std::int32_t heard = 0;
  bool sent_up = false;
  bool done = false;
  std::vector<DartId> child_darts;
};

}  // namespace detail

/// Every vertex learns the fold of `inputs` over its part.
inline PaResult pa_aggregate(const EmbeddedPlanarGraph& g, const Partition& partition,
                             const std::vector<std::uint64_t>& inputs, AggOp op, const PaConfig& cfg,
                             std::string name = "pa") {
  if (static_cast<VertexId>(inputs.size()) != g.n()) throw Error(Errc::BadParams, "one input per vertex required");
  const auto forest = part_forest(g, partition);
  const std::int32_t budget = cfg.sim.bit_budget > 0 ? cfg.sim.bit_budget : default_bit_budget(g.n());
  const auto check_width = [&](std::uint64_t x) {
    if (op == AggOp::Sum && static_cast<std::int32_t>(std::bit_width(x)) + 4 > budget) {
      throw Error(Errc::OperatorOverflow, name + ": sum " + std::to_string(x) + " does not fit in " +
                                              std::to_string(budget) + " bits");
    }
  };
  PaResult res;
  if (cfg.backend == PaBackend::Charged) {
    std::vector<std::uint64_t> fold(partition.num_parts(), identity(op));
    for (VertexId v = 0; v < g.n(); ++v) {
      auto& slot = fold[partition.part_of[v]];
      slot = combine(op, slot, inputs[v]);
      check_width(slot);
    }
    res.value.resize(g.n());
    for (VertexId v = 0; v < g.n(); ++v) res.value[v] = fold[partition.part_of[v]];
    res.record.name = std::move(name);
    res.record.charged_rounds = charged_pa_rounds(cfg, g.n());
    res.record.pa_calls = 1;
    return res;
  }

  std::vector<detail::PaState> st(g.n());
  for (VertexId v = 0; v < g.n(); ++v) {
    auto& s = st[v];
    s.op = op;
    s.acc = inputs[v];
    s.is_root = forest.parent[v] == kNone;
    for (DartId d : g.rotation(v)) {
      if (forest.parent[g.head(d)] == v && forest.parent_edge[g.head(d)] == edge_of(d)) s.child_darts.push_back(d);
      if (forest.parent[v] == g.head(d) && forest.parent_edge[v] == edge_of(d)) s.parent_dart = d;
    }
    s.children = static_cast<std::int32_t>(s.child_darts.size());
  }
  constexpr std::uint8_t kUp = 1, kDown = 2;
  auto step = [&](std::int64_t, detail::PaState& s, std::span<const Inbound> inbox, Outbox& out) {
    std::uint64_t result = 0;
    bool have_result = false;
    for (const auto& in : inbox) {
      if (in.msg.tag == kUp) {
        s.acc = combine(s.op, s.acc, in.msg[0]);
        check_width(s.acc);
        ++s.heard;
      } else {
        result = in.msg[0];
        have_result = true;
      }
    }
    if (!s.sent_up && s.heard == s.children) {
      s.sent_up = true;
      if (s.is_root) {
        result = s.acc;
        have_result = true;
      } else {
        out.send(s.parent_dart, Message(kUp, {s.acc}));
      }
    }
    if (have_result) {
      s.acc = result;
      s.done = true;
      for (DartId d : s.child_darts) out.send(d, Message(kDown, {result}));
    }
    return s.sent_up;
  };
  res.record = run(g, st, step, cfg.sim, std::move(name));
  res.record.pa_calls = 1;
  res.value.resize(g.n());
  for (VertexId v = 0; v < g.n(); ++v) res.value[v] = st[v].acc;
  return res;
}

/// Broadcast of a root value down a spanning tree.
inline PaResult broadcast_root(const EmbeddedPlanarGraph& g, const RootedTree& tree, std::uint64_t value,
                               const PaConfig& cfg, std::string name = "broadcast") {
  PaResult res;
  res.value.assign(g.n(), 0);
  if (cfg.backend == PaBackend::Charged) {
    std::fill(res.value.begin(), res.value.end(), value);
    res.record.name = std::move(name);
    res.record.charged_rounds = std::max<std::int64_t>(cfg.diameter, 0);
    if (g.n() <= 1) res.record.charged_rounds = 0;
    return res;
  }
  struct State {
    std::vector<DartId> child_darts;
    bool is_root = false;
    bool known = false;
    std::uint64_t value = 0;
  };
  std::vector<State> st(g.n());
  for (VertexId v = 0; v < g.n(); ++v) {
    st[v].is_root = v == tree.root;
    for (DartId d : g.rotation(v)) {
      if (tree.parent[g.head(d)] == v && tree.parent_edge[g.head(d)] == edge_of(d)) st[v].child_darts.push_back(d);
    }
  }
  st[tree.root].value = value;
  auto step = [](std::int64_t, State& s, std::span<const Inbound> inbox, Outbox& out) {
    if (!s.known && (s.is_root || !inbox.empty())) {
      if (!s.is_root) s.value = inbox.front().msg[0];
      s.known = true;
      for (DartId d : s.child_darts) out.send(d, Message(1, {s.value}));
    }
    return true;
  };
  res.record = run(g, st, step, cfg.sim, std::move(name));
  for (VertexId v = 0; v < g.n(); ++v) res.value[v] = st[v].value;
  return res;
}

}  // namespace psep
