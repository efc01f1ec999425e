#pragma once

// Internal event engine behind desim::simulate(). Templated on the random
// stream so tests can drive it with scripted service times and coin flips.

#include <cstdint>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

#include "desim.hpp"

namespace aoi::detail {

// Post-uplink entry of one packet; generation time equals the entry time
// (the constant uplink transmission delay cancels in age differences).
struct Entry {
  double t;
  std::uint64_t seq;
};

// Scheduling order among queued packets. FCFS: earliest arrival at the
// node. OPF: oldest generation time. HAF: the source with the largest
// node-local age (now minus the freshest generation time the node has
// forwarded for that source; never-seen sources count as infinitely old),
// falling through to the OPF rule and then arrival order on ties.
struct PacketKey {
  double gen;
  std::uint64_t arr_seq;
  double source_age;  // only read under HAF
};

inline bool prefer_packet(Policy policy, const PacketKey& cand,
                          const PacketKey& incumbent) {
  switch (policy) {
    case Policy::kFcfs:
      return cand.arr_seq < incumbent.arr_seq;
    case Policy::kOpf:
      if (cand.gen != incumbent.gen) return cand.gen < incumbent.gen;
      return cand.arr_seq < incumbent.arr_seq;
    case Policy::kHaf:
      if (cand.source_age != incumbent.source_age)
        return cand.source_age > incumbent.source_age;
      if (cand.gen != incumbent.gen) return cand.gen < incumbent.gen;
      return cand.arr_seq < incumbent.arr_seq;
  }
  return false;
}

template <class RNG>
class Engine {
 public:
  Engine(const SimNetwork& net, Policy policy,
         const std::vector<std::vector<Entry>>& entries, RNG& rng,
         const SimOptions& options, SimResult& result)
      : net_(net),
        policy_(policy),
        entries_(entries),
        rng_(rng),
        options_(options),
        result_(result) {}

  void run() {
    const std::size_t n_servers = net_.servers.size();
    const std::size_t n_flows = net_.flows.size();
    next_entry_.assign(n_flows, 0);
    servers_.resize(n_servers);
    for (auto& s : servers_) {
      s.freshest_forwarded.assign(n_flows,
                                  -std::numeric_limits<double>::infinity());
    }
    result_.server_counters.assign(n_servers, {});
    result_.departures.assign(options_.record_departures ? n_servers : 0, {});

    for (std::uint32_t f = 0; f < n_flows; ++f) {
      if (!entries_[f].empty()) push_event(entries_[f][0].t, kNextEntry, f);
    }

    double now = 0.0;
    while (!events_.empty()) {
      const Event ev = events_.top();
      events_.pop();
      now = ev.time;
      if (ev.kind == kNextEntry) {
        on_entry(now, ev.payload);
      } else {
        on_completion(now, ev.payload);
      }
    }
    result_.horizon = now;
  }

 private:
  enum Kind : std::uint32_t { kNextEntry, kCompletion };

  struct Event {
    double time;
    std::uint64_t seq;
    std::uint32_t kind;
    std::uint32_t payload;  // flow for kNextEntry, server for kCompletion

    bool operator>(const Event& o) const {
      if (time != o.time) return time > o.time;
      return seq > o.seq;
    }
  };

  struct Packet {
    double gen;
    std::uint64_t seq;       // generation index within the flow
    std::uint64_t arr_seq;   // global arrival order, tie-break key
    std::uint32_t flow;
    std::uint32_t hop;       // position in the flow's path
  };

  struct ServerState {
    std::vector<std::uint32_t> queue;  // packet pool indices
    std::int64_t in_service = -1;
    double last_change = 0.0;
    std::vector<double> freshest_forwarded;  // per flow, for HAF
  };

  void push_event(double t, Kind kind, std::uint32_t payload) {
    events_.push(Event{t, event_seq_++, kind, payload});
  }

  std::uint32_t alloc_packet() {
    if (!free_.empty()) {
      const std::uint32_t idx = free_.back();
      free_.pop_back();
      return idx;
    }
    pool_.emplace_back();
    return static_cast<std::uint32_t>(pool_.size() - 1);
  }

  void advance_clock(std::size_t server, double now) {
    ServerState& s = servers_[server];
    ServerCounters& c = result_.server_counters[server];
    const double dt = now - s.last_change;
    const double in_service = s.in_service >= 0 ? 1.0 : 0.0;
    c.busy_area += dt * in_service;
    c.occupancy_area += dt * (in_service + s.queue.size());
    s.last_change = now;
  }

  void on_entry(double now, std::uint32_t flow) {
    const auto& entry_list = entries_[flow];
    const Entry entry = entry_list[next_entry_[flow]];
    if (++next_entry_[flow] < entry_list.size())
      push_event(entry_list[next_entry_[flow]].t, kNextEntry, flow);

    const std::uint32_t idx = alloc_packet();
    pool_[idx] = Packet{entry.t, entry.seq, arrival_seq_++, flow, 0};
    arrive(now, idx);
  }

  void arrive(double now, std::uint32_t packet) {
    const Packet& p = pool_[packet];
    const std::size_t server = net_.flows[p.flow].path[p.hop];
    ServerState& s = servers_[server];
    advance_clock(server, now);
    result_.server_counters[server].arrivals++;

    if (s.in_service < 0) {
      start_service(now, server, packet);
      return;
    }
    const std::uint32_t cap = net_.servers[server].buffer_capacity;
    if (cap != 0 && s.queue.size() >= cap) {
      result_.flow_counters[p.flow].dropped++;
      free_.push_back(packet);
      return;
    }
    s.queue.push_back(packet);
  }

  void start_service(double now, std::size_t server, std::uint32_t packet) {
    ServerState& s = servers_[server];
    s.in_service = packet;
    const double service = rng_.exponential(net_.servers[server].mu);
    push_event(now + service, kCompletion,
               static_cast<std::uint32_t>(server));
  }

  // Selects the next packet per prefer_packet and removes it from the
  // queue (removal is atomic with service start at the caller).
  std::uint32_t select_next(double now, std::size_t server) {
    ServerState& s = servers_[server];
    std::size_t best = 0;
    PacketKey best_key = key_of(now, server, pool_[s.queue[0]]);
    for (std::size_t c = 1; c < s.queue.size(); ++c) {
      const PacketKey cand = key_of(now, server, pool_[s.queue[c]]);
      if (prefer_packet(policy_, cand, best_key)) {
        best = c;
        best_key = cand;
      }
    }
    const std::uint32_t packet = s.queue[best];
    s.queue[best] = s.queue.back();
    s.queue.pop_back();
    return packet;
  }

  PacketKey key_of(double now, std::size_t server, const Packet& p) const {
    return {p.gen, p.arr_seq,
            now - servers_[server].freshest_forwarded[p.flow]};
  }

  void on_completion(double now, std::uint32_t server) {
    ServerState& s = servers_[server];
    if (s.in_service < 0) throw std::logic_error("completion on idle server");
    const std::uint32_t packet = static_cast<std::uint32_t>(s.in_service);
    advance_clock(server, now);
    s.in_service = -1;
    result_.server_counters[server].services++;
    if (options_.record_departures) result_.departures[server].push_back(now);

    Packet& p = pool_[packet];
    double& freshest = s.freshest_forwarded[p.flow];
    if (p.gen > freshest) freshest = p.gen;

    dispose(now, server, packet);

    if (!s.queue.empty()) {
      start_service(now, server, select_next(now, server));
    }
  }

  // Routing after service: offload first (the packet takes another link
  // out of the node), then the erasure coin for this link, then delivery
  // or the next hop.
  void dispose(double now, std::size_t server, std::uint32_t packet) {
    Packet& p = pool_[packet];
    const FlowSpec& flow = net_.flows[p.flow];
    FlowCounters& fc = result_.flow_counters[p.flow];

    const double offload = flow.offload[p.hop];
    if (offload > 0.0 && rng_.bernoulli(offload)) {
      fc.offloaded++;
      free_.push_back(packet);
      return;
    }
    const double eps = net_.servers[server].eps;
    if (eps > 0.0 && rng_.bernoulli(eps)) {
      fc.erased++;
      result_.server_counters[server].erased++;
      free_.push_back(packet);
      return;
    }
    if (p.hop + 1 == flow.path.size()) {
      fc.delivered++;
      if (flow.measured)
        result_.deliveries[p.flow].push_back({p.gen, now, p.seq});
      free_.push_back(packet);
      return;
    }
    p.hop++;
    p.arr_seq = arrival_seq_++;
    arrive(now, packet);
  }

  const SimNetwork& net_;
  Policy policy_;
  const std::vector<std::vector<Entry>>& entries_;
  RNG& rng_;
  const SimOptions& options_;
  SimResult& result_;

  std::priority_queue<Event, std::vector<Event>, std::greater<Event>> events_;
  std::vector<ServerState> servers_;
  std::vector<Packet> pool_;
  std::vector<std::uint32_t> free_;
  std::vector<std::size_t> next_entry_;
  std::uint64_t event_seq_ = 0;
  std::uint64_t arrival_seq_ = 0;
};

template <class RNG>
void run_engine(const SimNetwork& net, Policy policy,
                const std::vector<std::vector<Entry>>& entries, RNG& rng,
                const SimOptions& options, SimResult& result) {
  result.deliveries.assign(net.flows.size(), {});
  result.flow_counters.assign(net.flows.size(), {});
  Engine<RNG>(net, policy, entries, rng, options, result).run();
}

}  // namespace aoi::detail
