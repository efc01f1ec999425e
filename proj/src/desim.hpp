#pragma once

#include <cstdint>
#include <vector>

#include "model.hpp"
#include "rng.hpp"

namespace aoi {

// One M/M/1 station: the queue of a node together with its outgoing link.
// A served packet is erased with probability eps before reaching the next
// station. buffer_capacity limits the waiting line (0 = infinite);
// arrivals beyond it are drop-tail losses.
struct SimServer {
  double mu = 1.0;
  double eps = 0.0;
  std::uint32_t buffer_capacity = 0;
};

// A Poisson source and its route through the servers. offload[h] is the
// probability that a packet leaves the modeled path after service at hop h
// (routed to a destination outside this view); it is 0 on measured flows.
struct FlowSpec {
  int source_id = 1;
  double rate = 0.0;
  Uplink uplink;
  std::vector<int> path;
  std::vector<double> offload;
  bool measured = true;
};

struct SimNetwork {
  std::vector<SimServer> servers;
  std::vector<FlowSpec> flows;
};

struct DeliveryRecord {
  double gen;         // generation time at the source
  double del;         // delivery time at the flow's destination
  std::uint64_t seq;  // index in the source's generation order
};

struct FlowCounters {
  std::uint64_t generated = 0;
  std::uint64_t delivered = 0;
  std::uint64_t uplink_lost = 0;  // collisions or MPR thinning
  std::uint64_t erased = 0;
  std::uint64_t offloaded = 0;
  std::uint64_t dropped = 0;  // finite-buffer drop-tail
};

struct ServerCounters {
  std::uint64_t arrivals = 0;
  std::uint64_t services = 0;
  std::uint64_t erased = 0;
  double busy_area = 0.0;       // integral of the busy indicator
  double occupancy_area = 0.0;  // integral of queue + in-service count
};

struct SimResult {
  std::vector<int> source_ids;     // per flow
  std::vector<bool> measured;      // per flow
  std::vector<std::vector<DeliveryRecord>> deliveries;  // per flow
  std::vector<FlowCounters> flow_counters;
  std::vector<ServerCounters> server_counters;
  std::vector<std::vector<double>> departures;  // per server, when recorded
  double horizon = 0.0;
  bool unstable = false;
  std::uint64_t n_pkt = 0;
  double warmup_frac = 0.0;
};

struct SimOptions {
  bool record_departures = false;
};

// Poisson transmission starts on [0, horizon) at the offered rate; a start
// survives iff no other start lies within +-packet_duration of it (pure
// ALOHA, vulnerability window of two packet durations). Returns survivors.
std::vector<double> aloha_arrivals(double lambda_offered,
                                   double packet_duration, double horizon,
                                   Rng& rng);

// Collision filter alone, applied to given transmission starts.
std::vector<double> aloha_filter(const std::vector<double>& starts,
                                 double packet_duration);

// Independent thinning: drops each arrival with probability p_c.
std::vector<double> mpr_thin(const std::vector<double>& arrivals, double p_c,
                             Rng& rng);

// Tagged-source view of a config: the tagged flow plus one unmeasured
// cross-traffic flow per node with theta > 0, each subject to the config's
// per-node offload fractions.
SimNetwork network_from_config(const NetworkConfig& config);

// Line network of a line_scenario config: every cross stream is a real
// measured source entering at its node and delivered after node K.
// Requires psi == 0. Source k enters at node k; ids follow node order.
SimNetwork line_network(const NetworkConfig& line_config);

// Dumbbell network: n_sources symmetric 4-hop flows sharing the second
// server; the remaining hops are private per flow. Rates and per-hop
// mu/eps come from the tagged config.
SimNetwork dumbbell_network(const NetworkConfig& tagged_config,
                            int n_sources);

// Event-driven simulation: Poisson generation per flow (n_pkt packets per
// measured source; unmeasured cross streams keep generating until the last
// measured packet), the flow's uplink model at entry, exponential service,
// erasure and offload after service, deliveries recorded at each measured
// flow's final hop. Runs until all packets drain. Deterministic: the same
// seed and inputs give a bitwise-identical result.
SimResult simulate(const SimNetwork& net, Policy policy, std::uint64_t n_pkt,
                   std::uint64_t seed, double warmup_frac = 0.05,
                   const SimOptions& options = {});

SimResult simulate(const NetworkConfig& config, Policy policy,
                   std::uint64_t n_pkt, std::uint64_t seed,
                   double warmup_frac = 0.05, const SimOptions& options = {});

}  // namespace aoi
