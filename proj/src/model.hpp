#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace aoi {

enum class Policy { kFcfs, kOpf, kHaf };

const char* policy_name(Policy p);
std::optional<Policy> policy_from_name(const std::string& name);

// Access model for the uplink between the ground source and the first relay.
struct Uplink {
  enum class Kind { kIdeal, kMprThinning, kAloha };

  Kind kind = Kind::kIdeal;
  double p_c = 0.0;              // mpr: independent loss probability
  double packet_duration = 0.0;  // aloha: transmission time (vulnerability 2x)

  static Uplink ideal() { return {}; }
  static Uplink mpr(double p_c) { return {Kind::kMprThinning, p_c, 0.0}; }
  static Uplink aloha(double packet_duration) {
    return {Kind::kAloha, 0.0, packet_duration};
  }
};

// One source's end-to-end path through k_links consecutive links. Cross
// traffic entering at node k is described in aggregate by theta[k]; a
// fraction psi[k] of it leaves the path after service at node k. Link k
// erases a served packet with probability eps[k].
struct NetworkConfig {
  int k_links = 0;
  double lambda = 0.0;
  std::vector<double> theta;
  std::vector<double> psi;
  std::vector<double> mu;
  std::vector<double> eps;
  Uplink uplink;
  std::optional<std::uint32_t> buffer_capacity;  // absent = infinite

  // Throws std::invalid_argument when rates are negative, probabilities out
  // of range, eps[k] == 1, or vector lengths differ from k_links.
  void validate() const;
};

// Steady-state quantities derived from a config. Index j is 0-based over the
// K nodes; p_s has K+1 entries with p_s[0] = 1 and p_s[j] the probability of
// surviving links 1..j. The arrival rate at node j counts tagged packets
// that survived the preceding links plus aggregate cross traffic, so
// arrival_rate[j] = lambda_eff * p_s[j-1] + theta_bar[j] and
// alpha[j] = mu[j] - arrival_rate[j].
struct DerivedRates {
  std::vector<double> theta_bar;
  std::vector<double> p_s;
  std::vector<double> arrival_rate;
  std::vector<double> rho;
  std::vector<double> alpha;
};

// Rate surviving an uplink at the given offered rate: unchanged for the
// ideal model, rate*(1-p_c) for MPR thinning, and the pure-ALOHA survivor
// rate rate*exp(-2*rate*duration) as the thinned-Poisson approximation.
double effective_rate(double rate, const Uplink& uplink);

// effective_rate applied to the config's source.
double effective_lambda(const NetworkConfig& config);

// Aggregate cross-traffic load at node k (1-based), propagating each
// upstream stream through the offload and erasure survival factors of the
// links between its entry node and node k.
double cross_traffic_load(const NetworkConfig& config, int k);

DerivedRates derived_rates(const NetworkConfig& config);

// 1-based indices of nodes with rho >= 1. Empty means stable; the boundary
// rho == 1 counts as unstable (no stationary distribution).
std::vector<int> stability_check(const DerivedRates& derived);

// Line network: K relays in a chain feeding one ground station through the
// final downlink. Ground traffic enters at every relay except that
// theta[0] = 0; the tagged source enters at node 1. rho is the error-free
// downlink load, so lambda = theta_k = rho*mu_dl/K.
NetworkConfig line_scenario(int k_links, double rho, double mu_isl = 1.0,
                            double mu_dl = 0.8, double eps = 0.0);

// Dumbbell network, tagged-source view: K=4 hops where the second link is
// shared by n_sources symmetric flows. Cross traffic (n_sources-1)*lambda
// enters node 2 and leaves the path after it (psi[1] = 1). Per-source rate
// is normalized as lambda = rho*mu_dl/n_sources to reproduce the published
// operating points.
NetworkConfig dumbbell_scenario(int n_sources, double rho, double mu_isl = 1.0,
                                double mu_dl = 0.8, double eps = 0.0);

}  // namespace aoi
