#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "desim.hpp"
#include "model.hpp"

namespace aoi {

// Parsed scenario file: a sectioned key = value document describing a
// topology, its links, the uplink model, run parameters, and an optional
// one-parameter sweep. Unknown sections or keys are rejected.
struct Scenario {
  enum class Kind { kLine, kDumbbell, kCustom };

  // [topology]
  Kind kind = Kind::kLine;
  std::optional<int> k_links;
  std::optional<int> n_sources;
  std::optional<double> rho;
  std::optional<double> lambda;       // custom
  std::vector<double> theta;          // custom; scalar broadcasts
  std::vector<double> psi;            // custom; scalar broadcasts

  // [links]
  double mu_isl = 1.0;
  double mu_dl = 0.8;
  std::vector<double> mu;             // custom; overrides mu_isl/mu_dl
  std::vector<double> eps{0.01};      // scalar broadcasts

  // [uplink]
  Uplink uplink;
  double uplink_horizon = 1e6;        // uplink-compare only

  // [run]
  Policy policy = Policy::kFcfs;
  std::uint64_t n_pkt = 100000;
  std::uint64_t seed = 1;
  double warmup_frac = 0.05;
  int n_seeds = 1;
  std::uint32_t buffer_capacity = 0;  // 0 = infinite

  // [sweep]
  std::string sweep_parameter = "none";
  std::vector<std::string> sweep_values;  // raw tokens; typed at resolve
};

Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

// Fixed-order serialization of the effective values; parsing it back
// resolves to identical configs. The scenario hash is FNV-1a over this.
std::string canonical_text(const Scenario& scenario);
std::string scenario_hash(const Scenario& scenario);  // 16 hex digits

// One sweep point resolved to concrete model objects.
struct ResolvedPoint {
  std::string sweep_parameter;
  std::string sweep_label;   // value as written (policy names included)
  double rho = 0.0;
  int k_links = 0;
  int n_sources = 1;
  Policy policy = Policy::kFcfs;
  NetworkConfig tagged;                     // source 1 view
  std::vector<NetworkConfig> source_views;  // one per measured source
  SimNetwork network;                       // simulation input
};

std::size_t num_points(const Scenario& scenario);
ResolvedPoint resolve_point(const Scenario& scenario, std::size_t index);

// Tagged view of source k (1-based) in a line network: its remaining hops,
// with all upstream traffic folded into the cross stream entering its
// first node.
NetworkConfig line_source_view(const NetworkConfig& line_config, int k);

}  // namespace aoi
