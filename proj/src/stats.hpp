#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "desim.hpp"

namespace aoi {

// Exact time average of the age sawtooth over [t_start, t_end]. Deliveries
// must be sorted by delivery time; records at or before t_start establish
// the age at the window start, later ones reset it. A delivery whose
// generation time is not fresher than the current state is stale and
// ignored. Throws if no delivery is at or before t_start (age undefined)
// or if the input is unsorted.
double time_average_aoi(const std::vector<DeliveryRecord>& deliveries,
                        double t_start, double t_end);

// Same average plus a batch-means standard error from n_batches equal time
// slices of the window.
std::pair<double, double> time_average_aoi_with_se(
    const std::vector<DeliveryRecord>& deliveries, double t_start,
    double t_end, int n_batches = 32);

// Age immediately before each accepted reset. The first delivery carries no
// peak (its growth period starts before the record); stale deliveries do
// not reset. Throws with fewer than 2 deliveries.
std::vector<double> paoi_samples(const std::vector<DeliveryRecord>& deliveries);

// Jain's fairness index (sum x)^2 / (n * sum x^2). Requires at least one
// positive value.
double jain_fairness(const std::vector<double>& values);

// Right-continuous empirical CDF evaluated on the grid points.
std::vector<double> empirical_cdf(const std::vector<double>& samples,
                                  const std::vector<double>& grid);

// Sample mean and normal-approximation half-width at the given confidence.
std::pair<double, double> mean_with_ci(const std::vector<double>& samples,
                                       double confidence);

struct SourceSummary {
  int source_id = 0;
  std::uint64_t generated = 0;
  std::uint64_t delivered = 0;
  std::uint64_t kept = 0;  // deliveries inside the warm-up/tail trim
  std::uint64_t lost = 0;  // uplink + erasures + drops
  double mean_aoi = 0.0;
  double se_aoi = 0.0;
  double mean_paoi = 0.0;
  double paoi_p50 = 0.0;
  double paoi_p90 = 0.0;
  double paoi_p99 = 0.0;
  double mean_delay = 0.0;
  double se_delay = 0.0;
};

struct AoISummary {
  std::vector<SourceSummary> sources;  // measured flows, in flow order
  double jfi = 0.0;                    // over per-source mean AoI
  bool unstable = false;
};

// Per-source metrics of a finished run. Packets with a generation index in
// the first or last warmup_frac of each source's sequence are discarded;
// the averaging window is the delivery span of the kept packets.
AoISummary summarize(const SimResult& result);

// Kept PAoI samples of one measured flow, for empirical tail curves.
std::vector<double> kept_paoi_samples(const SimResult& result,
                                      std::size_t flow);

// One-sample Kolmogorov-Smirnov distance against a CDF given as sorted
// sample evaluations; cdf_at_samples[i] = F(sorted_samples[i]).
double ks_distance_sorted(const std::vector<double>& sorted_samples,
                          const std::vector<double>& cdf_at_samples);

}  // namespace aoi
