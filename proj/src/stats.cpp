#include "stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>

namespace aoi {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_sorted(const std::vector<DeliveryRecord>& deliveries) {
  for (std::size_t i = 1; i < deliveries.size(); ++i) {
    if (deliveries[i].del < deliveries[i - 1].del)
      throw std::invalid_argument("deliveries must be sorted by delivery time");
  }
}

// Walks the sawtooth once, splitting the area into n_batches equal time
// slices. Returns per-slice areas; the total divided by the window length
// is the exact time average.
std::vector<double> sawtooth_slice_areas(
    const std::vector<DeliveryRecord>& deliveries, double t_start,
    double t_end, int n_batches) {
  if (!(t_end > t_start)) throw std::invalid_argument("empty window");
  if (deliveries.empty()) throw std::invalid_argument("no deliveries");
  check_sorted(deliveries);

  double freshest = kNegInf;
  std::size_t idx = 0;
  while (idx < deliveries.size() && deliveries[idx].del <= t_start) {
    freshest = std::max(freshest, deliveries[idx].gen);
    ++idx;
  }
  if (freshest == kNegInf)
    throw std::invalid_argument("age undefined before the first delivery");

  std::vector<double> areas(n_batches, 0.0);
  const double slice = (t_end - t_start) / n_batches;
  auto add_segment = [&](double a, double b, double fresh) {
    // Age grows linearly from (a - fresh) over [a, b]; split across slices.
    double t = a;
    while (t < b) {
      int batch = std::min<int>(n_batches - 1,
                                static_cast<int>((t - t_start) / slice));
      const double slice_end = t_start + (batch + 1) * slice;
      const double seg_end = std::min(b, std::max(slice_end, t));
      const double age0 = t - fresh;
      const double age1 = seg_end - fresh;
      areas[batch] += 0.5 * (age0 + age1) * (seg_end - t);
      if (seg_end == t) break;  // guard against zero-length stalls
      t = seg_end;
    }
  };

  double t = t_start;
  for (; idx < deliveries.size() && deliveries[idx].del <= t_end; ++idx) {
    if (deliveries[idx].gen <= freshest) continue;  // stale, no reset
    add_segment(t, deliveries[idx].del, freshest);
    t = deliveries[idx].del;
    freshest = deliveries[idx].gen;
  }
  add_segment(t, t_end, freshest);
  return areas;
}

std::vector<DeliveryRecord> kept_deliveries(const SimResult& result,
                                            std::size_t flow) {
  const auto& all = result.deliveries.at(flow);
  const std::uint64_t n = result.flow_counters.at(flow).generated;
  const auto lo = static_cast<std::uint64_t>(result.warmup_frac * n);
  const std::uint64_t hi = n - lo;
  std::vector<DeliveryRecord> kept;
  kept.reserve(all.size());
  for (const DeliveryRecord& d : all) {
    if (d.seq >= lo && d.seq < hi) kept.push_back(d);
  }
  return kept;
}

double nearest_rank(const std::vector<double>& sorted, double q) {
  const auto n = static_cast<double>(sorted.size());
  auto idx = static_cast<std::size_t>(std::ceil(q * n));
  idx = std::min(std::max<std::size_t>(idx, 1), sorted.size()) - 1;
  return sorted[idx];
}

// Batch-means standard error of the mean of a (possibly autocorrelated)
// sequence; falls back to the iid estimate for short inputs.
double batch_se(const std::vector<double>& xs, int n_batches) {
  const std::size_t n = xs.size();
  if (n < 2) return 0.0;
  if (n < static_cast<std::size_t>(2 * n_batches)) {
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= n;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / (n - 1) / n);
  }
  const std::size_t per = n / n_batches;
  std::vector<double> means;
  means.reserve(n_batches);
  for (int b = 0; b < n_batches; ++b) {
    double m = 0.0;
    for (std::size_t i = b * per; i < (b + 1) * per; ++i) m += xs[i];
    means.push_back(m / per);
  }
  double grand = 0.0;
  for (double m : means) grand += m;
  grand /= n_batches;
  double ss = 0.0;
  for (double m : means) ss += (m - grand) * (m - grand);
  return std::sqrt(ss / (n_batches - 1) / n_batches);
}

}  // namespace

double time_average_aoi(const std::vector<DeliveryRecord>& deliveries,
                        double t_start, double t_end) {
  const auto areas = sawtooth_slice_areas(deliveries, t_start, t_end, 1);
  return areas[0] / (t_end - t_start);
}

std::pair<double, double> time_average_aoi_with_se(
    const std::vector<DeliveryRecord>& deliveries, double t_start,
    double t_end, int n_batches) {
  if (n_batches < 2) throw std::invalid_argument("need at least 2 batches");
  const auto areas =
      sawtooth_slice_areas(deliveries, t_start, t_end, n_batches);
  const double slice = (t_end - t_start) / n_batches;
  double grand = 0.0;
  for (double a : areas) grand += a;
  grand /= (t_end - t_start);
  double ss = 0.0;
  for (double a : areas) {
    const double m = a / slice;
    ss += (m - grand) * (m - grand);
  }
  const double se = std::sqrt(ss / (n_batches - 1) / n_batches);
  return {grand, se};
}

std::vector<double> paoi_samples(
    const std::vector<DeliveryRecord>& deliveries) {
  if (deliveries.size() < 2)
    throw std::invalid_argument("need at least 2 deliveries for peaks");
  check_sorted(deliveries);
  std::vector<double> peaks;
  peaks.reserve(deliveries.size() - 1);
  double freshest = deliveries[0].gen;
  for (std::size_t i = 1; i < deliveries.size(); ++i) {
    if (deliveries[i].gen <= freshest) continue;
    peaks.push_back(deliveries[i].del - freshest);
    freshest = deliveries[i].gen;
  }
  return peaks;
}

double jain_fairness(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("empty input");
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double x : values) {
    if (!(x >= 0.0)) throw std::invalid_argument("values must be >= 0");
    sum += x;
    sum_sq += x * x;
  }
  if (sum_sq == 0.0) throw std::invalid_argument("all-zero input");
  return sum * sum / (values.size() * sum_sq);
}

std::vector<double> empirical_cdf(const std::vector<double>& samples,
                                  const std::vector<double>& grid) {
  if (samples.empty()) throw std::invalid_argument("empty samples");
  std::vector<double> sorted = samples;
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> out;
  out.reserve(grid.size());
  for (double tau : grid) {
    const auto count =
        std::upper_bound(sorted.begin(), sorted.end(), tau) - sorted.begin();
    out.push_back(static_cast<double>(count) / sorted.size());
  }
  return out;
}

std::pair<double, double> mean_with_ci(const std::vector<double>& samples,
                                       double confidence) {
  if (samples.size() < 2)
    throw std::invalid_argument("need at least 2 samples");
  if (!(confidence > 0.0 && confidence < 1.0))
    throw std::invalid_argument("confidence must be in (0,1)");
  double mean = 0.0;
  for (double x : samples) mean += x;
  mean /= samples.size();
  double ss = 0.0;
  for (double x : samples) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / (samples.size() - 1));
  const boost::math::normal_distribution<double> normal;
  const double z = boost::math::quantile(normal, 0.5 + confidence / 2.0);
  return {mean, z * sd / std::sqrt(static_cast<double>(samples.size()))};
}

AoISummary summarize(const SimResult& result) {
  AoISummary summary;
  summary.unstable = result.unstable;
  std::vector<double> mean_aois;
  for (std::size_t f = 0; f < result.deliveries.size(); ++f) {
    if (!result.measured[f]) continue;
    const FlowCounters& c = result.flow_counters[f];
    SourceSummary src;
    src.source_id = result.source_ids[f];
    src.generated = c.generated;
    src.delivered = c.delivered;
    src.lost = c.uplink_lost + c.erased + c.dropped;

    const auto kept = kept_deliveries(result, f);
    src.kept = kept.size();
    if (kept.size() >= 2 && kept.back().del > kept.front().del) {
      const double t0 = kept.front().del;
      const double t1 = kept.back().del;
      const auto [aoi, aoi_se] = time_average_aoi_with_se(kept, t0, t1, 32);
      src.mean_aoi = aoi;
      src.se_aoi = aoi_se;

      auto peaks = paoi_samples(kept);
      if (!peaks.empty()) {
        double m = 0.0;
        for (double p : peaks) m += p;
        src.mean_paoi = m / peaks.size();
        std::sort(peaks.begin(), peaks.end());
        src.paoi_p50 = nearest_rank(peaks, 0.50);
        src.paoi_p90 = nearest_rank(peaks, 0.90);
        src.paoi_p99 = nearest_rank(peaks, 0.99);
      }

      std::vector<double> delays;
      delays.reserve(kept.size());
      double dsum = 0.0;
      for (const DeliveryRecord& d : kept) {
        delays.push_back(d.del - d.gen);
        dsum += d.del - d.gen;
      }
      src.mean_delay = dsum / delays.size();
      src.se_delay = batch_se(delays, 32);
    } else {
      src.mean_aoi = src.se_aoi = src.mean_paoi = src.paoi_p50 =
          src.paoi_p90 = src.paoi_p99 = src.mean_delay = src.se_delay =
              std::numeric_limits<double>::quiet_NaN();
    }
    mean_aois.push_back(src.mean_aoi);
    summary.sources.push_back(std::move(src));
  }
  bool all_finite = !mean_aois.empty();
  for (double m : mean_aois) all_finite = all_finite && std::isfinite(m);
  summary.jfi = all_finite ? jain_fairness(mean_aois)
                           : std::numeric_limits<double>::quiet_NaN();
  return summary;
}

std::vector<double> kept_paoi_samples(const SimResult& result,
                                      std::size_t flow) {
  return paoi_samples(kept_deliveries(result, flow));
}

double ks_distance_sorted(const std::vector<double>& sorted_samples,
                          const std::vector<double>& cdf_at_samples) {
  if (sorted_samples.empty() ||
      sorted_samples.size() != cdf_at_samples.size())
    throw std::invalid_argument("mismatched KS inputs");
  const double n = static_cast<double>(sorted_samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted_samples.size(); ++i) {
    d = std::max(d, std::abs(cdf_at_samples[i] - (i + 1) / n));
    d = std::max(d, std::abs(cdf_at_samples[i] - i / n));
  }
  return d;
}

}  // namespace aoi
