#include "stats.hpp"

#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "rng.hpp"

using namespace aoi;

TEST_CASE("time_average_aoi hand geometry") {
  const std::vector<DeliveryRecord> three = {{0, 1, 0}, {1, 2, 1}, {2, 3, 2}};
  CHECK(time_average_aoi(three, 1.0, 3.0) == doctest::Approx(1.5));

  const std::vector<DeliveryRecord> one = {{0, 1, 0}};
  CHECK(time_average_aoi(one, 1.0, 5.0) == doctest::Approx(3.0));

  CHECK_THROWS_AS(time_average_aoi({}, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(time_average_aoi(one, 0.5, 0.9), std::invalid_argument);
  const std::vector<DeliveryRecord> unsorted = {{0, 2, 0}, {1, 1, 1}};
  CHECK_THROWS_AS(time_average_aoi(unsorted, 1.0, 2.0),
                  std::invalid_argument);
}

TEST_CASE("time_average_aoi agrees with grid integration on a random trace") {
  const auto trace = oracle::mm1_lindley_trace(0.8, 1.2, 400, 9);
  const double t0 = trace[20].del;
  const double t1 = trace[380].del;
  const double exact = time_average_aoi(trace, t0, t1);
  const double grid = oracle::grid_average_aoi(trace, t0, t1, 1e-3);
  CHECK(exact == doctest::Approx(grid).epsilon(1e-3));
}

TEST_CASE("stale deliveries do not change the average") {
  auto trace = oracle::mm1_lindley_trace(0.8, 1.2, 200, 10);
  const double t0 = trace[10].del;
  const double t1 = trace[190].del;
  const double base = time_average_aoi(trace, t0, t1);

  // Inject a delivery carrying an older generation time than the state.
  std::vector<DeliveryRecord> noisy = trace;
  DeliveryRecord stale = trace[50];
  stale.gen = trace[40].gen;
  stale.del = trace[50].del + 1e-6;
  noisy.insert(noisy.begin() + 51, stale);
  CHECK(time_average_aoi(noisy, t0, t1) == doctest::Approx(base));
}

TEST_CASE("batched average matches the plain one") {
  const auto trace = oracle::mm1_lindley_trace(0.7, 1.0, 2000, 12);
  const double t0 = trace[100].del;
  const double t1 = trace[1900].del;
  const auto [mean, se] = time_average_aoi_with_se(trace, t0, t1, 32);
  CHECK(mean == doctest::Approx(time_average_aoi(trace, t0, t1)).epsilon(1e-12));
  CHECK(se > 0.0);
}

TEST_CASE("paoi_samples") {
  const std::vector<DeliveryRecord> two = {{0, 1, 0}, {1, 2, 1}};
  const auto peaks = paoi_samples(two);
  REQUIRE(peaks.size() == 1);
  CHECK(peaks[0] == doctest::Approx(2.0));
  CHECK_THROWS_AS(paoi_samples({{0, 1, 0}}), std::invalid_argument);

  // Lossless FCFS trace: each peak equals T_i + Y_i from the records.
  const auto trace = oracle::mm1_lindley_trace(0.6, 1.0, 500, 14);
  const auto p = paoi_samples(trace);
  REQUIRE(p.size() == trace.size() - 1);
  for (std::size_t i = 1; i < trace.size(); ++i) {
    const double t_i = trace[i].del - trace[i].gen;
    const double y_i = trace[i].gen - trace[i - 1].gen;
    CHECK(p[i - 1] == doctest::Approx(t_i + y_i));
  }

  // A dropped packet doubles the spanned interarrival gap.
  std::vector<DeliveryRecord> lossy = {{0, 1, 0}, {2, 3, 2}};
  const auto lp = paoi_samples(lossy);
  REQUIRE(lp.size() == 1);
  CHECK(lp[0] == doctest::Approx(3.0));  // age since gen 0 at delivery 3
}

TEST_CASE("peaks dominate the sawtooth average") {
  const auto trace = oracle::mm1_lindley_trace(0.5, 1.0, 5000, 15);
  const double avg = time_average_aoi(trace, trace[100].del, trace[4900].del);
  const auto peaks = paoi_samples(trace);
  double mean_peak = 0.0;
  for (double p : peaks) mean_peak += p;
  mean_peak /= peaks.size();
  CHECK(mean_peak >= avg);
}

TEST_CASE("jain_fairness") {
  CHECK(jain_fairness({1, 1, 1}) == doctest::Approx(1.0));
  CHECK(jain_fairness({1, 0, 0}) == doctest::Approx(1.0 / 3.0));
  CHECK(jain_fairness({220, 260}) == doctest::Approx(0.993103448).epsilon(1e-8));
  CHECK_THROWS_AS(jain_fairness({0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(jain_fairness({}), std::invalid_argument);
  CHECK_THROWS_AS(jain_fairness({1, -1}), std::invalid_argument);
}

TEST_CASE("empirical_cdf") {
  const std::vector<double> samples = {1, 2, 3};
  const auto cdf = empirical_cdf(samples, {0.5, 2.0, 9.0});
  CHECK(cdf[0] == 0.0);
  CHECK(cdf[1] == doctest::Approx(2.0 / 3.0));
  CHECK(cdf[2] == 1.0);
  CHECK_THROWS_AS(empirical_cdf({}, {1.0}), std::invalid_argument);

  // DKW sanity: 1e5 Exp(1) draws against 1 - e^{-tau}.
  Rng rng(16);
  std::vector<double> draws;
  for (int i = 0; i < 100000; ++i) draws.push_back(rng.exponential(1.0));
  const double d = oracle::ks_vs_exponential(draws, 1.0);
  CHECK(d < 0.01);
}

TEST_CASE("mean_with_ci") {
  CHECK(mean_with_ci({2, 2, 2, 2}, 0.95).second == 0.0);
  const auto [m, h] = mean_with_ci({0, 2}, 0.95);
  CHECK(m == doctest::Approx(1.0));
  CHECK(h > 0.0);
  CHECK_THROWS_AS(mean_with_ci({1.0}, 0.95), std::invalid_argument);

  // Coverage: the 95% interval catches the true mean in most repetitions.
  int covered = 0;
  const int reps = 300;
  for (int rep = 0; rep < reps; ++rep) {
    Rng rng(9000 + rep);
    std::vector<double> xs;
    for (int i = 0; i < 10000; ++i) xs.push_back(rng.exponential(1.0));
    const auto [mean, half] = mean_with_ci(xs, 0.95);
    if (std::abs(mean - 1.0) <= half) ++covered;
  }
  CHECK(covered >= static_cast<int>(0.92 * reps));
}

TEST_CASE("time scaling scales the metrics and keeps JFI") {
  const auto trace = oracle::mm1_lindley_trace(0.5, 1.0, 1000, 18);
  const double c = 3.5;
  std::vector<DeliveryRecord> scaled = trace;
  for (auto& d : scaled) {
    d.gen *= c;
    d.del *= c;
  }
  const double base =
      time_average_aoi(trace, trace[50].del, trace[950].del);
  const double big =
      time_average_aoi(scaled, c * trace[50].del, c * trace[950].del);
  CHECK(big == doctest::Approx(c * base).epsilon(1e-9));

  const auto peaks = paoi_samples(trace);
  const auto speaks = paoi_samples(scaled);
  CHECK(speaks[0] == doctest::Approx(c * peaks[0]));

  CHECK(jain_fairness({base, 2 * base}) ==
        doctest::Approx(jain_fairness({big, 2 * big})).epsilon(1e-12));
}

TEST_CASE("summarize produces per-source metrics and JFI") {
  const NetworkConfig cfg = line_scenario(2, 0.5, 1.0, 0.8, 0.01);
  const SimResult r = simulate(line_network(cfg), Policy::kFcfs, 20000, 42);
  const AoISummary s = summarize(r);
  REQUIRE(s.sources.size() == 2);
  for (const auto& src : s.sources) {
    CHECK(std::isfinite(src.mean_aoi));
    CHECK(src.mean_paoi >= src.mean_delay);
    CHECK(src.paoi_p99 >= src.paoi_p90);
    CHECK(src.paoi_p90 >= src.paoi_p50);
    CHECK(src.kept > 0);
    CHECK(src.kept <= src.delivered);
  }
  CHECK(s.jfi > 0.0);
  CHECK(s.jfi <= 1.0);
  // Source 1 traverses both hops and ages more than source 2.
  CHECK(s.sources[0].mean_aoi > s.sources[1].mean_aoi);
}
