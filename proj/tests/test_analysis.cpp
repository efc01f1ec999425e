#include "analysis.hpp"

#include <cmath>

#include "desim.hpp"
#include "doctest.h"
#include "errors.hpp"
#include "oracles.hpp"
#include "rng.hpp"
#include "stats.hpp"

using namespace aoi;

namespace {

NetworkConfig mm1_config(double lambda = 0.5, double mu = 1.0,
                         double eps = 0.0) {
  NetworkConfig cfg;
  cfg.k_links = 1;
  cfg.lambda = lambda;
  cfg.theta = {0.0};
  cfg.psi = {0.0};
  cfg.mu = {mu};
  cfg.eps = {eps};
  return cfg;
}

NetworkConfig random_stable(Rng& rng, int max_k = 4) {
  while (true) {
    NetworkConfig cfg;
    cfg.k_links = 1 + static_cast<int>(rng.uniform01() * max_k);
    cfg.lambda = 0.1 + 0.5 * rng.uniform01();
    for (int j = 0; j < cfg.k_links; ++j) {
      cfg.theta.push_back(j == 0 ? 0.0 : 0.4 * rng.uniform01());
      cfg.psi.push_back(0.0);
      cfg.mu.push_back(1.2 + 1.5 * rng.uniform01());
      cfg.eps.push_back(rng.uniform01() < 0.5 ? 0.0 : 0.1 * rng.uniform01());
    }
    if (stability_check(derived_rates(cfg)).empty()) return cfg;
  }
}

}  // namespace

TEST_CASE("mean_network_time is the reciprocal response-rate sum") {
  CHECK(mean_network_time(derived_rates(mm1_config())) == doctest::Approx(2.0));
  CHECK(mean_network_time(derived_rates(line_scenario(2, 0.4))) ==
        doctest::Approx(3.273809524).epsilon(1e-9));
  CHECK_THROWS_AS(mean_network_time(derived_rates(line_scenario(2, 2.6))),
                  UnstableError);
}

TEST_CASE("aoi_approx closed-form points") {
  CHECK(aoi_approx(mm1_config()) == doctest::Approx(4.0));
  // With eps = 0.1 the erased packets still hold node 1, so alpha stays at
  // 0.5 and p_s(K) drops to 0.9: 2/0.9 + 1/0.45 + 0.01/0.405.
  CHECK(aoi_approx(mm1_config(0.5, 1.0, 0.1)) ==
        doctest::Approx(4.4691358).epsilon(1e-7));
  // The independence approximation overestimates the exact M/M/1 value.
  CHECK(aoi_approx(mm1_config()) > mm1_aoi_exact(0.5, 1.0));
}

TEST_CASE("aoi_approx reduces to E[T] + 1/lambda when error-free") {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    NetworkConfig cfg = random_stable(rng);
    for (double& e : cfg.eps) e = 0.0;
    const DerivedRates d = derived_rates(cfg);
    double expect = 1.0 / cfg.lambda;
    for (double a : d.alpha) expect += 1.0 / a;
    CHECK(aoi_approx(cfg) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("ewy_upper values and ordering") {
  CHECK(ewy_upper(derived_rates(mm1_config())) == doctest::Approx(4.0));
  CHECK(ewy_upper(derived_rates(line_scenario(2, 0.4))) ==
        doctest::Approx(20.46130952).epsilon(1e-9));
  Rng rng(17);
  for (int trial = 0; trial < 15; ++trial) {
    const NetworkConfig cfg = random_stable(rng);
    const DerivedRates d = derived_rates(cfg);
    const double upper = ewy_upper(d);
    CHECK(ewy_lower_fcfs(cfg, d) <= upper + 1e-12);
    CHECK(ewy_lower_opf(cfg, d) <= upper + 1e-12);
  }
}

TEST_CASE("ewy_lower_fcfs equals the quadrature oracle") {
  // K=1: E[Y (T - Y)^+] with T ~ Exp(0.5), Y ~ Exp(0.5) equals 1 exactly.
  const NetworkConfig mm1 = mm1_config();
  const DerivedRates d1 = derived_rates(mm1);
  CHECK(ewy_lower_fcfs(mm1, d1) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(ewy_lower_fcfs(mm1, d1) ==
        doctest::Approx(oracle::ewy_lower_quadrature({0.5}, {}, 0.5))
            .epsilon(1e-8));

  // K=2 line at rho = 0.4: three-level quadrature with the service prefix.
  const NetworkConfig line = line_scenario(2, 0.4, 1.0, 0.8, 0.0);
  const DerivedRates d2 = derived_rates(line);
  const double closed = ewy_lower_fcfs(line, d2);
  const double quad =
      oracle::ewy_lower_quadrature(d2.alpha, {line.mu[0]}, line.lambda);
  CHECK(std::abs(closed - quad) < 1e-6);
}

TEST_CASE("ewy_lower_fcfs light-traffic limit vanishes") {
  double prev = 1e9;
  for (double lambda : {1e-1, 1e-2, 1e-3}) {
    NetworkConfig cfg = mm1_config(lambda);
    const double term = lambda * ewy_lower_fcfs(cfg, derived_rates(cfg));
    CHECK(term < prev);
    prev = term;
  }
  CHECK(prev < 1e-4);
}

TEST_CASE("ewy_lower_opf closed-form points") {
  const NetworkConfig mm1 = mm1_config();
  CHECK(ewy_lower_opf(mm1, derived_rates(mm1)) == doctest::Approx(1.0));
  const NetworkConfig line = line_scenario(2, 0.4, 1.0, 0.8, 0.0);
  CHECK(ewy_lower_opf(line, derived_rates(line)) ==
        doctest::Approx(0.697232947).epsilon(1e-9));
}

TEST_CASE("aoi_bounds on the M/M/1 point") {
  const AoIBounds fcfs = aoi_bounds(mm1_config(), Policy::kFcfs);
  CHECK(fcfs.upper == doctest::Approx(5.0));
  CHECK(fcfs.approx == doctest::Approx(4.0));
  // For K=1 the FCFS waiting-time bound is exact, so the lower bound hits
  // the true M/M/1 AoI.
  CHECK(fcfs.lower == doctest::Approx(3.5).epsilon(1e-10));
  CHECK(fcfs.lower <= 3.5);
  CHECK(3.5 <= fcfs.upper);

  const AoIBounds opf = aoi_bounds(mm1_config(), Policy::kOpf);
  const AoIBounds haf = aoi_bounds(mm1_config(), Policy::kHaf);
  CHECK(opf.lower == haf.lower);
  CHECK(opf.upper == fcfs.upper);
}

TEST_CASE("aoi_bounds ordering on random stable configs") {
  Rng rng(23);
  for (int trial = 0; trial < 15; ++trial) {
    const NetworkConfig cfg = random_stable(rng);
    for (Policy p : {Policy::kFcfs, Policy::kOpf, Policy::kHaf}) {
      const AoIBounds b = aoi_bounds(cfg, p);
      CHECK(b.lower <= b.upper);
      CHECK(b.lower > 0.0);
    }
  }
}

TEST_CASE("aoi_bounds errors") {
  CHECK_THROWS_AS(aoi_bounds(line_scenario(2, 3.0), Policy::kFcfs),
                  UnstableError);
}

TEST_CASE("paoi_tail_bound") {
  const NetworkConfig mm1 = mm1_config();
  CHECK(paoi_tail_bound(mm1, 0.0) == doctest::Approx(1.0));

  // omega = (0.5, 1, 0.5) groups to (0.5 x2, 1); cross-check the survival
  // at tau = 10 against the uniformized oracle.
  const double matrix_survival = 1.0 - matrix_cdf({0.5, 1.0, 0.5}, 10.0);
  CHECK(paoi_tail_bound(mm1, 10.0) ==
        doctest::Approx(matrix_survival).epsilon(1e-8));

  NetworkConfig lossy = mm1_config(0.5, 1.0, 0.1);
  CHECK_THROWS_AS(paoi_tail_bound(lossy, 1.0), UnsupportedError);

  // Monotone non-increasing, to zero.
  const NetworkConfig line = line_scenario(6, 0.5, 1.0, 0.8, 0.0);
  double prev = 1.0;
  for (double tau : {0.0, 5.0, 10.0, 20.0, 40.0, 80.0, 160.0}) {
    const double s = paoi_tail_bound(line, tau);
    CHECK(s <= prev + 1e-12);
    prev = s;
  }
  CHECK(prev < 1e-6);
}

TEST_CASE("mm1_aoi_exact reference values and Monte Carlo check") {
  CHECK(mm1_aoi_exact(0.5, 1.0) == doctest::Approx(3.5));
  CHECK(mm1_aoi_exact(0.1, 1.0) == doctest::Approx(11.0111111).epsilon(1e-8));
  CHECK_THROWS_AS(mm1_aoi_exact(1.0, 1.0), UnstableError);
  CHECK_THROWS_AS(mm1_aoi_exact(0.0, 1.0), std::invalid_argument);

  // Lindley-recursion trace, independent of the event engine.
  const auto trace = oracle::mm1_lindley_trace(0.5, 1.0, 200000, 77);
  const double avg =
      time_average_aoi(trace, trace[10000].del, trace[190000].del);
  CHECK(avg == doctest::Approx(3.5).epsilon(0.02));

  // Divergence at light load: dominated by the 1/lambda interarrival term.
  CHECK(mm1_aoi_exact(1e-4, 1.0) > 1e4);
}
