#include "model.hpp"

#include <stdexcept>

#include "doctest.h"
#include "rng.hpp"

using namespace aoi;

namespace {

NetworkConfig two_link(std::vector<double> theta, std::vector<double> psi,
                       std::vector<double> eps) {
  NetworkConfig cfg;
  cfg.k_links = 2;
  cfg.lambda = 0.1;
  cfg.theta = std::move(theta);
  cfg.psi = std::move(psi);
  cfg.mu = {1.0, 1.0};
  cfg.eps = std::move(eps);
  return cfg;
}

NetworkConfig random_stable_config(Rng& rng, int max_k = 4) {
  NetworkConfig cfg;
  cfg.k_links = 1 + static_cast<int>(rng.uniform01() * max_k);
  cfg.lambda = 0.05 + 0.3 * rng.uniform01();
  for (int j = 0; j < cfg.k_links; ++j) {
    cfg.theta.push_back(0.3 * rng.uniform01());
    cfg.psi.push_back(rng.uniform01() < 0.5 ? 0.0 : rng.uniform01());
    cfg.mu.push_back(1.5 + rng.uniform01());
    cfg.eps.push_back(0.2 * rng.uniform01());
  }
  return cfg;
}

}  // namespace

TEST_CASE("cross_traffic_load matches the flow propagation examples") {
  CHECK(cross_traffic_load(two_link({0.0, 0.0}, {0.3, 0.0}, {0.1, 0.0}), 2) ==
        doctest::Approx(0.0));
  CHECK(cross_traffic_load(two_link({0.2, 0.0}, {0.0, 0.0}, {0.1, 0.0}), 2) ==
        doctest::Approx(0.18));
  CHECK(cross_traffic_load(two_link({0.2, 0.1}, {0.5, 0.0}, {0.1, 0.0}), 2) ==
        doctest::Approx(0.19));
}

TEST_CASE("cross_traffic_load rejects out-of-range nodes") {
  const auto cfg = two_link({0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0});
  CHECK_THROWS_AS(cross_traffic_load(cfg, 0), std::out_of_range);
  CHECK_THROWS_AS(cross_traffic_load(cfg, 3), std::out_of_range);
}

TEST_CASE("cross_traffic_load monotonicity under perturbations") {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    NetworkConfig cfg = random_stable_config(rng);
    const int k = cfg.k_links;
    const double base = cross_traffic_load(cfg, k);
    for (int j = 0; j < k; ++j) {
      NetworkConfig up = cfg;
      up.theta[j] += 0.05;
      CHECK(cross_traffic_load(up, k) >= base - 1e-15);
      NetworkConfig offload = cfg;
      offload.psi[j] = std::min(1.0, offload.psi[j] + 0.05);
      CHECK(cross_traffic_load(offload, k) <= base + 1e-15);
      NetworkConfig lossy = cfg;
      lossy.eps[j] = std::min(0.99, lossy.eps[j] + 0.05);
      CHECK(cross_traffic_load(lossy, k) <= base + 1e-15);
    }
  }
}

TEST_CASE("derived_rates on the two-link line point") {
  NetworkConfig cfg;
  cfg.k_links = 2;
  cfg.lambda = 0.16;
  cfg.theta = {0.0, 0.16};
  cfg.psi = {0.0, 0.0};
  cfg.mu = {1.0, 0.8};
  cfg.eps = {0.0, 0.0};
  const DerivedRates d = derived_rates(cfg);
  CHECK(d.arrival_rate[0] == doctest::Approx(0.16));
  CHECK(d.arrival_rate[1] == doctest::Approx(0.32));
  CHECK(d.rho[0] == doctest::Approx(0.16));
  CHECK(d.rho[1] == doctest::Approx(0.4));
  CHECK(d.alpha[0] == doctest::Approx(0.84));
  CHECK(d.alpha[1] == doctest::Approx(0.48));
}

TEST_CASE("derived_rates M/M/1 and erasure-thinned flow") {
  NetworkConfig mm1;
  mm1.k_links = 1;
  mm1.lambda = 0.5;
  mm1.theta = {0.0};
  mm1.psi = {0.0};
  mm1.mu = {1.0};
  mm1.eps = {0.0};
  const DerivedRates d1 = derived_rates(mm1);
  CHECK(d1.alpha[0] == doctest::Approx(0.5));
  CHECK(d1.rho[0] == doctest::Approx(0.5));

  // A packet erased on link 1 still consumed service at node 1, so node 1
  // sees the full rate and node 2 the surviving half.
  NetworkConfig lossy;
  lossy.k_links = 2;
  lossy.lambda = 0.5;
  lossy.theta = {0.0, 0.0};
  lossy.psi = {0.0, 0.0};
  lossy.mu = {1.0, 1.0};
  lossy.eps = {0.5, 0.0};
  const DerivedRates d2 = derived_rates(lossy);
  CHECK(d2.arrival_rate[0] == doctest::Approx(0.5));
  CHECK(d2.arrival_rate[1] == doctest::Approx(0.25));
  CHECK(d2.alpha[0] == doctest::Approx(0.5));
  CHECK(d2.alpha[1] == doctest::Approx(0.75));
  CHECK(d2.p_s[0] == doctest::Approx(1.0));
  CHECK(d2.p_s[1] == doctest::Approx(0.5));
  CHECK(d2.p_s[2] == doctest::Approx(0.5));
}

TEST_CASE("stability_check flags rho >= 1, boundary included") {
  DerivedRates d;
  d.rho = {0.16, 0.4};
  CHECK(stability_check(d).empty());
  d.rho = {0.5, 1.0};
  CHECK(stability_check(d) == std::vector<int>{2});
  d.rho = {1.2, 0.3};
  CHECK(stability_check(d) == std::vector<int>{1});
}

TEST_CASE("line_scenario reproduces the published operating points") {
  const NetworkConfig k2 = line_scenario(2, 0.4);
  CHECK(k2.lambda == doctest::Approx(0.16));
  CHECK(k2.theta[1] == doctest::Approx(0.16));
  CHECK(k2.theta[0] == 0.0);
  CHECK(k2.mu[0] == doctest::Approx(1.0));
  CHECK(k2.mu[1] == doctest::Approx(0.8));

  const NetworkConfig k10 = line_scenario(10, 0.05);
  CHECK(k10.lambda == doctest::Approx(0.004));
  CHECK(1.0 / k10.lambda == doctest::Approx(250.0));
}

TEST_CASE("line_scenario error-free arrivals at the downlink sum to rho*mu_dl") {
  for (double rho : {0.1, 0.4, 0.9}) {
    for (int k : {1, 2, 6, 10}) {
      const NetworkConfig cfg = line_scenario(k, rho, 1.0, 0.8, 0.0);
      const DerivedRates d = derived_rates(cfg);
      CHECK(d.arrival_rate[k - 1] == doctest::Approx(rho * 0.8).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(line_scenario(0, 0.4), std::invalid_argument);
  CHECK_THROWS_AS(line_scenario(2, -1.0), std::invalid_argument);
}

TEST_CASE("dumbbell_scenario normalization matches the published rates") {
  CHECK(dumbbell_scenario(2, 0.7).lambda == doctest::Approx(0.28));
  CHECK(dumbbell_scenario(6, 0.7).lambda == doctest::Approx(0.0933).epsilon(1e-2));
  const NetworkConfig solo = dumbbell_scenario(1, 0.5);
  CHECK(solo.theta[1] == 0.0);
  CHECK(solo.k_links == 4);
  CHECK(solo.psi[1] == 1.0);
  CHECK_THROWS_AS(dumbbell_scenario(0, 0.5), std::invalid_argument);
}

TEST_CASE("config validation rejects bad inputs") {
  NetworkConfig cfg = two_link({0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0});
  CHECK_NOTHROW(cfg.validate());
  NetworkConfig bad = cfg;
  bad.eps = {0.0, 1.0};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.mu = {1.0};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.psi[0] = 1.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.lambda = -0.1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.buffer_capacity = 0u;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("effective_rate covers the three uplink models") {
  CHECK(effective_rate(0.5, Uplink::ideal()) == 0.5);
  CHECK(effective_rate(0.5, Uplink::mpr(0.2)) == doctest::Approx(0.4));
  CHECK(effective_rate(0.1, Uplink::aloha(1.0)) ==
        doctest::Approx(0.1 * std::exp(-0.2)));
}
