#pragma once

#include "model.hpp"

namespace aoi {

// Lower/upper bounds and independence approximation of the average AoI of
// the tagged source under one scheduling policy. lower <= upper always; the
// approximation is not a proven bound and may sit anywhere near them.
struct AoIBounds {
  double lower = 0.0;
  double upper = 0.0;
  double approx = 0.0;
  Policy policy = Policy::kFcfs;
};

// Exact mean end-to-end time of a tagged packet: the sum of the mean
// sojourn times 1/alpha_j over the path. Throws UnstableError when any
// rho_j >= 1.
double mean_network_time(const DerivedRates& derived);

// Average AoI under the assumption that waiting and interarrival times are
// independent. Tends to slightly overestimate the true value.
double aoi_approx(const NetworkConfig& config);

// Upper bound on E[W*Y]: E[T]*E[Y], recovered from the derived rates
// (lambda is arrival_rate[0] - theta_bar[0]).
double ewy_upper(const DerivedRates& derived);

// Lower bound on E[W*Y] for FCFS: the closed-form expectation of
// Y*(T - Y - S_prefix)^+ with T the full-path system-time hypoexponential
// and S_prefix the service-time hypoexponential of the first K-1 links.
// For K=1 the prefix degenerates to a point mass at zero.
double ewy_lower_fcfs(const NetworkConfig& config, const DerivedRates& derived);

// Lower bound on E[W*Y] shared by the OPF and HAF policies.
double ewy_lower_opf(const NetworkConfig& config, const DerivedRates& derived);

// Combines the E[W*Y] bounds with the loss-geometry terms into average-AoI
// bounds for the given policy (the upper bound is policy-independent).
AoIBounds aoi_bounds(const NetworkConfig& config, Policy policy);

// Upper bound on P(PAoI > tau) in the error-free case: the survival
// function of the hypoexponential with rates (alpha_1..alpha_K,
// mu_1..mu_K, lambda). Throws UnsupportedError if any eps_k > 0.
double paoi_tail_bound(const NetworkConfig& config, double tau);

// Classical M/M/1 FCFS average AoI, used as the K=1 ground truth.
double mm1_aoi_exact(double lambda, double mu);

}  // namespace aoi
