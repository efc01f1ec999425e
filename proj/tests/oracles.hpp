#pragma once

// Independent reference computations for tests. Everything here avoids the
// closed-form code paths it is used to check: distribution evaluations go
// through the uniformized transient solution, expectations through
// numerical quadrature, and the M/M/1 reference through a standalone
// Lindley recursion.

#include <cstdint>
#include <vector>

#include "desim.hpp"
#include "model.hpp"

namespace oracle {

// E[(T - c)^+] for the hypoexponential with the given stage rates,
// integrated numerically from the survival function.
double mean_excess(const std::vector<double>& stage_rates, double c);

// E[Y * (T - Y - S)^+] with Y ~ Exp(lambda), T ~ hypoexp(alpha stages),
// S ~ hypoexp(prefix stages, empty = point mass at 0), all independent.
// Nested adaptive quadrature; absolute accuracy ~1e-9 for moderate rates.
double ewy_lower_quadrature(const std::vector<double>& alpha_stages,
                            const std::vector<double>& prefix_stages,
                            double lambda);

// Numerical convolution of two hypoexponential densities at t.
double convolve_pdf(const std::vector<double>& stages_a,
                    const std::vector<double>& stages_b, double t);

// Standalone M/M/1 FCFS simulation via the Lindley recursion; returns the
// delivery records (gen, del, seq) of n packets.
std::vector<aoi::DeliveryRecord> mm1_lindley_trace(double lambda, double mu,
                                                   std::uint64_t n,
                                                   std::uint64_t seed);

// Time average of the age sawtooth by brute-force grid integration.
double grid_average_aoi(const std::vector<aoi::DeliveryRecord>& deliveries,
                        double t_start, double t_end, double step);

// Distribution-free DKW band half-width for an ECDF of n samples.
double dkw_epsilon(std::uint64_t n, double confidence);

// One-sample KS distance of samples against an exponential(rate) CDF.
double ks_vs_exponential(std::vector<double> samples, double rate);

}  // namespace oracle
