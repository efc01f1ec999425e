#pragma once

#include <cstddef>
#include <vector>

#include "mpfloat.hpp"
#include "rng.hpp"

namespace aoi {

// A multiset of exponential-stage rates: n distinct values with
// multiplicities. The distribution of the sum of all stages is
// hypoexponential (Erlang when only one distinct rate remains).
struct RateMultiset {
  std::vector<double> rates;  // strictly positive, pairwise distinct
  std::vector<int> mult;      // same length, each >= 1
  int total = 0;              // sum of multiplicities

  std::vector<double> expanded() const;  // each rate repeated mult[i] times
};

// Clusters rates whose relative difference is within rel_tol; each cluster
// becomes one distinct rate (arithmetic mean of members) with summed
// multiplicity. Deterministic given input order: clusters are kept in
// first-encounter order. Throws on non-positive rates.
RateMultiset group_rates(const std::vector<double>& rates,
                         double rel_tol = 1e-9);

// Hypoexponential distribution of the sum of independent exponential
// stages. Evaluation uses the closed-form partial-fraction expansion with
// coefficients held in extended precision; when rates are too close for
// the expansion to recombine accurately the transient phase-type solution
// (matrix_cdf/matrix_pdf) takes over as the production path.
class HypoExp {
 public:
  static HypoExp from_rates(const std::vector<double>& rates,
                            double group_tol = 1e-9);
  static HypoExp from_multiset(RateMultiset ms);

  const RateMultiset& rates() const { return ms_; }

  // Coefficient gamma_{ij} of t^{j-1} e^{-rate_i t} / (j-1)!, as a double.
  // i is the 0-based distinct-rate index, j the 1-based order (j <= mult[i]).
  double coeff(std::size_t i, int j) const;

  double pdf(double t) const;    // 0 for t < 0
  double cdf(double tau) const;  // 0 for tau <= 0, clamped to [0,1]
  double mean() const;           // sum of mult[i]/rate[i]

  // One draw of the stage sum. Draw order is fixed (distinct rates in
  // stored order, multiplicities inner), so a seeded stream reproduces.
  double sample(Rng& rng) const;

  bool uses_matrix_fallback() const { return matrix_route_; }

  const std::vector<std::vector<BigFloat>>& mp_coeffs() const {
    return coeff_;
  }

 private:
  HypoExp() = default;

  RateMultiset ms_;
  std::vector<std::vector<BigFloat>> coeff_;  // coeff_[i][j-1]
  std::vector<double> stage_rates_;
  bool matrix_route_ = false;
};

// CDF of the hypoexponential with the given stage rates, evaluated through
// uniformization of the bidiagonal phase-type generator. Numerically stable
// for arbitrarily close or repeated rates; independent of the
// partial-fraction path, which it cross-checks to 1e-8.
double matrix_cdf(const std::vector<double>& stage_rates, double tau);

// Density by the same transient solution: rate of absorption at time t.
double matrix_pdf(const std::vector<double>& stage_rates, double t);

}  // namespace aoi
