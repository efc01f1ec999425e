#include "phasetype.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aoi {

namespace {

double rel_gap(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

// Every prefix of the product is itself a binomial coefficient, so the
// divisions are exact and the result carries full precision.
BigFloat binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigFloat r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Enumerates all {m_l >= 0, l != i, sum m_l = budget} and accumulates
// prod_{l != i} C(n_l + m_l - 1, m_l) / (rate_l - rate_i)^(n_l + m_l).
// The enumeration is exhaustive and integer-indexed; for K <= 10 networks
// it stays in the thousands of terms.
void composition_sum(const RateMultiset& ms, std::size_t i, std::size_t l,
                     int budget, const BigFloat& partial, BigFloat& acc) {
  if (l == ms.rates.size()) {
    if (budget == 0) acc += partial;
    return;
  }
  if (l == i) {
    composition_sum(ms, i, l + 1, budget, partial, acc);
    return;
  }
  const BigFloat diff = BigFloat(ms.rates[l]) - BigFloat(ms.rates[i]);
  for (int m = 0; m <= budget; ++m) {
    BigFloat term = partial * binom(ms.mult[l] + m - 1, m) /
                    pow(diff, ms.mult[l] + m);
    composition_sum(ms, i, l + 1, budget - m, term, acc);
  }
}

std::vector<std::vector<BigFloat>> partial_fraction_coeffs(
    const RateMultiset& ms) {
  const std::size_t n_distinct = ms.rates.size();
  BigFloat rate_product = 1;
  for (std::size_t l = 0; l < n_distinct; ++l)
    rate_product *= pow(BigFloat(ms.rates[l]), ms.mult[l]);

  std::vector<std::vector<BigFloat>> coeff(n_distinct);
  for (std::size_t i = 0; i < n_distinct; ++i) {
    coeff[i].resize(ms.mult[i]);
    for (int j = 1; j <= ms.mult[i]; ++j) {
      BigFloat acc = 0;
      composition_sum(ms, i, 0, ms.mult[i] - j, BigFloat(1), acc);
      const int sign = (ms.mult[i] - j) % 2 == 0 ? 1 : -1;
      coeff[i][j - 1] = rate_product * sign * acc;
    }
  }
  return coeff;
}

}  // namespace

std::vector<double> RateMultiset::expanded() const {
  std::vector<double> out;
  out.reserve(total);
  for (std::size_t i = 0; i < rates.size(); ++i)
    out.insert(out.end(), mult[i], rates[i]);
  return out;
}

RateMultiset group_rates(const std::vector<double>& rates, double rel_tol) {
  if (rates.empty()) throw std::invalid_argument("empty rate vector");
  RateMultiset ms;
  std::vector<double> sums;  // per cluster, for the running mean
  for (double r : rates) {
    if (!(r > 0.0) || !std::isfinite(r))
      throw std::invalid_argument("rates must be strictly positive");
    bool placed = false;
    for (std::size_t c = 0; c < ms.rates.size(); ++c) {
      if (rel_gap(r, ms.rates[c]) <= rel_tol) {
        sums[c] += r;
        ms.mult[c] += 1;
        ms.rates[c] = sums[c] / ms.mult[c];
        placed = true;
        break;
      }
    }
    if (!placed) {
      ms.rates.push_back(r);
      sums.push_back(r);
      ms.mult.push_back(1);
    }
  }
  ms.total = static_cast<int>(rates.size());
  return ms;
}

HypoExp HypoExp::from_rates(const std::vector<double>& rates,
                            double group_tol) {
  return from_multiset(group_rates(rates, group_tol));
}

HypoExp HypoExp::from_multiset(RateMultiset ms) {
  for (std::size_t a = 0; a < ms.rates.size(); ++a) {
    if (!(ms.rates[a] > 0.0))
      throw std::invalid_argument("rates must be strictly positive");
    if (ms.mult[a] < 1) throw std::invalid_argument("multiplicities must be >= 1");
    for (std::size_t b = a + 1; b < ms.rates.size(); ++b) {
      if (ms.rates[a] == ms.rates[b])
        throw std::invalid_argument("distinct rates must be pairwise distinct");
    }
  }

  HypoExp spec;
  spec.ms_ = std::move(ms);
  spec.stage_rates_ = spec.ms_.expanded();
  spec.coeff_ = partial_fraction_coeffs(spec.ms_);

  // Route evaluation through the matrix path when the expansion cannot be
  // trusted: rates closer than 1e-6 relative, or a coefficient magnitude
  // that would consume most of the 100-digit working precision.
  double min_gap = 1.0;
  for (std::size_t a = 0; a < spec.ms_.rates.size(); ++a)
    for (std::size_t b = a + 1; b < spec.ms_.rates.size(); ++b)
      min_gap = std::min(min_gap, rel_gap(spec.ms_.rates[a], spec.ms_.rates[b]));
  // L1 mass of the expansion; the signed version integrates to exactly 1,
  // so this ratio is the number of digits lost to cancellation.
  BigFloat magnitude = 0;
  for (std::size_t i = 0; i < spec.coeff_.size(); ++i)
    for (int j = 1; j <= spec.ms_.mult[i]; ++j)
      magnitude +=
          abs(spec.coeff_[i][j - 1]) / pow(BigFloat(spec.ms_.rates[i]), j);
  spec.matrix_route_ = min_gap < 1e-6 || magnitude > BigFloat("1e60");
  return spec;
}

double HypoExp::coeff(std::size_t i, int j) const {
  return static_cast<double>(coeff_.at(i).at(j - 1));
}

double HypoExp::pdf(double t) const {
  if (t < 0.0) return 0.0;
  if (matrix_route_) return matrix_pdf(stage_rates_, t);
  const BigFloat tt(t);
  BigFloat f = 0;
  for (std::size_t i = 0; i < ms_.rates.size(); ++i) {
    const BigFloat decay = exp(-BigFloat(ms_.rates[i]) * tt);
    BigFloat poly = 0;
    BigFloat tpow = 1;       // t^(j-1)
    double factorial = 1.0;  // (j-1)!
    for (int j = 1; j <= ms_.mult[i]; ++j) {
      poly += coeff_[i][j - 1] * tpow / factorial;
      tpow *= tt;
      factorial *= j;
    }
    f += decay * poly;
  }
  return static_cast<double>(f);
}

double HypoExp::cdf(double tau) const {
  if (tau <= 0.0) return 0.0;
  if (matrix_route_) return matrix_cdf(stage_rates_, tau);
  const BigFloat tt(tau);
  BigFloat acc = 0;
  for (std::size_t l = 0; l < ms_.rates.size(); ++l) {
    const BigFloat w(ms_.rates[l]);
    const BigFloat decay = exp(-w * tt);
    for (int n = 1; n <= ms_.mult[l]; ++n) {
      // Integral of t^(n-1) e^(-w t)/(n-1)! from 0 to tau.
      BigFloat inner = 1 / pow(w, n);
      BigFloat tpow = 1;
      double factorial = 1.0;
      for (int j = 0; j <= n - 1; ++j) {
        inner -= tpow * decay / (factorial * pow(w, n - j));
        tpow *= tt;
        factorial *= j + 1;
      }
      acc += coeff_[l][n - 1] * inner;
    }
  }
  return std::clamp(static_cast<double>(acc), 0.0, 1.0);
}

double HypoExp::mean() const {
  double m = 0.0;
  for (std::size_t i = 0; i < ms_.rates.size(); ++i)
    m += ms_.mult[i] / ms_.rates[i];
  return m;
}

double HypoExp::sample(Rng& rng) const {
  double s = 0.0;
  for (std::size_t i = 0; i < ms_.rates.size(); ++i)
    for (int c = 0; c < ms_.mult[i]; ++c) s += rng.exponential(ms_.rates[i]);
  return s;
}

namespace {

// Transient solution of the bidiagonal generator by uniformization. The
// state vector stays a sub-probability distribution, so every operation is
// nonnegative and the scheme is stable regardless of rate spacing. Poisson
// weights are taken in log space to survive large uniformization constants.
struct Transient {
  double survival;   // P(not yet absorbed at t)
  double last_mass;  // occupancy of the final stage at t; times its rate = pdf
};

Transient uniformized(const std::vector<double>& rates, double t) {
  const std::size_t n = rates.size();
  const double uni = *std::max_element(rates.begin(), rates.end());
  const double a = uni * t;
  const int kmax =
      static_cast<int>(a + 12.0 * std::sqrt(a + 25.0) + 30.0);

  std::vector<double> v(n, 0.0);
  v[0] = 1.0;
  double survival = 0.0;
  double last_mass = 0.0;
  double mass = 1.0;
  for (int k = 0; k <= kmax; ++k) {
    const double lw = k * std::log(a) - a - std::lgamma(k + 1.0);
    const double w = (a == 0.0) ? (k == 0 ? 1.0 : 0.0) : std::exp(lw);
    survival += w * mass;
    last_mass += w * v[n - 1];
    // v <- v P with P = I + Q/uni
    const double absorbed = v[n - 1] * rates[n - 1] / uni;
    for (std::size_t i = n - 1; i > 0; --i)
      v[i] += v[i - 1] * rates[i - 1] / uni - v[i] * rates[i] / uni;
    v[0] -= v[0] * rates[0] / uni;
    mass -= absorbed;
    if (mass < 1e-16) break;  // remaining contribution is below 1e-16
  }
  return {survival, last_mass};
}

}  // namespace

double matrix_cdf(const std::vector<double>& stage_rates, double tau) {
  if (stage_rates.empty()) throw std::invalid_argument("empty rate vector");
  for (double r : stage_rates)
    if (!(r > 0.0)) throw std::invalid_argument("rates must be positive");
  if (tau <= 0.0) return 0.0;
  const double s = uniformized(stage_rates, tau).survival;
  return std::clamp(1.0 - s, 0.0, 1.0);
}

double matrix_pdf(const std::vector<double>& stage_rates, double t) {
  if (stage_rates.empty()) throw std::invalid_argument("empty rate vector");
  if (t < 0.0) return 0.0;
  return uniformized(stage_rates, t).last_mass * stage_rates.back();
}

}  // namespace aoi
