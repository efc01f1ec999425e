#include "analysis.hpp"

#include <cmath>
#include <stdexcept>

#include "errors.hpp"
#include "phasetype.hpp"

namespace aoi {

namespace {

void require_stable(const DerivedRates& derived) {
  auto bad = stability_check(derived);
  if (!bad.empty()) throw UnstableError(std::move(bad));
}

double recovered_lambda(const DerivedRates& derived) {
  return derived.arrival_rate[0] - derived.theta_bar[0];
}

double sum_inverse(const std::vector<double>& rates) {
  double s = 0.0;
  for (double r : rates) s += 1.0 / r;
  return s;
}

BigFloat binom_mp(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigFloat r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Average AoI from an E[W*Y] value: lambda*E[WY] + E[S]
//   + (1-p)/p * E[T] + 1/(lambda*p) + (1-p)^2/(lambda*p^2),
// where p = p_s(K). The squared loss term enters with a plus sign, as the
// geometric sum over consecutive losses requires.
double combine_aoi(double e_wy, double lambda, double p_succ, double e_t,
                   double e_s) {
  return lambda * e_wy + e_s + (1.0 - p_succ) / p_succ * e_t +
         1.0 / (lambda * p_succ) +
         (1.0 - p_succ) * (1.0 - p_succ) / (lambda * p_succ * p_succ);
}

}  // namespace

double mean_network_time(const DerivedRates& derived) {
  require_stable(derived);
  return sum_inverse(derived.alpha);
}

double aoi_approx(const NetworkConfig& config) {
  const DerivedRates derived = derived_rates(config);
  require_stable(derived);
  const double lambda = effective_lambda(config);
  if (!(lambda > 0.0)) throw std::invalid_argument("arrival rate must be > 0");
  const double p = derived.p_s[config.k_links];
  const double e_t = sum_inverse(derived.alpha);
  return e_t / p + 1.0 / (lambda * p) +
         (1.0 - p) * (1.0 - p) / (lambda * p * p);
}

double ewy_upper(const DerivedRates& derived) {
  require_stable(derived);
  const double lambda = recovered_lambda(derived);
  if (!(lambda > 0.0)) throw std::invalid_argument("arrival rate must be > 0");
  return sum_inverse(derived.alpha) / lambda;
}

double ewy_lower_fcfs(const NetworkConfig& config,
                      const DerivedRates& derived) {
  require_stable(derived);
  const double lambda = effective_lambda(config);
  if (!(lambda > 0.0)) throw std::invalid_argument("arrival rate must be > 0");
  const HypoExp system_time = HypoExp::from_rates(derived.alpha);
  const RateMultiset& rm = system_time.rates();
  const auto& gamma = system_time.mp_coeffs();

  // Service-time hypoexponential of the first K-1 links; absent for K=1,
  // where the conditioning variable is a point mass at zero and only the
  // m=0 terms survive.
  std::vector<double> prefix_mu(config.mu.begin(), config.mu.end() - 1);
  std::optional<HypoExp> prefix;
  if (!prefix_mu.empty()) prefix = HypoExp::from_rates(prefix_mu);

  const BigFloat lam(lambda);
  BigFloat total = 0;
  for (std::size_t i = 0; i < rm.rates.size(); ++i) {
    const BigFloat alpha_i(rm.rates[i]);
    for (int j = 1; j <= rm.mult[i]; ++j) {
      for (int l = 0; l <= j - 1; ++l) {
        for (int m = 0; m <= l; ++m) {
          const BigFloat base = gamma[i][j - 1] * lam * (j - l) * (l - m + 1) /
                                (pow(alpha_i, j - l + 1) *
                                 pow(alpha_i + lam, l - m + 2));
          if (!prefix) {
            if (m == 0) total += base;
            continue;
          }
          const RateMultiset& pm = prefix->rates();
          const auto& delta = prefix->mp_coeffs();
          for (std::size_t o = 0; o < pm.rates.size(); ++o) {
            const BigFloat mu_o(pm.rates[o]);
            for (int p = 1; p <= pm.mult[o]; ++p) {
              total += base * binom_mp(m + p - 1, m) * delta[o][p - 1] /
                       pow(alpha_i + mu_o, m + p);
            }
          }
        }
      }
    }
  }
  return static_cast<double>(total);
}

double ewy_lower_opf(const NetworkConfig& config, const DerivedRates& derived) {
  require_stable(derived);
  const double lambda = effective_lambda(config);
  if (!(lambda > 0.0)) throw std::invalid_argument("arrival rate must be > 0");
  double value = lambda / (derived.alpha[0] * config.mu[0] * config.mu[0]);
  for (int j = 2; j <= config.k_links; ++j) {
    const double rho_j = derived.rho[j - 1];
    value += (1.0 - rho_j) * rho_j * config.mu[j - 2] /
             (derived.arrival_rate[j - 1] *
              (derived.alpha[j - 1] + config.mu[j - 2]));
  }
  return value;
}

AoIBounds aoi_bounds(const NetworkConfig& config, Policy policy) {
  const DerivedRates derived = derived_rates(config);
  require_stable(derived);
  const double lambda = effective_lambda(config);
  if (!(lambda > 0.0)) throw std::invalid_argument("arrival rate must be > 0");
  const double p = derived.p_s[config.k_links];
  const double e_t = sum_inverse(derived.alpha);
  const double e_s = sum_inverse(config.mu);

  const double wy_lower = policy == Policy::kFcfs
                              ? ewy_lower_fcfs(config, derived)
                              : ewy_lower_opf(config, derived);
  const double wy_upper = ewy_upper(derived);

  AoIBounds b;
  b.policy = policy;
  b.lower = combine_aoi(wy_lower, lambda, p, e_t, e_s);
  b.upper = combine_aoi(wy_upper, lambda, p, e_t, e_s);
  b.approx = aoi_approx(config);
  return b;
}

double paoi_tail_bound(const NetworkConfig& config, double tau) {
  for (double e : config.eps) {
    if (e > 0.0)
      throw UnsupportedError("PAoI tail bound requires an error-free path");
  }
  const DerivedRates derived = derived_rates(config);
  require_stable(derived);
  const double lambda = effective_lambda(config);
  if (!(lambda > 0.0)) throw std::invalid_argument("arrival rate must be > 0");

  std::vector<double> omega = derived.alpha;
  omega.insert(omega.end(), config.mu.begin(), config.mu.end());
  omega.push_back(lambda);
  const HypoExp bound = HypoExp::from_rates(omega);
  return 1.0 - bound.cdf(tau);
}

double mm1_aoi_exact(double lambda, double mu) {
  if (!(lambda > 0.0) || !(mu > 0.0))
    throw std::invalid_argument("rates must be positive");
  if (lambda >= mu) throw UnstableError({1});
  const double rho = lambda / mu;
  return (1.0 / mu) * (1.0 + 1.0 / rho + rho * rho / (1.0 - rho));
}

}  // namespace aoi
