#include "model.hpp"

#include <cmath>
#include <stdexcept>

namespace aoi {

const char* policy_name(Policy p) {
  switch (p) {
    case Policy::kFcfs: return "fcfs";
    case Policy::kOpf: return "opf";
    case Policy::kHaf: return "haf";
  }
  return "?";
}

std::optional<Policy> policy_from_name(const std::string& name) {
  if (name == "fcfs") return Policy::kFcfs;
  if (name == "opf") return Policy::kOpf;
  if (name == "haf") return Policy::kHaf;
  return std::nullopt;
}

void NetworkConfig::validate() const {
  if (k_links < 1) throw std::invalid_argument("k_links must be >= 1");
  const auto k = static_cast<std::size_t>(k_links);
  if (theta.size() != k || psi.size() != k || mu.size() != k ||
      eps.size() != k) {
    throw std::invalid_argument("theta/psi/mu/eps must all have length K");
  }
  auto finite_nonneg = [](double x) { return std::isfinite(x) && x >= 0.0; };
  if (!finite_nonneg(lambda)) throw std::invalid_argument("lambda must be >= 0");
  for (std::size_t j = 0; j < k; ++j) {
    if (!finite_nonneg(theta[j])) throw std::invalid_argument("theta must be >= 0");
    if (!finite_nonneg(mu[j]) || mu[j] == 0.0)
      throw std::invalid_argument("mu must be > 0");
    if (!(psi[j] >= 0.0 && psi[j] <= 1.0))
      throw std::invalid_argument("psi must be in [0,1]");
    if (!(eps[j] >= 0.0 && eps[j] < 1.0))
      throw std::invalid_argument("eps must be in [0,1)");
  }
  switch (uplink.kind) {
    case Uplink::Kind::kIdeal:
      break;
    case Uplink::Kind::kMprThinning:
      if (!(uplink.p_c >= 0.0 && uplink.p_c < 1.0))
        throw std::invalid_argument("uplink p_c must be in [0,1)");
      break;
    case Uplink::Kind::kAloha:
      if (!(uplink.packet_duration > 0.0))
        throw std::invalid_argument("uplink packet_duration must be > 0");
      break;
  }
  if (buffer_capacity && *buffer_capacity == 0)
    throw std::invalid_argument("buffer_capacity must be positive when set");
}

double effective_rate(double rate, const Uplink& uplink) {
  switch (uplink.kind) {
    case Uplink::Kind::kIdeal:
      return rate;
    case Uplink::Kind::kMprThinning:
      return rate * (1.0 - uplink.p_c);
    case Uplink::Kind::kAloha:
      return rate * std::exp(-2.0 * rate * uplink.packet_duration);
  }
  return rate;
}

double effective_lambda(const NetworkConfig& config) {
  return effective_rate(config.lambda, config.uplink);
}

double cross_traffic_load(const NetworkConfig& config, int k) {
  if (k < 1 || k > config.k_links)
    throw std::out_of_range("node index out of range");
  double load = 0.0;
  for (int j = 1; j <= k; ++j) {
    double term = config.theta[j - 1];
    for (int i = j; i <= k - 1; ++i) {
      term *= (1.0 - config.psi[i - 1]) * (1.0 - config.eps[i - 1]);
    }
    load += term;
  }
  return load;
}

DerivedRates derived_rates(const NetworkConfig& config) {
  config.validate();
  const int k = config.k_links;
  DerivedRates d;
  d.theta_bar.resize(k);
  d.p_s.resize(k + 1);
  d.arrival_rate.resize(k);
  d.rho.resize(k);
  d.alpha.resize(k);

  const double lam = effective_lambda(config);
  d.p_s[0] = 1.0;
  for (int j = 1; j <= k; ++j)
    d.p_s[j] = d.p_s[j - 1] * (1.0 - config.eps[j - 1]);
  for (int j = 1; j <= k; ++j) {
    d.theta_bar[j - 1] = cross_traffic_load(config, j);
    d.arrival_rate[j - 1] = lam * d.p_s[j - 1] + d.theta_bar[j - 1];
    d.rho[j - 1] = d.arrival_rate[j - 1] / config.mu[j - 1];
    d.alpha[j - 1] = config.mu[j - 1] - d.arrival_rate[j - 1];
  }
  return d;
}

std::vector<int> stability_check(const DerivedRates& derived) {
  std::vector<int> violations;
  for (std::size_t j = 0; j < derived.rho.size(); ++j) {
    if (derived.rho[j] >= 1.0) violations.push_back(static_cast<int>(j) + 1);
  }
  return violations;
}

NetworkConfig line_scenario(int k_links, double rho, double mu_isl,
                            double mu_dl, double eps) {
  if (k_links < 1) throw std::invalid_argument("k_links must be >= 1");
  if (!(rho > 0.0)) throw std::invalid_argument("rho must be > 0");
  NetworkConfig cfg;
  cfg.k_links = k_links;
  cfg.lambda = rho * mu_dl / k_links;
  cfg.theta.assign(k_links, cfg.lambda);
  cfg.theta[0] = 0.0;
  cfg.psi.assign(k_links, 0.0);
  cfg.mu.assign(k_links, mu_isl);
  cfg.mu[k_links - 1] = mu_dl;
  cfg.eps.assign(k_links, eps);
  cfg.validate();
  return cfg;
}

NetworkConfig dumbbell_scenario(int n_sources, double rho, double mu_isl,
                                double mu_dl, double eps) {
  if (n_sources < 1) throw std::invalid_argument("n_sources must be >= 1");
  if (!(rho > 0.0)) throw std::invalid_argument("rho must be > 0");
  constexpr int kHops = 4;
  NetworkConfig cfg;
  cfg.k_links = kHops;
  cfg.lambda = rho * mu_dl / n_sources;
  cfg.theta.assign(kHops, 0.0);
  cfg.theta[1] = (n_sources - 1) * cfg.lambda;
  cfg.psi.assign(kHops, 0.0);
  cfg.psi[1] = 1.0;
  cfg.mu.assign(kHops, mu_isl);
  cfg.mu[kHops - 1] = mu_dl;
  cfg.eps.assign(kHops, eps);
  cfg.validate();
  return cfg;
}

}  // namespace aoi
