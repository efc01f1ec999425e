#include "aoi/aoi.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include "analysis.hpp"
#include "desim.hpp"
#include "errors.hpp"
#include "model.hpp"
#include "scenario.hpp"
#include "stats.hpp"

using namespace aoi;

struct aoi_config {
  NetworkConfig cfg;
};

struct aoi_scenario {
  Scenario sc;
};

struct aoi_sim {
  SimResult result;
  AoISummary summary;
  std::vector<std::size_t> measured_flows;  // summary index -> flow index
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

int classify(const std::exception& e) {
  set_error(e.what());
  if (dynamic_cast<const UnstableError*>(&e)) return AOI_EUNSTABLE;
  if (dynamic_cast<const UnsupportedError*>(&e)) return AOI_EUNSUPPORTED;
  if (dynamic_cast<const ParseError*>(&e)) return AOI_EPARSE;
  if (dynamic_cast<const std::out_of_range*>(&e)) return AOI_ERANGE;
  if (dynamic_cast<const std::bad_alloc*>(&e)) return AOI_ENOMEM;
  return AOI_EINVAL;
}

template <class Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    return AOI_OK;
  } catch (const std::exception& e) {
    return classify(e);
  }
}

template <class Fn>
auto guarded_ptr(Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const std::exception& e) {
    classify(e);
    return nullptr;
  }
}

std::optional<Policy> to_policy(int policy) {
  switch (policy) {
    case AOI_POLICY_FCFS: return Policy::kFcfs;
    case AOI_POLICY_OPF: return Policy::kOpf;
    case AOI_POLICY_HAF: return Policy::kHaf;
    default: return std::nullopt;
  }
}

int from_policy(Policy p) {
  switch (p) {
    case Policy::kFcfs: return AOI_POLICY_FCFS;
    case Policy::kOpf: return AOI_POLICY_OPF;
    case Policy::kHaf: return AOI_POLICY_HAF;
  }
  return AOI_POLICY_FCFS;
}

aoi_sim* wrap_sim(SimResult&& result) {
  auto* sim = new aoi_sim;
  sim->result = std::move(result);
  sim->summary = summarize(sim->result);
  for (std::size_t f = 0; f < sim->result.measured.size(); ++f) {
    if (sim->result.measured[f]) sim->measured_flows.push_back(f);
  }
  return sim;
}

}  // namespace

extern "C" {

const char* aoi_last_error(void) { return g_last_error.c_str(); }

const char* aoi_status_name(int status) {
  switch (status) {
    case AOI_OK: return "ok";
    case AOI_EINVAL: return "invalid argument";
    case AOI_EPARSE: return "parse error";
    case AOI_EUNSTABLE: return "unstable configuration";
    case AOI_EUNSUPPORTED: return "unsupported operation";
    case AOI_ERANGE: return "out of range";
    case AOI_EIO: return "io error";
    case AOI_ENOMEM: return "out of memory";
    default: return "unknown status";
  }
}

aoi_config* aoi_config_create(int k_links, double lambda, const double* theta,
                              const double* psi, const double* mu,
                              const double* eps) {
  return guarded_ptr([&]() -> aoi_config* {
    if (k_links < 1 || !theta || !psi || !mu || !eps)
      throw std::invalid_argument("bad config arrays");
    NetworkConfig cfg;
    cfg.k_links = k_links;
    cfg.lambda = lambda;
    cfg.theta.assign(theta, theta + k_links);
    cfg.psi.assign(psi, psi + k_links);
    cfg.mu.assign(mu, mu + k_links);
    cfg.eps.assign(eps, eps + k_links);
    cfg.validate();
    return new aoi_config{std::move(cfg)};
  });
}

aoi_config* aoi_config_line(int k_links, double rho, double mu_isl,
                            double mu_dl, double eps) {
  return guarded_ptr([&]() -> aoi_config* {
    return new aoi_config{line_scenario(k_links, rho, mu_isl, mu_dl, eps)};
  });
}

aoi_config* aoi_config_dumbbell(int n_sources, double rho, double mu_isl,
                                double mu_dl, double eps) {
  return guarded_ptr([&]() -> aoi_config* {
    return new aoi_config{dumbbell_scenario(n_sources, rho, mu_isl, mu_dl, eps)};
  });
}

void aoi_config_free(aoi_config* config) { delete config; }

int aoi_config_set_uplink_ideal(aoi_config* config) {
  return guarded([&] {
    if (!config) throw std::invalid_argument("null config");
    config->cfg.uplink = Uplink::ideal();
  });
}

int aoi_config_set_uplink_mpr(aoi_config* config, double p_c) {
  return guarded([&] {
    if (!config) throw std::invalid_argument("null config");
    config->cfg.uplink = Uplink::mpr(p_c);
    config->cfg.validate();
  });
}

int aoi_config_set_uplink_aloha(aoi_config* config, double packet_duration) {
  return guarded([&] {
    if (!config) throw std::invalid_argument("null config");
    config->cfg.uplink = Uplink::aloha(packet_duration);
    config->cfg.validate();
  });
}

int aoi_config_set_buffer_capacity(aoi_config* config, uint32_t capacity) {
  return guarded([&] {
    if (!config) throw std::invalid_argument("null config");
    if (capacity == 0)
      config->cfg.buffer_capacity.reset();
    else
      config->cfg.buffer_capacity = capacity;
  });
}

int aoi_config_k_links(const aoi_config* config) {
  return config ? config->cfg.k_links : 0;
}

double aoi_config_lambda(const aoi_config* config) {
  return config ? config->cfg.lambda : 0.0;
}

int aoi_config_derived(const aoi_config* config, double* theta_bar,
                       double* p_s, double* arrival_rate, double* rho,
                       double* alpha) {
  return guarded([&] {
    if (!config) throw std::invalid_argument("null config");
    const DerivedRates d = derived_rates(config->cfg);
    const std::size_t k = d.alpha.size();
    if (theta_bar) std::copy_n(d.theta_bar.data(), k, theta_bar);
    if (p_s) std::copy_n(d.p_s.data(), k + 1, p_s);
    if (arrival_rate) std::copy_n(d.arrival_rate.data(), k, arrival_rate);
    if (rho) std::copy_n(d.rho.data(), k, rho);
    if (alpha) std::copy_n(d.alpha.data(), k, alpha);
  });
}

int aoi_config_stability(const aoi_config* config, int* first_unstable_node) {
  return guarded([&] {
    if (!config || !first_unstable_node)
      throw std::invalid_argument("null argument");
    const auto bad = stability_check(derived_rates(config->cfg));
    *first_unstable_node = bad.empty() ? 0 : bad.front();
  });
}

int aoi_mean_network_time(const aoi_config* config, double* out) {
  return guarded([&] {
    if (!config || !out) throw std::invalid_argument("null argument");
    *out = mean_network_time(derived_rates(config->cfg));
  });
}

int aoi_approx(const aoi_config* config, double* out) {
  return guarded([&] {
    if (!config || !out) throw std::invalid_argument("null argument");
    *out = aoi_approx(config->cfg);
  });
}

int aoi_bounds(const aoi_config* config, int policy, aoi_bounds_result* out) {
  return guarded([&] {
    if (!config || !out) throw std::invalid_argument("null argument");
    const auto p = to_policy(policy);
    if (!p) throw std::invalid_argument("unknown policy");
    const AoIBounds b = aoi_bounds(config->cfg, *p);
    out->lower = b.lower;
    out->upper = b.upper;
    out->approx = b.approx;
  });
}

int aoi_paoi_tail_bound(const aoi_config* config, double tau, double* out) {
  return guarded([&] {
    if (!config || !out) throw std::invalid_argument("null argument");
    *out = paoi_tail_bound(config->cfg, tau);
  });
}

int aoi_mm1_aoi_exact(double lambda, double mu, double* out) {
  return guarded([&] {
    if (!out) throw std::invalid_argument("null argument");
    *out = mm1_aoi_exact(lambda, mu);
  });
}

aoi_scenario* aoi_scenario_load(const char* path) {
  return guarded_ptr([&]() -> aoi_scenario* {
    if (!path) throw std::invalid_argument("null path");
    return new aoi_scenario{load_scenario(path)};
  });
}

aoi_scenario* aoi_scenario_parse(const char* text) {
  return guarded_ptr([&]() -> aoi_scenario* {
    if (!text) throw std::invalid_argument("null text");
    return new aoi_scenario{parse_scenario(text)};
  });
}

void aoi_scenario_free(aoi_scenario* scenario) { delete scenario; }

size_t aoi_scenario_canonical(const aoi_scenario* scenario, char* buf,
                              size_t cap) {
  if (!scenario) return 0;
  const std::string text = canonical_text(scenario->sc);
  if (buf && cap > 0) {
    const size_t n = std::min(cap - 1, text.size());
    std::memcpy(buf, text.data(), n);
    buf[n] = '\0';
  }
  return text.size();
}

int aoi_scenario_hash(const aoi_scenario* scenario, char buf[17]) {
  return guarded([&] {
    if (!scenario || !buf) throw std::invalid_argument("null argument");
    const std::string h = scenario_hash(scenario->sc);
    std::memcpy(buf, h.c_str(), 17);
  });
}

int aoi_scenario_run_params(const aoi_scenario* scenario,
                            aoi_run_params* out) {
  return guarded([&] {
    if (!scenario || !out) throw std::invalid_argument("null argument");
    const Scenario& sc = scenario->sc;
    out->policy = from_policy(sc.policy);
    out->n_pkt = sc.n_pkt;
    out->seed = sc.seed;
    out->warmup_frac = sc.warmup_frac;
    out->n_seeds = sc.n_seeds;
    out->buffer_capacity = sc.buffer_capacity;
    out->uplink_packet_duration = sc.uplink.packet_duration;
    out->uplink_horizon = sc.uplink_horizon;
  });
}

size_t aoi_scenario_num_points(const aoi_scenario* scenario) {
  return scenario ? num_points(scenario->sc) : 0;
}

int aoi_scenario_point_info(const aoi_scenario* scenario, size_t point,
                            aoi_point_info* out) {
  return guarded([&] {
    if (!scenario || !out) throw std::invalid_argument("null argument");
    const ResolvedPoint rp = resolve_point(scenario->sc, point);
    out->rho = rp.rho;
    out->k_links = rp.k_links;
    out->n_sources = rp.n_sources;
    out->policy = from_policy(rp.policy);
    std::snprintf(out->sweep_parameter, sizeof out->sweep_parameter, "%s",
                  rp.sweep_parameter.c_str());
    std::snprintf(out->sweep_label, sizeof out->sweep_label, "%s",
                  rp.sweep_label.c_str());
  });
}

int aoi_scenario_num_sources(const aoi_scenario* scenario, size_t point) {
  int n = 0;
  const int rc = guarded([&] {
    if (!scenario) throw std::invalid_argument("null scenario");
    n = static_cast<int>(resolve_point(scenario->sc, point).source_views.size());
  });
  return rc == AOI_OK ? n : rc;
}

aoi_config* aoi_scenario_source_config(const aoi_scenario* scenario,
                                       size_t point, int source) {
  return guarded_ptr([&]() -> aoi_config* {
    if (!scenario) throw std::invalid_argument("null scenario");
    const ResolvedPoint rp = resolve_point(scenario->sc, point);
    if (source < 0 ||
        static_cast<std::size_t>(source) >= rp.source_views.size())
      throw std::out_of_range("source index out of range");
    return new aoi_config{rp.source_views[source]};
  });
}

aoi_sim* aoi_scenario_simulate(const aoi_scenario* scenario, size_t point,
                               uint64_t seed) {
  return guarded_ptr([&]() -> aoi_sim* {
    if (!scenario) throw std::invalid_argument("null scenario");
    const Scenario& sc = scenario->sc;
    const ResolvedPoint rp = resolve_point(sc, point);
    if (rp.network.flows.empty())
      throw UnsupportedError("sweep point has no simulated network");
    SimResult result =
        simulate(rp.network, rp.policy, sc.n_pkt, seed, sc.warmup_frac);
    return wrap_sim(std::move(result));
  });
}

aoi_sim* aoi_simulate_config(const aoi_config* config, int policy,
                             uint64_t n_pkt, uint64_t seed,
                             double warmup_frac) {
  return guarded_ptr([&]() -> aoi_sim* {
    if (!config) throw std::invalid_argument("null config");
    const auto p = to_policy(policy);
    if (!p) throw std::invalid_argument("unknown policy");
    SimResult result = simulate(config->cfg, *p, n_pkt, seed, warmup_frac);
    return wrap_sim(std::move(result));
  });
}

void aoi_sim_free(aoi_sim* sim) { delete sim; }

int aoi_sim_num_sources(const aoi_sim* sim) {
  return sim ? static_cast<int>(sim->summary.sources.size()) : 0;
}

int aoi_sim_source_stats(const aoi_sim* sim, int source,
                         aoi_source_stats* out) {
  return guarded([&] {
    if (!sim || !out) throw std::invalid_argument("null argument");
    const auto& src = sim->summary.sources.at(source);
    out->source_id = src.source_id;
    out->generated = src.generated;
    out->delivered = src.delivered;
    out->kept = src.kept;
    out->lost = src.lost;
    out->mean_aoi = src.mean_aoi;
    out->se_aoi = src.se_aoi;
    out->mean_paoi = src.mean_paoi;
    out->paoi_p50 = src.paoi_p50;
    out->paoi_p90 = src.paoi_p90;
    out->paoi_p99 = src.paoi_p99;
    out->mean_delay = src.mean_delay;
    out->se_delay = src.se_delay;
  });
}

int aoi_sim_jfi(const aoi_sim* sim, double* out) {
  return guarded([&] {
    if (!sim || !out) throw std::invalid_argument("null argument");
    *out = sim->summary.jfi;
  });
}

int aoi_sim_unstable(const aoi_sim* sim) {
  return sim && sim->result.unstable ? 1 : 0;
}

double aoi_sim_horizon(const aoi_sim* sim) {
  return sim ? sim->result.horizon : 0.0;
}

int aoi_sim_paoi_ecdf(const aoi_sim* sim, int source, const double* taus,
                      size_t n, double* out) {
  return guarded([&] {
    if (!sim || !taus || !out) throw std::invalid_argument("null argument");
    const std::size_t flow = sim->measured_flows.at(source);
    const auto samples = kept_paoi_samples(sim->result, flow);
    const std::vector<double> grid(taus, taus + n);
    const auto cdf = empirical_cdf(samples, grid);
    std::copy(cdf.begin(), cdf.end(), out);
  });
}

int64_t aoi_sim_paoi_count(const aoi_sim* sim, int source) {
  int64_t count = 0;
  const int rc = guarded([&] {
    if (!sim) throw std::invalid_argument("null sim");
    const std::size_t flow = sim->measured_flows.at(source);
    count = static_cast<int64_t>(kept_paoi_samples(sim->result, flow).size());
  });
  return rc == AOI_OK ? count : rc;
}

int aoi_aloha_compare(double lambda_offered, double packet_duration,
                      double horizon, uint64_t seed, aoi_aloha_stats* out) {
  return guarded([&] {
    if (!out) throw std::invalid_argument("null argument");
    if (!(lambda_offered > 0.0) || !(packet_duration > 0.0) ||
        !(horizon > 0.0))
      throw std::invalid_argument("aloha parameters must be positive");
    Rng rng(derive_seed(seed, 0));
    std::vector<double> starts;
    starts.reserve(static_cast<std::size_t>(lambda_offered * horizon) + 16);
    double t = rng.exponential(lambda_offered);
    while (t < horizon) {
      starts.push_back(t);
      t += rng.exponential(lambda_offered);
    }
    const auto survivors = aloha_filter(starts, packet_duration);
    if (survivors.size() < 2)
      throw std::invalid_argument("too few survivors for statistics");

    std::vector<double> gaps;
    gaps.reserve(survivors.size() - 1);
    for (std::size_t i = 1; i < survivors.size(); ++i)
      gaps.push_back(survivors[i] - survivors[i - 1]);
    std::sort(gaps.begin(), gaps.end());
    const double thinned =
        lambda_offered * std::exp(-2.0 * lambda_offered * packet_duration);
    std::vector<double> cdf(gaps.size());
    for (std::size_t i = 0; i < gaps.size(); ++i)
      cdf[i] = 1.0 - std::exp(-thinned * gaps[i]);

    out->survivor_rate = survivors.size() / horizon;
    out->thinned_rate = thinned;
    out->ks_distance = ks_distance_sorted(gaps, cdf);
    out->n_offered = starts.size();
    out->n_survivors = survivors.size();
  });
}

}  // extern "C"
