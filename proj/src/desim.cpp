#include "desim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "desim_engine.hpp"

namespace aoi {

namespace {

void validate_network(const SimNetwork& net) {
  if (net.servers.empty()) throw std::invalid_argument("network has no servers");
  for (const SimServer& s : net.servers) {
    if (!(s.mu > 0.0)) throw std::invalid_argument("server mu must be > 0");
    if (!(s.eps >= 0.0 && s.eps < 1.0))
      throw std::invalid_argument("server eps must be in [0,1)");
  }
  if (net.flows.empty()) throw std::invalid_argument("network has no flows");
  for (const FlowSpec& f : net.flows) {
    if (f.rate < 0.0) throw std::invalid_argument("flow rate must be >= 0");
    if (f.path.empty()) throw std::invalid_argument("flow path is empty");
    if (f.offload.size() != f.path.size())
      throw std::invalid_argument("offload length must match path length");
    for (int s : f.path) {
      if (s < 0 || static_cast<std::size_t>(s) >= net.servers.size())
        throw std::invalid_argument("flow path references unknown server");
    }
    for (double o : f.offload) {
      if (!(o >= 0.0 && o <= 1.0))
        throw std::invalid_argument("offload must be in [0,1]");
    }
  }
}

bool any_server_overloaded(const SimNetwork& net) {
  std::vector<double> load(net.servers.size(), 0.0);
  for (const FlowSpec& f : net.flows) {
    double r = effective_rate(f.rate, f.uplink);
    for (std::size_t h = 0; h < f.path.size(); ++h) {
      const int s = f.path[h];
      load[s] += r;
      r *= (1.0 - f.offload[h]) * (1.0 - net.servers[s].eps);
    }
  }
  for (std::size_t s = 0; s < net.servers.size(); ++s) {
    if (load[s] >= net.servers[s].mu) return true;
  }
  return false;
}

}  // namespace

std::vector<double> aloha_arrivals(double lambda_offered,
                                   double packet_duration, double horizon,
                                   Rng& rng) {
  if (!(lambda_offered > 0.0) || !(packet_duration > 0.0) || !(horizon > 0.0))
    throw std::invalid_argument("aloha parameters must be positive");
  std::vector<double> starts;
  starts.reserve(static_cast<std::size_t>(lambda_offered * horizon * 1.1) + 16);
  double t = rng.exponential(lambda_offered);
  while (t < horizon) {
    starts.push_back(t);
    t += rng.exponential(lambda_offered);
  }
  return aloha_filter(starts, packet_duration);
}

std::vector<double> aloha_filter(const std::vector<double>& starts,
                                 double packet_duration) {
  std::vector<double> survivors;
  survivors.reserve(starts.size());
  for (std::size_t i = 0; i < starts.size(); ++i) {
    const bool clear_before =
        i == 0 || starts[i] - starts[i - 1] > packet_duration;
    const bool clear_after = i + 1 == starts.size() ||
                             starts[i + 1] - starts[i] > packet_duration;
    if (clear_before && clear_after) survivors.push_back(starts[i]);
  }
  return survivors;
}

std::vector<double> mpr_thin(const std::vector<double>& arrivals, double p_c,
                             Rng& rng) {
  if (!(p_c >= 0.0 && p_c < 1.0))
    throw std::invalid_argument("p_c must be in [0,1)");
  std::vector<double> survivors;
  survivors.reserve(arrivals.size());
  for (double t : arrivals) {
    if (!rng.bernoulli(p_c)) survivors.push_back(t);
  }
  return survivors;
}

SimNetwork network_from_config(const NetworkConfig& config) {
  config.validate();
  const int k = config.k_links;
  SimNetwork net;
  net.servers.resize(k);
  const std::uint32_t cap = config.buffer_capacity.value_or(0);
  for (int j = 0; j < k; ++j)
    net.servers[j] = SimServer{config.mu[j], config.eps[j], cap};

  FlowSpec tagged;
  tagged.source_id = 1;
  tagged.rate = config.lambda;
  tagged.uplink = config.uplink;
  tagged.measured = true;
  for (int j = 0; j < k; ++j) {
    tagged.path.push_back(j);
    tagged.offload.push_back(0.0);
  }
  net.flows.push_back(std::move(tagged));

  int next_id = 2;
  for (int j = 0; j < k; ++j) {
    if (config.theta[j] <= 0.0) continue;
    FlowSpec cross;
    cross.source_id = next_id++;
    cross.rate = config.theta[j];
    cross.uplink = Uplink::ideal();
    cross.measured = false;
    for (int h = j; h < k; ++h) {
      cross.path.push_back(h);
      cross.offload.push_back(config.psi[h]);
    }
    net.flows.push_back(std::move(cross));
  }
  return net;
}

SimNetwork line_network(const NetworkConfig& line_config) {
  line_config.validate();
  for (double psi : line_config.psi) {
    if (psi != 0.0)
      throw std::invalid_argument("line network requires psi == 0");
  }
  const int k = line_config.k_links;
  SimNetwork net;
  net.servers.resize(k);
  const std::uint32_t cap = line_config.buffer_capacity.value_or(0);
  for (int j = 0; j < k; ++j)
    net.servers[j] = SimServer{line_config.mu[j], line_config.eps[j], cap};

  for (int j = 0; j < k; ++j) {
    const double rate = j == 0 ? line_config.lambda : line_config.theta[j];
    if (rate <= 0.0 && j > 0) continue;
    FlowSpec flow;
    flow.source_id = j + 1;
    flow.rate = rate;
    flow.uplink = line_config.uplink;
    flow.measured = true;
    for (int h = j; h < k; ++h) {
      flow.path.push_back(h);
      flow.offload.push_back(0.0);
    }
    net.flows.push_back(std::move(flow));
  }
  return net;
}

SimNetwork dumbbell_network(const NetworkConfig& tagged_config,
                            int n_sources) {
  tagged_config.validate();
  if (tagged_config.k_links != 4)
    throw std::invalid_argument("dumbbell network expects a 4-hop config");
  if (n_sources < 1) throw std::invalid_argument("n_sources must be >= 1");

  SimNetwork net;
  const std::uint32_t cap = tagged_config.buffer_capacity.value_or(0);
  // Server 0 is the shared second hop; each flow adds three private hops.
  net.servers.push_back(
      SimServer{tagged_config.mu[1], tagged_config.eps[1], cap});
  for (int f = 0; f < n_sources; ++f) {
    FlowSpec flow;
    flow.source_id = f + 1;
    flow.rate = tagged_config.lambda;
    flow.uplink = tagged_config.uplink;
    flow.measured = true;
    const int base = static_cast<int>(net.servers.size());
    net.servers.push_back(
        SimServer{tagged_config.mu[0], tagged_config.eps[0], cap});
    net.servers.push_back(
        SimServer{tagged_config.mu[2], tagged_config.eps[2], cap});
    net.servers.push_back(
        SimServer{tagged_config.mu[3], tagged_config.eps[3], cap});
    flow.path = {base, 0, base + 1, base + 2};
    flow.offload = {0.0, 0.0, 0.0, 0.0};
    net.flows.push_back(std::move(flow));
  }
  return net;
}

SimResult simulate(const SimNetwork& net, Policy policy, std::uint64_t n_pkt,
                   std::uint64_t seed, double warmup_frac,
                   const SimOptions& options) {
  validate_network(net);
  if (n_pkt < 1) throw std::invalid_argument("n_pkt must be >= 1");
  if (!(warmup_frac >= 0.0 && warmup_frac < 0.5))
    throw std::invalid_argument("warmup_frac must be in [0, 0.5)");

  SimResult result;
  result.n_pkt = n_pkt;
  result.warmup_frac = warmup_frac;
  result.unstable = any_server_overloaded(net);
  for (const FlowSpec& f : net.flows) {
    result.source_ids.push_back(f.source_id);
    result.measured.push_back(f.measured);
  }
  result.flow_counters.assign(net.flows.size(), {});

  // Generation: measured flows emit exactly n_pkt packets; unmeasured cross
  // streams keep generating until the last measured packet exists, so the
  // tagged traffic sees stationary cross load over its whole window.
  const std::size_t n_flows = net.flows.size();
  std::vector<std::vector<double>> gens(n_flows);
  double t_stop = 0.0;
  for (std::size_t f = 0; f < n_flows; ++f) {
    if (!net.flows[f].measured || net.flows[f].rate <= 0.0) continue;
    Rng rng(derive_seed(seed, 1 + f));
    auto& g = gens[f];
    g.reserve(n_pkt);
    double t = 0.0;
    for (std::uint64_t i = 0; i < n_pkt; ++i) {
      t += rng.exponential(net.flows[f].rate);
      g.push_back(t);
    }
    t_stop = std::max(t_stop, t);
  }
  for (std::size_t f = 0; f < n_flows; ++f) {
    if (net.flows[f].measured || net.flows[f].rate <= 0.0) continue;
    Rng rng(derive_seed(seed, 1 + f));
    auto& g = gens[f];
    double t = rng.exponential(net.flows[f].rate);
    while (t <= t_stop) {
      g.push_back(t);
      t += rng.exponential(net.flows[f].rate);
    }
  }

  std::vector<std::vector<detail::Entry>> entries(n_flows);
  for (std::size_t f = 0; f < n_flows; ++f) {
    const FlowSpec& flow = net.flows[f];
    result.flow_counters[f].generated = gens[f].size();
    if (gens[f].empty()) continue;
    Rng rng(derive_seed(seed, 0x10000 + f));
    auto& ef = entries[f];
    switch (flow.uplink.kind) {
      case Uplink::Kind::kIdeal:
        for (std::size_t i = 0; i < gens[f].size(); ++i)
          ef.push_back({gens[f][i], i});
        break;
      case Uplink::Kind::kMprThinning:
        for (std::size_t i = 0; i < gens[f].size(); ++i)
          if (!rng.bernoulli(flow.uplink.p_c)) ef.push_back({gens[f][i], i});
        break;
      case Uplink::Kind::kAloha: {
        const double d = flow.uplink.packet_duration;
        const auto& g = gens[f];
        for (std::size_t i = 0; i < g.size(); ++i) {
          const bool clear_before = i == 0 || g[i] - g[i - 1] > d;
          const bool clear_after = i + 1 == g.size() || g[i + 1] - g[i] > d;
          if (clear_before && clear_after) ef.push_back({g[i], i});
        }
        break;
      }
    }
    result.flow_counters[f].uplink_lost = gens[f].size() - ef.size();
  }

  Rng engine_rng(derive_seed(seed, 0));
  detail::run_engine(net, policy, entries, engine_rng, options, result);

  for (std::size_t f = 0; f < n_flows; ++f) {
    const FlowCounters& c = result.flow_counters[f];
    if (c.generated != c.uplink_lost + c.delivered + c.erased + c.offloaded +
                           c.dropped) {
      throw std::logic_error("flow conservation violated");
    }
  }
  return result;
}

SimResult simulate(const NetworkConfig& config, Policy policy,
                   std::uint64_t n_pkt, std::uint64_t seed,
                   double warmup_frac, const SimOptions& options) {
  return simulate(network_from_config(config), policy, n_pkt, seed,
                  warmup_frac, options);
}

}  // namespace aoi
