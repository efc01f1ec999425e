#include "scenario.hpp"

#include <cctype>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "errors.hpp"

namespace aoi {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream ss(s);
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& v, int line) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(line) + ": bad number '" + v + "'");
  }
}

std::uint64_t parse_uint(const std::string& v, int line) {
  try {
    std::size_t pos = 0;
    const long long x = std::stoll(v, &pos);
    if (pos != v.size() || x < 0) throw std::invalid_argument(v);
    return static_cast<std::uint64_t>(x);
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(line) + ": bad integer '" + v + "'");
  }
}

std::vector<double> parse_array(const std::string& v, int line) {
  std::vector<double> out;
  for (const std::string& tok : split_list(v)) out.push_back(parse_double(tok, line));
  if (out.empty()) throw ParseError("line " + std::to_string(line) + ": empty list");
  return out;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt_array(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += fmt(xs[i]);
  }
  return out;
}

// Broadcast a scalar-or-array field to length k.
std::vector<double> broadcast(const std::vector<double>& xs, int k,
                              const char* name) {
  if (xs.size() == static_cast<std::size_t>(k)) return xs;
  if (xs.size() == 1) return std::vector<double>(k, xs[0]);
  throw ParseError(std::string(name) + " must be a scalar or have length K");
}

const std::set<std::string> kSweepParams = {
    "none", "rho", "eps", "policy", "n_sources", "k_links", "lambda_a"};

}  // namespace

Scenario parse_scenario(const std::string& text) {
  Scenario sc;
  std::string section;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  std::string uplink_model = "ideal";
  std::optional<double> p_c;
  std::optional<double> packet_duration;

  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw;
    const auto hash = s.find('#');
    if (hash != std::string::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']')
        throw ParseError("line " + std::to_string(line) + ": bad section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section != "topology" && section != "links" && section != "uplink" &&
          section != "run" && section != "sweep") {
        throw ParseError("line " + std::to_string(line) + ": unknown section [" +
                         section + "]");
      }
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw ParseError("line " + std::to_string(line) + ": expected key = value");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (section.empty())
      throw ParseError("line " + std::to_string(line) + ": key outside a section");
    const std::string qualified = section + "." + key;
    if (!seen.insert(qualified).second)
      throw ParseError("line " + std::to_string(line) + ": duplicate key '" +
                       qualified + "'");

    if (qualified == "topology.kind") {
      if (value == "line") sc.kind = Scenario::Kind::kLine;
      else if (value == "dumbbell") sc.kind = Scenario::Kind::kDumbbell;
      else if (value == "custom") sc.kind = Scenario::Kind::kCustom;
      else throw ParseError("line " + std::to_string(line) + ": unknown kind '" + value + "'");
    } else if (qualified == "topology.k_links") {
      sc.k_links = static_cast<int>(parse_uint(value, line));
    } else if (qualified == "topology.n_sources") {
      sc.n_sources = static_cast<int>(parse_uint(value, line));
    } else if (qualified == "topology.rho") {
      sc.rho = parse_double(value, line);
    } else if (qualified == "topology.lambda") {
      sc.lambda = parse_double(value, line);
    } else if (qualified == "topology.theta") {
      sc.theta = parse_array(value, line);
    } else if (qualified == "topology.psi") {
      sc.psi = parse_array(value, line);
    } else if (qualified == "links.mu_isl") {
      sc.mu_isl = parse_double(value, line);
    } else if (qualified == "links.mu_dl") {
      sc.mu_dl = parse_double(value, line);
    } else if (qualified == "links.mu") {
      sc.mu = parse_array(value, line);
    } else if (qualified == "links.eps") {
      sc.eps = parse_array(value, line);
    } else if (qualified == "uplink.model") {
      if (value != "ideal" && value != "mpr" && value != "aloha")
        throw ParseError("line " + std::to_string(line) + ": unknown uplink model");
      uplink_model = value;
    } else if (qualified == "uplink.p_c") {
      p_c = parse_double(value, line);
    } else if (qualified == "uplink.packet_duration") {
      packet_duration = parse_double(value, line);
    } else if (qualified == "uplink.horizon") {
      sc.uplink_horizon = parse_double(value, line);
    } else if (qualified == "run.policy") {
      const auto p = policy_from_name(value);
      if (!p) throw ParseError("line " + std::to_string(line) + ": unknown policy '" + value + "'");
      sc.policy = *p;
    } else if (qualified == "run.n_pkt") {
      sc.n_pkt = parse_uint(value, line);
    } else if (qualified == "run.seed") {
      sc.seed = parse_uint(value, line);
    } else if (qualified == "run.warmup_frac") {
      sc.warmup_frac = parse_double(value, line);
    } else if (qualified == "run.n_seeds") {
      sc.n_seeds = static_cast<int>(parse_uint(value, line));
    } else if (qualified == "run.buffer_capacity") {
      sc.buffer_capacity = static_cast<std::uint32_t>(parse_uint(value, line));
    } else if (qualified == "sweep.parameter") {
      if (!kSweepParams.count(value))
        throw ParseError("line " + std::to_string(line) + ": unknown sweep parameter '" + value + "'");
      sc.sweep_parameter = value;
    } else if (qualified == "sweep.values") {
      sc.sweep_values = split_list(value);
    } else {
      throw ParseError("line " + std::to_string(line) + ": unknown key '" +
                       qualified + "'");
    }
  }

  if (uplink_model == "ideal") {
    sc.uplink = Uplink::ideal();
  } else if (uplink_model == "mpr") {
    if (!p_c) throw ParseError("uplink model mpr requires p_c");
    sc.uplink = Uplink::mpr(*p_c);
  } else {
    if (!packet_duration)
      throw ParseError("uplink model aloha requires packet_duration");
    sc.uplink = Uplink::aloha(*packet_duration);
  }

  // Structural checks that do not depend on the sweep value.
  const bool sweeps = sc.sweep_parameter != "none";
  if (sweeps && sc.sweep_values.empty())
    throw ParseError("sweep.values required when sweep.parameter is set");
  if (sc.kind == Scenario::Kind::kLine || sc.kind == Scenario::Kind::kCustom) {
    if (!sc.k_links && !(sweeps && sc.sweep_parameter == "k_links"))
      throw ParseError("topology.k_links is required");
  }
  if (sc.kind == Scenario::Kind::kDumbbell) {
    if (!sc.n_sources && !(sweeps && sc.sweep_parameter == "n_sources"))
      throw ParseError("topology.n_sources is required");
  }
  if (sc.kind != Scenario::Kind::kCustom) {
    if (!sc.rho && !(sweeps && sc.sweep_parameter == "rho") &&
        sc.sweep_parameter != "lambda_a")
      throw ParseError("topology.rho is required");
    if (sc.eps.size() != 1)
      throw ParseError("links.eps must be a scalar for line/dumbbell");
  } else {
    if (!sc.lambda) throw ParseError("topology.lambda is required for custom");
    if (sc.mu.empty()) throw ParseError("links.mu is required for custom");
  }
  if (!(sc.warmup_frac >= 0.0 && sc.warmup_frac < 0.5))
    throw ParseError("run.warmup_frac must be in [0, 0.5)");
  if (sc.n_seeds < 1) throw ParseError("run.n_seeds must be >= 1");
  if (sc.n_pkt < 1) throw ParseError("run.n_pkt must be >= 1");
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

std::string canonical_text(const Scenario& sc) {
  std::string out;
  out += "[topology]\n";
  out += std::string("kind = ") +
         (sc.kind == Scenario::Kind::kLine
              ? "line"
              : sc.kind == Scenario::Kind::kDumbbell ? "dumbbell" : "custom") +
         "\n";
  if (sc.k_links) out += "k_links = " + std::to_string(*sc.k_links) + "\n";
  if (sc.n_sources) out += "n_sources = " + std::to_string(*sc.n_sources) + "\n";
  if (sc.rho) out += "rho = " + fmt(*sc.rho) + "\n";
  if (sc.lambda) out += "lambda = " + fmt(*sc.lambda) + "\n";
  if (!sc.theta.empty()) out += "theta = " + fmt_array(sc.theta) + "\n";
  if (!sc.psi.empty()) out += "psi = " + fmt_array(sc.psi) + "\n";
  out += "[links]\n";
  if (sc.mu.empty()) {
    out += "mu_isl = " + fmt(sc.mu_isl) + "\n";
    out += "mu_dl = " + fmt(sc.mu_dl) + "\n";
  } else {
    out += "mu = " + fmt_array(sc.mu) + "\n";
  }
  out += "eps = " + fmt_array(sc.eps) + "\n";
  out += "[uplink]\n";
  switch (sc.uplink.kind) {
    case Uplink::Kind::kIdeal:
      out += "model = ideal\n";
      break;
    case Uplink::Kind::kMprThinning:
      out += "model = mpr\n";
      out += "p_c = " + fmt(sc.uplink.p_c) + "\n";
      break;
    case Uplink::Kind::kAloha:
      out += "model = aloha\n";
      out += "packet_duration = " + fmt(sc.uplink.packet_duration) + "\n";
      break;
  }
  out += "horizon = " + fmt(sc.uplink_horizon) + "\n";
  out += "[run]\n";
  out += std::string("policy = ") + policy_name(sc.policy) + "\n";
  out += "n_pkt = " + std::to_string(sc.n_pkt) + "\n";
  out += "seed = " + std::to_string(sc.seed) + "\n";
  out += "warmup_frac = " + fmt(sc.warmup_frac) + "\n";
  out += "n_seeds = " + std::to_string(sc.n_seeds) + "\n";
  out += "buffer_capacity = " + std::to_string(sc.buffer_capacity) + "\n";
  out += "[sweep]\n";
  out += "parameter = " + sc.sweep_parameter + "\n";
  if (!sc.sweep_values.empty()) {
    out += "values = ";
    for (std::size_t i = 0; i < sc.sweep_values.size(); ++i) {
      if (i) out += ", ";
      out += sc.sweep_values[i];
    }
    out += "\n";
  }
  return out;
}

std::string scenario_hash(const Scenario& scenario) {
  const std::string text = canonical_text(scenario);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

std::size_t num_points(const Scenario& scenario) {
  if (scenario.sweep_parameter == "none") return 1;
  return scenario.sweep_values.size();
}

NetworkConfig line_source_view(const NetworkConfig& line_config, int k) {
  line_config.validate();
  const int big_k = line_config.k_links;
  if (k < 1 || k > big_k) throw std::out_of_range("source index out of range");
  if (k == 1) {
    // Every line source passes its own uplink, so the cross rates seen by
    // the analysis are the uplink survivors (identity for ideal uplinks).
    NetworkConfig view = line_config;
    for (double& th : view.theta)
      th = effective_rate(th, line_config.uplink);
    return view;
  }

  NetworkConfig view;
  view.k_links = big_k - k + 1;
  view.lambda = line_config.theta[k - 1];
  view.uplink = line_config.uplink;
  view.buffer_capacity = line_config.buffer_capacity;
  view.mu.assign(line_config.mu.begin() + (k - 1), line_config.mu.end());
  view.eps.assign(line_config.eps.begin() + (k - 1), line_config.eps.end());
  view.psi.assign(view.k_links, 0.0);
  view.theta.assign(view.k_links, 0.0);

  // Upstream sources fold into cross traffic entering this view's first
  // node, each thinned by its own uplink and by the erasures of the links
  // it already traversed.
  double inflow = 0.0;
  for (int i = 1; i < k; ++i) {
    const double offered = i == 1 ? line_config.lambda : line_config.theta[i - 1];
    double rate = effective_rate(offered, line_config.uplink);
    for (int l = i; l <= k - 1; ++l) rate *= 1.0 - line_config.eps[l - 1];
    inflow += rate;
  }
  view.theta[0] = inflow;
  for (int m = 2; m <= view.k_links; ++m)
    view.theta[m - 1] =
        effective_rate(line_config.theta[k + m - 2], line_config.uplink);
  view.validate();
  return view;
}

ResolvedPoint resolve_point(const Scenario& scenario, std::size_t index) {
  if (index >= num_points(scenario))
    throw std::out_of_range("sweep point index out of range");

  Scenario sc = scenario;
  ResolvedPoint point;
  point.sweep_parameter = sc.sweep_parameter;
  if (sc.sweep_parameter != "none") {
    const std::string& tok = sc.sweep_values[index];
    point.sweep_label = tok;
    if (sc.sweep_parameter == "rho") {
      sc.rho = parse_double(tok, 0);
    } else if (sc.sweep_parameter == "eps") {
      sc.eps = {parse_double(tok, 0)};
    } else if (sc.sweep_parameter == "policy") {
      const auto p = policy_from_name(tok);
      if (!p) throw ParseError("unknown policy in sweep values: " + tok);
      sc.policy = *p;
    } else if (sc.sweep_parameter == "n_sources") {
      sc.n_sources = static_cast<int>(parse_uint(tok, 0));
    } else if (sc.sweep_parameter == "k_links") {
      sc.k_links = static_cast<int>(parse_uint(tok, 0));
    } else if (sc.sweep_parameter == "lambda_a") {
      // Resolved by cmd_uplink_compare; no network to build.
      point.policy = sc.policy;
      point.rho = 0.0;
      point.k_links = 0;
      return point;
    }
  }

  point.policy = sc.policy;
  switch (sc.kind) {
    case Scenario::Kind::kLine: {
      if (!sc.k_links || !sc.rho) throw ParseError("line needs k_links and rho");
      NetworkConfig tagged =
          line_scenario(*sc.k_links, *sc.rho, sc.mu_isl, sc.mu_dl, sc.eps[0]);
      tagged.uplink = sc.uplink;
      if (sc.buffer_capacity) tagged.buffer_capacity = sc.buffer_capacity;
      point.tagged = tagged;
      point.rho = *sc.rho;
      point.k_links = *sc.k_links;
      point.n_sources = *sc.k_links;
      point.network = line_network(tagged);
      for (int k = 1; k <= *sc.k_links; ++k) {
        if (k > 1 && tagged.theta[k - 1] <= 0.0) continue;
        point.source_views.push_back(line_source_view(tagged, k));
      }
      point.tagged = point.source_views.front();
      break;
    }
    case Scenario::Kind::kDumbbell: {
      if (!sc.n_sources || !sc.rho)
        throw ParseError("dumbbell needs n_sources and rho");
      NetworkConfig tagged = dumbbell_scenario(*sc.n_sources, *sc.rho,
                                               sc.mu_isl, sc.mu_dl, sc.eps[0]);
      tagged.uplink = sc.uplink;
      if (sc.buffer_capacity) tagged.buffer_capacity = sc.buffer_capacity;
      point.tagged = tagged;
      point.rho = *sc.rho;
      point.k_links = tagged.k_links;
      point.n_sources = *sc.n_sources;
      point.network = dumbbell_network(tagged, *sc.n_sources);
      point.source_views.assign(*sc.n_sources, tagged);
      break;
    }
    case Scenario::Kind::kCustom: {
      const int k = *sc.k_links;
      NetworkConfig cfg;
      cfg.k_links = k;
      cfg.lambda = *sc.lambda;
      cfg.theta = sc.theta.empty() ? std::vector<double>(k, 0.0)
                                   : broadcast(sc.theta, k, "theta");
      cfg.psi = sc.psi.empty() ? std::vector<double>(k, 0.0)
                               : broadcast(sc.psi, k, "psi");
      cfg.mu = broadcast(sc.mu, k, "mu");
      cfg.eps = broadcast(sc.eps, k, "eps");
      cfg.uplink = sc.uplink;
      if (sc.buffer_capacity) cfg.buffer_capacity = sc.buffer_capacity;
      cfg.validate();
      point.tagged = cfg;
      point.rho = 0.0;
      point.k_links = k;
      point.n_sources = 1;
      point.network = network_from_config(cfg);
      point.source_views = {cfg};
      break;
    }
  }
  return point;
}

}  // namespace aoi
