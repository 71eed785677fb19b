#include "fchv/config.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "fchv/error.hpp"

namespace fchv {

namespace {

const double nan = std::numeric_limits<double>::quiet_NaN();

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  }
}

long long to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long x = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  const std::string s = boost::algorithm::to_lower_copy(v);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError(key + ": expected a boolean, got '" + v + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<std::string> parts;
  boost::algorithm::split(parts, v, boost::algorithm::is_any_of(","));
  std::vector<double> out;
  for (auto& p : parts) {
    boost::algorithm::trim(p);
    if (!p.empty()) out.push_back(to_double(key, p));
  }
  return out;
}

using Setter = std::function<void(ExperimentConfig&, const std::string& key, const std::string& value)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"grid.dim", [](auto& c, auto& k, auto& v) { c.grid.dim = static_cast<int>(to_int(k, v)); }},
      {"grid.n", [](auto& c, auto& k, auto& v) { c.grid.n = static_cast<int>(to_int(k, v)); }},
      {"grid.length", [](auto& c, auto& k, auto& v) { c.grid.length = to_double(k, v); }},

      {"solver.nu", [](auto& c, auto& k, auto& v) { c.params.nu = to_double(k, v); }},
      {"solver.beta", [](auto& c, auto& k, auto& v) { c.params.beta = to_double(k, v); }},
      {"solver.alpha", [](auto& c, auto& k, auto& v) { c.params.alpha = to_double(k, v); }},
      {"solver.dt",
       [](auto& c, auto& k, auto& v) {
         if (boost::algorithm::iequals(v, "auto")) {
           c.dt_auto = true;
         } else {
           c.dt_auto = false;
           c.params.dt = to_double(k, v);
         }
       }},
      {"solver.cfl", [](auto& c, auto& k, auto& v) { c.cfl = to_double(k, v); }},
      {"solver.t_end", [](auto& c, auto& k, auto& v) { c.params.t_end = to_double(k, v); }},
      {"solver.dealias", [](auto& c, auto& k, auto& v) { c.params.dealias = to_bool(k, v); }},
      {"solver.nonlinear", [](auto& c, auto& k, auto& v) { c.params.nonlinear = to_bool(k, v); }},
      {"solver.model",
       [](auto& c, auto& k, auto& v) {
         if (v == "ch-alpha")
           c.params.model = Model::ch_alpha;
         else if (v == "fractional-nse")
           c.params.model = Model::fractional_nse;
         else
           throw ConfigError(k + ": expected ch-alpha or fractional-nse");
       }},
      {"solver.allow_exploratory_beta",
       [](auto& c, auto& k, auto& v) { c.params.allow_exploratory_beta = to_bool(k, v); }},
      {"solver.blowup_factor", [](auto& c, auto& k, auto& v) { c.params.blowup_factor = to_double(k, v); }},

      {"datum.kind",
       [](auto& c, auto& k, auto& v) {
         static const std::vector<std::string> kinds = {"stream-bump", "projected-bump", "band-random",
                                                        "taylor-green", "scaled"};
         if (std::find(kinds.begin(), kinds.end(), v) == kinds.end())
           throw ConfigError(k + ": unknown datum '" + v + "'");
         c.datum.kind = v;
       }},
      {"datum.amplitude", [](auto& c, auto& k, auto& v) { c.datum.amplitude = to_double(k, v); }},
      {"datum.sigma", [](auto& c, auto& k, auto& v) { c.datum.sigma = to_double(k, v); }},
      {"datum.seed", [](auto& c, auto& k, auto& v) { c.datum.seed = static_cast<std::uint64_t>(to_int(k, v)); }},
      {"datum.band_lo", [](auto& c, auto& k, auto& v) { c.datum.band_lo = to_double(k, v); }},
      {"datum.band_hi", [](auto& c, auto& k, auto& v) { c.datum.band_hi = to_double(k, v); }},
      {"datum.epsilon", [](auto& c, auto& k, auto& v) { c.datum.epsilon = to_double(k, v); }},

      {"output.dir", [](auto& c, auto&, auto& v) { c.output_dir = v; }},
      {"output.sample_stride",
       [](auto& c, auto& k, auto& v) { c.sample_stride = static_cast<std::uint64_t>(to_int(k, v)); }},
      {"output.checkpoint_every",
       [](auto& c, auto& k, auto& v) { c.checkpoint_every = static_cast<std::uint64_t>(to_int(k, v)); }},
      {"output.resume", [](auto& c, auto&, auto& v) { c.resume = v; }},

      {"fit.t_lo", [](auto& c, auto& k, auto& v) { c.fit_t_lo = to_double(k, v); }},
      {"fit.t_hi", [](auto& c, auto& k, auto& v) { c.fit_t_hi = to_double(k, v); }},
      {"fit.gradient_order", [](auto& c, auto& k, auto& v) { c.gradient_order = static_cast<int>(to_int(k, v)); }},

      {"sweep.alphas", [](auto& c, auto& k, auto& v) { c.alphas = to_list(k, v); }},
      {"sweep.q", [](auto& c, auto& k, auto& v) { c.q_exponent = to_double(k, v); }},
      {"sweep.l", [](auto& c, auto& k, auto& v) { c.l_exponent = to_double(k, v); }},
      {"sweep.p", [](auto& c, auto& k, auto& v) { c.p_exponent = to_double(k, v); }},
      {"sweep.min_order", [](auto& c, auto& k, auto& v) { c.min_order = to_double(k, v); }},

      {"family.epsilons", [](auto& c, auto& k, auto& v) { c.epsilons = to_list(k, v); }},
      {"family.horizon", [](auto& c, auto& k, auto& v) { c.family_horizon = to_double(k, v); }},

      {"kernel.gammas", [](auto& c, auto& k, auto& v) { c.kernel_gammas = to_list(k, v); }},
      {"kernel.times", [](auto& c, auto& k, auto& v) { c.kernel_times = to_list(k, v); }},
  };
  return table;
}

void set_key(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  const auto it = setters().find(key);
  if (it == setters().end()) throw ConfigError("unknown configuration key '" + key + "'");
  it->second(cfg, key, boost::algorithm::trim_copy(value));
}

void apply_tree(ExperimentConfig& cfg, const boost::property_tree::ptree& tree) {
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty())
      throw ConfigError("key '" + section + "' appears outside any section");
    for (const auto& [key, value] : body) set_key(cfg, section + "." + key, value.data());
  }
}

}  // namespace

ExperimentConfig::ExperimentConfig() : fit_t_lo(nan), fit_t_hi(nan) {}

ExperimentConfig default_config(const std::string& scenario) {
  ExperimentConfig c;
  c.scenario = scenario;
  if (scenario == "decay" || scenario == "gradient-decay") {
    c.grid = {2, 512, 200.0};
    c.params.nu = 0.2;
    c.params.beta = 0.5;
    c.params.dt = 0.1;
    c.params.t_end = 90.0;
    c.datum.kind = "projected-bump";
    c.datum.amplitude = 0.1;
    c.datum.sigma = 2.0;
    c.sample_stride = 5;
    c.fit_t_lo = 10.0;
    c.fit_t_hi = 80.0;
  } else if (scenario == "scaled-family") {
    c.grid = {2, 256, 64.0};
    c.params.nu = 1.0;
    c.params.beta = 0.75;
    c.params.alpha = 0.5;
    c.params.dt = 0.02;
    c.datum.kind = "stream-bump";
    c.datum.amplitude = 1.0;
    c.datum.sigma = 1.0;
    c.epsilons = {1.0, 0.5, 0.25};
    c.family_horizon = 20.0;
    c.params.t_end = c.family_horizon;
    c.sample_stride = 5;
  } else if (scenario == "alpha-sweep") {
    c.grid = {2, 64, 6.283185307179586};
    c.params.nu = 0.1;
    c.params.beta = 0.75;
    c.params.dt = 2.5e-3;
    c.params.t_end = 1.0;
    c.datum.kind = "band-random";
    c.datum.amplitude = 1.0;
    c.datum.band_lo = 1.0;
    c.datum.band_hi = 4.0;
    c.alphas = {0.2, 0.1, 0.05, 0.025};
    c.l_exponent = 2.0;
    c.sample_stride = 20;
  } else if (scenario == "filter-check") {
    c.grid = {2, 64, 6.283185307179586};
    c.params.alpha = 0.3;
    c.params.beta = 0.75;
    c.alphas = {0.2, 0.1, 0.05, 0.025};
  } else if (scenario == "kernel-check") {
    c.params.beta = 0.75;
    c.kernel_gammas = {1.0, 1.5, 2.0};
    c.kernel_times = {0.25, 1.0, 4.0};
  } else if (scenario == "selftest") {
    c.grid = {2, 32, 6.283185307179586};
  } else if (scenario == "simulate") {
    c.datum.kind = "band-random";
    c.datum.amplitude = 1.0;
    c.params.nu = 0.05;
    c.params.beta = 0.75;
    c.params.alpha = 0.1;
    c.params.dt = 5e-3;
    c.params.t_end = 1.0;
  } else {
    throw ConfigError("unknown scenario '" + scenario + "'");
  }
  return c;
}

void apply_ini_file(ExperimentConfig& cfg, const std::string& path) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(path, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("cannot read config: ") + e.what());
  }
  apply_tree(cfg, tree);
}

void apply_ini_text(ExperimentConfig& cfg, const std::string& text) {
  boost::property_tree::ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("cannot parse config: ") + e.what());
  }
  apply_tree(cfg, tree);
}

void apply_override(ExperimentConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override must look like section.key=value");
  set_key(cfg, boost::algorithm::trim_copy(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

SweepExponents sweep_exponents(const ExperimentConfig& cfg) {
  const double n = cfg.grid.dim;
  const double beta = cfg.params.beta;
  SweepExponents e{nan, nan, nan, cfg.p_exponent, nan};
  if (cfg.l_exponent) {
    e.l = *cfg.l_exponent;
    if (e.l * beta < n) {
      e.s = e.l * n / (n - e.l * beta);
      e.q = 2.0 * e.s / (e.s - 2.0);
    }
  }
  if (cfg.q_exponent) e.q = *cfg.q_exponent;
  if (std::isfinite(e.q)) e.gamma = 0.5 * n * (1.0 / e.p - 1.0 / e.q);
  return e;
}

std::vector<std::string> validate(const ExperimentConfig& cfg) {
  std::vector<std::string> warnings;
  if (cfg.grid.dim != 2 && cfg.grid.dim != 3) throw ConfigError("grid.dim must be 2 or 3");
  if (cfg.grid.n < 8 || cfg.grid.n % 2 != 0) throw ConfigError("grid.n must be even and >= 8");
  if (!(cfg.grid.length > 0.0)) throw ConfigError("grid.length must be positive");
  if (cfg.sample_stride == 0) throw ConfigError("output.sample_stride must be >= 1");
  if (!(cfg.cfl > 0.0)) throw ConfigError("solver.cfl must be positive");
  try {
    for (auto& w : cfg.params.validate(cfg.grid.dim)) warnings.push_back(w);
  } catch (const ParameterError& e) {
    throw ConfigError(e.what());
  }
  if (cfg.datum.kind == "taylor-green" && cfg.grid.dim != 2) throw ConfigError("taylor-green datum is 2D only");
  if (cfg.grid.dim == 3 && cfg.grid.n > 64 && cfg.scenario != "selftest")
    warnings.push_back("3D runs above N=64 exceed desk scale");

  if (cfg.scenario == "alpha-sweep") {
    if (cfg.alphas.empty()) throw ConfigError("alpha-sweep needs sweep.alphas");
    for (std::size_t i = 0; i < cfg.alphas.size(); ++i) {
      if (!(cfg.alphas[i] >= 0.0)) throw ConfigError("sweep.alphas must be nonnegative");
      if (i > 0 && !(cfg.alphas[i] < cfg.alphas[i - 1])) throw ConfigError("sweep.alphas must be decreasing");
    }
    if (!cfg.l_exponent && !cfg.q_exponent) throw ConfigError("alpha-sweep needs sweep.l or sweep.q");
    const double beta = cfg.params.beta;
    const double n = cfg.grid.dim;
    if (cfg.l_exponent) {
      if (!(3.0 * beta > 1.0) || !(*cfg.l_exponent > n / (3.0 * beta - 1.0)))
        throw ConfigError("sweep.l must exceed n/(3 beta - 1)");
      if (!(*cfg.l_exponent * beta < n) && !cfg.q_exponent)
        throw ConfigError("sweep.l >= n/beta leaves q undefined; set sweep.q");
    }
    const auto e = sweep_exponents(cfg);
    if (!(e.q >= 1.0)) throw ConfigError("sweep exponents give q < 1");
    if (!(e.p >= 1.0 && e.p <= e.q)) throw ConfigError("sweep.p must lie in [1, q]");
  }
  if (cfg.scenario == "scaled-family") {
    if (cfg.epsilons.empty()) throw ConfigError("scaled-family needs family.epsilons");
    for (std::size_t i = 0; i < cfg.epsilons.size(); ++i) {
      if (!(cfg.epsilons[i] > 0.0)) throw ConfigError("family.epsilons must be positive");
      if (i > 0 && !(cfg.epsilons[i] < cfg.epsilons[i - 1]))
        throw ConfigError("family.epsilons must be decreasing");
    }
    if (!(cfg.family_horizon > 0.0)) throw ConfigError("family.horizon must be positive");
  }
  if (cfg.scenario == "decay" || cfg.scenario == "gradient-decay") {
    if (cfg.gradient_order < 1) throw ConfigError("fit.gradient_order must be >= 1");
    if (std::isfinite(cfg.fit_t_lo) && std::isfinite(cfg.fit_t_hi) && !(cfg.fit_t_lo < cfg.fit_t_hi))
      throw ConfigError("fit.t_lo must be below fit.t_hi");
  }
  if (cfg.scenario == "kernel-check") {
    if (cfg.kernel_gammas.empty() || cfg.kernel_times.empty()) throw ConfigError("kernel-check needs gammas and times");
    for (double g : cfg.kernel_gammas)
      if (!(g > 0.0 && g <= 2.0)) throw ConfigError("kernel.gammas must lie in (0, 2]");
    for (double t : cfg.kernel_times)
      if (!(t > 0.0)) throw ConfigError("kernel.times must be positive");
  }
  return warnings;
}

nlohmann::json to_json(const ExperimentConfig& c) {
  using nlohmann::json;
  auto num = [](double x) { return std::isfinite(x) ? json(x) : json(nullptr); };
  json j;
  j["scenario"] = c.scenario;
  j["grid"] = {{"dim", c.grid.dim}, {"n", c.grid.n}, {"length", c.grid.length}};
  j["solver"] = {{"nu", c.params.nu},
                 {"beta", c.params.beta},
                 {"alpha", c.params.alpha},
                 {"dt", c.dt_auto ? json("auto") : json(c.params.dt)},
                 {"cfl", c.cfl},
                 {"t_end", c.params.t_end},
                 {"dealias", c.params.dealias},
                 {"nonlinear", c.params.nonlinear},
                 {"model", c.params.model == Model::ch_alpha ? "ch-alpha" : "fractional-nse"},
                 {"allow_exploratory_beta", c.params.allow_exploratory_beta},
                 {"blowup_factor", c.params.blowup_factor}};
  j["datum"] = {{"kind", c.datum.kind},       {"amplitude", c.datum.amplitude}, {"sigma", c.datum.sigma},
                {"seed", c.datum.seed},       {"band_lo", c.datum.band_lo},     {"band_hi", c.datum.band_hi},
                {"epsilon", c.datum.epsilon}};
  j["output"] = {{"dir", c.output_dir},
                 {"sample_stride", c.sample_stride},
                 {"checkpoint_every", c.checkpoint_every},
                 {"resume", c.resume}};
  j["fit"] = {{"t_lo", num(c.fit_t_lo)}, {"t_hi", num(c.fit_t_hi)}, {"gradient_order", c.gradient_order}};
  j["sweep"] = {{"alphas", c.alphas},
                {"q", c.q_exponent ? json(*c.q_exponent) : json(nullptr)},
                {"l", c.l_exponent ? json(*c.l_exponent) : json(nullptr)},
                {"p", c.p_exponent},
                {"min_order", c.min_order}};
  j["family"] = {{"epsilons", c.epsilons}, {"horizon", c.family_horizon}};
  j["kernel"] = {{"gammas", c.kernel_gammas}, {"times", c.kernel_times}};
  return j;
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& [k, _] : setters()) keys.push_back(k);
  return keys;
}

}  // namespace fchv
