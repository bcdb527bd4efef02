#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "femto/network.hpp"

namespace femto {

double fixed_loss_db(double carrier_freq_mhz, double wall_loss_db, LinkClass link) {
  const double outdoor = 30.0 * std::log10(carrier_freq_mhz) - 71.0;
  switch (link) {
    case LinkClass::kOutdoor:
      return outdoor;
    case LinkClass::kIndoor:
      return 37.0;
    case LinkClass::kOutdoorToIndoor:
    case LinkClass::kIndoorToOutdoor:
      return outdoor + wall_loss_db;
    case LinkClass::kIndoorToIndoor:
      return outdoor + 2.0 * wall_loss_db;
  }
  return outdoor;
}

PathlossTable::PathlossTable(double carrier_freq_mhz, double wall_loss_db) {
  for (std::size_t i = 0; i < kNumLinkClasses; ++i) {
    const auto link = static_cast<LinkClass>(i);
    fixed_loss_db_[i] = femto::fixed_loss_db(carrier_freq_mhz, wall_loss_db, link);
    fixed_loss_lin_[i] = db_to_linear(fixed_loss_db_[i]);
  }
}

RateTable::RateTable(std::vector<RateStep> steps) : steps_(std::move(steps)) {
  if (steps_.empty()) throw ConfigError("rate table must not be empty");
  thresholds_lin_.reserve(steps_.size());
  for (std::size_t i = 0; i < steps_.size(); ++i) {
    if (i > 0 && (steps_[i].spectral_efficiency <= steps_[i - 1].spectral_efficiency ||
                  steps_[i].sinr_lower_db <= steps_[i - 1].sinr_lower_db)) {
      throw ConfigError("rate table must be strictly increasing in efficiency and SINR");
    }
    thresholds_lin_.push_back(db_to_linear(steps_[i].sinr_lower_db));
  }
}

RateTable RateTable::defaults() {
  return RateTable({{0.4922, -4.0},
                    {1.3889, 0.0},
                    {2.8962, 4.0},
                    {4.7364, 8.0},
                    {6.6885, 12.0},
                    {8.6711, 16.0}});
}

std::optional<std::size_t> RateTable::rate_index_for(double sinr_db) const {
  if (sinr_db < steps_.front().sinr_lower_db) return std::nullopt;  // outage
  std::size_t l = 1;
  while (l < steps_.size() && sinr_db >= steps_[l].sinr_lower_db) ++l;
  return l;
}

double RateTable::mean_efficiency_exponential(double scale) const {
  if (!(scale > 0.0)) return 0.0;
  double mean = 0.0;
  for (std::size_t l = 1; l <= steps_.size(); ++l) {
    mean += efficiency_gain(l) * std::exp(-thresholds_lin_[l - 1] / scale);
  }
  return mean;
}

double RateTable::outage_exponential(double scale) const {
  if (!(scale > 0.0)) return 1.0;
  return -std::expm1(-thresholds_lin_.front() / scale);
}

void NetworkConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError("config: " + msg); };
  if (!(macro_radius_m > 0.0)) fail("macro_radius_m must be positive");
  if (!(home_radius_m > 0.0)) fail("home_radius_m must be positive");
  if (!(home_radius_m < macro_radius_m)) fail("home_radius_m must be below macro_radius_m");
  if (!(carrier_freq_mhz > 0.0)) fail("carrier_freq_mhz must be positive");
  if (!(bandwidth_hz > 0.0)) fail("bandwidth_hz must be positive");
  if (!(wall_loss_db >= 0.0)) fail("wall_loss_db must be non-negative");
  if (!(fbs_mean >= 0.0)) fail("fbs_mean must be non-negative");
  if (!(user_mean >= 0.0)) fail("user_mean must be non-negative");
  if (!(benefit_ratio >= 1.0)) fail("benefit_ratio must be at least 1");
  if (!(oms_ratio >= 0.0)) fail("oms_ratio must be non-negative");
  if (!(oms_ratio <= benefit_ratio)) fail("oms_ratio must not exceed benefit_ratio");
  if (!(outage_cap > 0.0 && outage_cap < 1.0)) fail("outage_cap must lie in (0,1)");
  if (fading_samples < 1) fail("fading_samples must be at least 1");
  if (rho && !(*rho >= 0.0 && *rho <= 1.0)) fail("rho must lie in [0,1]");
  if (beta && !(*beta >= 0.0 && *beta <= 1.0)) fail("beta must lie in [0,1]");
  if (theta && !(*theta > 0.0 && *theta <= 1.0)) fail("theta must lie in (0,1]");
  if (service_radius_m && !(*service_radius_m > 0.0)) fail("service_radius_m must be positive");
}

Network::Network(const NetworkConfig& cfg) : Network(cfg, RateTable::defaults()) {}

Network::Network(const NetworkConfig& cfg, RateTable rates)
    : cfg_(cfg),
      pathloss_(cfg.carrier_freq_mhz, cfg.wall_loss_db),
      rates_(std::move(rates)) {
  cfg_.validate();
  macro_area_ = M_PI * cfg_.macro_radius_m * cfg_.macro_radius_m;
  noise_w_hz_ = dbm_to_watt(cfg_.noise_density_dbm_hz);
  // Transmit powers are cell totals spread uniformly over the bandwidth.
  macro_w_hz_ = dbm_to_watt(cfg_.macro_power_dbm) / cfg_.bandwidth_hz;
  femto_w_hz_ = dbm_to_watt(cfg_.femto_power_dbm) / cfg_.bandwidth_hz;
  lambda_f_ = cfg_.fbs_mean / macro_area_;
  lambda_u_ = cfg_.user_mean / macro_area_;
}

double overlap_probability(double lambda_f, double home_radius_m) {
  const double t = lambda_f * 4.0 * M_PI * home_radius_m * home_radius_m;
  if (t < 1e-8) return 0.5 * t * t;  // leading term, avoids cancellation
  return 1.0 - std::exp(-t) - t * std::exp(-t);
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_number(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' has non-numeric value '" + value + "'");
  }
}

void set_key(NetworkConfig& cfg, const std::string& key, const std::string& value) {
  const double v = parse_number(key, value);
  if (key == "macro_radius_m") cfg.macro_radius_m = v;
  else if (key == "home_radius_m") cfg.home_radius_m = v;
  else if (key == "carrier_freq_mhz") cfg.carrier_freq_mhz = v;
  else if (key == "bandwidth_hz") cfg.bandwidth_hz = v;
  else if (key == "noise_density_dbm_hz") cfg.noise_density_dbm_hz = v;
  else if (key == "macro_power_dbm") cfg.macro_power_dbm = v;
  else if (key == "femto_power_dbm") cfg.femto_power_dbm = v;
  else if (key == "wall_loss_db") cfg.wall_loss_db = v;
  else if (key == "fbs_mean") cfg.fbs_mean = v;
  else if (key == "user_mean") cfg.user_mean = v;
  else if (key == "benefit_ratio") cfg.benefit_ratio = v;
  else if (key == "oms_ratio") cfg.oms_ratio = v;
  else if (key == "outage_cap") cfg.outage_cap = v;
  else if (key == "fading_samples") cfg.fading_samples = static_cast<int>(v);
  else if (key == "rho") cfg.rho = v;
  else if (key == "service_radius_m") cfg.service_radius_m = v;
  else if (key == "beta") cfg.beta = v;
  else if (key == "theta") cfg.theta = v;
  else throw ConfigError("config: unknown key '" + key + "'");
}

}  // namespace

NetworkConfig parse_config_text(const std::string& text) {
  NetworkConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config: line " + std::to_string(lineno) + " is not key = value");
    }
    set_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  cfg.validate();
  return cfg;
}

NetworkConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

void apply_override(NetworkConfig& cfg, const std::string& key, const std::string& value) {
  set_key(cfg, trim(key), trim(value));
}

std::string default_config_text() {
  NetworkConfig d;
  std::ostringstream out;
  out << "# Two-tier network defaults\n"
      << "macro_radius_m = " << d.macro_radius_m << "\n"
      << "home_radius_m = " << d.home_radius_m << "\n"
      << "carrier_freq_mhz = " << d.carrier_freq_mhz << "\n"
      << "bandwidth_hz = " << d.bandwidth_hz << "\n"
      << "noise_density_dbm_hz = " << d.noise_density_dbm_hz << "\n"
      << "macro_power_dbm = " << d.macro_power_dbm << "\n"
      << "femto_power_dbm = " << d.femto_power_dbm << "\n"
      << "wall_loss_db = " << d.wall_loss_db << "\n"
      << "fbs_mean = " << d.fbs_mean << "\n"
      << "user_mean = " << d.user_mean << "\n"
      << "benefit_ratio = " << d.benefit_ratio << "\n"
      << "oms_ratio = " << d.oms_ratio << "\n"
      << "outage_cap = " << d.outage_cap << "\n"
      << "fading_samples = " << d.fading_samples << "\n";
  return out.str();
}

}  // namespace femto
