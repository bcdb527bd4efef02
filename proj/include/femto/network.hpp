#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "femto/pathloss.hpp"
#include "femto/rate_table.hpp"

namespace femto {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Deployment and radio parameters in configuration units (dBm, MHz, counts
// per macrocell). Powers are cell totals and are spread over the system
// bandwidth when the derived Network is built.
struct NetworkConfig {
  double macro_radius_m = 800.0;
  double home_radius_m = 20.0;
  double carrier_freq_mhz = 2000.0;
  double bandwidth_hz = 5e6;
  double noise_density_dbm_hz = -174.0;
  double macro_power_dbm = 46.0;
  double femto_power_dbm = 23.0;
  double wall_loss_db = 10.0;
  double fbs_mean = 30.0;        // average femtocell count per macrocell
  double user_mean = 200.0;      // average macrocell-user count
  double benefit_ratio = 10.0;   // required fMS-to-mMS throughput ratio
  double oms_ratio = 1.0;        // required oMS-to-mMS throughput ratio
  double outage_cap = 0.15;      // max mean outage rate of an oMS

  int fading_samples = 200;      // interference fading draws per link per drop

  // Optional operating point, settable from config files for `analyze`.
  std::optional<double> rho;
  std::optional<double> service_radius_m;
  std::optional<double> beta;
  std::optional<double> theta;

  void validate() const;  // throws ConfigError on violated invariants
};

// Derived model, all linear units (W/Hz, Hz, m, 1/m^2). Immutable after
// construction; safe to share across threads.
class Network {
 public:
  Network() : Network(NetworkConfig{}) {}
  explicit Network(const NetworkConfig& cfg);
  Network(const NetworkConfig& cfg, RateTable rates);

  const NetworkConfig& config() const { return cfg_; }
  const PathlossTable& pathloss() const { return pathloss_; }
  const RateTable& rates() const { return rates_; }

  double macro_radius() const { return cfg_.macro_radius_m; }
  double home_radius() const { return cfg_.home_radius_m; }
  double macro_area() const { return macro_area_; }
  double bandwidth() const { return cfg_.bandwidth_hz; }
  double noise_density() const { return noise_w_hz_; }       // W/Hz
  double macro_power_density() const { return macro_w_hz_; } // W/Hz
  double femto_power_density() const { return femto_w_hz_; } // W/Hz
  double lambda_f() const { return lambda_f_; }              // 1/m^2
  double lambda_u() const { return lambda_u_; }              // 1/m^2
  double benefit_ratio() const { return cfg_.benefit_ratio; }
  double oms_ratio() const { return cfg_.oms_ratio; }
  double outage_cap() const { return cfg_.outage_cap; }

 private:
  NetworkConfig cfg_;
  PathlossTable pathloss_;
  RateTable rates_;
  double macro_area_ = 0.0;
  double noise_w_hz_ = 0.0;
  double macro_w_hz_ = 0.0;
  double femto_w_hz_ = 0.0;
  double lambda_f_ = 0.0;
  double lambda_u_ = 0.0;
};

// Decision variables of the load-balancing problem.
struct ControlParams {
  double rho = 0.0;              // femtocell share of the bandwidth, [0,1]
  double service_radius_m = 0.0; // femtocell service radius d_f
  double beta = 0.0;             // intra-femtocell share reserved for the fMS
  double theta = 1.0;            // resource-usage probability, (0,1]
};

enum class ReportSource { kAnalytic, kSimulated };

// Per-class mean performance at one operating point.
struct ThroughputReport {
  double tput_fms = 0.0;  // bit/s
  double tput_mms = 0.0;
  double tput_oms = 0.0;
  double se_fms = 0.0;    // bit/s/Hz
  double se_mms = 0.0;
  double se_oms = 0.0;
  double outage_oms = 0.0;
  double slack_fms = 0.0;  // tput_fms - M * tput_mms
  double slack_oms = 0.0;  // tput_oms - K * tput_mms
  ReportSource source = ReportSource::kAnalytic;
  // Simulation only: standard errors of the class means, zero otherwise.
  double se_err_tput_fms = 0.0, se_err_tput_mms = 0.0, se_err_tput_oms = 0.0;
  double se_err_se_fms = 0.0, se_err_se_mms = 0.0, se_err_se_oms = 0.0;
};

// Probability that two or more femtocells land within overlap range of one
// another: 1 - e^-t - t e^-t with t = lambda_f * 4 pi D_h^2.
double overlap_probability(double lambda_f, double home_radius_m);

// Flat key=value configuration parsing. Unknown keys fail fast.
NetworkConfig parse_config_text(const std::string& text);
NetworkConfig load_config_file(const std::string& path);
void apply_override(NetworkConfig& cfg, const std::string& key, const std::string& value);
std::string default_config_text();  // matches the defaults file shipped in configs/

}  // namespace femto
