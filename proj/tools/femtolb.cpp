// Batch front end: loads a configuration, runs one of the analysis /
// optimization / simulation verbs, and writes CSV rows (or a text report)
// to a file or standard output. Progress goes to standard error only.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "femto/analytic.hpp"
#include "femto/csv.hpp"
#include "femto/network.hpp"
#include "femto/optimizer.hpp"
#include "femto/simulator.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitValidation = 4;

struct CommonOpts {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string output_path;
  std::uint64_t seed = 12345;
  int drops = 10000;
  int threads = 0;
};

void add_common(CLI::App* cmd, CommonOpts* opts) {
  cmd->add_option("--config", opts->config_path, "configuration file (key = value)");
  cmd->add_option("--set", opts->overrides, "override, key=value (repeatable)");
  cmd->add_option("-o,--output", opts->output_path, "output path (default: stdout)");
  cmd->add_option("--seed", opts->seed, "base seed for simulations");
  cmd->add_option("--drops", opts->drops, "Monte Carlo drops")->check(CLI::PositiveNumber);
  cmd->add_option("--threads", opts->threads, "worker threads (0 = auto)");
}

femto::NetworkConfig build_config(const CommonOpts& opts) {
  femto::NetworkConfig cfg;
  if (!opts.config_path.empty()) cfg = femto::load_config_file(opts.config_path);
  for (const auto& kv : opts.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw femto::ConfigError("--set expects key=value, got '" + kv + "'");
    }
    femto::apply_override(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  cfg.validate();
  return cfg;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw femto::ConfigError("cannot open output path '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

femto::ControlParams params_from_config(const femto::NetworkConfig& cfg, bool require) {
  femto::ControlParams p;
  if (require && (!cfg.rho || !cfg.service_radius_m)) {
    throw femto::ConfigError("rho and service_radius_m must be set (config or --set)");
  }
  p.rho = cfg.rho.value_or(0.5);
  p.service_radius_m = cfg.service_radius_m.value_or(cfg.home_radius_m);
  p.beta = cfg.beta.value_or(0.0);
  p.theta = cfg.theta.value_or(1.0);
  return p;
}

void fill_params(femto::csv::ResultRow& row, const femto::ControlParams& p,
                 const femto::Network& net) {
  row.set("rho", p.rho);
  row.set("service_radius_m", p.service_radius_m);
  row.set("area_m2", femto::analytic::area_from_radius(p.service_radius_m, net.lambda_f()));
  row.set("beta", p.beta);
  row.set("theta", p.theta);
}

void fill_report(femto::csv::ResultRow& row, const femto::ThroughputReport& rpt) {
  row.set("tput_fms", rpt.tput_fms);
  row.set("tput_mms", rpt.tput_mms);
  row.set("tput_oms", rpt.tput_oms);
  row.set("se_fms", rpt.se_fms);
  row.set("se_mms", rpt.se_mms);
  row.set("se_oms", rpt.se_oms);
  row.set("outage_oms", rpt.outage_oms);
  row.set("slack_fms", rpt.slack_fms);
  row.set("slack_oms", rpt.slack_oms);
  row.set("source", rpt.source == femto::ReportSource::kAnalytic ? "analytic" : "simulated");
  if (rpt.source == femto::ReportSource::kSimulated) {
    row.set("err_tput_fms", rpt.se_err_tput_fms);
    row.set("err_tput_mms", rpt.se_err_tput_mms);
    row.set("err_tput_oms", rpt.se_err_tput_oms);
    row.set("err_se_fms", rpt.se_err_se_fms);
    row.set("err_se_mms", rpt.se_err_se_mms);
    row.set("err_se_oms", rpt.se_err_se_oms);
  }
}

const char* binding_name(femto::opt::BindingConstraint b) {
  switch (b) {
    case femto::opt::BindingConstraint::kFmsBenefit: return "fms";
    case femto::opt::BindingConstraint::kOmsBenefit: return "oms";
    case femto::opt::BindingConstraint::kBoth: return "both";
    case femto::opt::BindingConstraint::kNone: return "none";
  }
  return "?";
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

femto::csv::ResultRow analyze_row(const femto::Network& net, const femto::ControlParams& p,
                                  double k_in) {
  Timer timer;
  const auto rpt = femto::analytic::analyze(p, net, k_in);
  femto::csv::ResultRow row;
  row.set("kind", "analyze");
  fill_params(row, p, net);
  fill_report(row, rpt);
  const auto dmax = femto::analytic::max_service_radius(net, p.theta);
  row.set("d_max_m", dmax.radius);
  row.set("feasible", p.service_radius_m <= dmax.radius * (1.0 + 1e-9) ? 1 : 0);
  if (k_in > 1.0) row.set("k_in", k_in);
  row.set("runtime_s", timer.seconds());
  return row;
}

femto::opt::OptimizationResult run_optimize(const femto::Network& net,
                                            femto::opt::Mode mode) {
  using femto::opt::Mode;
  switch (mode) {
    case Mode::kOpenAccess: return femto::opt::solve_open_access(net);
    case Mode::kOpenAccessThin: return femto::opt::solve_open_access_thin(net);
    case Mode::kHybrid: return femto::opt::solve_hybrid(net);
    case Mode::kHybridThin: return femto::opt::solve_hybrid_thin(net);
  }
  throw femto::ConfigError("unknown optimization mode");
}

femto::csv::ResultRow optimize_row(const femto::Network& net, femto::opt::Mode mode) {
  Timer timer;
  const auto res = run_optimize(net, mode);
  femto::csv::ResultRow row;
  row.set("kind", "optimize");
  row.set("scheme", femto::opt::mode_name(res.mode));
  fill_params(row, res.params, net);
  fill_report(row, res.report);
  row.set("d_max_m", res.geometry.max_radius);
  row.set("feasible", res.feasible ? 1 : 0);
  row.set("fms_limited", res.fms_limited ? 1 : 0);
  row.set("prop_max_area", res.prop_max_area ? 1 : 0);
  row.set("convexity_ok", res.convexity_verified ? 1 : 0);
  row.set("binding", binding_name(res.binding));
  row.set("runtime_s", timer.seconds());
  return row;
}

femto::opt::Mode parse_mode(const std::string& name) {
  using femto::opt::Mode;
  for (Mode m : {Mode::kOpenAccess, Mode::kOpenAccessThin, Mode::kHybrid, Mode::kHybridThin}) {
    if (name == femto::opt::mode_name(m)) return m;
  }
  throw femto::ConfigError("unknown mode '" + name + "' (OA, OA-Thin, HA, HA-Thin)");
}

// Proposed schemes fall back to the optimizer when no operating point is
// configured; calibrated schemes fall back to their calibration sweep.
femto::sim::SchemeSpec resolve_scheme_spec(femto::sim::Scheme scheme,
                                           const femto::NetworkConfig& cfg,
                                           const femto::Network& net,
                                           std::optional<double> colb_bias,
                                           std::optional<int> n_max, double k_in,
                                           const CommonOpts& opts) {
  femto::sim::SchemeSpec spec;
  spec.scheme = scheme;
  spec.max_users = n_max;
  spec.k_in = k_in;

  using femto::sim::Scheme;
  if (femto::sim::is_proposed(scheme)) {
    if (cfg.rho && cfg.service_radius_m) {
      spec.params = params_from_config(cfg, true);
    } else {
      const femto::opt::Mode mode =
          scheme == Scheme::kOpenAccess       ? femto::opt::Mode::kOpenAccess
          : scheme == Scheme::kOpenAccessThin ? femto::opt::Mode::kOpenAccessThin
          : scheme == Scheme::kHybrid         ? femto::opt::Mode::kHybrid
                                              : femto::opt::Mode::kHybridThin;
      std::cerr << "femtolb: no operating point configured; optimizing "
                << femto::opt::mode_name(mode) << " first\n";
      spec.params = run_optimize(net, mode).params;
    }
  } else if (scheme == Scheme::kCoLb) {
    if (colb_bias) {
      spec.colb_bias_db = *colb_bias;
    } else {
      std::cerr << "femtolb: calibrating CoLB bias\n";
      const auto cal = femto::sim::calibrate_colb(net, std::max(opts.drops / 10, 200),
                                                  opts.seed + 1, {}, opts.threads);
      spec.colb_bias_db = cal.bias_db;
      std::cerr << "femtolb: CoLB bias = " << cal.bias_db << " dB\n";
    }
  } else if (scheme == Scheme::kDivRssi || scheme == Scheme::kDivCa) {
    if (cfg.rho) {
      spec.params.rho = *cfg.rho;
    } else {
      std::cerr << "femtolb: calibrating bandwidth split for "
                << femto::sim::scheme_name(scheme) << "\n";
      const auto cal = femto::sim::calibrate_div(net, scheme, std::max(opts.drops / 10, 200),
                                                 opts.seed + 2, 199, opts.threads);
      if (!cal.feasible) {
        throw femto::InfeasibleError("no bandwidth split satisfies the benefit constraints");
      }
      spec.params.rho = cal.rho;
      std::cerr << "femtolb: split = " << cal.rho << "\n";
    }
  }
  return spec;
}

femto::csv::ResultRow simulate_row(const femto::sim::SchemeSpec& spec,
                                   const femto::Network& net, const CommonOpts& opts,
                                   std::ostream* drop_log) {
  Timer timer;
  const auto est =
      femto::sim::run_campaign(spec, net, opts.drops, opts.seed, opts.threads, drop_log);
  femto::csv::ResultRow row;
  row.set("kind", "simulate");
  row.set("scheme", femto::sim::scheme_name(spec.scheme));
  fill_params(row, spec.params, net);
  fill_report(row, est.report);
  row.set("drops", est.drops);
  if (spec.k_in > 1.0) row.set("k_in", spec.k_in);
  if (spec.max_users) row.set("n_max", *spec.max_users);
  if (spec.scheme == femto::sim::Scheme::kCoLb) row.set("colb_bias_db", spec.colb_bias_db);
  row.set("runtime_s", timer.seconds());
  return row;
}

int run_validate(const femto::NetworkConfig& cfg, const CommonOpts& opts,
                 std::vector<double> df_list, double threshold) {
  const femto::Network net(cfg);
  femto::ControlParams base = params_from_config(cfg, false);
  if (!cfg.rho) std::cerr << "femtolb: rho not set, using 0.5 for validation\n";
  if (df_list.empty()) df_list.push_back(base.service_radius_m);

  Output out(opts.output_path);
  out.stream() << "# femtolb validate: drops=" << opts.drops
               << " threshold=" << threshold << "\n";
  out.stream() << "service_radius_m,metric,analytic,simulated,rel_error,std_error\n";

  bool exceeded = false;
  for (double d_f : df_list) {
    femto::ControlParams p = base;
    p.service_radius_m = d_f;
    const auto analytic_rpt = femto::analytic::analyze(p, net);

    femto::sim::SchemeSpec spec;
    spec.scheme = femto::sim::Scheme::kOpenAccess;
    spec.params = p;
    std::cerr << "femtolb: simulating d_f = " << d_f << " (" << opts.drops << " drops)\n";
    const auto est = femto::sim::run_campaign(spec, net, opts.drops, opts.seed, opts.threads);

    const struct {
      const char* name;
      double analytic;
      double simulated;
      double stderr_;
    } metrics[] = {
        {"se_fms", analytic_rpt.se_fms, est.report.se_fms, est.report.se_err_se_fms},
        {"se_mms", analytic_rpt.se_mms, est.report.se_mms, est.report.se_err_se_mms},
        {"se_oms", analytic_rpt.se_oms, est.report.se_oms, est.report.se_err_se_oms},
        {"tput_fms", analytic_rpt.tput_fms, est.report.tput_fms, est.report.se_err_tput_fms},
        {"tput_mms", analytic_rpt.tput_mms, est.report.tput_mms, est.report.se_err_tput_mms},
        {"tput_oms", analytic_rpt.tput_oms, est.report.tput_oms, est.report.se_err_tput_oms},
    };
    for (const auto& m : metrics) {
      const double rel = m.analytic != 0.0 ? (m.simulated - m.analytic) / m.analytic : 0.0;
      if (std::abs(rel) > threshold) exceeded = true;
      out.stream() << femto::csv::format_double(d_f) << ',' << m.name << ','
                   << femto::csv::format_double(m.analytic) << ','
                   << femto::csv::format_double(m.simulated) << ','
                   << femto::csv::format_double(rel) << ','
                   << femto::csv::format_double(m.stderr_) << "\n";
    }
  }
  return exceeded ? kExitValidation : kExitOk;
}

void run_report_conditions(const femto::Network& net, std::ostream& out) {
  const double theta = 1.0;
  const auto limited = femto::opt::fms_limited_check(net, theta);
  const double se_f = femto::analytic::mean_se_fms(net, theta);
  const double se_m = femto::analytic::mean_se_mms(net);
  const double quantity =
      net.config().fbs_mean * se_f / (net.benefit_ratio() * se_m);
  const auto dmax = femto::analytic::max_service_radius(net, theta);
  const double x_max = femto::analytic::area_from_radius(dmax.radius, net.lambda_f());
  const auto counts = femto::analytic::homogeneous_user_counts(x_max, net);
  const double femto_users = net.lambda_u() * x_max;

  out << "operating-condition report\n";
  out << "  owner-requirement-limited check:\n";
  out << "    bound " << limited.condition_value << " vs M/K = " << limited.ratio_cap
      << " -> sufficient condition " << (limited.sufficient ? "holds" : "does not hold")
      << "\n";
  out << "    direct grid check: " << (limited.definition_holds ? "holds" : "does not hold")
      << "\n";
  out << "  max-coverage optimality quantity N_f*B_f/(M*B_m) = " << quantity << " ("
      << (quantity > 1.0 ? "> 1: expect x* = X_max" : "<= 1: interior optimum possible")
      << ")\n";
  out << "  mean users: macrocell " << counts.mms_mean << " vs one femtocell at max coverage "
      << femto_users << " ("
      << (counts.mms_mean >= femto_users ? "macro-dominated" : "femto-dominated") << ")\n";
  out << "  max service radius D_max = " << dmax.radius << " m"
      << (dmax.saturated ? " (saturated search cap)" : "") << "\n";
  out << "dedicated-band deployment checklist:\n";
  out << "  [operator input] macrocell traffic load high enough to need offloading\n";
  out << "  [operator input] coverage holes that femtocells should fill\n";
  out << "  [" << (net.benefit_ratio() <= 20 ? "computed: yes" : "computed: no")
      << "] owner benefit requirement moderate (M = " << net.benefit_ratio() << ")\n";
  out << "  [operator input] consumer willingness to pay for femtocell service\n";
  out << "  [operator input] expected savings from reduced macrocell deployment\n";
}

std::vector<double> parse_values(const std::string& csv_list) {
  std::vector<double> out;
  std::stringstream ss(csv_list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  if (out.empty()) throw femto::ConfigError("sweep values list is empty");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-tier femtocell load-balancing model, optimizer, and simulator"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string mode_name = "OA";
  std::string scheme_name;
  std::string axis;
  std::string values_list;
  std::string df_list_str;
  std::string drop_log_path;
  double threshold = 0.01;
  double k_in = 1.0;
  std::optional<double> colb_bias;
  std::optional<int> n_max;

  auto* analyze = app.add_subcommand("analyze", "analytic report at an operating point");
  add_common(analyze, &opts);
  analyze->add_option("--k-in", k_in, "indoor user density factor");

  auto* optimize = app.add_subcommand("optimize", "solve for the optimal parameters");
  add_common(optimize, &opts);
  optimize->add_option("--mode", mode_name, "OA, OA-Thin, HA, HA-Thin");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo campaign for one scheme");
  add_common(simulate, &opts);
  simulate->add_option("--scheme", scheme_name, "scheme name")->required();
  simulate->add_option("--k-in", k_in, "indoor user density factor");
  simulate->add_option("--n-max", n_max, "admission cap per femtocell");
  simulate->add_option("--colb-bias", colb_bias, "CoLB bias in dB");
  simulate->add_option("--drop-log", drop_log_path, "per-drop record file");

  auto* validate = app.add_subcommand("validate", "analysis vs simulation comparison");
  add_common(validate, &opts);
  validate->add_option("--df-list", df_list_str, "service radii, comma separated");
  validate->add_option("--threshold", threshold, "relative error threshold");

  auto* sweep = app.add_subcommand("sweep", "repeat a verb over a parameter axis");
  add_common(sweep, &opts);
  sweep->add_option("--axis", axis, "M, N_f, k_in, N_max, d_f")->required();
  sweep->add_option("--values", values_list, "comma separated values")->required();
  sweep->add_option("--mode", mode_name, "optimize per value with this mode");
  sweep->add_option("--scheme", scheme_name, "simulate per value with this scheme");

  auto* report = app.add_subcommand("report-conditions", "deployment condition report");
  add_common(report, &opts);

  CLI11_PARSE(app, argc, argv);

  try {
    const femto::NetworkConfig cfg = build_config(opts);

    if (analyze->parsed()) {
      const femto::Network net(cfg);
      const auto p = params_from_config(cfg, true);
      Output out(opts.output_path);
      out.stream() << femto::csv::kSchemaTag << "\n" << femto::csv::header_line() << "\n";
      out.stream() << femto::csv::to_line(analyze_row(net, p, k_in)) << "\n";
      return kExitOk;
    }

    if (optimize->parsed()) {
      const femto::Network net(cfg);
      Output out(opts.output_path);
      out.stream() << femto::csv::kSchemaTag << "\n" << femto::csv::header_line() << "\n";
      out.stream() << femto::csv::to_line(optimize_row(net, parse_mode(mode_name))) << "\n";
      return kExitOk;
    }

    if (simulate->parsed()) {
      const femto::Network net(cfg);
      const auto scheme = femto::sim::scheme_from_name(scheme_name);
      if (!scheme) throw femto::ConfigError("unknown scheme '" + scheme_name + "'");
      const auto spec =
          resolve_scheme_spec(*scheme, cfg, net, colb_bias, n_max, k_in, opts);
      std::ofstream drop_log;
      if (!drop_log_path.empty()) {
        drop_log.open(drop_log_path);
        if (!drop_log) throw femto::ConfigError("cannot open drop log '" + drop_log_path + "'");
      }
      Output out(opts.output_path);
      out.stream() << femto::csv::kSchemaTag << "\n" << femto::csv::header_line() << "\n";
      out.stream() << femto::csv::to_line(simulate_row(
                          spec, net, opts, drop_log.is_open() ? &drop_log : nullptr))
                   << "\n";
      return kExitOk;
    }

    if (validate->parsed()) {
      std::vector<double> df_list;
      if (!df_list_str.empty()) df_list = parse_values(df_list_str);
      return run_validate(cfg, opts, df_list, threshold);
    }

    if (sweep->parsed()) {
      const auto values = parse_values(values_list);
      const bool simulate_points = !scheme_name.empty();
      Output out(opts.output_path);
      out.stream() << femto::csv::kSchemaTag << "\n" << femto::csv::header_line() << "\n";
      for (double v : values) {
        femto::NetworkConfig point_cfg = cfg;
        double point_k_in = k_in;
        std::optional<int> point_n_max = n_max;
        if (axis == "M") point_cfg.benefit_ratio = v;
        else if (axis == "N_f") point_cfg.fbs_mean = v;
        else if (axis == "k_in") point_k_in = v;
        else if (axis == "N_max") point_n_max = static_cast<int>(v);
        else if (axis == "d_f") point_cfg.service_radius_m = v;
        else throw femto::ConfigError("unknown sweep axis '" + axis + "'");
        point_cfg.validate();
        const femto::Network net(point_cfg);

        std::cerr << "femtolb: sweep " << axis << " = " << v << "\n";
        femto::csv::ResultRow row;
        if (simulate_points) {
          const auto scheme = femto::sim::scheme_from_name(scheme_name);
          if (!scheme) throw femto::ConfigError("unknown scheme '" + scheme_name + "'");
          const auto spec = resolve_scheme_spec(*scheme, point_cfg, net, colb_bias,
                                                point_n_max, point_k_in, opts);
          row = simulate_row(spec, net, opts, nullptr);
        } else if (axis == "d_f" || (!sweep->count("--mode") && axis == "k_in")) {
          row = analyze_row(net, params_from_config(point_cfg, true), point_k_in);
        } else {
          row = optimize_row(net, parse_mode(mode_name));
        }
        row.set("sweep_var", axis);
        row.set("sweep_value", v);
        out.stream() << femto::csv::to_line(row) << "\n";
      }
      return kExitOk;
    }

    if (report->parsed()) {
      const femto::Network net(cfg);
      Output out(opts.output_path);
      run_report_conditions(net, out.stream());
      return kExitOk;
    }
  } catch (const femto::ConfigError& e) {
    std::cerr << "femtolb: " << e.what() << "\n";
    return kExitConfig;
  } catch (const femto::InfeasibleError& e) {
    std::cerr << "femtolb: infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::domain_error& e) {
    std::cerr << "femtolb: infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "femtolb: error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitOk;
}
