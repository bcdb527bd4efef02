#include <algorithm>
#include <cmath>
#include <limits>

#include "femto/optimizer.hpp"

namespace femto::opt {

namespace {

constexpr double kUnconstrained = 1e300;  // stand-in for a vacuous benefit bound

struct SolveContext {
  double theta = 1.0;
  double se_fms = 0.0;
  double se_mms = 0.0;
  double area_min = 0.0;
  double area_max = 0.0;
  analytic::MaxRadiusResult dmax;
  bool feasible = true;  // outage cap satisfiable at the minimum radius
};

SolveContext make_context(const Network& net, double theta) {
  SolveContext ctx;
  ctx.theta = theta;
  ctx.se_fms = analytic::mean_se_fms(net, theta);
  ctx.se_mms = analytic::mean_se_mms(net);
  ctx.dmax = analytic::max_service_radius(net, theta);
  ctx.area_min = analytic::area_from_radius(net.home_radius(), net.lambda_f());
  ctx.area_max = analytic::area_from_radius(ctx.dmax.radius, net.lambda_f());
  if (ctx.dmax.radius <= net.home_radius()) {
    ctx.feasible =
        analytic::mean_oms_outage(net.home_radius(), net, theta) <= net.outage_cap() + 1e-12;
  }
  return ctx;
}

// Area-to-radius inversion pinned to the searched interval; the saturated
// maximum area rounds to full coverage where the plain inversion blows up.
double radius_for_area(const SolveContext& ctx, double area, const Network& net) {
  if (area >= ctx.area_max) return ctx.dmax.radius;
  return analytic::radius_from_area(area, net.lambda_f());
}

double macro_term(double area, double se_mms, const Network& net) {
  const auto counts = analytic::homogeneous_user_counts(area, net);
  return se_mms * analytic::mean_inverse_count(counts.mms_mean);
}

}  // namespace

const char* mode_name(Mode mode) {
  switch (mode) {
    case Mode::kOpenAccess: return "OA";
    case Mode::kOpenAccessThin: return "OA-Thin";
    case Mode::kHybrid: return "HA";
    case Mode::kHybridThin: return "HA-Thin";
  }
  return "?";
}

NormalizedShares normalized_shares_with(double area, double se_fms, double se_mms,
                                        double se_oms_at_area, const Network& net,
                                        double theta) {
  const auto counts = analytic::homogeneous_user_counts(area, net);
  NormalizedShares s;
  s.macro = se_mms * analytic::mean_inverse_count(counts.mms_mean);
  s.fms_full = theta * se_fms / net.benefit_ratio();
  s.fms_shared =
      theta * se_fms * analytic::mean_inverse_count(counts.oms_mean) / net.benefit_ratio();
  s.oms_shared = net.oms_ratio() > 0.0
                     ? theta * se_oms_at_area * analytic::size_biased_share(counts.oms_mean) /
                           net.oms_ratio()
                     : kUnconstrained;
  return s;
}

NormalizedShares normalized_shares(double area, const Network& net, double theta) {
  return normalized_shares_with(area, analytic::mean_se_fms(net, theta),
                                analytic::mean_se_mms(net),
                                analytic::mean_se_oms(area, net, theta), net, theta);
}

NormalizedTerms normalized_terms_from(const NormalizedShares& s, Mode mode) {
  NormalizedTerms t;
  t.t_m = s.macro;
  if (mode == Mode::kHybrid || mode == Mode::kHybridThin) {
    // With the balancing dedication applied, the femto side of the binding
    // constraint collapses to one expression per case.
    if (s.oms_shared >= s.fms_shared) {
      t.t_fo = s.fms_full * s.oms_shared /
               (s.fms_full + s.oms_shared - s.fms_shared);
    } else {
      t.t_fo = s.oms_shared;
    }
  } else {
    t.t_fo = std::min(s.fms_shared, s.oms_shared);
  }
  return t;
}

NormalizedTerms normalized_terms(double area, const Network& net, double theta, Mode mode) {
  return normalized_terms_from(normalized_shares(area, net, theta), mode);
}

double optimal_rho_from(const NormalizedTerms& t) {
  return t.t_m / (t.t_fo + t.t_m);
}

double optimal_rho(double area, const Network& net, double theta, Mode mode) {
  return optimal_rho_from(normalized_terms(area, net, theta, mode));
}

double optimal_beta_from(const NormalizedShares& s) {
  if (s.oms_shared < s.fms_shared) return 0.0;
  const double q = (s.oms_shared - s.fms_shared) /
                   (s.fms_full - s.fms_shared + s.oms_shared);
  return std::clamp(q, 0.0, 1.0);
}

double optimal_beta(double area, const Network& net, double theta) {
  return optimal_beta_from(normalized_shares(area, net, theta));
}

FmsLimitedReport fms_limited_check(const Network& net, double theta) {
  FmsLimitedReport rpt;
  const double m = net.benefit_ratio();
  const double k = net.oms_ratio();
  if (k <= 0.0) {
    // No oMS requirement: the owner constraint is the only one.
    rpt.ratio_cap = std::numeric_limits<double>::infinity();
    rpt.sufficient = true;
    rpt.definition_holds = true;
    return rpt;
  }
  rpt.ratio_cap = m / k;

  const auto ctx = make_context(net, theta);
  const auto counts_min = analytic::homogeneous_user_counts(ctx.area_min, net);
  const double se_oms_max = analytic::mean_se_oms(ctx.area_max, net, theta);
  rpt.condition_value = ctx.se_fms * analytic::mean_inverse_count(counts_min.oms_mean) /
                        (se_oms_max * analytic::size_biased_share(counts_min.oms_mean));
  rpt.sufficient = rpt.condition_value <= rpt.ratio_cap;

  // Direct check of the defining inequality on an area grid.
  rpt.definition_holds = true;
  const int grid = 48;
  for (int i = 0; i <= grid; ++i) {
    const double x = ctx.area_min + (ctx.area_max - ctx.area_min) * i / grid;
    const auto counts = analytic::homogeneous_user_counts(x, net);
    const double fms_side = k * ctx.se_fms * analytic::mean_inverse_count(counts.oms_mean);
    const double oms_side = m * analytic::mean_se_oms(x, net, theta) *
                            analytic::size_biased_share(counts.oms_mean);
    if (fms_side > oms_side * (1.0 + 1e-9)) {
      rpt.definition_holds = false;
      break;
    }
    if (ctx.area_max <= ctx.area_min) break;
  }
  return rpt;
}

namespace {

struct SearchOutcome {
  double area = 0.0;
  double objective = 0.0;  // value being maximized
};

// Grid scan plus golden-section refinement of a 1-D objective, keeping the
// smallest area among ties within 1e-9 relative of the maximum.
template <typename F>
SearchOutcome maximize_over_area(const F& objective, double lo, double hi, int grid_points,
                                 double refine_tol) {
  if (hi <= lo) return {lo, objective(lo)};

  std::vector<double> xs(grid_points + 1), vs(grid_points + 1);
  int best = 0;
  for (int i = 0; i <= grid_points; ++i) {
    xs[i] = lo + (hi - lo) * i / grid_points;
    vs[i] = objective(xs[i]);
    if (vs[i] > vs[best]) best = i;
  }

  const double a = xs[std::max(best - 1, 0)];
  const double b = xs[std::min(best + 1, grid_points)];
  const auto refined = num::minimize_scalar([&](double x) { return -objective(x); }, a, b,
                                            refine_tol * (hi - lo), 64);

  double best_v = std::max(vs[best], -refined.value);
  double best_x = -refined.value >= vs[best] ? refined.x : xs[best];
  // Prefer the least coverage expansion at (numerically) equal objective.
  for (int i = 0; i <= grid_points; ++i) {
    if (xs[i] < best_x && vs[i] >= best_v - 1e-9 * std::abs(best_v)) {
      best_x = xs[i];
      best_v = vs[i];
      break;
    }
  }
  return {best_x, best_v};
}

analytic::GeometrySnapshot snapshot_from(const SolveContext& ctx, double d_f, const Network& net) {
  analytic::GeometrySnapshot snap;
  snap.service_radius = d_f;
  snap.area = analytic::area_from_radius(d_f, net.lambda_f());
  snap.area_min = ctx.area_min;
  snap.area_max = ctx.area_max;
  snap.max_radius = ctx.dmax.radius;
  snap.max_radius_saturated = ctx.dmax.saturated;
  snap.p_mms = std::exp(-M_PI * net.lambda_f() * d_f * d_f);
  snap.cell_select_rss =
      net.femto_power_density() * net.pathloss().gain(LinkClass::kIndoorToOutdoor, d_f);
  return snap;
}

BindingConstraint classify_binding(const ThroughputReport& rpt, const Network& net) {
  const double scale = std::max(rpt.tput_mms, 1.0);
  const bool fms_tight = std::abs(rpt.slack_fms) <= 1e-6 * net.benefit_ratio() * scale;
  const bool oms_tight = std::abs(rpt.slack_oms) <= 1e-6 * std::max(net.oms_ratio(), 1.0) * scale;
  if (fms_tight && oms_tight) return BindingConstraint::kBoth;
  if (fms_tight) return BindingConstraint::kFmsBenefit;
  if (oms_tight) return BindingConstraint::kOmsBenefit;
  return BindingConstraint::kNone;
}

OptimizationResult finalize(const SolveContext& ctx, Mode mode, double area, double beta,
                            const Network& net) {
  OptimizationResult res;
  res.mode = mode;
  res.area = area;
  res.feasible = ctx.feasible;

  const double se_oms = analytic::mean_se_oms(area, net, ctx.theta);
  const auto shares =
      normalized_shares_with(area, ctx.se_fms, ctx.se_mms, se_oms, net, ctx.theta);
  NormalizedTerms terms;
  if (mode == Mode::kHybrid || mode == Mode::kHybridThin) {
    terms = normalized_terms_from(shares, mode);
  } else {
    terms = normalized_terms_from(shares, Mode::kOpenAccess);
  }
  const double rho = optimal_rho_from(terms);

  res.params.rho = rho;
  res.params.service_radius_m = radius_for_area(ctx, area, net);
  res.params.beta = beta;
  res.params.theta = ctx.theta;
  res.objective = net.bandwidth() * terms.t_m * terms.t_fo / (terms.t_m + terms.t_fo);
  res.report = analytic::analyze(res.params, net);
  res.binding = classify_binding(res.report, net);
  res.geometry = snapshot_from(ctx, res.params.service_radius_m, net);
  return res;
}

bool prop_max_area_condition(const SolveContext& ctx, bool fms_limited, const Network& net) {
  const double quantity =
      net.config().fbs_mean * ctx.se_fms / (net.benefit_ratio() * ctx.se_mms);
  const auto counts_max = analytic::homogeneous_user_counts(ctx.area_max, net);
  const bool macro_dominates = counts_max.mms_mean >= net.lambda_u() * ctx.area_max;
  return quantity > 1.0 && fms_limited && macro_dominates;
}

}  // namespace

OptimizationResult solve_open_access(const Network& net, double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) {
    throw std::domain_error("solve_open_access: theta outside (0,1]");
  }
  const auto ctx = make_context(net, theta);
  const auto limited = fms_limited_check(net, theta);

  SearchOutcome found;
  if (limited.definition_holds) {
    // Binding owner constraint: the reduced objective is the reciprocal sum,
    // convex here, and needs no per-point oMS integral.
    auto reciprocal = [&](double x) {
      const auto counts = analytic::homogeneous_user_counts(x, net);
      const double t_fo = theta * ctx.se_fms *
                          analytic::mean_inverse_count(counts.oms_mean) /
                          net.benefit_ratio();
      const double t_m = ctx.se_mms * analytic::mean_inverse_count(counts.mms_mean);
      return 1.0 / t_fo + 1.0 / t_m;
    };
    found = maximize_over_area([&](double x) { return -reciprocal(x); }, ctx.area_min,
                               ctx.area_max, 512, 1e-6);
  } else {
    auto gain = [&](double x) {
      const double se_oms = analytic::mean_se_oms(x, net, theta);
      const auto terms = normalized_terms_from(
          normalized_shares_with(x, ctx.se_fms, ctx.se_mms, se_oms, net, theta),
          Mode::kOpenAccess);
      return terms.t_m * terms.t_fo / (terms.t_m + terms.t_fo);
    };
    found = maximize_over_area(gain, ctx.area_min, ctx.area_max, 512, 1e-6);
  }

  auto res = finalize(ctx, Mode::kOpenAccess, found.area, 0.0, net);
  res.fms_limited = limited.definition_holds;
  res.prop_max_area = prop_max_area_condition(ctx, limited.definition_holds, net);
  if (limited.definition_holds) {
    res.convexity_verified = verify_convexity(net, theta).convex;
  }
  return res;
}

std::vector<double> default_theta_grid() {
  std::vector<double> grid;
  for (int i = 1; i <= 20; ++i) grid.push_back(i * 0.05);
  return grid;
}

namespace {

template <typename Solver>
OptimizationResult best_over_theta(const Network& net, std::vector<double> grid, Mode mode,
                                   const Solver& solve) {
  if (grid.empty()) grid = default_theta_grid();
  std::sort(grid.begin(), grid.end());
  if (std::none_of(grid.begin(), grid.end(), [](double t) { return t == 1.0; })) {
    grid.push_back(1.0);
  }
  OptimizationResult best;
  bool have = false;
  for (double theta : grid) {
    if (!(theta > 0.0 && theta <= 1.0)) {
      throw std::domain_error("theta grid values must lie in (0,1]");
    }
    auto res = solve(theta);
    const bool better =
        !have || (res.feasible && !best.feasible) ||
        (res.feasible == best.feasible && res.objective >= best.objective);
    if (better) {
      best = std::move(res);
      have = true;
    }
  }
  best.mode = mode;
  return best;
}

}  // namespace

OptimizationResult solve_open_access_thin(const Network& net,
                                          const std::vector<double>& theta_grid) {
  return best_over_theta(net, theta_grid, Mode::kOpenAccessThin,
                         [&](double theta) { return solve_open_access(net, theta); });
}

OptimizationResult solve_hybrid(const Network& net, double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) {
    throw std::domain_error("solve_hybrid: theta outside (0,1]");
  }
  const auto ctx = make_context(net, theta);
  const SearchSpec spec;

  // Single-variable outer search; the split and the dedication follow from
  // the area in closed form. Not convex in general, hence the dense grid.
  auto gain = [&](double x) {
    const double se_oms = analytic::mean_se_oms(x, net, theta);
    const auto terms = normalized_terms_from(
        normalized_shares_with(x, ctx.se_fms, ctx.se_mms, se_oms, net, theta),
        Mode::kHybrid);
    return terms.t_m * terms.t_fo / (terms.t_m + terms.t_fo);
  };
  const auto found =
      maximize_over_area(gain, ctx.area_min, ctx.area_max, spec.area_grid, spec.refine_tol);

  const double se_oms = analytic::mean_se_oms(found.area, net, theta);
  const double beta = optimal_beta_from(
      normalized_shares_with(found.area, ctx.se_fms, ctx.se_mms, se_oms, net, theta));

  auto res = finalize(ctx, Mode::kHybrid, found.area, beta, net);
  const auto limited = fms_limited_check(net, theta);
  res.fms_limited = limited.definition_holds;
  res.prop_max_area = prop_max_area_condition(ctx, limited.definition_holds, net);
  return res;
}

OptimizationResult solve_hybrid_thin(const Network& net,
                                     const std::vector<double>& theta_grid) {
  return best_over_theta(net, theta_grid, Mode::kHybridThin,
                         [&](double theta) { return solve_hybrid(net, theta); });
}

ConvexityReport verify_convexity(const Network& net, double theta) {
  ConvexityReport rpt;
  const auto ctx = make_context(net, theta);

  auto femto_term = [&](double x) {
    const auto counts = analytic::homogeneous_user_counts(x, net);
    return net.benefit_ratio() /
           (theta * ctx.se_fms * analytic::mean_inverse_count(counts.oms_mean));
  };
  auto macro_recip = [&](double x) {
    return 1.0 / macro_term(x, ctx.se_mms, net);
  };

  const int grid = 1000;
  const double lo = ctx.area_min, hi = std::max(ctx.area_max, ctx.area_min * (1.0 + 1e-9));
  double min_total = std::numeric_limits<double>::infinity();
  double min_macro = std::numeric_limits<double>::infinity();
  std::vector<double> total(grid + 1), macro(grid + 1);
  for (int i = 0; i <= grid; ++i) {
    const double x = lo + (hi - lo) * i / grid;
    macro[i] = macro_recip(x);
    total[i] = femto_term(x) + macro[i];
  }
  for (int i = 1; i < grid; ++i) {
    const double d2 = total[i - 1] - 2.0 * total[i] + total[i + 1];
    min_total = std::min(min_total, d2 / std::max(std::abs(total[i]), 1e-300));
    const double d2m = macro[i - 1] - 2.0 * macro[i] + macro[i + 1];
    min_macro = std::min(min_macro, d2m / std::max(std::abs(macro[i]), 1e-300));
  }
  rpt.min_scaled_second_difference = min_total;
  rpt.min_macro_term_second_difference = min_macro;

  // Series bracket of the owner-term curvature, positive on (0, 50].
  double min_bracket = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= 5000; ++i) {
    const double y = 50.0 * i / 5000;
    min_bracket = std::min(min_bracket, (y + 2.0) * std::exp(-y) + y - 2.0);
  }
  rpt.min_series_bracket = min_bracket;

  rpt.convex = rpt.min_scaled_second_difference >= -1e-9 &&
               rpt.min_macro_term_second_difference >= -1e-9 &&
               rpt.min_series_bracket >= -1e-12;
  return rpt;
}

}  // namespace femto::opt
