#pragma once

#include <vector>

#include "femto/analytic.hpp"
#include "femto/network.hpp"

namespace femto::opt {

enum class Mode { kOpenAccess, kOpenAccessThin, kHybrid, kHybridThin };

const char* mode_name(Mode mode);

// The four per-Hz rate/share products that decide the hybrid split at a given
// service area x: the macro side, the fMS on dedicated resources, the fMS on
// shared resources, and the oMS share (each divided by its benefit ratio).
struct NormalizedShares {
  double macro = 0.0;       // B_m * size-biased macro share
  double fms_full = 0.0;    // theta * B_f / M
  double fms_shared = 0.0;  // theta * B_f * E[1/(N+1)] / M
  double oms_shared = 0.0;  // theta * B_o(x) * size-biased share / K
};

NormalizedShares normalized_shares(double area, const Network& net, double theta);
// Same, with the position-independent spectral efficiencies precomputed.
NormalizedShares normalized_shares_with(double area, double se_fms, double se_mms,
                                        double se_oms_at_area, const Network& net,
                                        double theta);

// rho-free normalized throughputs: t_m = T_m / (W (1-rho)),
// t_fo = min(T_f / (M W rho), T_o / (K W rho)); hybrid uses the optimal-beta
// reduction of t_fo.
struct NormalizedTerms {
  double t_m = 0.0;
  double t_fo = 0.0;
};

NormalizedTerms normalized_terms(double area, const Network& net, double theta, Mode mode);
NormalizedTerms normalized_terms_from(const NormalizedShares& s, Mode mode);

// Bandwidth split making the binding benefit constraint tight.
double optimal_rho(double area, const Network& net, double theta, Mode mode);
double optimal_rho_from(const NormalizedTerms& t);

// Intra-femtocell dedication balancing the fMS and oMS benefit constraints,
// clamped to [0,1].
double optimal_beta(double area, const Network& net, double theta);
double optimal_beta_from(const NormalizedShares& s);

struct FmsLimitedReport {
  double condition_value = 0.0;  // bound to compare against M/K
  double ratio_cap = 0.0;        // M/K
  bool sufficient = false;       // closed-form sufficient condition holds
  bool definition_holds = false; // direct grid check of the defining inequality
};

// Whether the fMS benefit requirement is the binding constraint over the
// whole feasible area range.
FmsLimitedReport fms_limited_check(const Network& net, double theta);

enum class BindingConstraint { kFmsBenefit, kOmsBenefit, kBoth, kNone };

struct OptimizationResult {
  Mode mode = Mode::kOpenAccess;
  ControlParams params;
  double area = 0.0;         // optimal service area
  double objective = 0.0;    // maximized mean mMS throughput, bit/s
  ThroughputReport report;
  bool feasible = true;      // false when the outage cap binds at the minimum radius
  bool fms_limited = false;
  bool prop_max_area = false;     // sufficient condition for x* = X_max held
  bool convexity_verified = false;
  BindingConstraint binding = BindingConstraint::kNone;
  analytic::GeometrySnapshot geometry;
};

OptimizationResult solve_open_access(const Network& net, double theta = 1.0);
OptimizationResult solve_open_access_thin(const Network& net,
                                          const std::vector<double>& theta_grid = {});
OptimizationResult solve_hybrid(const Network& net, double theta = 1.0);
OptimizationResult solve_hybrid_thin(const Network& net,
                                     const std::vector<double>& theta_grid = {});

std::vector<double> default_theta_grid();  // 0.05, 0.10, ..., 1.00

struct ConvexityReport {
  double min_scaled_second_difference = 0.0;  // over the reduced objective grid
  double min_series_bracket = 0.0;            // (y+2)e^-y + y - 2 over (0, 50]
  double min_macro_term_second_difference = 0.0;
  bool convex = false;
};

// Numeric check that the reduced single-variable objective is convex on the
// feasible area range (valid in fMS-requirement-limited environments).
ConvexityReport verify_convexity(const Network& net, double theta);

// Grid size for the hybrid outer search and the general-case refinement.
struct SearchSpec {
  int area_grid = 2000;
  double refine_tol = 1e-6;  // fraction of the search interval
};

}  // namespace femto::opt
