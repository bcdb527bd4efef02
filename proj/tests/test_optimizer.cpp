#include <doctest.h>

#include <cmath>

#include "femto/analytic.hpp"
#include "femto/optimizer.hpp"

using namespace femto;
using namespace femto::opt;

namespace {

const Network& defaults() {
  static const Network net{NetworkConfig{}};
  return net;
}

struct AreaBounds {
  double lo = 0.0;
  double hi = 0.0;
};

AreaBounds feasible_area(const Network& net, double theta = 1.0) {
  const auto dmax = analytic::max_service_radius(net, theta);
  return {analytic::area_from_radius(net.home_radius(), net.lambda_f()),
          analytic::area_from_radius(dmax.radius, net.lambda_f())};
}

// Throughputs at one (rho, x, beta) point from precomputed spectral
// efficiencies; used by the brute-force grids.
struct PointEval {
  double t_f, t_m, t_o;
};

PointEval eval_point(double rho, double x, double beta, double se_f, double se_m,
                     double se_o, const Network& net, double theta) {
  const auto counts = analytic::homogeneous_user_counts(x, net);
  return {analytic::throughput_fms_with(rho, beta, se_f, counts.oms_mean, net, theta),
          analytic::throughput_mms_with(rho, se_m, counts.mms_mean, net),
          analytic::throughput_oms_with(rho, beta, se_o, counts.oms_mean, net, theta)};
}


// Smallest split satisfying both benefit constraints at fixed (x, beta),
// located by bisection on the feasibility boundary; uses only the plain
// throughput evaluations, independently of the solver's closed form.
double boundary_rho(double x, double beta, double se_f, double se_m, double se_o,
                    const Network& net, double theta) {
  auto feasible = [&](double rho) {
    const auto at = eval_point(rho, x, beta, se_f, se_m, se_o, net, theta);
    return at.t_f >= net.benefit_ratio() * at.t_m &&
           at.t_o >= net.oms_ratio() * at.t_m;
  };
  if (!feasible(1.0)) return 1.0;
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace

TEST_CASE("normalized terms and shares") {
  const auto& net = defaults();
  const double x = analytic::area_from_radius(40.0, net.lambda_f());
  const auto shares = normalized_shares(x, net, 1.0);

  SUBCASE("positive on the feasible range") {
    const auto bounds = feasible_area(net);
    for (int i = 0; i <= 8; ++i) {
      const double xi = bounds.lo + (bounds.hi - bounds.lo) * i / 8;
      const auto s = normalized_shares(xi, net, 1.0);
      CHECK(s.macro > 0.0);
      CHECK(s.fms_full > 0.0);
      CHECK(s.fms_shared > 0.0);
      CHECK(s.oms_shared > 0.0);
    }
  }

  SUBCASE("open-access bound is the minimum of the two share terms") {
    const auto terms = normalized_terms_from(shares, Mode::kOpenAccess);
    CHECK(terms.t_fo ==
          doctest::Approx(std::min(shares.fms_shared, shares.oms_shared)).epsilon(1e-12));
    CHECK(terms.t_m == doctest::Approx(shares.macro).epsilon(1e-12));
  }

  SUBCASE("matches the defining throughput ratios") {
    const double rho = 0.37;
    const ControlParams p{rho, 40.0, 0.0, 1.0};
    const auto rpt = analytic::analyze(p, net);
    const auto terms = normalized_terms(x, net, 1.0, Mode::kOpenAccess);
    const double w = net.bandwidth();
    CHECK(terms.t_m == doctest::Approx(rpt.tput_mms / (w * (1.0 - rho))).epsilon(1e-12));
    const double t_fo_direct = std::min(rpt.tput_fms / (net.benefit_ratio() * w * rho),
                                        rpt.tput_oms / (net.oms_ratio() * w * rho));
    CHECK(terms.t_fo == doctest::Approx(t_fo_direct).epsilon(1e-12));
  }
}

TEST_CASE("optimal split") {
  const auto& net = defaults();
  SUBCASE("symmetric terms split evenly") {
    CHECK(optimal_rho_from(NormalizedTerms{1.7, 1.7}) == doctest::Approx(0.5));
  }
  SUBCASE("matches a dense feasibility scan") {
    const double x = analytic::area_from_radius(40.0, net.lambda_f());
    const auto terms = normalized_terms(x, net, 1.0, Mode::kOpenAccess);
    const int grid = 200000;
    double best_rho = 1.0;
    for (int i = 0; i <= grid; ++i) {
      const double rho = static_cast<double>(i) / grid;
      if (rho * terms.t_fo >= (1.0 - rho) * terms.t_m) {
        best_rho = rho;  // smallest feasible split maximizes (1-rho) t_m
        break;
      }
    }
    CHECK(std::abs(optimal_rho(x, net, 1.0, Mode::kOpenAccess) - best_rho) <= 1.0 / grid);
  }
  SUBCASE("hybrid split with a binding served-user side") {
    NetworkConfig cfg;
    cfg.oms_ratio = 10.0;  // large K pushes the served-user term below the owner term
    const Network harsh(cfg);
    const double x = analytic::area_from_radius(40.0, harsh.lambda_f());
    const auto s = normalized_shares(x, harsh, 1.0);
    REQUIRE(s.oms_shared < s.fms_shared);
    CHECK(optimal_beta_from(s) == 0.0);
    CHECK(optimal_rho(x, harsh, 1.0, Mode::kHybrid) ==
          doctest::Approx(s.macro / (s.oms_shared + s.macro)).epsilon(1e-12));
  }
}

TEST_CASE("optimal dedication") {
  const auto& net = defaults();
  const double x = analytic::area_from_radius(40.0, net.lambda_f());
  const auto s = normalized_shares(x, net, 1.0);
  REQUIRE(s.oms_shared >= s.fms_shared);
  const double beta_star = optimal_beta_from(s);

  SUBCASE("balances the two benefit constraints") {
    const double se_f = analytic::mean_se_fms(net, 1.0);
    const double se_o = analytic::mean_se_oms(x, net, 1.0);
    const double se_m = analytic::mean_se_mms(net);
    const auto at = eval_point(0.4, x, beta_star, se_f, se_m, se_o, net, 1.0);
    CHECK(at.t_f / net.benefit_ratio() ==
          doctest::Approx(at.t_o / net.oms_ratio()).epsilon(1e-10));
  }

  SUBCASE("matches a dense grid over the dedication") {
    const double se_f = analytic::mean_se_fms(net, 1.0);
    const double se_o = analytic::mean_se_oms(x, net, 1.0);
    const double se_m = analytic::mean_se_mms(net);
    const int grid = 100000;
    double best = -1.0, best_beta = 0.0;
    for (int i = 0; i <= grid; ++i) {
      const double beta = static_cast<double>(i) / grid;
      const auto at = eval_point(0.4, x, beta, se_f, se_m, se_o, net, 1.0);
      const double v = std::min(at.t_f / net.benefit_ratio(), at.t_o / net.oms_ratio());
      if (v > best) {
        best = v;
        best_beta = beta;
      }
    }
    CHECK(std::abs(beta_star - best_beta) <= 1.0 / grid);
  }

  SUBCASE("zero when the served-user side binds everywhere") {
    NetworkConfig cfg;
    cfg.oms_ratio = 10.0;
    const Network harsh(cfg);
    CHECK(optimal_beta(x, harsh, 1.0) == 0.0);
  }
}

TEST_CASE("owner-requirement-limited check") {
  SUBCASE("vacuous served-user requirement") {
    NetworkConfig cfg;
    cfg.oms_ratio = 0.0;
    const auto rpt = fms_limited_check(Network(cfg), 1.0);
    CHECK(rpt.sufficient);
    CHECK(rpt.definition_holds);
  }
  SUBCASE("huge ratio cap") {
    NetworkConfig cfg;
    cfg.benefit_ratio = 1e9;
    cfg.oms_ratio = 1.0;
    const auto rpt = fms_limited_check(Network(cfg), 1.0);
    CHECK(rpt.sufficient);
    CHECK(rpt.definition_holds);
  }
  SUBCASE("sufficient condition implies the grid definition") {
    for (double m : {3.0, 6.0, 10.0, 20.0}) {
      NetworkConfig cfg;
      cfg.benefit_ratio = m;
      const auto rpt = fms_limited_check(Network(cfg), 1.0);
      if (rpt.sufficient) CHECK(rpt.definition_holds);
    }
  }
  SUBCASE("defaults are owner-limited") {
    CHECK(fms_limited_check(defaults(), 1.0).definition_holds);
  }
}

TEST_CASE("open-access solver") {
  const auto& net = defaults();
  const auto res = solve_open_access(net);

  SUBCASE("feasible point with the expected structure") {
    CHECK(res.feasible);
    CHECK(res.params.beta == 0.0);
    CHECK(res.params.rho > 0.0);
    CHECK(res.params.rho < 1.0);
    CHECK(res.fms_limited);
    CHECK(res.convexity_verified);
  }

  SUBCASE("maximum-coverage condition holds at defaults and pins the area") {
    CHECK(res.prop_max_area);
    CHECK(res.params.service_radius_m ==
          doctest::Approx(res.geometry.max_radius).epsilon(1e-6));
  }

  SUBCASE("objective equals the recomputed macro throughput") {
    const double recomputed = analytic::throughput_mms(res.params.rho, res.area, net);
    CHECK(res.objective == doctest::Approx(recomputed).epsilon(1e-10));
  }

  SUBCASE("owner benefit binds at the optimum") {
    CHECK(std::abs(res.report.slack_fms) <=
          1e-8 * net.benefit_ratio() * res.report.tput_mms);
  }

  SUBCASE("agrees with a 200x200 brute-force grid") {
    // The split dimension is a linear program per area point, so the grid
    // resolves it on the feasibility boundary; plain grid splits additionally
    // bound the solver from below.
    const auto bounds = feasible_area(net);
    const double se_f = analytic::mean_se_fms(net, 1.0);
    const double se_m = analytic::mean_se_mms(net);
    double grid_best = 0.0;
    for (int ix = 0; ix <= 200; ++ix) {
      const double x = bounds.lo + (bounds.hi - bounds.lo) * ix / 200;
      const double se_o = analytic::mean_se_oms(x, net, 1.0);
      for (int ir = 1; ir < 200; ++ir) {
        const double rho = static_cast<double>(ir) / 200;
        const auto at = eval_point(rho, x, 0.0, se_f, se_m, se_o, net, 1.0);
        if (at.t_f >= net.benefit_ratio() * at.t_m &&
            at.t_o >= net.oms_ratio() * at.t_m) {
          CHECK(at.t_m <= res.objective * (1.0 + 1e-9));
        }
      }
      const double rho = boundary_rho(x, 0.0, se_f, se_m, se_o, net, 1.0);
      const auto at = eval_point(rho, x, 0.0, se_f, se_m, se_o, net, 1.0);
      grid_best = std::max(grid_best, at.t_m);
    }
    CHECK(grid_best <= res.objective * (1.0 + 1e-3));
    CHECK(grid_best >= res.objective * (1.0 - 1e-3));
  }

  SUBCASE("large benefit requirement pulls the radius inward") {
    NetworkConfig cfg;
    cfg.benefit_ratio = 100.0;
    const auto big_m = solve_open_access(Network(cfg));
    CHECK(big_m.params.service_radius_m < big_m.geometry.max_radius * 0.99);
  }

  SUBCASE("split grows with the benefit requirement on the pinned-radius range") {
    double prev_rho = 0.0;
    for (double m : {5.0, 10.0, 30.0}) {
      NetworkConfig cfg;
      cfg.benefit_ratio = m;
      const auto r = solve_open_access(Network(cfg));
      CHECK(r.params.service_radius_m ==
            doctest::Approx(r.geometry.max_radius).epsilon(1e-6));
      CHECK(r.params.rho > prev_rho);
      prev_rho = r.params.rho;
    }
  }

  SUBCASE("outage cap violated at the home radius flags infeasibility") {
    NetworkConfig cfg;
    const double at_home = analytic::mean_oms_outage(cfg.home_radius_m, Network(cfg), 1.0);
    cfg.outage_cap = at_home * 0.5;
    const auto r = solve_open_access(Network(cfg));
    CHECK_FALSE(r.feasible);
    CHECK(r.params.service_radius_m == doctest::Approx(cfg.home_radius_m));
  }
}

TEST_CASE("thinned open access") {
  const auto& net = defaults();
  const auto oa = solve_open_access(net);
  const auto thin = solve_open_access_thin(net);

  SUBCASE("never worse than the unthinned solution") {
    CHECK(thin.objective >= oa.objective * (1.0 - 1e-12));
    CHECK(thin.mode == Mode::kOpenAccessThin);
  }
  SUBCASE("dense deployments choose partial utilization at a modest benefit ratio") {
    NetworkConfig cfg;
    cfg.fbs_mean = 50.0;
    const auto r = solve_open_access_thin(Network(cfg));
    CHECK(r.params.theta < 1.0);
  }
  SUBCASE("a large benefit requirement forces full utilization") {
    NetworkConfig cfg;
    cfg.benefit_ratio = 100.0;
    const auto r = solve_open_access_thin(Network(cfg));
    CHECK(r.params.theta == doctest::Approx(1.0));
  }
  SUBCASE("rejects grid values outside the unit interval") {
    CHECK_THROWS_AS(solve_open_access_thin(net, {0.5, 1.5}), std::domain_error);
  }
}

TEST_CASE("hybrid solver") {
  const auto& net = defaults();
  const auto ha = solve_hybrid(net);
  const auto oa = solve_open_access(net);

  SUBCASE("never worse than open access") {
    CHECK(ha.objective >= oa.objective * (1.0 - 1e-9));
  }

  SUBCASE("both benefits bind when the dedication is interior") {
    REQUIRE(ha.params.beta > 0.0);
    const auto& rpt = ha.report;
    CHECK(rpt.tput_fms / net.benefit_ratio() ==
          doctest::Approx(rpt.tput_mms).epsilon(1e-8));
    CHECK(rpt.tput_oms / net.oms_ratio() == doctest::Approx(rpt.tput_mms).epsilon(1e-8));
    CHECK(ha.binding == BindingConstraint::kBoth);
  }

  SUBCASE("objective equals the recomputed macro throughput") {
    CHECK(ha.objective ==
          doctest::Approx(analytic::throughput_mms(ha.params.rho, ha.area, net))
              .epsilon(1e-10));
  }

  SUBCASE("agrees with a coarse 3-D brute-force grid") {
    const auto bounds = feasible_area(net);
    const double se_f = analytic::mean_se_fms(net, 1.0);
    const double se_m = analytic::mean_se_mms(net);
    double grid_best = 0.0;
    for (int ix = 0; ix <= 60; ++ix) {
      const double x = bounds.lo + (bounds.hi - bounds.lo) * ix / 60;
      const double se_o = analytic::mean_se_oms(x, net, 1.0);
      for (int ib = 0; ib <= 300; ++ib) {
        const double beta = static_cast<double>(ib) / 300;
        const double rho = boundary_rho(x, beta, se_f, se_m, se_o, net, 1.0);
        const auto at = eval_point(rho, x, beta, se_f, se_m, se_o, net, 1.0);
        if (at.t_f >= net.benefit_ratio() * at.t_m * (1.0 - 1e-12) &&
            at.t_o >= net.oms_ratio() * at.t_m * (1.0 - 1e-12) && at.t_m > grid_best) {
          grid_best = at.t_m;
        }
      }
    }
    CHECK(grid_best <= ha.objective * (1.0 + 2e-3));
    CHECK(grid_best >= ha.objective * (1.0 - 2e-3));
  }
}

TEST_CASE("convexity verification") {
  const auto& net = defaults();
  const auto rpt = verify_convexity(net, 1.0);
  CHECK(rpt.convex);
  CHECK(rpt.min_scaled_second_difference >= -1e-9);
  CHECK(rpt.min_macro_term_second_difference >= -1e-9);
  CHECK(rpt.min_series_bracket >= 0.0);
}
