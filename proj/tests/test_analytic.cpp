#include <doctest.h>

#include <cmath>

#include "femto/analytic.hpp"
#include "oracles.hpp"

using namespace femto;
using namespace femto::analytic;

namespace {

const Network& defaults() {
  static const Network net{NetworkConfig{}};
  return net;
}

InterferenceField default_field(double intensity_scale = 1.0, double exclusion = 0.0,
                                double alpha = 4.0) {
  const auto& net = defaults();
  const LinkClass link = LinkClass::kIndoorToIndoor;
  InterferenceField f;
  f.power_density = net.femto_power_density();
  f.alpha = alpha;
  f.fixed_loss = alpha == net.pathloss().exponent(link)
                     ? net.pathloss().fixed_loss(link)
                     : db_to_linear(48.0);  // representative fixed loss for other exponents
  f.intensity = intensity_scale * net.lambda_f();
  f.exclusion_radius = exclusion;
  return f;
}

}  // namespace

TEST_CASE("interference transform basics") {
  const auto field = default_field();
  CHECK(laplace_interference(0.0, field) == 1.0);
  auto empty = field;
  empty.intensity = 0.0;
  CHECK(laplace_interference(1e10, empty) == 1.0);
  auto narrow = field;
  narrow.alpha = 2.0;
  CHECK_THROWS_AS(laplace_interference(1.0, narrow), std::domain_error);
}

TEST_CASE("closed forms agree with the kernel-integral route") {
  // representative s values spanning weak to strong interference
  const double s_values[] = {1e12, 1e15, 1e17, 3e18};
  SUBCASE("alpha = 4 with an exclusion disk") {
    for (double s : s_values) {
      for (double d : {5.0, 30.0, 120.0}) {
        const auto field = default_field(1.0, d);
        const double closed = laplace_interference(s, field);
        const double quad = laplace_interference_by_quadrature(s, field);
        CHECK(closed == doctest::Approx(quad).epsilon(1e-8));
      }
    }
  }
  SUBCASE("no exclusion disk, several exponents") {
    for (double s : s_values) {
      for (double alpha : {3.0, 3.5, 4.0, 5.0}) {
        const auto field = default_field(1.0, 0.0, alpha);
        const double closed = laplace_interference(s, field);
        const double quad = laplace_interference_by_quadrature(s, field);
        CHECK(closed == doctest::Approx(quad).epsilon(1e-8));
      }
    }
  }
  SUBCASE("arctan form at zero exclusion equals the sine form at alpha 4") {
    for (double s : s_values) {
      const auto field = default_field();
      const double sine_form = laplace_interference(s, field);
      const double root = std::sqrt(s * field.power_density);
      const double z2 = std::sqrt(field.fixed_loss);
      const double arctan_form =
          std::exp(-M_PI * field.intensity * root / z2 * (M_PI / 2.0 - std::atan(0.0)));
      CHECK(sine_form == doctest::Approx(arctan_form).epsilon(1e-10));
    }
  }
}

TEST_CASE("interference transform matches field sampling") {
  const auto field = default_field();
  // s chosen so the transform sits well inside (0,1)
  const double s = 2e18;
  const double r_max = 2400.0;
  const double truncated = oracles::truncated_laplace_reference(
      s, field.power_density, field.alpha, field.fixed_loss, field.intensity, 0.0, r_max);
  const double full = laplace_interference(s, field);
  CHECK(std::abs(full - truncated) < 2e-3);  // far-field truncation is small
  const double mc = oracles::mc_laplace(s, field.power_density, field.alpha,
                                        field.fixed_loss, field.intensity, 0.0, r_max,
                                        1000000, 20250809);
  CHECK(mc == doctest::Approx(full).epsilon(5e-3));
}

TEST_CASE("owner SINR ccdf") {
  const auto& net = defaults();
  SUBCASE("certain events") {
    CHECK(sinr_ccdf_fms(0.0, 10.0, net, 1.0) == 1.0);
    CHECK_THROWS_AS(sinr_ccdf_fms(1.0, 25.0, net, 1.0), std::domain_error);
  }
  SUBCASE("no interference and no noise") {
    NetworkConfig cfg;
    cfg.fbs_mean = 1e-9;
    cfg.noise_density_dbm_hz = -500.0;
    const Network quiet(cfg);
    for (double g : {0.1, 1.0, 100.0}) {
      CHECK(sinr_ccdf_fms(g, 15.0, quiet, 1.0) == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
  SUBCASE("matches field sampling at 4 dB, 10 m") {
    const auto& pl = net.pathloss();
    oracles::CcdfOracle orc;
    orc.desired_power = net.femto_power_density() * pl.gain(LinkClass::kIndoor, 10.0);
    orc.noise = net.noise_density();
    orc.interferer_power = net.femto_power_density();
    orc.interferer_alpha = pl.exponent(LinkClass::kIndoorToIndoor);
    orc.interferer_fixed_loss = pl.fixed_loss(LinkClass::kIndoorToIndoor);
    orc.intensity = net.lambda_f();
    const double gamma = db_to_linear(4.0);
    const double analytic_value = sinr_ccdf_fms(gamma, 10.0, net, 1.0);
    const double mc = orc.ccdf(gamma, 1000000, 99251);
    CHECK(std::abs(analytic_value - mc) < 5e-3);
  }
  SUBCASE("non-increasing in threshold, intensity, and thinning") {
    double prev = 1.0;
    for (double db = -10.0; db <= 30.0; db += 2.0) {
      const double v = sinr_ccdf_fms(db_to_linear(db), 12.0, net, 1.0);
      CHECK(v <= prev + 1e-15);
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
      prev = v;
    }
    const double g = db_to_linear(10.0);
    CHECK(sinr_ccdf_fms(g, 12.0, net, 0.4) >= sinr_ccdf_fms(g, 12.0, net, 1.0));
    NetworkConfig dense;
    dense.fbs_mean = 120.0;
    CHECK(sinr_ccdf_fms(g, 12.0, Network(dense), 1.0) <= sinr_ccdf_fms(g, 12.0, net, 1.0));
  }
}

TEST_CASE("macro SINR ccdf") {
  const auto& net = defaults();
  CHECK(sinr_ccdf_mms(0.0, 400.0, net) == 1.0);
  CHECK(sinr_ccdf_mms(5.0, 0.0, net) == 1.0);
  SUBCASE("matches fading sampling at 8 dB, 400 m") {
    const double gamma = db_to_linear(8.0);
    const double scale = net.macro_power_density() *
                         net.pathloss().gain(LinkClass::kOutdoor, 400.0) /
                         net.noise_density();
    std::mt19937_64 rng(5150);
    long hits = 0;
    const int n = 1000000;
    for (int i = 0; i < n; ++i) {
      if (oracles::exp_draw(rng) * scale >= gamma) ++hits;
    }
    const double mc = static_cast<double>(hits) / n;
    CHECK(std::abs(sinr_ccdf_mms(gamma, 400.0, net) - mc) < 3e-3);
  }
}

TEST_CASE("served-user SINR ccdf") {
  const auto& net = defaults();
  CHECK(sinr_ccdf_oms(0.0, 30.0, net, 1.0) == 1.0);

  SUBCASE("wall-loss discontinuity at the home radius is physical") {
    const double g = db_to_linear(0.0);
    const double inside = sinr_ccdf_oms(g, net.home_radius() * (1.0 - 1e-9), net, 1.0);
    const double outside = sinr_ccdf_oms(g, net.home_radius() * (1.0 + 1e-9), net, 1.0);
    CHECK(std::abs(inside - outside) > 1e-3);
  }

  SUBCASE("outdoor branch matches field sampling at 0 dB, 30 m") {
    const auto& pl = net.pathloss();
    oracles::CcdfOracle orc;
    orc.desired_power =
        net.femto_power_density() * pl.gain(LinkClass::kIndoorToOutdoor, 30.0);
    orc.noise = net.noise_density();
    orc.interferer_power = net.femto_power_density();
    orc.interferer_alpha = pl.exponent(LinkClass::kIndoorToOutdoor);
    orc.interferer_fixed_loss = pl.fixed_loss(LinkClass::kIndoorToOutdoor);
    orc.intensity = net.lambda_f();
    orc.exclusion = 30.0;
    const double gamma = db_to_linear(0.0);
    const double mc = orc.ccdf(gamma, 1000000, 777101);
    CHECK(std::abs(sinr_ccdf_oms(gamma, 30.0, net, 1.0) - mc) < 5e-3);
  }

  SUBCASE("indoor branch matches field sampling at 0 dB, 12 m") {
    const auto& pl = net.pathloss();
    oracles::CcdfOracle orc;
    orc.desired_power = net.femto_power_density() * pl.gain(LinkClass::kIndoor, 12.0);
    orc.noise = net.noise_density();
    orc.interferer_power = net.femto_power_density();
    orc.interferer_alpha = pl.exponent(LinkClass::kIndoorToIndoor);
    orc.interferer_fixed_loss = pl.fixed_loss(LinkClass::kIndoorToIndoor);
    orc.intensity = net.lambda_f();
    orc.exclusion = 12.0;
    const double gamma = db_to_linear(0.0);
    const double mc = orc.ccdf(gamma, 1000000, 31337);
    CHECK(std::abs(sinr_ccdf_oms(gamma, 12.0, net, 1.0) - mc) < 5e-3);
  }

  SUBCASE("thinning helps") {
    const double g = db_to_linear(6.0);
    CHECK(sinr_ccdf_oms(g, 50.0, net, 0.3) >= sinr_ccdf_oms(g, 50.0, net, 1.0));
  }
}

TEST_CASE("mean spectral efficiencies") {
  const auto& net = defaults();

  SUBCASE("single-rate ladder reduces to its efficiency") {
    NetworkConfig cfg;
    cfg.noise_density_dbm_hz = -400.0;  // negligible noise
    cfg.fbs_mean = 1e-9;
    const Network single(cfg, RateTable({{1.7, 0.0}}));
    CHECK(mean_se_fms(single, 1.0) == doctest::Approx(1.7).epsilon(1e-6));
  }

  SUBCASE("bounded by the top rate") {
    const double top = net.rates().top_efficiency();
    const double b_f = mean_se_fms(net, 1.0);
    const double b_m = mean_se_mms(net);
    CHECK(b_f > 0.0);
    CHECK(b_f <= top);
    CHECK(b_m > 0.0);
    CHECK(b_m <= top);
  }

  SUBCASE("macro closed form agrees with direct quadrature") {
    CHECK(mean_se_mms(net) ==
          doctest::Approx(mean_se_mms_by_quadrature(net)).epsilon(1e-8));
    NetworkConfig other;
    other.macro_power_dbm = 30.0;
    other.macro_radius_m = 1500.0;
    const Network weak(other);
    CHECK(mean_se_mms(weak) ==
          doctest::Approx(mean_se_mms_by_quadrature(weak)).epsilon(1e-8));
  }

  SUBCASE("vanishing noise pushes the macro mean to the top rate") {
    NetworkConfig cfg;
    cfg.noise_density_dbm_hz = -400.0;
    const Network quiet(cfg);
    CHECK(mean_se_mms(quiet) == doctest::Approx(net.rates().top_efficiency()).epsilon(1e-9));
  }

  SUBCASE("served-user density is normalized") {
    for (double d_f : {20.0, 45.0, 80.0}) {
      NetworkConfig cfg;
      const Network flat(cfg, RateTable({{1.0, -1000.0}}));  // rate 1 everywhere
      const double x = area_from_radius(d_f, flat.lambda_f());
      CHECK(mean_se_oms(x, flat, 1.0) == doctest::Approx(1.0).epsilon(1e-9));
    }
  }

  SUBCASE("served-user mean is non-increasing in the service area") {
    const double x_lo = area_from_radius(net.home_radius(), net.lambda_f());
    const double x_hi = area_from_radius(90.0, net.lambda_f());
    double prev = 1e300;
    for (int i = 0; i <= 50; ++i) {
      const double x = x_lo + (x_hi - x_lo) * i / 50;
      const double b = mean_se_oms(x, net, 1.0);
      CHECK(b <= prev * (1.0 + 1e-9));
      prev = b;
    }
  }

  SUBCASE("domain checks") {
    CHECK_THROWS_AS(mean_se_oms(area_from_radius(5.0, net.lambda_f()), net, 1.0),
                    std::domain_error);
  }
}

TEST_CASE("service geometry") {
  const auto& net = defaults();
  SUBCASE("radius to area and back") {
    for (double d : {20.0, 35.0, 60.0, 90.0}) {
      const double x = area_from_radius(d, net.lambda_f());
      CHECK(radius_from_area(x, net.lambda_f()) == doctest::Approx(d).epsilon(1e-9));
    }
    CHECK(area_from_radius(20.0, 0.0) == doctest::Approx(M_PI * 400.0));
  }
  SUBCASE("small radius limit") {
    CHECK(area_from_radius(1e-6, net.lambda_f()) ==
          doctest::Approx(M_PI * 1e-12).epsilon(1e-6));
  }
  SUBCASE("defaults at 20 m") {
    const auto snap = service_geometry(20.0, net, 1.0);
    CHECK(snap.area == doctest::Approx(1244.9293762073593).epsilon(1e-10));
    CHECK(snap.p_mms == doctest::Approx(0.98142468774777712).epsilon(1e-10));
    CHECK(snap.area_min == doctest::Approx(snap.area));
    CHECK(snap.max_radius > 20.0);
    CHECK(snap.cell_select_rss > 0.0);
  }
  SUBCASE("rejects out-of-range radii") {
    CHECK_THROWS_AS(service_geometry(10.0, net, 1.0), std::domain_error);
    CHECK_THROWS_AS(service_geometry(5000.0, net, 1.0), std::domain_error);
  }
}

TEST_CASE("population share factors match truncated Poisson sums") {
  for (double t : {1e-6, 1e-4, 0.01, 0.1238354150148194, 0.5, 1.0, 3.0, 10.0, 50.0}) {
    CHECK(mean_inverse_count(t) ==
          doctest::Approx(oracles::poisson_mean_inverse(t)).epsilon(1e-9));
    CHECK(size_biased_share(t) ==
          doctest::Approx(oracles::poisson_size_biased_share(t)).epsilon(1e-9));
  }
  SUBCASE("small-argument limits") {
    CHECK(mean_inverse_count(0.0) == 1.0);
    CHECK(size_biased_share(0.0) == 0.5);
  }
  SUBCASE("defaults sharing factor at 20 m") {
    const auto& net = defaults();
    const double t = net.lambda_u() * area_from_radius(20.0, net.lambda_f());
    CHECK(t == doctest::Approx(0.12383541501481939).epsilon(1e-10));
    CHECK(mean_inverse_count(t) == doctest::Approx(0.94056095406989227).epsilon(1e-10));
  }
}

TEST_CASE("throughputs") {
  const auto& net = defaults();
  const double x40 = area_from_radius(40.0, net.lambda_f());

  SUBCASE("dedication and split degeneracies") {
    CHECK(throughput_fms_with(0.5, 1.0, 4.0, 5.0, net, 1.0) ==
          doctest::Approx(0.5 * net.bandwidth() * 4.0));
    CHECK(throughput_oms(0.5, x40, 1.0, net, 1.0) == 0.0);
    CHECK(throughput_mms(1.0, x40, net) == 0.0);
  }
  SUBCASE("empty femtocell limit") {
    NetworkConfig cfg;
    cfg.user_mean = 1e-9;
    const Network lone(cfg);
    const double se = 3.0;
    CHECK(throughput_fms_with(0.4, 0.0, se, lone.lambda_u() * x40, lone, 1.0) ==
          doctest::Approx(0.4 * lone.bandwidth() * se).epsilon(1e-9));
  }
  SUBCASE("macro empty limit") {
    CHECK(throughput_mms_with(0.25, 2.0, 1e-9, net) ==
          doctest::Approx(0.75 * net.bandwidth() * 2.0).epsilon(1e-8));
  }
  SUBCASE("degenerate coverage rejected") {
    CHECK_THROWS_AS(throughput_mms_with(0.5, 2.0, -0.1, net), std::domain_error);
  }
  SUBCASE("linear in split, monotone in dedication") {
    const double se_f = 4.0, se_m = 3.0, se_o = 2.0;
    const auto counts = homogeneous_user_counts(x40, net);
    CHECK(throughput_fms_with(0.5, 0.2, se_f, counts.oms_mean, net, 1.0) ==
          doctest::Approx(
              2.0 * throughput_fms_with(0.25, 0.2, se_f, counts.oms_mean, net, 1.0)));
    CHECK(throughput_mms_with(0.5, se_m, counts.mms_mean, net) ==
          doctest::Approx(0.5 / 0.75 *
                          throughput_mms_with(0.25, se_m, counts.mms_mean, net)));
    double prev = -1.0;
    for (double beta = 0.0; beta <= 1.0; beta += 0.1) {
      const double tf = throughput_fms_with(0.5, beta, se_f, counts.oms_mean, net, 1.0);
      const double to = throughput_oms_with(0.5, beta, se_o, counts.oms_mean, net, 1.0);
      CHECK(tf >= prev);
      prev = tf;
      CHECK(to <= throughput_oms_with(0.5, 0.0, se_o, counts.oms_mean, net, 1.0));
    }
  }
  SUBCASE("thinning scales the femto side") {
    const auto counts = homogeneous_user_counts(x40, net);
    CHECK(throughput_fms_with(0.5, 0.0, 4.0, counts.oms_mean, net, 0.5) ==
          doctest::Approx(0.5 * throughput_fms_with(0.5, 0.0, 4.0, counts.oms_mean, net,
                                                    1.0)));
  }
}

TEST_CASE("mean served-user outage and the maximum radius") {
  const auto& net = defaults();
  SUBCASE("bounded and vanishing without noise or interference") {
    NetworkConfig cfg;
    cfg.noise_density_dbm_hz = -400.0;
    cfg.fbs_mean = 1e-12;
    const Network quiet(cfg);
    CHECK(mean_oms_outage(40.0, quiet, 1.0) == doctest::Approx(0.0).epsilon(1e-9));
    const double o = mean_oms_outage(60.0, net, 1.0);
    CHECK(o >= 0.0);
    CHECK(o <= 1.0);
  }
  SUBCASE("the maximum radius meets the cap exactly") {
    const auto dmax = max_service_radius(net, 1.0);
    CHECK_FALSE(dmax.saturated);
    CHECK(dmax.radius > net.home_radius());
    CHECK(mean_oms_outage(dmax.radius, net, 1.0) ==
          doctest::Approx(net.outage_cap()).epsilon(1e-4));
  }
  SUBCASE("outage is monotone on the search range") {
    const auto dmax = max_service_radius(net, 1.0);
    double prev = -1.0;
    for (int i = 0; i <= 40; ++i) {
      const double d =
          net.home_radius() + (1.2 * dmax.radius - net.home_radius()) * i / 40;
      const double o = mean_oms_outage(d, net, 1.0);
      CHECK(o >= prev - 1e-9);
      prev = o;
    }
  }
  SUBCASE("cap already violated at the home radius pins the maximum there") {
    NetworkConfig cfg;
    const Network base(cfg);
    const double at_home = mean_oms_outage(cfg.home_radius_m, base, 1.0);
    REQUIRE(at_home > 0.0);
    cfg.outage_cap = at_home * 0.5;
    const Network tight(cfg);
    const auto dmax = max_service_radius(tight, 1.0);
    CHECK(dmax.radius == cfg.home_radius_m);
    CHECK_FALSE(dmax.saturated);
  }
  SUBCASE("unreachable cap saturates at the search limit") {
    NetworkConfig cfg;
    cfg.fbs_mean = 1e-6;
    cfg.noise_density_dbm_hz = -280.0;
    const Network quiet(cfg);
    const auto dmax = max_service_radius(quiet, 1.0);
    CHECK(dmax.saturated);
    CHECK(dmax.radius == doctest::Approx(5.0 * cfg.macro_radius_m));
  }
  SUBCASE("thinning extends the maximum radius") {
    const auto full = max_service_radius(net, 1.0);
    const auto thinned = max_service_radius(net, 0.5);
    CHECK(thinned.radius >= full.radius);
  }
  SUBCASE("denser femtocells shrink the maximum radius") {
    double prev = 1e300;
    for (double n_f : {10.0, 30.0, 50.0}) {
      NetworkConfig cfg;
      cfg.fbs_mean = n_f;
      const auto dmax = max_service_radius(Network(cfg), 1.0);
      CHECK(dmax.radius < prev);
      prev = dmax.radius;
    }
  }
}

TEST_CASE("heterogeneous user counts") {
  const auto& net = defaults();
  const double x40 = area_from_radius(40.0, net.lambda_f());
  const double x_home = area_from_radius(net.home_radius(), net.lambda_f());

  SUBCASE("factor one reduces to homogeneous") {
    const auto hom = homogeneous_user_counts(x40, net);
    const auto het = heterogeneous_user_counts(x40, 1.0, net.lambda_u(), net);
    CHECK(het.mms_mean == doctest::Approx(hom.mms_mean).epsilon(1e-12));
    CHECK(het.oms_mean == doctest::Approx(hom.oms_mean).epsilon(1e-12));
  }
  SUBCASE("boundary area") {
    const auto het = heterogeneous_user_counts(x_home, 5.0, net.lambda_u(), net);
    CHECK(het.oms_mean == doctest::Approx(5.0 * net.lambda_u() * x_home).epsilon(1e-12));
  }
  SUBCASE("domain") {
    CHECK_THROWS_AS(heterogeneous_user_counts(0.5 * x_home, 5.0, net.lambda_u(), net),
                    std::domain_error);
    CHECK_THROWS_AS(heterogeneous_user_counts(x40, 0.5, net.lambda_u(), net),
                    std::domain_error);
  }
}

TEST_CASE("analytic report at an operating point") {
  const auto& net = defaults();
  ControlParams p{0.5, 40.0, 0.0, 1.0};
  const auto rpt = analyze(p, net);
  CHECK(rpt.tput_fms > 0.0);
  CHECK(rpt.tput_mms > 0.0);
  CHECK(rpt.tput_oms > 0.0);
  CHECK(rpt.slack_fms == doctest::Approx(rpt.tput_fms - 10.0 * rpt.tput_mms));
  CHECK(rpt.slack_oms == doctest::Approx(rpt.tput_oms - rpt.tput_mms));
  CHECK(rpt.outage_oms >= 0.0);
  CHECK(rpt.outage_oms <= 1.0);

  SUBCASE("full split starves the macrocell") {
    p.rho = 1.0;
    CHECK(analyze(p, net).tput_mms == 0.0);
  }
  SUBCASE("radius below the home disk is infeasible") {
    p.service_radius_m = 10.0;
    CHECK_THROWS_AS(analyze(p, net), InfeasibleError);
  }
}
