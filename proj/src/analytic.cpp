#include <algorithm>
#include <cmath>

#include "femto/analytic.hpp"

namespace femto::analytic {

namespace {

constexpr double kRadiusCap = 5.0;  // max service radius search cap, in macro radii

// Integral of 1/(1 + u^p) over [u0, inf), p > 1. Alternating tail series in
// u^-p beyond max(u0, 10); adaptive Simpson closes the gap below that.
double interference_kernel_integral(double u0, double p) {
  const double series_from = std::max(u0, 10.0);
  double tail = 0.0;
  double upow = std::pow(series_from, 1.0 - p);
  const double step = std::pow(series_from, -p);
  double sign = 1.0;
  for (int k = 1; k <= 400; ++k) {
    const double term = sign * upow / (k * p - 1.0);
    tail += term;
    if (std::abs(term) < 1e-15 * std::abs(tail)) break;
    upow *= step;
    sign = -sign;
  }
  if (series_from <= u0) return tail;
  const double gap = num::integrate(
      [p](double u) { return 1.0 / (1.0 + std::pow(u, p)); }, u0, series_from);
  return gap + tail;
}

}  // namespace

double laplace_interference(double s, const InterferenceField& field) {
  if (!(s >= 0.0)) throw std::domain_error("laplace_interference: s must be non-negative");
  if (s == 0.0 || field.intensity <= 0.0) return 1.0;
  if (!(field.alpha > 2.0)) {
    throw std::domain_error("laplace_interference: alpha must exceed 2 for convergence");
  }
  const double sp = s * field.power_density;
  const double z2 = std::pow(field.fixed_loss, 2.0 / field.alpha);
  const double d = field.exclusion_radius;

  double exponent;
  if (d == 0.0) {
    exponent = 2.0 * M_PI * M_PI * field.intensity * std::pow(sp, 2.0 / field.alpha) /
               (z2 * field.alpha * std::sin(2.0 * M_PI / field.alpha));
  } else if (field.alpha == 4.0) {
    const double root = std::sqrt(sp);
    exponent = M_PI * field.intensity * root / z2 *
               (M_PI / 2.0 - std::atan(z2 * d * d / root));
  } else {
    const double sp_pow = std::pow(sp, 2.0 / field.alpha);
    const double u0 = z2 * d * d / sp_pow;
    exponent = M_PI * field.intensity * sp_pow / z2 *
               interference_kernel_integral(u0, field.alpha / 2.0);
  }
  return std::exp(-exponent);
}

double laplace_interference_by_quadrature(double s, const InterferenceField& field) {
  if (!(s >= 0.0)) throw std::domain_error("laplace_interference: s must be non-negative");
  if (s == 0.0 || field.intensity <= 0.0) return 1.0;
  if (!(field.alpha > 2.0)) {
    throw std::domain_error("laplace_interference: alpha must exceed 2 for convergence");
  }
  const double sp = s * field.power_density;
  const double z2 = std::pow(field.fixed_loss, 2.0 / field.alpha);
  const double sp_pow = std::pow(sp, 2.0 / field.alpha);
  const double d = field.exclusion_radius;
  const double u0 = z2 * d * d / sp_pow;
  const double exponent = M_PI * field.intensity * sp_pow / z2 *
                          interference_kernel_integral(u0, field.alpha / 2.0);
  return std::exp(-exponent);
}

double sinr_ccdf_fms(double gamma, double r_f, const Network& net, double theta) {
  if (!(r_f >= 0.0 && r_f <= net.home_radius())) {
    throw std::domain_error("sinr_ccdf_fms: owner distance outside the home disk");
  }
  if (gamma <= 0.0) return 1.0;
  const auto& pl = net.pathloss();
  const double s = gamma * pl.fixed_loss(LinkClass::kIndoor) *
                   std::pow(r_f, pl.exponent(LinkClass::kIndoor)) /
                   net.femto_power_density();
  const InterferenceField field{net.femto_power_density(),
                                pl.exponent(LinkClass::kIndoorToIndoor),
                                pl.fixed_loss(LinkClass::kIndoorToIndoor),
                                theta * net.lambda_f(), 0.0};
  return std::exp(-s * net.noise_density()) * laplace_interference(s, field);
}

double sinr_ccdf_mms(double gamma, double r_m, const Network& net) {
  if (gamma <= 0.0 || r_m <= 0.0) return 1.0;
  const auto& pl = net.pathloss();
  const double s = gamma * pl.fixed_loss(LinkClass::kOutdoor) *
                   std::pow(r_m, pl.exponent(LinkClass::kOutdoor)) /
                   net.macro_power_density();
  return std::exp(-s * net.noise_density());
}

namespace {

// Outdoor users see one wall on both serving and interfering links; users
// inside the serving home see the in-home serving link but two walls
// towards every interferer. The branch is passed explicitly so radial
// integrals stay continuous up to the segment boundary.
double oms_ccdf_branch(double gamma, double r_o, const Network& net, double theta,
                       bool indoor) {
  if (gamma <= 0.0) return 1.0;
  const auto& pl = net.pathloss();
  const LinkClass desired = indoor ? LinkClass::kIndoor : LinkClass::kIndoorToOutdoor;
  const LinkClass interfering =
      indoor ? LinkClass::kIndoorToIndoor : LinkClass::kIndoorToOutdoor;
  const double s = gamma * pl.fixed_loss(desired) * std::pow(r_o, pl.exponent(desired)) /
                   net.femto_power_density();
  const InterferenceField field{net.femto_power_density(), pl.exponent(interfering),
                                pl.fixed_loss(interfering), theta * net.lambda_f(), r_o};
  return std::exp(-s * net.noise_density()) * laplace_interference(s, field);
}

}  // namespace

double sinr_ccdf_oms(double gamma, double r_o, const Network& net, double theta) {
  if (!(r_o >= 0.0)) throw std::domain_error("sinr_ccdf_oms: negative distance");
  return oms_ccdf_branch(gamma, r_o, net, theta, r_o < net.home_radius());
}

namespace {

// sum_l (b_l - b_{l-1}) * E[ccdf(G_l)] over a position density.
template <typename Ccdf>
double ladder_average(const RateTable& rates, const Ccdf& expected_ccdf) {
  double total = 0.0;
  for (std::size_t l = 1; l <= rates.size(); ++l) {
    total += rates.efficiency_gain(l) * expected_ccdf(rates.threshold_linear(l));
  }
  return total;
}

}  // namespace

double mean_se_fms(const Network& net, double theta) {
  const double dh = net.home_radius();
  return ladder_average(net.rates(), [&](double g) {
    return num::integrate(
        [&](double r) { return sinr_ccdf_fms(g, r, net, theta) * 2.0 * r / (dh * dh); },
        0.0, dh);
  });
}

double mean_se_mms(const Network& net) {
  const auto& pl = net.pathloss();
  const double alpha = pl.exponent(LinkClass::kOutdoor);
  const double dm = net.macro_radius();
  return ladder_average(net.rates(), [&](double g) {
    const double beta = net.noise_density() * g * pl.fixed_loss(LinkClass::kOutdoor) /
                        net.macro_power_density();
    if (beta <= 0.0) return 1.0;
    const double upper = beta * std::pow(dm, alpha);
    const double radial = std::pow(beta, -2.0 / alpha) / alpha *
                          num::lower_incomplete_gamma(2.0 / alpha, upper);
    return 2.0 / (dm * dm) * radial;
  });
}

double mean_se_mms_by_quadrature(const Network& net) {
  const double dm = net.macro_radius();
  return ladder_average(net.rates(), [&](double g) {
    return num::integrate(
        [&](double r) { return sinr_ccdf_mms(g, r, net) * 2.0 * r / (dm * dm); }, 0.0,
        dm);
  });
}

double area_from_radius(double d_f, double lambda_f) {
  if (!(d_f >= 0.0)) throw std::domain_error("area_from_radius: negative radius");
  const double t = M_PI * d_f * d_f;
  if (lambda_f <= 0.0) return t;
  return -std::expm1(-t * lambda_f) / lambda_f;
}

double radius_from_area(double area, double lambda_f) {
  if (!(area >= 0.0)) throw std::domain_error("radius_from_area: negative area");
  if (lambda_f <= 0.0) return std::sqrt(area / M_PI);
  const double coverage = lambda_f * area;
  if (!(coverage < 1.0)) {
    throw std::domain_error("radius_from_area: area exceeds the per-cell limit");
  }
  return std::sqrt(-std::log1p(-coverage) / (M_PI * lambda_f));
}

namespace {

// Distance density of a femtocell-served user: nearest-cell distance
// truncated to the service radius.
double oms_distance_density(double r, double d_f, double lambda_f) {
  if (r < 0.0 || r > d_f) return 0.0;
  if (lambda_f <= 0.0) return 2.0 * r / (d_f * d_f);
  const double covered = -std::expm1(-M_PI * lambda_f * d_f * d_f);
  return 2.0 * M_PI * lambda_f * r * std::exp(-M_PI * lambda_f * r * r) / covered;
}

// Splits the radial integral at the home radius, where the wall-loss change
// makes the integrand discontinuous; each segment evaluates one branch only.
template <typename F>
double integrate_over_service_disk(const F& f_of_r_and_branch, double d_f,
                                   double home_radius) {
  const double split = std::min(home_radius, d_f);
  double total =
      num::integrate([&](double r) { return f_of_r_and_branch(r, true); }, 0.0, split);
  if (d_f > split) {
    total +=
        num::integrate([&](double r) { return f_of_r_and_branch(r, false); }, split, d_f);
  }
  return total;
}

}  // namespace

double mean_se_oms(double area, const Network& net, double theta) {
  const double lambda_f = net.lambda_f();
  // Near-total coverage makes the area-to-radius inversion ill-conditioned;
  // truncating the distance density at the 1 - 1e-12 quantile changes the
  // mean by less than that.
  if (lambda_f > 0.0 && lambda_f * area >= 1.0 - 1e-12) {
    area = (1.0 - 1e-12) / lambda_f;
  }
  const double d_f = radius_from_area(area, lambda_f);
  if (d_f < net.home_radius() * (1.0 - 1e-12)) {
    throw std::domain_error("mean_se_oms: service area below the home-disk minimum");
  }
  return ladder_average(net.rates(), [&](double g) {
    return integrate_over_service_disk(
        [&](double r, bool indoor) {
          return oms_ccdf_branch(g, r, net, theta, indoor) *
                 oms_distance_density(r, d_f, lambda_f);
        },
        d_f, net.home_radius());
  });
}

double mean_inverse_count(double t) {
  if (!(t >= 0.0)) throw std::domain_error("mean_inverse_count: negative mean");
  if (t < 1e-4) return 1.0 - t / 2.0 + t * t / 6.0 - t * t * t / 24.0;
  return -std::expm1(-t) / t;
}

double size_biased_share(double t) {
  if (!(t >= 0.0)) throw std::domain_error("size_biased_share: negative mean");
  if (t < 1e-4) return 0.5 - t / 6.0 + t * t / 24.0 - t * t * t / 120.0;
  return (t + std::expm1(-t)) / (t * t);
}

UserCounts homogeneous_user_counts(double area, const Network& net) {
  const double p_mms = 1.0 - net.lambda_f() * area;
  return {net.macro_area() * net.lambda_u() * p_mms, net.lambda_u() * area};
}

UserCounts heterogeneous_user_counts(double area, double k_in, double lambda_u_out,
                                     const Network& net) {
  if (!(k_in >= 1.0)) throw std::domain_error("heterogeneous_user_counts: k_in below 1");
  const double home_area = area_from_radius(net.home_radius(), net.lambda_f());
  if (area < home_area * (1.0 - 1e-12)) {
    throw std::domain_error("heterogeneous_user_counts: area below the home-disk minimum");
  }
  UserCounts counts;
  counts.mms_mean = (net.macro_area() - net.lambda_f() * net.macro_area() * area) * lambda_u_out;
  counts.oms_mean = k_in * lambda_u_out * home_area + lambda_u_out * (area - home_area);
  return counts;
}

double throughput_fms_with(double rho, double beta, double se_fms, double oms_mean,
                           const Network& net, double theta) {
  const double shared = (1.0 - beta) * mean_inverse_count(oms_mean);
  return theta * rho * net.bandwidth() * se_fms * (beta + shared);
}

double throughput_mms_with(double rho, double se_mms, double mms_mean, const Network& net) {
  if (mms_mean < 0.0) {
    throw std::domain_error("throughput_mms: negative macrocell population mean");
  }
  return (1.0 - rho) * net.bandwidth() * se_mms * mean_inverse_count(mms_mean);
}

double throughput_oms_with(double rho, double beta, double se_oms, double oms_mean,
                           const Network& net, double theta) {
  return theta * (1.0 - beta) * rho * net.bandwidth() * se_oms *
         size_biased_share(oms_mean);
}

double throughput_fms(double rho, double area, double beta, const Network& net,
                      double theta) {
  const auto counts = homogeneous_user_counts(area, net);
  return throughput_fms_with(rho, beta, mean_se_fms(net, theta), counts.oms_mean, net,
                             theta);
}

double throughput_mms(double rho, double area, const Network& net) {
  const auto counts = homogeneous_user_counts(area, net);
  return throughput_mms_with(rho, mean_se_mms(net), counts.mms_mean, net);
}

double throughput_oms(double rho, double area, double beta, const Network& net,
                      double theta) {
  const auto counts = homogeneous_user_counts(area, net);
  return throughput_oms_with(rho, beta, mean_se_oms(area, net, theta), counts.oms_mean,
                             net, theta);
}

double mean_oms_outage(double d_f, const Network& net, double theta) {
  if (!(d_f > 0.0)) throw std::domain_error("mean_oms_outage: radius must be positive");
  const double lambda_f = net.lambda_f();
  const double gamma1 = net.rates().threshold_linear(1);
  return integrate_over_service_disk(
      [&](double r, bool indoor) {
        return (1.0 - oms_ccdf_branch(gamma1, r, net, theta, indoor)) *
               oms_distance_density(r, d_f, lambda_f);
      },
      d_f, net.home_radius());
}

MaxRadiusResult max_service_radius(const Network& net, double theta) {
  const double cap = net.outage_cap();
  const double d_h = net.home_radius();
  auto excess = [&](double d) { return mean_oms_outage(d, net, theta) - cap; };

  const double at_home = excess(d_h);
  if (at_home >= 0.0) return {d_h, false};  // coverage cannot expand at all

  const double hard_cap = kRadiusCap * net.macro_radius();
  double lo = d_h, f_lo = at_home;
  double hi = d_h;
  while (true) {
    hi = std::min(2.0 * hi, hard_cap);
    const double f_hi = excess(hi);
    if (f_hi >= 0.0) {
      const double root = num::bisect(excess, num::Bracket{lo, hi, f_lo, f_hi}, 1e-3);
      return {root, false};
    }
    if (hi >= hard_cap) return {hard_cap, true};
    lo = hi;
    f_lo = f_hi;
  }
}

GeometrySnapshot service_geometry(double d_f, const Network& net, double theta) {
  if (!(d_f >= net.home_radius())) {
    throw std::domain_error("service_geometry: radius below the home radius");
  }
  const auto dmax = max_service_radius(net, theta);
  if (d_f > dmax.radius * (1.0 + 1e-9)) {
    throw std::domain_error("service_geometry: radius exceeds the outage-limited maximum");
  }
  GeometrySnapshot snap;
  snap.service_radius = d_f;
  snap.area = area_from_radius(d_f, net.lambda_f());
  snap.area_min = area_from_radius(net.home_radius(), net.lambda_f());
  snap.max_radius = dmax.radius;
  snap.max_radius_saturated = dmax.saturated;
  snap.area_max = area_from_radius(dmax.radius, net.lambda_f());
  snap.p_mms = std::exp(-M_PI * net.lambda_f() * d_f * d_f);
  snap.cell_select_rss =
      net.femto_power_density() * net.pathloss().gain(LinkClass::kIndoorToOutdoor, d_f);
  return snap;
}

ThroughputReport analyze(const ControlParams& params, const Network& net, double k_in) {
  if (!(params.service_radius_m >= net.home_radius())) {
    throw InfeasibleError("analyze: service radius below the home radius");
  }
  if (!(params.rho >= 0.0 && params.rho <= 1.0)) {
    throw InfeasibleError("analyze: rho outside [0,1]");
  }
  if (!(params.beta >= 0.0 && params.beta <= 1.0)) {
    throw InfeasibleError("analyze: beta outside [0,1]");
  }
  if (!(params.theta > 0.0 && params.theta <= 1.0)) {
    throw InfeasibleError("analyze: theta outside (0,1]");
  }
  const double area = area_from_radius(params.service_radius_m, net.lambda_f());
  const auto counts = k_in > 1.0
                          ? heterogeneous_user_counts(area, k_in, net.lambda_u(), net)
                          : homogeneous_user_counts(area, net);

  ThroughputReport rpt;
  rpt.source = ReportSource::kAnalytic;
  rpt.se_fms = mean_se_fms(net, params.theta);
  rpt.se_mms = mean_se_mms(net);
  rpt.se_oms = mean_se_oms(area, net, params.theta);
  rpt.tput_fms = throughput_fms_with(params.rho, params.beta, rpt.se_fms, counts.oms_mean,
                                     net, params.theta);
  rpt.tput_mms = throughput_mms_with(params.rho, rpt.se_mms, counts.mms_mean, net);
  rpt.tput_oms = throughput_oms_with(params.rho, params.beta, rpt.se_oms, counts.oms_mean,
                                     net, params.theta);
  rpt.outage_oms = mean_oms_outage(params.service_radius_m, net, params.theta);
  rpt.slack_fms = rpt.tput_fms - net.benefit_ratio() * rpt.tput_mms;
  rpt.slack_oms = rpt.tput_oms - net.oms_ratio() * rpt.tput_mms;
  return rpt;
}

}  // namespace femto::analytic
