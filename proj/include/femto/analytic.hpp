#pragma once

#include "femto/network.hpp"
#include "femto/numerics.hpp"

namespace femto::analytic {

// Field of co-channel interferers outside an exclusion disk: a planar Poisson
// process of the given intensity, each point transmitting power_density with
// the stated pathloss law towards the receiver at the origin.
struct InterferenceField {
  double power_density = 0.0;    // W/Hz per interferer
  double alpha = 4.0;            // pathloss exponent, must exceed 2
  double fixed_loss = 1.0;       // Z^alpha, linear
  double intensity = 0.0;        // 1/m^2, thinning already applied
  double exclusion_radius = 0.0; // m
};

// E[exp(-s * I)] for the aggregate interference I of the field. Closed forms
// for exclusion_radius == 0 and for alpha == 4; quadrature otherwise.
double laplace_interference(double s, const InterferenceField& field);

// Same transform, always through the kernel-integral route. Second algebraic
// path kept for cross-checks against the closed forms.
double laplace_interference_by_quadrature(double s, const InterferenceField& field);

// SINR CCDFs, Pr[SINR >= gamma] with gamma linear, conditioned on the
// serving-link distance. theta thins the interferer intensity.
double sinr_ccdf_fms(double gamma, double r_f, const Network& net, double theta);
double sinr_ccdf_mms(double gamma, double r_m, const Network& net);
double sinr_ccdf_oms(double gamma, double r_o, const Network& net, double theta);

// Mean spectral efficiencies (bit/s/Hz) over the class position densities.
double mean_se_fms(const Network& net, double theta);
double mean_se_mms(const Network& net);                // incomplete-gamma closed form
double mean_se_mms_by_quadrature(const Network& net);  // independent route, for checks
double mean_se_oms(double area, const Network& net, double theta);

// Service-area geometry: x = (1 - e^(-pi d_f^2 lambda_f)) / lambda_f.
double area_from_radius(double d_f, double lambda_f);
double radius_from_area(double area, double lambda_f);

struct GeometrySnapshot {
  double area = 0.0;          // mean femtocell service area x
  double service_radius = 0.0;
  double area_min = 0.0;      // x(D_h)
  double area_max = 0.0;      // x(D_max)
  double max_radius = 0.0;    // D_max at the given theta
  bool max_radius_saturated = false;
  double p_mms = 1.0;         // probability a macro user stays on the macrocell
  double cell_select_rss = 0.0;  // RSS association threshold, W/Hz
};

GeometrySnapshot service_geometry(double d_f, const Network& net, double theta);

// (1 - e^-t)/t and (t + e^-t - 1)/t^2 with small-argument series guards.
double mean_inverse_count(double t);     // E[1/(N+1)], N ~ Poisson(t)
double size_biased_share(double t);      // E[N/(N+1)]/t, N ~ Poisson(t)

// Mean user counts per cell. Homogeneous: oms_mean = lambda_u * x,
// mms_mean = A_m lambda_u (1 - lambda_f x).
struct UserCounts {
  double mms_mean = 0.0;  // mean macrocell population
  double oms_mean = 0.0;  // mean foreign-user population of one femtocell
};

UserCounts homogeneous_user_counts(double area, const Network& net);

// Indoor-weighted user placement: indoor density is k_in times the outdoor
// density lambda_u_out. Replaces the homogeneous counts in the throughputs.
UserCounts heterogeneous_user_counts(double area, double k_in, double lambda_u_out,
                                     const Network& net);

// Mean throughputs (bit/s). The *_with variants take precomputed spectral
// efficiencies and user counts for use in optimizer loops; the plain forms
// derive them from the network.
double throughput_fms_with(double rho, double beta, double se_fms, double oms_mean,
                           const Network& net, double theta);
double throughput_mms_with(double rho, double se_mms, double mms_mean, const Network& net);
double throughput_oms_with(double rho, double beta, double se_oms, double oms_mean,
                           const Network& net, double theta);

double throughput_fms(double rho, double area, double beta, const Network& net, double theta);
double throughput_mms(double rho, double area, const Network& net);
double throughput_oms(double rho, double area, double beta, const Network& net, double theta);

// Mean outage rate of an oMS at target service radius d_f.
double mean_oms_outage(double d_f, const Network& net, double theta);

struct MaxRadiusResult {
  double radius = 0.0;
  bool saturated = false;  // doubling hit the hard cap without crossing the outage limit
};

// Largest service radius whose mean oMS outage stays within the configured
// cap; bisection over a doubling bracket, 1e-3 m tolerance.
MaxRadiusResult max_service_radius(const Network& net, double theta);

// Full analytic report at one operating point.
ThroughputReport analyze(const ControlParams& params, const Network& net,
                         double k_in = 1.0);

}  // namespace femto::analytic
