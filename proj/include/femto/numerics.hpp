#pragma once

#include <functional>
#include <stdexcept>

namespace femto::num {

struct ToleranceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct QuadratureSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-9;
  int max_depth = 40;
};

// lower incomplete gamma: integral of t^(a-1) e^-t over [0, b].
// Series expansion for b < a + 1, continued fraction otherwise.
double lower_incomplete_gamma(double a, double b);

// Adaptive Simpson quadrature over [lo, hi]. Throws ToleranceError when the
// subdivision depth is exhausted before the tolerances are met.
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 const QuadratureSpec& spec = QuadratureSpec{});

struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
  double f_lo = 0.0;
  double f_hi = 0.0;
};

Bracket make_bracket(const std::function<double(double)>& f, double lo, double hi);

// Bisection on a sign-changing bracket; the root is located within x_tol.
double bisect(const std::function<double(double)>& f, Bracket bracket, double x_tol);

struct MinResult {
  double x = 0.0;
  double value = 0.0;
};

// Bounded scalar minimization: a uniform grid scan brackets the global
// minimum, golden-section refines it. The grid guards non-convex objectives;
// x_tol is the absolute tolerance on the minimizer location.
MinResult minimize_scalar(const std::function<double(double)>& f, double lo, double hi,
                          double x_tol, int grid_points = 512);

}  // namespace femto::num
