#include <algorithm>
#include <cmath>
#include <limits>

#include "femto/numerics.hpp"

namespace femto::num {

namespace {

constexpr double kGammaEps = 1e-14;
constexpr int kGammaMaxIter = 10000;

// Series for the regularized-in-spirit expansion around b = 0; converges
// quickly when b < a + 1.
double gamma_lower_series(double a, double b) {
  double ap = a;
  double term = 1.0 / a;
  double sum = term;
  for (int i = 0; i < kGammaMaxIter; ++i) {
    ap += 1.0;
    term *= b / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kGammaEps) {
      return sum * std::exp(-b + a * std::log(b));
    }
  }
  throw ToleranceError("incomplete gamma series did not converge");
}

// Modified Lentz continued fraction for the upper tail; preferred when
// b >= a + 1.
double gamma_upper_cf(double a, double b) {
  const double tiny = std::numeric_limits<double>::min() / kGammaEps;
  double b0 = b + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b0;
  double h = d;
  for (int i = 1; i <= kGammaMaxIter; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b0 += 2.0;
    d = an * d + b0;
    if (std::abs(d) < tiny) d = tiny;
    c = b0 + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kGammaEps) {
      return std::exp(-b + a * std::log(b)) * h;
    }
  }
  throw ToleranceError("incomplete gamma continued fraction did not converge");
}

}  // namespace

double lower_incomplete_gamma(double a, double b) {
  if (!(a > 0.0)) throw std::domain_error("lower_incomplete_gamma: a must be positive");
  if (!(b >= 0.0)) throw std::domain_error("lower_incomplete_gamma: b must be non-negative");
  if (b == 0.0) return 0.0;
  if (b < a + 1.0) return gamma_lower_series(a, b);
  return std::tgamma(a) - gamma_upper_cf(a, b);
}

namespace {

struct SimpsonState {
  const std::function<double(double)>* f;
  double rel_scale;  // |estimate of the whole integral|
  double abs_tol;
  double rel_tol;
  bool depth_exhausted = false;
};

double simpson_panel(double fa, double fm, double fb, double h) {
  return h / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(SimpsonState& st, double a, double b, double fa, double fm, double fb,
             double whole, double eps, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = (*st.f)(lm);
  const double frm = (*st.f)(rm);
  const double left = simpson_panel(fa, flm, fm, m - a);
  const double right = simpson_panel(fm, frm, fb, b - m);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * eps) {
    return left + right + delta / 15.0;  // Richardson correction
  }
  if (depth <= 0) {
    st.depth_exhausted = true;
    return left + right + delta / 15.0;
  }
  return adapt(st, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
         adapt(st, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double lo, double hi,
                 const QuadratureSpec& spec) {
  if (!(lo <= hi)) throw std::domain_error("integrate: lo must not exceed hi");
  if (lo == hi) return 0.0;
  // Magnitude scale for the relative tolerance from a coarse composite pass;
  // a single panel can badly underestimate peaked integrands.
  const int scan = 16;
  double scale = 0.0;
  const double h = (hi - lo) / scan;
  double f_left = f(lo);
  for (int i = 0; i < scan; ++i) {
    const double f_mid = f(lo + (i + 0.5) * h);
    const double f_right = f(lo + (i + 1) * h);
    scale += std::abs(simpson_panel(f_left, f_mid, f_right, h));
    f_left = f_right;
  }
  const double fa = f(lo);
  const double fb = f(hi);
  const double fm = f(0.5 * (lo + hi));
  const double whole = simpson_panel(fa, fm, fb, hi - lo);
  SimpsonState st{&f, scale, spec.abs_tol, spec.rel_tol, false};
  const double eps = std::max(spec.abs_tol, spec.rel_tol * st.rel_scale);
  const double result = adapt(st, lo, hi, fa, fm, fb, whole, eps, spec.max_depth);
  if (st.depth_exhausted) {
    throw ToleranceError("integrate: tolerance not met within max_depth");
  }
  return result;
}

Bracket make_bracket(const std::function<double(double)>& f, double lo, double hi) {
  return Bracket{lo, hi, f(lo), f(hi)};
}

double bisect(const std::function<double(double)>& f, Bracket br, double x_tol) {
  if (!(br.lo < br.hi)) throw std::domain_error("bisect: empty bracket");
  if (br.f_lo == 0.0) return br.lo;
  if (br.f_hi == 0.0) return br.hi;
  if ((br.f_lo > 0.0) == (br.f_hi > 0.0)) {
    throw std::domain_error("bisect: bracket endpoints must differ in sign");
  }
  while (br.hi - br.lo > x_tol) {
    const double mid = 0.5 * (br.lo + br.hi);
    if (mid <= br.lo || mid >= br.hi) break;  // tolerance below spacing
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (br.f_lo > 0.0)) {
      br.lo = mid;
      br.f_lo = fm;
    } else {
      br.hi = mid;
      br.f_hi = fm;
    }
  }
  return 0.5 * (br.lo + br.hi);
}

MinResult minimize_scalar(const std::function<double(double)>& f, double lo, double hi,
                          double x_tol, int grid_points) {
  if (!(lo <= hi)) throw std::domain_error("minimize_scalar: lo must not exceed hi");
  if (lo == hi) return {lo, f(lo)};
  grid_points = std::max(grid_points, 2);

  // Coarse scan brackets the global minimum; the objective is only
  // guaranteed unimodal in special regimes.
  const double h = (hi - lo) / grid_points;
  double best_x = lo, best_f = f(lo);
  int best_i = 0;
  for (int i = 1; i <= grid_points; ++i) {
    const double x = (i == grid_points) ? hi : lo + i * h;
    const double v = f(x);
    if (v < best_f) {
      best_f = v;
      best_x = x;
      best_i = i;
    }
  }

  double a = std::max(lo, lo + (best_i - 1) * h);
  double b = std::min(hi, lo + (best_i + 1) * h);

  static const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > x_tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  const double mid = 0.5 * (a + b);
  const double fmid = f(mid);
  if (fmid < best_f) return {mid, fmid};
  if (fc < best_f && fc <= fd) return {c, fc};
  if (fd < best_f) return {d, fd};
  return {best_x, best_f};
}

}  // namespace femto::num
