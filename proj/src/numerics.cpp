#include "hybridtime/numerics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace hybridtime {

namespace {

// Solves g(w) = w + log(-w) + u = 0 on (-inf, -1] by safeguarded Newton.
// g is strictly increasing there (g' = 1 + 1/w in (0,1)), so the root is
// unique. The solution is W_{-1}(-e^{-u}).
double solve_wm1(double u) {
  if (u < 1.0) {
    throw NumericError("lambert_w_minus1: argument below branch point");
  }
  if (u - 1.0 < 1e-12) {
    return -1.0;  // branch point; series ill-conditioned here
  }

  double w;
  if (u < 2.0) {
    // branch-point series in p = sqrt(2*(1 - e^{1-u}))
    const double p = std::sqrt(2.0 * (-std::expm1(1.0 - u)));
    w = -1.0 - p - p * p / 3.0 - 11.0 * p * p * p / 72.0;
  } else {
    const double lu = std::log(u);
    w = -u - lu;  // asymptotic start
  }
  if (w >= -1.0) w = std::nextafter(-1.0, -2.0);

  double lo = -u - std::log(u) - 2.0;  // g(lo) < 0 for all u > 1
  double hi = -1.0;                    // g(hi) = u - 1 > 0
  for (int it = 0; it < 100; ++it) {
    const double g = w + std::log(-w) + u;
    if (g > 0.0) {
      hi = w;
    } else {
      lo = w;
    }
    const double step = -g * w / (w + 1.0);  // Newton: g' = (w+1)/w
    double next = w + step;
    if (!(next > lo && next < hi)) {
      next = 0.5 * (lo + hi);
    }
    if (std::abs(next - w) <= 1e-16 * std::abs(w)) {
      return next;
    }
    w = next;
  }
  return w;
}

}  // namespace

double lambert_w_minus1_neg_exp(double u) { return solve_wm1(u); }

double lambert_w_minus1(double x) {
  constexpr double kBranch = -0.36787944117144233;  // -1/e
  if (!(x < 0.0)) {
    throw NumericError("lambert_w_minus1: argument must be negative");
  }
  if (x < kBranch) {
    if (x > kBranch * (1.0 + 4e-16)) {
      return -1.0;  // rounding right at the branch point
    }
    throw NumericError("lambert_w_minus1: argument below -1/e");
  }
  return solve_wm1(-std::log(-x));
}

double solve_bracketed(const BracketedRootProblem& problem) {
  double a = problem.lo;
  double b = problem.hi;
  const double tol = problem.abs_tolerance;
  if (!(a < b) || !(tol > 0.0)) {
    throw NumericError("solve_bracketed: malformed bracket");
  }
  double fa = problem.function(a);
  double fb = problem.function(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0)) {
    char msg[160];
    std::snprintf(msg, sizeof msg,
                  "solve_bracketed: no sign change on [%g, %g] (f=%g, %g)", a,
                  b, fa, fb);
    throw NumericError(msg);
  }

  // Brent: bisection / secant / inverse quadratic interpolation.
  double c = a, fc = fa;
  double d = b - a, e = b - a;
  for (int iter = 0; iter < 200; ++iter) {
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol1 = 2.0 * std::numeric_limits<double>::epsilon() *
                            std::abs(b) +
                        0.5 * tol;
    const double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0) {
      return b;
    }
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      const double s = fb / fa;
      double p, q;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        const double qq = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q),
                             std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += (std::abs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
    fb = problem.function(b);
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
  }
  char msg[160];
  std::snprintf(msg, sizeof msg,
                "solve_bracketed: no convergence after 200 iterations "
                "(x=%g, residual=%g)",
                b, fb);
  throw NumericError(msg);
}

}  // namespace hybridtime
