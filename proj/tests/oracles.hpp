#pragma once

// Shared fixtures and slow-but-simple reference implementations used to
// cross-check the production code paths.

#include <cmath>
#include <random>

#include "hybridtime/characterization.hpp"
#include "hybridtime/gate_model.hpp"

namespace hybridtime::testing {

// Published parameter set of the reference 15nm NOR gate.
inline GateParams table6_params() {
  GateParams p;
  p.vdd = 0.8;
  p.c_load = 0.9431e-15;
  p.r5 = 828.494754381781;
  p.r_na = 4408.82407303950;
  p.r_nb = 3884.42001507398;
  p.r = 1705.76915128527;
  p.alpha1 = 966.421722237134e-12;
  p.alpha2 = 633.741820902669e-12;
  p.d_min = 299e-15;
  return p;
}

// The measured MIS delay set the reference parameters were fitted from.
inline MeasuredDelays reference_measured() {
  MeasuredDelays m;
  m.fall = {2.190e-12, 3.7226e-12, 3.3798e-12};
  m.rise = {4.107e-12, 3.616e-12, 3.8054e-12};
  m.d_min = 299e-15;
  m.c_load = 0.9431e-15;
  m.vdd = 0.8;
  return m;
}

// Independent W_{-1} oracle: plain bisection of w*e^w = x on [-700, -1].
inline double lambert_w_minus1_bisect(double x) {
  auto f = [x](double w) { return w * std::exp(w) - x; };
  double lo = -700.0, hi = -1.0;
  // f(hi) = -1/e - x <= 0; f(lo) ~ -x > 0
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::abs(want);
}

// Random parameter set within +-50% of the reference values.
inline GateParams random_params_near_table6(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> f(0.5, 1.5);
  GateParams t = table6_params();
  GateParams p = t;
  p.c_load = t.c_load * f(rng);
  p.r5 = t.r5 * f(rng);
  p.r_na = t.r_na * f(rng);
  p.r_nb = t.r_nb * f(rng);
  p.r = t.r * f(rng);
  p.alpha1 = t.alpha1 * f(rng);
  p.alpha2 = t.alpha2 * f(rng);
  p.d_min = t.d_min * f(rng);
  return p;
}

}  // namespace hybridtime::testing
