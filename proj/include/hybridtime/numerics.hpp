#pragma once

#include <functional>

#include "hybridtime/errors.hpp"

namespace hybridtime {

/// Lower real branch W_{-1}(x) of the Lambert W function, x in [-1/e, 0).
/// Returns w <= -1 with relative residual |w*e^w - x| <= 1e-13*|x|.
/// Throws NumericError outside the branch domain.
double lambert_w_minus1(double x);

/// W_{-1}(-exp(-u)) for u >= 1, computed without forming exp(-u).
/// Needed when the Lambert argument underflows (large exponents u).
double lambert_w_minus1_neg_exp(double u);

struct BracketedRootProblem {
  std::function<double(double)> function;
  double lo = 0.0;
  double hi = 0.0;
  double abs_tolerance = 1e-12;
};

/// Brent-style bracketing root solve. The bracket [lo, hi] must show a sign
/// change. Deterministic; throws NumericError on a missing sign change or
/// non-convergence after 200 iterations.
double solve_bracketed(const BracketedRootProblem& problem);

}  // namespace hybridtime
