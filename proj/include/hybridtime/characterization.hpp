#pragma once

#include <string>

#include "hybridtime/gate_model.hpp"

namespace hybridtime {

// Measured MIS delay triple for one output edge direction: input separation
// 0, +inf, -inf. All SI seconds.
struct DelayTriple {
  double d0 = 0.0;
  double d_plus_inf = 0.0;
  double d_minus_inf = 0.0;
};

// The six characteristic MIS delays plus the pure delay and the (arbitrary)
// load capacitance. `fall` holds the falling-OUTPUT triple (both inputs
// rising), `rise` the rising-output triple.
struct MeasuredDelays {
  DelayTriple fall;
  DelayTriple rise;
  double d_min = 0.0;
  double c_load = 0.0;
  double vdd = 1.0;  // does not influence the characterization

  void validate() const;
};

struct FallingCharacterization {
  double r5 = 0.0;
  double r_na = 0.0;
  double r_nb = 0.0;
  double epsilon = 0.0;
};

/// Closed-form R5, RnA, RnB (and the auxiliary epsilon) from the
/// falling-output triple. Throws ValidationError on a non-physical set.
FallingCharacterization characterize_falling(const MeasuredDelays& m);

/// The characterization helper A(t, R, R5, C) [Ohm*s]. Zero at
/// t = C*(R5+2R)*ln 2 and defined for t at or above that; throws
/// NumericError below it.
double a_func(double t, double r, double r5, double c_load);

/// Numerically solves the rising-triple equation
/// A(d0') - A(dinf') - A(dminf') = 0 for R (primed: d_min subtracted).
/// Scans [1 Ohm, 1 MOhm] geometrically for a sign change, then Brent.
double solve_r(const MeasuredDelays& m, double r5);

/// Full parametrization: falling closed forms, R root solve, alpha1/alpha2,
/// then a self-verification pass that re-predicts the six inputs through the
/// MIS delay formulas within `verify_tolerance` (relative).
GateParams characterize(const MeasuredDelays& m,
                        double verify_tolerance = 1e-3);

// Measured-delay file I/O (JSON):
// {fall:{d0_s,dinf_s,dminf_s}, rise:{d0_s,dinf_s,dminf_s}, dmin_s, c_f}
// plus optional vdd_v.
MeasuredDelays load_measured_delays(const std::string& path);
MeasuredDelays measured_delays_from_json_text(const std::string& text);

}  // namespace hybridtime
