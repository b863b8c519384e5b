#pragma once

#include <iosfwd>
#include <string>

#include "hybridtime/errors.hpp"

namespace hybridtime {

// Full physical parameter set of one characterized gate. All values SI.
struct GateParams {
  double vdd = 0.0;     // supply voltage [V]
  double c_load = 0.0;  // load capacitance [F]
  double r5 = 0.0;      // interconnect resistance [Ohm]
  double r_na = 0.0;    // nMOS on-resistance, input A [Ohm]
  double r_nb = 0.0;    // nMOS on-resistance, input B [Ohm]
  double r = 0.0;       // pMOS on-resistance, 2R = RpA + RpB [Ohm]
  double alpha1 = 0.0;  // pMOS switch-on slope, input A [Ohm*s]
  double alpha2 = 0.0;  // pMOS switch-on slope, input B [Ohm*s]
  double d_min = 0.0;   // pure delay [s]

  // Throws ValidationError unless all fields are positive (d_min >= 0).
  void validate() const;
};

// Derived capacitances of the interconnect-augmented model.
struct DerivedCaps {
  double c1 = 0.0;
  double c1_prime = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
};

DerivedCaps derived_caps(const GateParams& p);

// Input-transition scenarios of a 2-input NOR gate:
//   a=(up,0-)  b=(0-,up)  c=(1-,up)  d=(up,1-)   -> falling output
//   e=(down,1-) f=(1-,down) g=(0-,down) h=(down,0-)  g,h -> rising output
enum class CaseId { a, b, c, d, e, f, g, h };

char case_letter(CaseId c);

// Extremal rising-output delay selector: input separation 0, +inf, -inf.
enum class Extremal { zero, plus_inf, minus_inf };

/// Rising-output extremal delay at internal voltage v_int, WITHOUT the pure
/// delay term. Requires 0 <= v_int <= VDD/2; zero at v_int = VDD/2.
double delta_extremal(const GateParams& p, double v_int, Extremal which);

/// Per-case delay, measured from the input transition to the digital output
/// transition, including d_min. May be negative (virtual crossing in the
/// past) and is -inf for falling cases started from v_int = 0 (output
/// already settled low; no crossing exists). `delta` is the input separation
/// time; it is ignored for cases a-f, must be >= 0 (or +inf) for case g, and
/// is taken by absolute value for case h. +-inf are accepted.
double nor_delay(CaseId c, const GateParams& p, double v_int,
                 double delta = 0.0);

/// Shifted trajectory: voltage as a function of time since the (real or
/// virtual) threshold crossing. Falling cases and the rising cases with
/// v_int <= VDD/2 return exactly VDD/2 at t = 0 and accept negative t.
/// For rising cases with v_int > VDD/2 the unshifted form starting from
/// v_int is evaluated at t, which must then be the time since the
/// trajectory start (the engine applies the artificial-negative-trajectory
/// argument shift).
double nor_shifted_trajectory(CaseId c, const GateParams& p, double t,
                              double delta, double v_int);

// Unshifted mode trajectories, with the leading initial value replaced by
// v_start. Primarily a cross-check oracle for the shifted forms.
enum class RawMode {
  rise_first_a,    // T^up_-   : (0,0)->(1,0)
  rise_first_b,    // T^up_+   : (0,0)->(0,1)
  rise_second_a,   // T^upup_- : (0,1)->(1,1)
  rise_second_b,   // T^upup_+ : (1,0)->(1,1)
  fall_first_a,    // T^dn_-   : (1,1)->(0,1)
  fall_first_b,    // T^dn_+   : (1,1)->(1,0)
  fall_second_a,   // T^dndn_- : (1,0)->(0,0)
  fall_second_b    // T^dndn_+ : (0,1)->(0,0)
};

double nor_raw_trajectory(RawMode mode, const GateParams& p, double t,
                          double delta, double v_start);

/// MIS delay for falling output transitions (both inputs rising), as a
/// function of the signed input separation time (+-inf accepted).
/// Includes d_min.
double mis_delay_falling(const GateParams& p, double delta);

/// MIS delay for rising output transitions (both inputs falling).
double mis_delay_rising(const GateParams& p, double delta);

/// NAND case -> equivalent NOR case (inputs negated).
CaseId nand_to_nor_case(CaseId c);

/// NAND delay: the NOR delay of the mapped case at VDD - v_int.
double nand_delay(CaseId c, const GateParams& p, double v_int,
                  double delta = 0.0);

/// NAND shifted trajectory: VDD minus the mapped NOR trajectory at
/// VDD - v_int.
double nand_shifted_trajectory(CaseId c, const GateParams& p, double t,
                               double delta, double v_int);

// Parameter file I/O (JSON, SI floats; see load_gate_params for keys).
GateParams load_gate_params(const std::string& path);
GateParams gate_params_from_json_text(const std::string& text);
std::string gate_params_to_json_text(const GateParams& p);
void save_gate_params(const GateParams& p, const std::string& path);

}  // namespace hybridtime
