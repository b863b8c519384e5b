#include "hybridtime/gate_model.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "hybridtime/numerics.hpp"
#include <json.hpp>

namespace hybridtime {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ValidationError(std::string("GateParams: ") + name +
                          " must be finite and positive");
  }
  return v;
}

// pow with an exact short-circuit for zero exponents; the case-g/h
// trajectories hit base 0^0 at the delta = 0 degeneracy.
double pow_term(double base, double expo) {
  if (expo == 0.0) return 1.0;
  if (base <= 0.0) {
    if (base > -1e-9) return 0.0;
    throw NumericError("trajectory: negative power base (t before start)");
  }
  return std::pow(base, expo);
}

// Shared pieces of the case-g/h delay and trajectory formulas. is_neg
// selects the negative-delta (barred) variant, which exchanges alpha1 and
// alpha2 in the quadratic constants.
struct RisingConsts {
  double a;        // (alpha1+alpha2)/(2R)
  double d;        // a + |delta|
  double sqrt_chi;
  double d_minus;  // d - sqrt(chi), computed stably
  double big_a;    // exponent constant A (resp. A-bar)
  double tau;      // 2*R*C3
};

RisingConsts rising_consts(const GateParams& p, const DerivedCaps& caps,
                           double delta_abs, bool is_neg) {
  RisingConsts k{};
  const double alpha_x = is_neg ? p.alpha1 : p.alpha2;
  k.a = (p.alpha1 + p.alpha2) / (2.0 * p.r);
  k.tau = 2.0 * p.r * caps.c3;
  k.d = k.a + delta_abs;
  const double chi = k.d * k.d - 2.0 * alpha_x * delta_abs / p.r;
  if (chi < 0.0) {
    char msg[128];
    std::snprintf(msg, sizeof msg,
                  "rising trajectory: chi=%g < 0 at delta=%g", chi, delta_abs);
    throw NumericError(msg);
  }
  k.sqrt_chi = std::sqrt(chi);
  k.d_minus = (delta_abs == 0.0)
                  ? 0.0
                  : 2.0 * alpha_x * delta_abs / (p.r * (k.d + k.sqrt_chi));
  k.big_a = (k.sqrt_chi == 0.0)
                ? 0.0
                : (alpha_x * delta_abs - k.a * p.r * k.d_minus) /
                      (2.0 * p.r * k.sqrt_chi);
  return k;
}

double falling_tau(CaseId c, const GateParams& p, const DerivedCaps& caps) {
  switch (c) {
    case CaseId::a:
    case CaseId::f:
      return caps.c1 * p.r_na;
    case CaseId::b:
    case CaseId::e:
      return caps.c1_prime * p.r_nb;
    case CaseId::c:
    case CaseId::d:
      return caps.c2 * p.r_na * p.r_nb / (p.r_na + p.r_nb);
    default:
      throw NumericError("falling_tau: rising case");
  }
}

bool is_falling_case(CaseId c) {
  return c != CaseId::g && c != CaseId::h;
}

// Piecewise rising delay WITHOUT d_min, for v_int <= VDD/2.
double rising_delay_core(const GateParams& p, double v_int, double delta_abs,
                         bool is_h) {
  const double alpha_lead = is_h ? p.alpha2 : p.alpha1;
  const Extremal ext = is_h ? Extremal::minus_inf : Extremal::plus_inf;
  const double d_ext = delta_extremal(p, v_int, ext);
  if (delta_abs == kInf) return d_ext;
  const double d_zero = delta_extremal(p, v_int, Extremal::zero);
  const double breakpoint =
      (p.alpha1 + p.alpha2) * (d_zero - d_ext) / alpha_lead;
  if (delta_abs < breakpoint) {
    return d_zero - alpha_lead / (p.alpha1 + p.alpha2) * delta_abs;
  }
  return d_ext;
}

}  // namespace

void GateParams::validate() const {
  require_positive(vdd, "vdd");
  require_positive(c_load, "c_load");
  require_positive(r5, "r5");
  require_positive(r_na, "r_na");
  require_positive(r_nb, "r_nb");
  require_positive(r, "r");
  require_positive(alpha1, "alpha1");
  require_positive(alpha2, "alpha2");
  if (!(d_min >= 0.0) || !std::isfinite(d_min)) {
    throw ValidationError("GateParams: d_min must be finite and >= 0");
  }
}

DerivedCaps derived_caps(const GateParams& p) {
  DerivedCaps caps;
  caps.c1 = p.c_load * (p.r5 + p.r_na) / p.r_na;
  caps.c1_prime = p.c_load * (p.r5 + p.r_nb) / p.r_nb;
  caps.c2 = p.c_load * (p.r5 * (p.r_na + p.r_nb) + p.r_na * p.r_nb) /
            (p.r_na * p.r_nb);
  caps.c3 = p.c_load * (p.r5 + 2.0 * p.r) / (2.0 * p.r);
  return caps;
}

char case_letter(CaseId c) { return static_cast<char>('a' + static_cast<int>(c)); }

double delta_extremal(const GateParams& p, double v_int, Extremal which) {
  if (!(v_int >= 0.0) || v_int > 0.5 * p.vdd) {
    throw NumericError("delta_extremal: v_int outside [0, VDD/2]");
  }
  double alpha;
  switch (which) {
    case Extremal::zero:
      alpha = p.alpha1 + p.alpha2;
      break;
    case Extremal::plus_inf:
      alpha = p.alpha2;
      break;
    default:
      alpha = p.alpha1;
      break;
  }
  const double caps_c3 = derived_caps(p).c3;
  const double base = 2.0 * (p.vdd - v_int) / p.vdd;  // in [1, 2]
  const double k = 4.0 * p.r * p.r * caps_c3 / alpha;
  const double u = 1.0 + k * std::log(base);
  const double w = lambert_w_minus1_neg_exp(u);
  return -alpha / (2.0 * p.r) * (1.0 + w);
}

double nor_delay(CaseId c, const GateParams& p, double v_int, double delta) {
  const DerivedCaps caps = derived_caps(p);
  if (is_falling_case(c)) {
    if (!(v_int >= 0.0) || v_int > p.vdd) {
      throw NumericError("nor_delay: v_int outside [0, VDD] (falling case)");
    }
    if (v_int == 0.0) return -kInf;  // settled low, no crossing
    return falling_tau(c, p, caps) * std::log(2.0 * v_int / p.vdd) + p.d_min;
  }
  if (!(v_int >= 0.0) || !(v_int < p.vdd)) {
    throw NumericError("nor_delay: v_int outside [0, VDD) (rising case)");
  }
  if (v_int > 0.5 * p.vdd) {
    // artificial negative trajectory: crossing lies in the past
    return -2.0 * p.r * caps.c3 *
               std::log(p.vdd / (2.0 * (p.vdd - v_int))) +
           p.d_min;
  }
  const bool is_h = (c == CaseId::h);
  if (c == CaseId::g && delta < 0.0 && delta != -kInf) {
    throw NumericError("nor_delay: case g requires delta >= 0");
  }
  return rising_delay_core(p, v_int, std::abs(delta), is_h) + p.d_min;
}

double nor_shifted_trajectory(CaseId c, const GateParams& p, double t,
                              double delta, double v_int) {
  const DerivedCaps caps = derived_caps(p);
  if (is_falling_case(c)) {
    return 0.5 * p.vdd * std::exp(-t / falling_tau(c, p, caps));
  }
  const bool is_h = (c == CaseId::h);
  const double delta_abs = std::abs(delta);
  const double tau = 2.0 * p.r * caps.c3;
  const double alpha_x = is_h ? p.alpha1 : p.alpha2;

  if (v_int > 0.5 * p.vdd) {
    // unshifted form starting from v_int; t is time since trajectory start
    double fac = std::exp(-t / tau);
    if (delta_abs == kInf) {
      fac *= pow_term(1.0 + 2.0 * t * p.r / alpha_x,
                      alpha_x / (2.0 * p.r * tau));
    } else {
      const RisingConsts k = rising_consts(p, caps, delta_abs, is_h);
      fac *= pow_term(1.0 + 2.0 * t / (k.d + k.sqrt_chi),
                      (k.a - k.big_a) / tau) *
             pow_term(1.0 + 2.0 * t / k.d_minus, k.big_a / tau);
    }
    return p.vdd + (v_int - p.vdd) * fac;
  }

  // shifted form: crossing at t = 0, with the pre-crossing span
  // t' = delay - d_min folded into the denominators
  const double t_pre = rising_delay_core(p, v_int, delta_abs, is_h);
  double fac = 0.5 * std::exp(-t / tau);
  if (delta_abs == kInf) {
    fac *= pow_term(1.0 + 2.0 * t / (alpha_x / p.r + 2.0 * t_pre),
                    alpha_x / (2.0 * p.r * tau));
  } else {
    const RisingConsts k = rising_consts(p, caps, delta_abs, is_h);
    fac *= pow_term(1.0 + 2.0 * t / (k.d + k.sqrt_chi + 2.0 * t_pre),
                    (k.a - k.big_a) / tau) *
           pow_term(1.0 + 2.0 * t / (k.d_minus + 2.0 * t_pre),
                    k.big_a / tau);
  }
  return p.vdd * (1.0 - fac);
}

double nor_raw_trajectory(RawMode mode, const GateParams& p, double t,
                          double delta, double v_start) {
  if (t < 0.0) {
    throw NumericError("nor_raw_trajectory: negative time");
  }
  const DerivedCaps caps = derived_caps(p);
  switch (mode) {
    case RawMode::rise_first_a:
    case RawMode::fall_first_b:
      return v_start * std::exp(-t / (caps.c1 * p.r_na));
    case RawMode::rise_first_b:
    case RawMode::fall_first_a:
      return v_start * std::exp(-t / (caps.c1_prime * p.r_nb));
    case RawMode::rise_second_a:
    case RawMode::rise_second_b:
      return v_start *
             std::exp(-(1.0 / (caps.c2 * p.r_na) + 1.0 / (caps.c2 * p.r_nb)) *
                      t);
    case RawMode::fall_second_b:
    case RawMode::fall_second_a: {
      const bool is_neg = (mode == RawMode::fall_second_a);
      if (!(delta >= 0.0)) {
        throw NumericError("nor_raw_trajectory: delta must be >= 0");
      }
      const double tau = 2.0 * p.r * caps.c3;
      const RisingConsts k = rising_consts(p, caps, delta, is_neg);
      const double fac =
          std::exp(-t / tau) *
          pow_term(1.0 + 2.0 * t / (k.d + k.sqrt_chi), (k.a - k.big_a) / tau) *
          pow_term(1.0 + 2.0 * t / k.d_minus, k.big_a / tau);
      return p.vdd + (v_start - p.vdd) * fac;
    }
  }
  throw NumericError("nor_raw_trajectory: bad mode");
}

double mis_delay_falling(const GateParams& p, double delta) {
  const DerivedCaps caps = derived_caps(p);
  const double ln2 = std::log(2.0);
  if (delta >= 0.0) {
    const double cap = ln2 * caps.c1 * p.r_na;
    if (delta >= cap) return cap + p.d_min;
    return (ln2 * caps.c2 * p.r_na * p.r_nb -
            caps.c2 / caps.c1 * delta * p.r_nb) /
               (p.r_na + p.r_nb) +
           delta + p.d_min;
  }
  const double mag = std::abs(delta);
  const double cap = ln2 * caps.c1_prime * p.r_nb;
  if (mag >= cap) return cap + p.d_min;
  return (ln2 * caps.c2 * p.r_na * p.r_nb -
          caps.c2 / caps.c1_prime * mag * p.r_na) /
             (p.r_na + p.r_nb) +
         mag + p.d_min;
}

double mis_delay_rising(const GateParams& p, double delta) {
  const bool neg = (delta < 0.0);
  return rising_delay_core(p, 0.0, std::abs(delta), neg) + p.d_min;
}

CaseId nand_to_nor_case(CaseId c) {
  // negate both inputs: a<->e, b<->f, c<->g, d<->h
  return static_cast<CaseId>((static_cast<int>(c) + 4) % 8);
}

double nand_delay(CaseId c, const GateParams& p, double v_int, double delta) {
  return nor_delay(nand_to_nor_case(c), p, p.vdd - v_int, delta);
}

double nand_shifted_trajectory(CaseId c, const GateParams& p, double t,
                               double delta, double v_int) {
  return p.vdd -
         nor_shifted_trajectory(nand_to_nor_case(c), p, t, delta,
                                p.vdd - v_int);
}

GateParams gate_params_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("parameter file: ") + e.what());
  }
  GateParams p;
  try {
    p.vdd = j.at("vdd_v").get<double>();
    p.c_load = j.at("c_f").get<double>();
    p.r5 = j.at("r5_ohm").get<double>();
    p.r_na = j.at("rna_ohm").get<double>();
    p.r_nb = j.at("rnb_ohm").get<double>();
    p.r = j.at("r_ohm").get<double>();
    p.alpha1 = j.at("alpha1_ohm_s").get<double>();
    p.alpha2 = j.at("alpha2_ohm_s").get<double>();
    p.d_min = j.at("dmin_s").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("parameter file: ") + e.what());
  }
  p.validate();
  return p;
}

GateParams load_gate_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open parameter file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return gate_params_from_json_text(ss.str());
}

std::string gate_params_to_json_text(const GateParams& p) {
  nlohmann::json j;
  j["vdd_v"] = p.vdd;
  j["c_f"] = p.c_load;
  j["r5_ohm"] = p.r5;
  j["rna_ohm"] = p.r_na;
  j["rnb_ohm"] = p.r_nb;
  j["r_ohm"] = p.r;
  j["alpha1_ohm_s"] = p.alpha1;
  j["alpha2_ohm_s"] = p.alpha2;
  j["dmin_s"] = p.d_min;
  return j.dump(2) + "\n";
}

void save_gate_params(const GateParams& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write parameter file: " + path);
  out << gate_params_to_json_text(p);
}

}  // namespace hybridtime
