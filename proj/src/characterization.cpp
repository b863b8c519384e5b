#include "hybridtime/characterization.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hybridtime/numerics.hpp"
#include <json.hpp>

namespace hybridtime {

namespace {

constexpr double kInfOhm = 1e6;  // upper end of the R bracket scan
constexpr int kScanSteps = 60;

double rel_err(double got, double want) {
  return std::abs(got - want) / std::abs(want);
}

}  // namespace

void MeasuredDelays::validate() const {
  if (!(d_min >= 0.0)) throw ValidationError("measured delays: d_min < 0");
  if (!(c_load > 0.0)) throw ValidationError("measured delays: c_f <= 0");
  if (!(vdd > 0.0)) throw ValidationError("measured delays: vdd <= 0");
  for (const DelayTriple* t : {&fall, &rise}) {
    for (double d : {t->d0, t->d_plus_inf, t->d_minus_inf}) {
      if (!(d > d_min)) {
        throw ValidationError("measured delays: every delay must exceed d_min");
      }
    }
  }
  if (!(fall.d_plus_inf > fall.d0) || !(fall.d_minus_inf > fall.d0)) {
    throw ValidationError(
        "measured delays: falling-output triple must have its minimum at "
        "delta = 0");
  }
}

FallingCharacterization characterize_falling(const MeasuredDelays& m) {
  m.validate();
  const double ln2c = std::log(2.0) * m.c_load;
  FallingCharacterization out;
  out.epsilon = std::sqrt((m.fall.d_plus_inf - m.fall.d0) *
                          (m.fall.d_minus_inf - m.fall.d0));
  out.r5 = (m.fall.d0 - m.d_min - out.epsilon) / ln2c;
  out.r_na = (m.fall.d_plus_inf - m.fall.d0 + out.epsilon) / ln2c;
  out.r_nb = (m.fall.d_minus_inf - m.fall.d0 + out.epsilon) / ln2c;
  if (!(out.r5 > 0.0) || !(out.r_na > 0.0) || !(out.r_nb > 0.0)) {
    char msg[160];
    std::snprintf(msg, sizeof msg,
                  "non-physical measurement set: R5=%g RnA=%g RnB=%g",
                  out.r5, out.r_na, out.r_nb);
    throw ValidationError(msg);
  }
  return out;
}

double a_func(double t, double r, double r5, double c_load) {
  const double ck = c_load * (r5 + 2.0 * r) * std::log(2.0);
  if (!(t > 0.0)) throw NumericError("a_func: t must be positive");
  if (t == ck) return 0.0;
  const double rho = ck / t;
  const double z = rho - 1.0;
  if (z >= 0.0) {
    throw NumericError("a_func: t below C*(R5+2R)*log(2), Lambert argument "
                       "outside the branch domain");
  }
  // W_{-1}(z e^z) with z in (-1, 0): pass u = -(z + log(-z))
  const double w = lambert_w_minus1_neg_exp(-z - std::log(-z));
  return -2.0 * r * (t - ck) / (w + 1.0 - rho);
}

namespace {

double r_equation(const MeasuredDelays& m, double r5, double r) {
  const double t0 = m.rise.d0 - m.d_min;
  const double ti = m.rise.d_plus_inf - m.d_min;
  const double tm = m.rise.d_minus_inf - m.d_min;
  return a_func(t0, r, r5, m.c_load) - a_func(ti, r, r5, m.c_load) -
         a_func(tm, r, r5, m.c_load);
}

}  // namespace

double solve_r(const MeasuredDelays& m, double r5) {
  const double t_min = std::min({m.rise.d0, m.rise.d_plus_inf,
                                 m.rise.d_minus_inf}) -
                       m.d_min;
  // a_func needs C*(R5+2R)*ln2 < t for all three arguments
  const double r_cap = 0.5 * (t_min / (m.c_load * std::log(2.0)) - r5);
  if (!(r_cap > 1.0)) {
    throw NumericError("solve_r: rising delays too small for any positive R");
  }
  const double lo0 = 1.0;
  const double hi0 = std::min(kInfOhm, r_cap * (1.0 - 1e-9));

  double prev_r = lo0;
  double prev_f = r_equation(m, r5, prev_r);
  double lo = 0.0, hi = 0.0;
  bool found = false;
  const double ratio = std::pow(hi0 / lo0, 1.0 / kScanSteps);
  for (int i = 1; i <= kScanSteps; ++i) {
    const double rr = lo0 * std::pow(ratio, i);
    const double f = r_equation(m, r5, rr);
    if ((prev_f <= 0.0) != (f <= 0.0)) {
      lo = prev_r;
      hi = rr;
      found = true;
      break;
    }
    prev_r = rr;
    prev_f = f;
  }
  if (!found) {
    char msg[200];
    std::snprintf(msg, sizeof msg,
                  "solve_r: no root in [%g, %g] Ohm (f(lo)=%g, f(hi)=%g)",
                  lo0, hi0, r_equation(m, r5, lo0), r_equation(m, r5, hi0));
    throw NumericError(msg);
  }

  BracketedRootProblem prob;
  prob.function = [&](double rr) { return r_equation(m, r5, rr); };
  prob.lo = lo;
  prob.hi = hi;
  prob.abs_tolerance = 1e-9;
  const double r = solve_bracketed(prob);

  const double largest =
      std::max({std::abs(a_func(m.rise.d0 - m.d_min, r, r5, m.c_load)),
                std::abs(a_func(m.rise.d_plus_inf - m.d_min, r, r5, m.c_load)),
                std::abs(a_func(m.rise.d_minus_inf - m.d_min, r, r5,
                                m.c_load))});
  if (std::abs(r_equation(m, r5, r)) > 1e-6 * largest) {
    throw NumericError("solve_r: residual above 1e-6 of the largest term");
  }
  return r;
}

GateParams characterize(const MeasuredDelays& m, double verify_tolerance) {
  const FallingCharacterization fc = characterize_falling(m);
  GateParams p;
  p.vdd = m.vdd;
  p.c_load = m.c_load;
  p.d_min = m.d_min;
  p.r5 = fc.r5;
  p.r_na = fc.r_na;
  p.r_nb = fc.r_nb;
  p.r = solve_r(m, fc.r5);
  p.alpha1 = a_func(m.rise.d_minus_inf - m.d_min, p.r, fc.r5, m.c_load);
  p.alpha2 = a_func(m.rise.d_plus_inf - m.d_min, p.r, fc.r5, m.c_load);
  p.validate();

  const double inf = std::numeric_limits<double>::infinity();
  const struct {
    const char* name;
    double got;
    double want;
  } checks[] = {
      {"fall d(0)", mis_delay_falling(p, 0.0), m.fall.d0},
      {"fall d(+inf)", mis_delay_falling(p, inf), m.fall.d_plus_inf},
      {"fall d(-inf)", mis_delay_falling(p, -inf), m.fall.d_minus_inf},
      {"rise d(0)", mis_delay_rising(p, 0.0), m.rise.d0},
      {"rise d(+inf)", mis_delay_rising(p, inf), m.rise.d_plus_inf},
      {"rise d(-inf)", mis_delay_rising(p, -inf), m.rise.d_minus_inf},
  };
  for (const auto& c : checks) {
    if (rel_err(c.got, c.want) > verify_tolerance) {
      char msg[200];
      std::snprintf(msg, sizeof msg,
                    "characterize: matching contract violated at %s: "
                    "predicted %.6e, measured %.6e",
                    c.name, c.got, c.want);
      throw NumericError(msg);
    }
  }
  return p;
}

MeasuredDelays measured_delays_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("measured-delay file: ") + e.what());
  }
  MeasuredDelays m;
  try {
    const auto read_triple = [&](const char* key) {
      const auto& t = j.at(key);
      DelayTriple out;
      out.d0 = t.at("d0_s").get<double>();
      out.d_plus_inf = t.at("dinf_s").get<double>();
      out.d_minus_inf = t.at("dminf_s").get<double>();
      return out;
    };
    m.fall = read_triple("fall");
    m.rise = read_triple("rise");
    m.d_min = j.at("dmin_s").get<double>();
    m.c_load = j.at("c_f").get<double>();
    if (j.contains("vdd_v")) m.vdd = j.at("vdd_v").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("measured-delay file: ") + e.what());
  }
  m.validate();
  return m;
}

MeasuredDelays load_measured_delays(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open measured-delay file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return measured_delays_from_json_text(ss.str());
}

}  // namespace hybridtime
