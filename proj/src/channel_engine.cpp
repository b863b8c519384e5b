#include "hybridtime/channel_engine.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace hybridtime {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_rising_case(CaseId c) { return c == CaseId::g || c == CaseId::h; }

}  // namespace

ChannelEngine::ChannelEngine(const GateParams& params, GateKind kind)
    : params_(params), kind_(kind), caps_(derived_caps(params)) {
  params_.validate();
}

int ChannelEngine::to_external_level(int nor_level) const {
  return kind_ == GateKind::nand2 ? 1 - nor_level : nor_level;
}

void ChannelEngine::init(int level_a, int level_b, double t0) {
  if ((level_a != 0 && level_a != 1) || (level_b != 0 && level_b != 1)) {
    throw ValidationError("channel init: levels must be 0 or 1");
  }
  const bool invert = kind_ == GateKind::nand2;
  level_a_ = invert ? 1 - level_a : level_a;
  level_b_ = invert ? 1 - level_b : level_b;
  const int nor_out = (level_a_ == 0 && level_b_ == 0) ? 1 : 0;
  v_int_ = nor_out ? params_.vdd : 0.0;
  out_level_ = to_external_level(nor_out);
  initial_output_ = out_level_;
  delta_e_temp_ = -kInf;
  delta_f_temp_ = -kInf;
  pending_.reset();
  last_time_ = t0;
  initialized_ = true;
}

int ChannelEngine::output_level() const { return out_level_; }

double ChannelEngine::v_int() const {
  return kind_ == GateKind::nand2 ? params_.vdd - v_int_ : v_int_;
}

void ChannelEngine::resolve_pending(double t_next,
                                    std::optional<OutputTransition>* out) {
  if (!pending_) return;
  const PendingOutput& pend = *pending_;
  const bool cancelled =
      pend.already_virtual || pend.t_o - params_.d_min > t_next;
  if (!cancelled) out_level_ = pend.level;
  if (out) *out = OutputTransition{pend.level, pend.t_o, !cancelled};

  // advance the internal voltage along the pending trajectory up to t_next
  double arg;
  if (is_rising_case(pend.case_id) && pend.v_int > 0.5 * params_.vdd) {
    // artificial negative trajectory: evaluate the raw form from v_int at
    // the elapsed time since the trajectory start
    arg = t_next - pend.t_sched;
  } else {
    arg = (t_next - pend.t_o) + params_.d_min;  // time since the crossing
  }
  v_int_ = nor_shifted_trajectory(pend.case_id, params_, arg, pend.delta,
                                  pend.v_int);
  pending_.reset();
}

FeedResult ChannelEngine::feed_event(const InputTransition& ev) {
  if (!initialized_) {
    throw ValidationError("channel: feed_event before init");
  }
  const double t = ev.time;
  if (!(t >= last_time_)) {
    char msg[128];
    std::snprintf(msg, sizeof msg,
                  "channel: event at %g precedes last event at %g", t,
                  last_time_);
    throw ValidationError(msg);
  }

  FeedResult res;
  resolve_pending(t, &res.resolved);
  res.v_int_at_event = v_int_;

  const bool invert = kind_ == GateKind::nand2;
  const Edge edge =
      invert ? (ev.edge == Edge::rise ? Edge::fall : Edge::rise) : ev.edge;
  int& lev = (ev.input == InputPort::A) ? level_a_ : level_b_;
  const int other = (ev.input == InputPort::A) ? level_b_ : level_a_;
  const int required = (edge == Edge::rise) ? 0 : 1;
  if (lev != required) {
    char msg[128];
    std::snprintf(msg, sizeof msg,
                  "channel: inconsistent edge on input %c at t=%g",
                  ev.input == InputPort::A ? 'A' : 'B', t);
    throw ValidationError(msg);
  }
  lev = 1 - lev;

  CaseId cid;
  if (edge == Edge::rise) {
    if (ev.input == InputPort::A) {
      cid = other == 0 ? CaseId::a : CaseId::d;
    } else {
      cid = other == 0 ? CaseId::b : CaseId::c;
    }
  } else {
    if (ev.input == InputPort::A) {
      cid = other == 1 ? CaseId::e : CaseId::h;
    } else {
      cid = other == 1 ? CaseId::f : CaseId::g;
    }
  }

  double delta = 0.0;
  switch (cid) {
    case CaseId::e:
      delta_e_temp_ = t;
      break;
    case CaseId::f:
      delta_f_temp_ = t;
      break;
    case CaseId::g:
      delta = delta_e_temp_ == -kInf ? kInf : t - delta_e_temp_;
      delta_f_temp_ = t;
      break;
    case CaseId::h:
      delta = delta_f_temp_ == -kInf ? -kInf : delta_f_temp_ - t;
      delta_e_temp_ = t;
      break;
    default:
      break;
  }

  const double delay = nor_delay(cid, params_, v_int_, delta);
  const double t_o = t + delay;

  PendingOutput pend;
  pend.level = to_external_level(is_rising_case(cid) ? 1 : 0);
  pend.t_o = t_o;
  pend.t_sched = t;
  pend.case_id = cid;
  pend.delta = delta;
  pend.v_int = v_int_;
  pend.already_virtual = t_o - params_.d_min < t;
  pending_ = pend;

  res.scheduled = pend;
  res.case_id = cid;
  last_time_ = t;
  return res;
}

std::optional<OutputTransition> ChannelEngine::flush() {
  if (!pending_) return std::nullopt;
  const PendingOutput pend = *pending_;
  pending_.reset();
  if (!pend.already_virtual) {
    out_level_ = pend.level;
    return OutputTransition{pend.level, pend.t_o, true};
  }
  return OutputTransition{pend.level, pend.t_o, false};
}

ProcessResult process_sequence(const GateParams& p, GateKind kind,
                               const InputSequence& inputs) {
  ChannelEngine engine(p, kind);
  engine.init(inputs.initial_a, inputs.initial_b, inputs.t0);
  ProcessResult out;
  out.initial_level = engine.initial_output();
  for (const InputTransition& ev : inputs.events) {
    const FeedResult res = engine.feed_event(ev);
    if (res.resolved) {
      out.annotated.back() = *res.resolved;
      if (res.resolved->real) out.real.push_back(*res.resolved);
    }
    out.annotated.push_back(
        OutputTransition{res.scheduled.level, res.scheduled.t_o, false});
    out.v_int_before.push_back(res.v_int_at_event);
  }
  if (auto last = engine.flush()) {
    out.annotated.back() = *last;
    if (last->real) out.real.push_back(*last);
  }
  return out;
}

}  // namespace hybridtime
