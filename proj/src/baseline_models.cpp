#include "hybridtime/baseline_models.hpp"

#include <cstdio>
#include <utility>

namespace hybridtime {

namespace {

int gate_eval(GateKind kind, int a, int b) {
  if (kind == GateKind::nand2) return (a == 1 && b == 1) ? 0 : 1;
  return (a == 0 && b == 0) ? 1 : 0;
}

}  // namespace

void BaselineParams::validate() const {
  if (!(d_rise >= 0.0) || !(d_fall >= 0.0) || !(inertial_window >= 0.0)) {
    throw ValidationError("baseline params: delays and window must be >= 0");
  }
}

BaselineChannel::BaselineChannel(GateKind kind, const BaselineParams& bp)
    : kind_(kind), bp_(bp) {
  bp_.validate();
}

void BaselineChannel::init(int level_a, int level_b, double t0) {
  if ((level_a != 0 && level_a != 1) || (level_b != 0 && level_b != 1)) {
    throw ValidationError("baseline init: levels must be 0 or 1");
  }
  level_a_ = level_a;
  level_b_ = level_b;
  committed_level_ = gate_eval(kind_, level_a_, level_b_);
  initial_output_ = committed_level_;
  last_time_ = t0;
  queue_.clear();
  initialized_ = true;
}

int BaselineChannel::projected_level() const {
  return queue_.empty() ? committed_level_ : queue_.back().level;
}

BaselineFeed BaselineChannel::feed_event(const InputTransition& ev) {
  if (!initialized_) {
    throw ValidationError("baseline: feed_event before init");
  }
  const double t = ev.time;
  if (!(t >= last_time_)) {
    throw ValidationError("baseline: out-of-order event");
  }
  last_time_ = t;

  // outputs whose time has passed are immutable now
  while (!queue_.empty() && queue_.front().time <= t) {
    committed_level_ = queue_.front().level;
    queue_.pop_front();
  }

  int& lev = (ev.input == InputPort::A) ? level_a_ : level_b_;
  const int required = (ev.edge == Edge::rise) ? 0 : 1;
  if (lev != required) {
    throw ValidationError("baseline: inconsistent edge");
  }
  lev = 1 - lev;

  BaselineFeed res;
  const int target = gate_eval(kind_, level_a_, level_b_);
  if (target == projected_level()) return res;

  const double t_o = t + (target == 1 ? bp_.d_rise : bp_.d_fall);
  if (!queue_.empty()) {
    const OutputTransition prev = queue_.back();
    // inertial rule: a pulse shorter than the window never appears; a
    // reordered pair (t_o not after the previous edge) collapses likewise
    if (t_o <= prev.time || t_o - prev.time < bp_.inertial_window) {
      queue_.pop_back();
      res.cancelled_times.push_back(prev.time);
      return res;
    }
  }
  queue_.push_back(OutputTransition{target, t_o, true});
  res.scheduled = queue_.back();
  return res;
}

std::pair<int, std::vector<OutputTransition>> baseline_process(
    GateKind kind, const BaselineParams& bp, const InputSequence& inputs) {
  BaselineChannel ch(kind, bp);
  ch.init(inputs.initial_a, inputs.initial_b, inputs.t0);
  std::vector<OutputTransition> out;
  for (const InputTransition& ev : inputs.events) {
    const BaselineFeed res = ch.feed_event(ev);
    for (double tc : res.cancelled_times) {
      if (!out.empty() && out.back().time == tc) out.pop_back();
    }
    if (res.scheduled) out.push_back(*res.scheduled);
  }
  return {ch.initial_output(), std::move(out)};
}

}  // namespace hybridtime
