#pragma once

#include <deque>
#include <optional>
#include <vector>

#include "hybridtime/channel_engine.hpp"
#include "hybridtime/errors.hpp"

namespace hybridtime {

// Reference delay channel: zero-time Boolean evaluation followed by a pure
// or inertial delay line. inertial_window = 0 degenerates to pure delay.
struct BaselineParams {
  double d_rise = 0.0;
  double d_fall = 0.0;
  double inertial_window = 0.0;

  void validate() const;
};

struct BaselineFeed {
  std::vector<double> cancelled_times;  // previously scheduled, now revoked
  std::optional<OutputTransition> scheduled;
};

class BaselineChannel {
 public:
  BaselineChannel(GateKind kind, const BaselineParams& bp);

  void init(int level_a, int level_b, double t0);
  BaselineFeed feed_event(const InputTransition& ev);

  int initial_output() const { return initial_output_; }
  // Output level once every scheduled transition has played out.
  int projected_level() const;

 private:
  GateKind kind_;
  BaselineParams bp_;
  int level_a_ = 0, level_b_ = 0;
  int committed_level_ = 0;
  int initial_output_ = 0;
  double last_time_ = 0.0;
  std::deque<OutputTransition> queue_;  // future output transitions
  bool initialized_ = false;
};

/// Batch form: initial output level and the real output transitions.
std::pair<int, std::vector<OutputTransition>> baseline_process(
    GateKind kind, const BaselineParams& bp, const InputSequence& inputs);

}  // namespace hybridtime
