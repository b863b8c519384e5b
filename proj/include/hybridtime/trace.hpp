#pragma once

#include <string>
#include <vector>

#include "hybridtime/errors.hpp"

namespace hybridtime {

// One timestamped level change of a binary signal.
struct Transition {
  double time = 0.0;  // [s]
  int level = 0;      // 0 or 1

  friend bool operator==(const Transition&, const Transition&) = default;
};

// A digital signal trace: the level is `initial_level` from `t_start` until
// the first transition, then follows the transition list. Levels strictly
// alternate and times strictly increase.
struct Trace {
  std::string net;
  int initial_level = 0;
  double t_start = 0.0;
  std::vector<Transition> transitions;

  void validate() const;

  // Level right before `t` (transitions take effect at their own time).
  int level_before(double t) const;
  // Level at or after `t`.
  int level_at(double t) const;

  friend bool operator==(const Trace&, const Trace&) = default;
};

// CSV: header `time_s,level`; the first data row carries (t_start,
// initial_level), every further row one transition.
Trace read_trace_csv(const std::string& path);
void write_trace_csv(const Trace& trace, const std::string& path);
Trace trace_from_csv_text(const std::string& text, const std::string& net);
std::string trace_to_csv_text(const Trace& trace);

// VCD subset: $timescale / $var wire 1 / $dumpvars, #time records, scalar
// 0/1 values. Times are emitted in femtoseconds.
std::vector<Trace> read_traces_vcd(const std::string& path);
void write_traces_vcd(const std::vector<Trace>& traces,
                      const std::string& path);
std::vector<Trace> traces_from_vcd_text(const std::string& text);
std::string traces_to_vcd_text(const std::vector<Trace>& traces);

// Dispatch on file extension (.csv / .vcd).
Trace read_trace(const std::string& path);
void write_trace(const Trace& trace, const std::string& path);

}  // namespace hybridtime
