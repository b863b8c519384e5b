#pragma once

#include <string>

#include "hybridtime/trace.hpp"

namespace hybridtime {

struct GlitchCounts {
  int original_suppressed = 0;  // pulse only in the reference trace
  int original_induced = 0;     // pulse only in the candidate trace
  int inverted_suppressed = 0;  // reference pulse properly contains one
  int inverted_induced = 0;     // candidate pulse properly contains one

  int total() const {
    return original_suppressed + original_induced + inverted_suppressed +
           inverted_induced;
  }
};

// Deviation metrics between a candidate and a reference trace. Areas are the
// integral of the XOR of the two 0/1 signals, split by which trace opens each
// deviation interval: candidate first = leading, reference first = trailing.
// Normalized to VDD = 1, so areas carry time units.
struct DeviationReport {
  double leading_area = 0.0;             // [s]
  double trailing_area = 0.0;            // [s]
  double net_area_per_transition = 0.0;  // (leading - trailing)/count [s]
  int transition_count = 0;              // candidate transitions
  GlitchCounts glitches;
  double glitch_rate = 0.0;  // total glitches / candidate transitions
  bool glitches_included = false;
  bool greedy_pairing_ambiguous = false;  // counts differ beyond glitches

  std::string to_json() const;
  std::string to_table() const;
};

/// Compares candidate against reference. Throws ValidationError on malformed
/// traces or an initial-level mismatch. With include_glitches = false the
/// classified glitch pulses do not contribute to the areas.
DeviationReport compare(const Trace& reference, const Trace& candidate,
                        bool include_glitches = false);

}  // namespace hybridtime
