#pragma once

#include <optional>
#include <vector>

#include "hybridtime/gate_model.hpp"

namespace hybridtime {

enum class GateKind { nor2, nand2 };
enum class InputPort { A, B };
enum class Edge { rise, fall };

struct InputTransition {
  InputPort input = InputPort::A;
  Edge edge = Edge::rise;
  double time = 0.0;  // [s]
};

struct OutputTransition {
  int level = 0;
  double time = 0.0;
  bool real = true;  // false: virtual (bookkeeping only)

  friend bool operator==(const OutputTransition&,
                         const OutputTransition&) = default;
};

// Tentative output scheduled by the most recent input transition. Its fate
// (real or virtual) is decided by the next input event or by flush().
struct PendingOutput {
  int level = 0;           // digital output level it would produce
  double t_o = 0.0;        // 1:1 output time, may lie in the past
  double t_sched = 0.0;    // input transition time that caused it
  CaseId case_id = CaseId::a;
  double delta = 0.0;      // delta fed to the formulas (signed, +-inf)
  double v_int = 0.0;      // trajectory start voltage (internal NOR space)
  bool already_virtual = false;  // crossing was in the past at schedule time
};

// What one feed_event() call did: resolution of the previous pending output
// plus the newly scheduled one.
struct FeedResult {
  std::optional<OutputTransition> resolved;  // previous pending, real=...
  PendingOutput scheduled;
  CaseId case_id = CaseId::a;
  double v_int_at_event = 0.0;  // internal voltage when the event hit
};

// Per-gate transition processor implementing the eight-case hybrid model.
// NAND gates run on the same internal machinery with inputs and output
// inverted (the duality mapping); all stored voltages and levels are in the
// internal NOR space.
class ChannelEngine {
 public:
  ChannelEngine(const GateParams& params, GateKind kind);

  // Warm start: inputs settled at the given levels since forever; `t0` is
  // the observation start (use -infinity for the paper's convention).
  void init(int level_a, int level_b, double t0);

  FeedResult feed_event(const InputTransition& ev);

  // Commits the remaining pending output if its crossing is not in the
  // past. Returns it (real or virtual), if any was pending.
  std::optional<OutputTransition> flush();

  int output_level() const;       // current digital output level
  int initial_output() const { return initial_output_; }
  double v_int() const;           // internal voltage (NOR space)
  bool has_pending() const { return pending_.has_value(); }
  const GateParams& params() const { return params_; }
  GateKind kind() const { return kind_; }

 private:
  void resolve_pending(double t_next, std::optional<OutputTransition>* out);
  int to_external_level(int nor_level) const;

  GateParams params_;
  GateKind kind_;
  DerivedCaps caps_;
  int level_a_ = 0, level_b_ = 0;  // internal (NOR-space) input levels
  double v_int_ = 0.0;
  double delta_e_temp_, delta_f_temp_;  // -infinity when unset
  std::optional<PendingOutput> pending_;
  int out_level_ = 0;       // external digital output level
  int initial_output_ = 0;
  double last_time_ = 0.0;
  bool initialized_ = false;
};

struct InputSequence {
  int initial_a = 0;
  int initial_b = 0;
  double t0 = 0.0;  // may be -infinity
  std::vector<InputTransition> events;
};

struct ProcessResult {
  int initial_level = 0;
  std::vector<OutputTransition> real;       // strictly alternating
  std::vector<OutputTransition> annotated;  // one per input event
  std::vector<double> v_int_before;         // internal voltage per event
};

/// Batch form of the algorithm: runs the whole input sequence through a
/// fresh engine and flushes.
ProcessResult process_sequence(const GateParams& p, GateKind kind,
                               const InputSequence& inputs);

}  // namespace hybridtime
