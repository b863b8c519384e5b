#pragma once

#include <map>
#include <string>
#include <vector>

#include "hybridtime/netlist.hpp"

namespace hybridtime {

struct SimStats {
  long events_processed = 0;
  long real_outputs = 0;
  long virtual_outputs = 0;
  long cancellations = 0;
  double wall_time_s = 0.0;
};

struct SimulationResult {
  std::map<std::string, Trace> traces;  // every net, primary inputs included
  SimStats stats;
};

struct SimOptions {
  double t_end = 0.0;                 // 0: run until the queue drains
  long max_events_per_net = 1000000;  // runaway-oscillation guard
};

/// Deterministic single-threaded event propagation. Stimuli must cover
/// exactly the primary inputs. Throws NumericError when a net exceeds the
/// oscillation guard.
SimulationResult run(const Netlist& netlist, const std::vector<Trace>& stimuli,
                     const SimOptions& options = {});

struct SweepPoint {
  double mu = 0.0;
  double sigma = 0.0;
};

struct RunRecord {
  SweepPoint point;
  unsigned long long seed = 0;
  SimStats stats;
  bool ok = false;
  std::string error;
};

struct SweepReport {
  std::vector<RunRecord> runs;
  double mean_real_outputs = 0.0;
  double stddev_real_outputs = 0.0;
};

/// Repeats full simulations over the (mu, sigma) grid with consecutive
/// seeds starting from base.seed. Runs are independent; `jobs` > 1 uses a
/// thread pool, the report order stays deterministic.
SweepReport sweep(const Netlist& netlist, const StimulusSpec& base,
                  const std::vector<SweepPoint>& grid, int runs_per_point,
                  const SimOptions& options = {}, int jobs = 1);

}  // namespace hybridtime
