#pragma once

#include <string>
#include <vector>

#include "hybridtime/baseline_models.hpp"
#include "hybridtime/channel_engine.hpp"
#include "hybridtime/trace.hpp"

namespace hybridtime {

enum class GateModel { hybrid, pure, inertial };

struct Gate {
  std::string id;
  GateKind kind = GateKind::nor2;
  std::string in_a;
  std::string in_b;
  std::string out;
  GateParams params;
  GateModel model = GateModel::hybrid;
  BaselineParams baseline;  // used by pure/inertial models
};

// Built-in constant driver nets.
inline constexpr const char* kConst0 = "const0";
inline constexpr const char* kConst1 = "const1";

struct Netlist {
  std::vector<Gate> gates;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;

  // Checks unique ids, single drivers, no dangling nets, and that every
  // gate on a combinational cycle has d_min > 0.
  void validate() const;

  bool is_driven(const std::string& net) const;
  const Gate* driver_of(const std::string& net) const;
  // Gate indices lying on combinational cycles.
  std::vector<size_t> gates_on_cycles() const;
};

Netlist netlist_from_json_text(const std::string& text,
                               const std::string& base_dir = "");
Netlist load_netlist(const std::string& path);
std::string netlist_to_json_text(const Netlist& n);  // params inlined
void save_netlist(const Netlist& n, const std::string& path);

struct StimulusSpec {
  double mu = 0.0;       // mean inter-transition gap [s]
  double sigma = 0.0;    // gap standard deviation [s]
  int n = 1;             // transitions per input
  unsigned long long seed = 0;
  double floor = 1e-13;  // hard lower gap bound [s]

  void validate() const;
};

struct StimulusResult {
  std::vector<Trace> traces;     // one per requested input, levels from 0
  double truncation_rate = 0.0;  // fraction of gaps clamped to floor
};

/// Draws independent Gaussian inter-transition gaps per input, truncated
/// below at `floor`; deterministic for a fixed seed.
StimulusResult generate_stimuli(const StimulusSpec& spec,
                                const std::vector<std::string>& inputs);

}  // namespace hybridtime
