#include "hybridtime/netlist.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

namespace hybridtime {

namespace {

bool is_const_net(const std::string& net) {
  return net == kConst0 || net == kConst1;
}

std::string read_file(const std::string& path, const char* what) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError(std::string("cannot open ") + what + ": " + path);
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

bool Netlist::is_driven(const std::string& net) const {
  if (is_const_net(net)) return true;
  if (std::find(inputs.begin(), inputs.end(), net) != inputs.end()) {
    return true;
  }
  return driver_of(net) != nullptr;
}

const Gate* Netlist::driver_of(const std::string& net) const {
  for (const Gate& g : gates) {
    if (g.out == net) return &g;
  }
  return nullptr;
}

std::vector<size_t> Netlist::gates_on_cycles() const {
  // gate -> gate adjacency via output nets
  std::map<std::string, size_t> producer;
  for (size_t i = 0; i < gates.size(); ++i) producer[gates[i].out] = i;
  std::vector<std::vector<size_t>> succ(gates.size());
  for (size_t i = 0; i < gates.size(); ++i) {
    for (const std::string* net : {&gates[i].in_a, &gates[i].in_b}) {
      auto it = producer.find(*net);
      if (it != producer.end()) succ[it->second].push_back(i);
    }
  }
  // iteratively strip gates with no in-cycle predecessor/successor
  std::vector<int> indeg(gates.size(), 0), outdeg(gates.size(), 0);
  for (size_t i = 0; i < gates.size(); ++i) {
    for (size_t j : succ[i]) {
      ++outdeg[i];
      ++indeg[j];
    }
  }
  std::vector<bool> removed(gates.size(), false);
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i < gates.size(); ++i) {
      if (removed[i] || (indeg[i] > 0 && outdeg[i] > 0)) continue;
      removed[i] = true;
      changed = true;
      for (size_t j : succ[i]) {
        if (!removed[j]) --indeg[j];
      }
      for (size_t k = 0; k < gates.size(); ++k) {
        if (removed[k]) continue;
        for (size_t j : succ[k]) {
          if (j == i) --outdeg[k];
        }
      }
    }
  }
  std::vector<size_t> cyclic;
  for (size_t i = 0; i < gates.size(); ++i) {
    if (!removed[i]) cyclic.push_back(i);
  }
  return cyclic;
}

void Netlist::validate() const {
  std::set<std::string> ids;
  std::set<std::string> driven;
  for (const std::string& in : inputs) {
    if (is_const_net(in)) {
      throw ValidationError("netlist: primary input shadows a constant net");
    }
    if (!driven.insert(in).second) {
      throw ValidationError("netlist: duplicate primary input " + in);
    }
  }
  for (const Gate& g : gates) {
    if (!ids.insert(g.id).second) {
      throw ValidationError("netlist: duplicate gate id " + g.id);
    }
    if (is_const_net(g.out)) {
      throw ValidationError("netlist: gate " + g.id + " drives a constant net");
    }
    if (!driven.insert(g.out).second) {
      throw ValidationError("netlist: net " + g.out +
                            " has multiple drivers (at gate " + g.id + ")");
    }
    g.params.validate();
    g.baseline.validate();
  }
  for (const Gate& g : gates) {
    for (const std::string* net : {&g.in_a, &g.in_b}) {
      if (net->empty() || !is_driven(*net)) {
        throw ValidationError("netlist: dangling input net '" + *net +
                              "' at gate " + g.id);
      }
    }
  }
  for (const std::string& out : outputs) {
    if (!is_driven(out)) {
      throw ValidationError("netlist: undriven primary output " + out);
    }
  }
  for (size_t i : gates_on_cycles()) {
    if (!(gates[i].params.d_min > 0.0)) {
      throw ValidationError("netlist: gate " + gates[i].id +
                            " lies on a combinational cycle but has zero "
                            "pure delay");
    }
  }
}

Netlist netlist_from_json_text(const std::string& text,
                               const std::string& base_dir) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("netlist file: ") + e.what());
  }
  Netlist n;
  try {
    for (const auto& jg : j.at("gates")) {
      Gate g;
      g.id = jg.at("id").get<std::string>();
      const std::string kind = jg.at("kind").get<std::string>();
      if (kind == "nor2") {
        g.kind = GateKind::nor2;
      } else if (kind == "nand2") {
        g.kind = GateKind::nand2;
      } else {
        throw ValidationError("netlist: unknown gate kind '" + kind + "'");
      }
      g.in_a = jg.at("a").get<std::string>();
      g.in_b = jg.at("b").get<std::string>();
      g.out = jg.at("out").get<std::string>();
      const auto& jp = jg.at("params");
      if (jp.is_string()) {
        std::string path = jp.get<std::string>();
        if (!base_dir.empty() && !path.empty() && path[0] != '/') {
          path = base_dir + "/" + path;
        }
        g.params = load_gate_params(path);
      } else {
        g.params = gate_params_from_json_text(jp.dump());
      }
      if (jg.contains("model")) {
        const std::string m = jg.at("model").get<std::string>();
        if (m == "hybrid") {
          g.model = GateModel::hybrid;
        } else if (m == "pure") {
          g.model = GateModel::pure;
        } else if (m == "inertial") {
          g.model = GateModel::inertial;
        } else {
          throw ValidationError("netlist: unknown model '" + m + "'");
        }
      }
      // baseline delays default to the single-transition limits of the
      // characterized gate
      g.baseline.d_fall = mis_delay_falling(g.params,
                                            std::numeric_limits<double>::infinity());
      g.baseline.d_rise = mis_delay_rising(g.params,
                                           std::numeric_limits<double>::infinity());
      if (jg.contains("d_rise_s")) g.baseline.d_rise = jg.at("d_rise_s");
      if (jg.contains("d_fall_s")) g.baseline.d_fall = jg.at("d_fall_s");
      if (jg.contains("inertial_window_s")) {
        g.baseline.inertial_window = jg.at("inertial_window_s");
      } else if (g.model == GateModel::inertial) {
        g.baseline.inertial_window = std::min(g.baseline.d_rise,
                                              g.baseline.d_fall);
      }
      n.gates.push_back(std::move(g));
    }
    for (const auto& s : j.at("inputs")) n.inputs.push_back(s);
    for (const auto& s : j.at("outputs")) n.outputs.push_back(s);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("netlist file: ") + e.what());
  }
  n.validate();
  return n;
}

Netlist load_netlist(const std::string& path) {
  std::string dir;
  if (auto slash = path.find_last_of('/'); slash != std::string::npos) {
    dir = path.substr(0, slash);
  }
  return netlist_from_json_text(read_file(path, "netlist file"), dir);
}

std::string netlist_to_json_text(const Netlist& n) {
  nlohmann::json j;
  j["gates"] = nlohmann::json::array();
  for (const Gate& g : n.gates) {
    nlohmann::json jg;
    jg["id"] = g.id;
    jg["kind"] = g.kind == GateKind::nor2 ? "nor2" : "nand2";
    jg["a"] = g.in_a;
    jg["b"] = g.in_b;
    jg["out"] = g.out;
    jg["params"] = nlohmann::json::parse(gate_params_to_json_text(g.params));
    switch (g.model) {
      case GateModel::hybrid:
        jg["model"] = "hybrid";
        break;
      case GateModel::pure:
        jg["model"] = "pure";
        break;
      case GateModel::inertial:
        jg["model"] = "inertial";
        break;
    }
    jg["d_rise_s"] = g.baseline.d_rise;
    jg["d_fall_s"] = g.baseline.d_fall;
    jg["inertial_window_s"] = g.baseline.inertial_window;
    j["gates"].push_back(jg);
  }
  j["inputs"] = n.inputs;
  j["outputs"] = n.outputs;
  return j.dump(2) + "\n";
}

void save_netlist(const Netlist& n, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write netlist file: " + path);
  out << netlist_to_json_text(n);
}

void StimulusSpec::validate() const {
  if (!(mu > 0.0) || !(sigma >= 0.0) || n < 1 || !(floor > 0.0)) {
    throw ValidationError(
        "stimulus spec: need mu > 0, sigma >= 0, n >= 1, floor > 0");
  }
}

StimulusResult generate_stimuli(const StimulusSpec& spec,
                                const std::vector<std::string>& inputs) {
  spec.validate();
  StimulusResult out;
  long clamped = 0;
  long total = 0;
  for (size_t idx = 0; idx < inputs.size(); ++idx) {
    std::mt19937_64 rng(spec.seed + 0x9e3779b97f4a7c15ULL * (idx + 1));
    // explicit Box-Muller so the stream is stable across standard libraries
    auto gauss = [&rng]() {
      const double u1 =
          (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
      const double u2 = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      return std::sqrt(-2.0 * std::log(u1)) *
             std::cos(2.0 * M_PI * u2);
    };
    Trace tr;
    tr.net = inputs[idx];
    tr.initial_level = 0;
    tr.t_start = 0.0;
    double t = 0.0;
    int level = 0;
    for (int k = 0; k < spec.n; ++k) {
      double gap = spec.mu + spec.sigma * gauss();
      ++total;
      if (gap < spec.floor) {
        gap = spec.floor;
        ++clamped;
      }
      t += gap;
      level = 1 - level;
      tr.transitions.push_back({t, level});
    }
    out.traces.push_back(std::move(tr));
  }
  out.truncation_rate =
      total > 0 ? static_cast<double>(clamped) / static_cast<double>(total)
                : 0.0;
  return out;
}

}  // namespace hybridtime
