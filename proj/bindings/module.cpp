// Python bindings for the main operations: characterization, per-case delay
// evaluation, transition-sequence processing, stimulus generation, netlist
// simulation, and trace comparison.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <limits>

#include "hybridtime/baseline_models.hpp"
#include "hybridtime/channel_engine.hpp"
#include "hybridtime/characterization.hpp"
#include "hybridtime/gate_model.hpp"
#include "hybridtime/simulator.hpp"
#include "hybridtime/trace.hpp"
#include "hybridtime/trace_metrics.hpp"

namespace py = pybind11;
using namespace hybridtime;

namespace {

CaseId case_from_string(const std::string& s) {
  if (s.size() == 1 && s[0] >= 'a' && s[0] <= 'h') {
    return static_cast<CaseId>(s[0] - 'a');
  }
  throw ValidationError("case must be one of 'a'..'h'");
}

GateKind kind_from_string(const std::string& s) {
  if (s == "nor2") return GateKind::nor2;
  if (s == "nand2") return GateKind::nand2;
  throw ValidationError("kind must be 'nor2' or 'nand2'");
}

InputTransition event_from_tuple(const py::tuple& t) {
  if (t.size() != 3) {
    throw ValidationError("event must be (input, edge, time)");
  }
  InputTransition ev;
  const std::string input = t[0].cast<std::string>();
  const std::string edge = t[1].cast<std::string>();
  if (input == "A" || input == "a") {
    ev.input = InputPort::A;
  } else if (input == "B" || input == "b") {
    ev.input = InputPort::B;
  } else {
    throw ValidationError("event input must be 'A' or 'B'");
  }
  if (edge == "rise") {
    ev.edge = Edge::rise;
  } else if (edge == "fall") {
    ev.edge = Edge::fall;
  } else {
    throw ValidationError("event edge must be 'rise' or 'fall'");
  }
  ev.time = t[2].cast<double>();
  return ev;
}

py::dict trace_to_dict(const Trace& tr) {
  py::dict d;
  d["net"] = tr.net;
  d["initial_level"] = tr.initial_level;
  d["t_start"] = tr.t_start;
  py::list lst;
  for (const Transition& t : tr.transitions) {
    lst.append(py::make_tuple(t.time, t.level));
  }
  d["transitions"] = lst;
  return d;
}

Trace trace_from_dict(const py::dict& d) {
  Trace tr;
  if (d.contains("net")) tr.net = d["net"].cast<std::string>();
  tr.initial_level = d["initial_level"].cast<int>();
  if (d.contains("t_start")) tr.t_start = d["t_start"].cast<double>();
  for (const auto& item : d["transitions"].cast<py::list>()) {
    const py::tuple t = item.cast<py::tuple>();
    tr.transitions.push_back({t[0].cast<double>(), t[1].cast<int>()});
  }
  tr.validate();
  return tr;
}

}  // namespace

PYBIND11_MODULE(_hybridtime, m) {
  m.doc() = "gate-level hybrid timing model for 2-input NOR/NAND gates";

  py::register_exception<ValidationError>(m, "ValidationError",
                                          PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError",
                                       PyExc_ArithmeticError);

  m.def(
      "characterize",
      [](const std::string& measured_json, double tolerance) {
        const MeasuredDelays md = measured_delays_from_json_text(measured_json);
        return gate_params_to_json_text(characterize(md, tolerance));
      },
      py::arg("measured_json"), py::arg("tolerance") = 1e-3,
      "Fit gate parameters from a measured-delay JSON document; returns the "
      "parameter set as JSON.");

  m.def(
      "mis_delay_falling",
      [](const std::string& params_json, double delta) {
        return mis_delay_falling(gate_params_from_json_text(params_json),
                                 delta);
      },
      py::arg("params_json"), py::arg("delta"));

  m.def(
      "mis_delay_rising",
      [](const std::string& params_json, double delta) {
        return mis_delay_rising(gate_params_from_json_text(params_json),
                                delta);
      },
      py::arg("params_json"), py::arg("delta"));

  m.def(
      "nor_delay",
      [](const std::string& case_id, const std::string& params_json,
         double v_int, double delta) {
        return nor_delay(case_from_string(case_id),
                         gate_params_from_json_text(params_json), v_int,
                         delta);
      },
      py::arg("case_id"), py::arg("params_json"), py::arg("v_int"),
      py::arg("delta") = 0.0,
      "Per-case NOR delay including the pure delay term.");

  m.def(
      "process_sequence",
      [](const std::string& params_json, const std::string& kind,
         int initial_a, int initial_b, const std::vector<py::tuple>& events) {
        InputSequence s;
        s.initial_a = initial_a;
        s.initial_b = initial_b;
        s.t0 = -std::numeric_limits<double>::infinity();
        for (const py::tuple& t : events) {
          s.events.push_back(event_from_tuple(t));
        }
        const ProcessResult r =
            process_sequence(gate_params_from_json_text(params_json),
                             kind_from_string(kind), s);
        py::dict out;
        out["initial_level"] = r.initial_level;
        py::list real;
        for (const OutputTransition& o : r.real) {
          real.append(py::make_tuple(o.time, o.level));
        }
        out["real"] = real;
        py::list v_int;
        for (double v : r.v_int_before) v_int.append(v);
        out["v_int_before"] = v_int;
        return out;
      },
      py::arg("params_json"), py::arg("kind"), py::arg("initial_a"),
      py::arg("initial_b"), py::arg("events"),
      "Run one gate through a sequence of input transitions; events are "
      "('A'|'B', 'rise'|'fall', time) tuples.");

  m.def(
      "generate_stimuli",
      [](double mu, double sigma, int n, unsigned long long seed,
         double floor, const std::vector<std::string>& inputs) {
        StimulusSpec spec;
        spec.mu = mu;
        spec.sigma = sigma;
        spec.n = n;
        spec.seed = seed;
        spec.floor = floor;
        const StimulusResult res = generate_stimuli(spec, inputs);
        py::dict out;
        py::list traces;
        for (const Trace& tr : res.traces) traces.append(trace_to_dict(tr));
        out["traces"] = traces;
        out["truncation_rate"] = res.truncation_rate;
        return out;
      },
      py::arg("mu"), py::arg("sigma"), py::arg("n"), py::arg("seed") = 0,
      py::arg("floor") = 1e-13, py::arg("inputs"));

  m.def(
      "simulate",
      [](const std::string& netlist_json, const std::vector<py::dict>& stimuli,
         double t_end, const std::string& base_dir) {
        const Netlist n = netlist_from_json_text(netlist_json, base_dir);
        std::vector<Trace> stim;
        for (const py::dict& d : stimuli) stim.push_back(trace_from_dict(d));
        SimOptions opts;
        opts.t_end = t_end;
        const SimulationResult res = run(n, stim, opts);
        py::dict out;
        py::dict traces;
        for (const auto& [net, tr] : res.traces) {
          traces[py::str(net)] = trace_to_dict(tr);
        }
        out["traces"] = traces;
        py::dict stats;
        stats["events_processed"] = res.stats.events_processed;
        stats["real_outputs"] = res.stats.real_outputs;
        stats["virtual_outputs"] = res.stats.virtual_outputs;
        stats["cancellations"] = res.stats.cancellations;
        stats["wall_time_s"] = res.stats.wall_time_s;
        out["stats"] = stats;
        return out;
      },
      py::arg("netlist_json"), py::arg("stimuli"), py::arg("t_end") = 0.0,
      py::arg("base_dir") = "",
      "Simulate a netlist (JSON text; parameter file references are resolved "
      "against base_dir) against stimulus traces given as dicts.");

  m.def(
      "compare",
      [](const py::dict& reference, const py::dict& candidate,
         bool include_glitches) {
        const DeviationReport rep = compare(
            trace_from_dict(reference), trace_from_dict(candidate),
            include_glitches);
        py::dict out;
        out["leading_area_s"] = rep.leading_area;
        out["trailing_area_s"] = rep.trailing_area;
        out["net_area_per_transition_s"] = rep.net_area_per_transition;
        out["transition_count"] = rep.transition_count;
        py::dict g;
        g["original_suppressed"] = rep.glitches.original_suppressed;
        g["original_induced"] = rep.glitches.original_induced;
        g["inverted_suppressed"] = rep.glitches.inverted_suppressed;
        g["inverted_induced"] = rep.glitches.inverted_induced;
        out["glitches"] = g;
        out["glitch_rate"] = rep.glitch_rate;
        out["glitches_included"] = rep.glitches_included;
        out["greedy_pairing_ambiguous"] = rep.greedy_pairing_ambiguous;
        return out;
      },
      py::arg("reference"), py::arg("candidate"),
      py::arg("include_glitches") = false,
      "Deviation metrics between a candidate and a reference trace dict.");
}
