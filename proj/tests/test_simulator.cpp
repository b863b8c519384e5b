#include <doctest.h>

#include <cmath>
#include <limits>

#include "hybridtime/simulator.hpp"
#include "oracles.hpp"

using namespace hybridtime;
namespace tt = hybridtime::testing;

namespace {

Gate make_gate(const std::string& id, GateKind kind, const std::string& a,
               const std::string& b, const std::string& out) {
  Gate g;
  g.id = id;
  g.kind = kind;
  g.in_a = a;
  g.in_b = b;
  g.out = out;
  g.params = tt::table6_params();
  return g;
}

Trace stim(const std::string& net, int initial, std::vector<double> times) {
  Trace tr;
  tr.net = net;
  tr.initial_level = initial;
  tr.t_start = 0.0;
  int level = initial;
  for (double t : times) {
    level = 1 - level;
    tr.transitions.push_back({t, level});
  }
  return tr;
}

Netlist single_nor() {
  Netlist n;
  n.gates = {make_gate("g0", GateKind::nor2, "x", "y", "z")};
  n.inputs = {"x", "y"};
  n.outputs = {"z"};
  return n;
}

}  // namespace

TEST_CASE("single gate simulation matches the standalone channel") {
  const Netlist n = single_nor();
  const std::vector<Trace> stimuli = {
      stim("x", 0, {1e-12, 6e-12, 30e-12, 55e-12}),
      stim("y", 0, {12e-12, 40e-12})};
  const SimulationResult res = run(n, stimuli);

  InputSequence s;
  s.initial_a = 0;
  s.initial_b = 0;
  s.t0 = -std::numeric_limits<double>::infinity();
  // merged event order of the two stimuli above
  s.events = {{InputPort::A, Edge::rise, 1e-12},
              {InputPort::A, Edge::fall, 6e-12},
              {InputPort::B, Edge::rise, 12e-12},
              {InputPort::A, Edge::rise, 30e-12},
              {InputPort::B, Edge::fall, 40e-12},
              {InputPort::A, Edge::fall, 55e-12}};
  const ProcessResult ref = process_sequence(tt::table6_params(),
                                             GateKind::nor2, s);

  const Trace& z = res.traces.at("z");
  CHECK(z.initial_level == ref.initial_level);
  REQUIRE(z.transitions.size() == ref.real.size());
  for (size_t i = 0; i < ref.real.size(); ++i) {
    CHECK(z.transitions[i].time == ref.real[i].time);
    CHECK(z.transitions[i].level == ref.real[i].level);
  }
  CHECK(res.stats.real_outputs == static_cast<long>(ref.real.size()));
  // input nets are recorded too
  CHECK(res.traces.at("x").transitions.size() == 4);
}

TEST_CASE("simulation is deterministic") {
  const Netlist n = single_nor();
  const std::vector<Trace> stimuli = {stim("x", 0, {1e-12, 6e-12, 30e-12}),
                                      stim("y", 0, {12e-12})};
  const SimulationResult a = run(n, stimuli);
  const SimulationResult b = run(n, stimuli);
  CHECK(a.traces == b.traces);
  CHECK(a.stats.events_processed == b.stats.events_processed);
  CHECK(a.stats.real_outputs == b.stats.real_outputs);
  CHECK(a.stats.virtual_outputs == b.stats.virtual_outputs);
  CHECK(a.stats.cancellations == b.stats.cancellations);
}

TEST_CASE("inverter chain is translation invariant") {
  const int stages = 50;
  Netlist n;
  n.inputs = {"n0"};
  for (int i = 0; i < stages; ++i) {
    n.gates.push_back(make_gate("inv" + std::to_string(i), GateKind::nor2,
                                "n" + std::to_string(i), kConst0,
                                "n" + std::to_string(i + 1)));
  }
  n.outputs = {"n" + std::to_string(stages)};

  const double shift = 1e-9;
  const SimulationResult a = run(n, {stim("n0", 0, {5e-12, 45e-12})});
  const SimulationResult b =
      run(n, {stim("n0", 0, {5e-12 + shift, 45e-12 + shift})});

  const Trace& ta = a.traces.at(n.outputs[0]);
  const Trace& tb = b.traces.at(n.outputs[0]);
  CHECK(!ta.transitions.empty());
  REQUIRE(ta.transitions.size() == tb.transitions.size());
  for (size_t i = 0; i < ta.transitions.size(); ++i) {
    CHECK(std::abs((tb.transitions[i].time - shift) -
                   ta.transitions[i].time) < 1e-20);
    CHECK(tb.transitions[i].level == ta.transitions[i].level);
  }
}

TEST_CASE("cross-coupled nor latch sets and resets") {
  Netlist n;
  n.gates = {make_gate("g0", GateKind::nor2, "set", "q_bar", "q"),
             make_gate("g1", GateKind::nor2, "q", "reset", "q_bar")};
  n.inputs = {"set", "reset"};
  n.outputs = {"q", "q_bar"};

  const std::vector<Trace> stimuli = {
      stim("set", 0, {100e-12, 120e-12}),
      stim("reset", 0, {300e-12, 320e-12})};
  const SimulationResult res = run(n, stimuli);

  const Trace& q = res.traces.at("q");
  const Trace& qb = res.traces.at("q_bar");
  // the settled pre-stimulus state has q high
  CHECK(q.initial_level == 1);
  CHECK(qb.initial_level == 0);
  // the set pulse flips the latch ...
  CHECK(q.level_at(200e-12) == 0);
  CHECK(qb.level_at(200e-12) == 1);
  // ... and the reset pulse flips it back
  CHECK(q.level_at(400e-12) == 1);
  CHECK(qb.level_at(400e-12) == 0);
  CHECK(res.stats.real_outputs >= 4);
}

TEST_CASE("t_end cuts the simulation off") {
  const Netlist n = single_nor();
  SimOptions opt;
  opt.t_end = 10e-12;
  const SimulationResult res =
      run(n, {stim("x", 0, {1e-12, 30e-12}), stim("y", 0, {})}, opt);
  const Trace& z = res.traces.at("z");
  REQUIRE(z.transitions.size() == 1);  // only the first output edge fits
  CHECK(z.transitions[0].time < 10e-12);
}

TEST_CASE("stimulus coverage is checked") {
  const Netlist n = single_nor();
  CHECK_THROWS_AS(run(n, {stim("x", 0, {1e-12})}), ValidationError);
  CHECK_THROWS_AS(run(n, {stim("x", 0, {}), stim("y", 0, {}),
                          stim("zz", 0, {})}),
                  ValidationError);
  CHECK_THROWS_AS(run(n, {stim("x", 0, {}), stim("x", 0, {}),
                          stim("y", 0, {})}),
                  ValidationError);
}

TEST_CASE("runaway oscillation trips the event guard") {
  // q = NOR(en, q) with a pure 1 ps delay free-runs once en drops
  Netlist n;
  Gate g = make_gate("osc", GateKind::nor2, "en", "q", "q");
  g.model = GateModel::pure;
  g.baseline.d_rise = 1e-12;
  g.baseline.d_fall = 1e-12;
  n.gates = {g};
  n.inputs = {"en"};
  n.outputs = {"q"};

  SimOptions opt;
  opt.max_events_per_net = 50;
  CHECK_THROWS_AS(run(n, {stim("en", 1, {1e-12})}, opt), NumericError);
}

TEST_CASE("sweep runs the grid deterministically, serial and threaded") {
  const Netlist n = single_nor();
  StimulusSpec base;
  base.mu = 10e-12;
  base.sigma = 3e-12;
  base.n = 40;
  base.seed = 5;
  const std::vector<SweepPoint> grid = {{10e-12, 3e-12}, {20e-12, 1e-12}};

  const SweepReport serial = sweep(n, base, grid, 3);
  REQUIRE(serial.runs.size() == 6);
  for (size_t i = 0; i < serial.runs.size(); ++i) {
    CHECK(serial.runs[i].ok);
    CHECK(serial.runs[i].seed == base.seed + i);
  }
  CHECK(serial.runs[0].point.mu == 10e-12);
  CHECK(serial.runs[5].point.mu == 20e-12);
  CHECK(serial.mean_real_outputs > 0.0);

  const SweepReport threaded = sweep(n, base, grid, 3, {}, 4);
  REQUIRE(threaded.runs.size() == 6);
  for (size_t i = 0; i < serial.runs.size(); ++i) {
    CHECK(threaded.runs[i].seed == serial.runs[i].seed);
    CHECK(threaded.runs[i].stats.real_outputs ==
          serial.runs[i].stats.real_outputs);
    CHECK(threaded.runs[i].stats.events_processed ==
          serial.runs[i].stats.events_processed);
  }
  CHECK(threaded.mean_real_outputs == serial.mean_real_outputs);
  CHECK(threaded.stddev_real_outputs == serial.stddev_real_outputs);
}
