#include <doctest.h>

#include <cmath>
#include <limits>

#include "hybridtime/netlist.hpp"
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
  g.baseline.d_fall = 3.4e-12;
  g.baseline.d_rise = 3.3e-12;
  return g;
}

Netlist single_gate() {
  Netlist n;
  n.gates = {make_gate("g0", GateKind::nor2, "x", "y", "z")};
  n.inputs = {"x", "y"};
  n.outputs = {"z"};
  return n;
}

Netlist cross_coupled() {
  Netlist n;
  n.gates = {make_gate("g0", GateKind::nor2, "set", "q_bar", "q"),
             make_gate("g1", GateKind::nor2, "q", "reset", "q_bar")};
  n.inputs = {"set", "reset"};
  n.outputs = {"q", "q_bar"};
  return n;
}

}  // namespace

TEST_CASE("valid netlists pass validation") {
  CHECK_NOTHROW(single_gate().validate());
  // a cross-coupled latch is a legal cycle as long as d_min > 0
  CHECK_NOTHROW(cross_coupled().validate());
}

TEST_CASE("cycle detection") {
  Netlist n = cross_coupled();
  const auto cyc = n.gates_on_cycles();
  CHECK(cyc.size() == 2);
  CHECK(single_gate().gates_on_cycles().empty());

  // zero pure delay on a cycle is rejected
  n.gates[0].params.d_min = 0.0;
  CHECK_THROWS_AS(n.validate(), ValidationError);
  // ... but is fine off-cycle
  Netlist s = single_gate();
  s.gates[0].params.d_min = 0.0;
  CHECK_NOTHROW(s.validate());
}

TEST_CASE("structural errors") {
  Netlist n = single_gate();
  n.gates.push_back(make_gate("g1", GateKind::nand2, "x", "y", "z"));
  CHECK_THROWS_AS(n.validate(), ValidationError);  // two drivers of z

  n = single_gate();
  n.gates.push_back(make_gate("g0", GateKind::nand2, "x", "y", "w"));
  n.outputs.push_back("w");
  CHECK_THROWS_AS(n.validate(), ValidationError);  // duplicate id

  n = single_gate();
  n.gates[0].in_b = "nowhere";
  CHECK_THROWS_AS(n.validate(), ValidationError);  // dangling input

  n = single_gate();
  n.outputs.push_back("missing");
  CHECK_THROWS_AS(n.validate(), ValidationError);  // undriven output

  n = single_gate();
  n.inputs.push_back(kConst1);
  CHECK_THROWS_AS(n.validate(), ValidationError);  // shadows a constant

  n = single_gate();
  n.gates[0].out = kConst0;
  CHECK_THROWS_AS(n.validate(), ValidationError);  // drives a constant
}

TEST_CASE("constant nets count as driven") {
  Netlist n;
  n.gates = {make_gate("inv", GateKind::nor2, "x", kConst0, "y")};
  n.inputs = {"x"};
  n.outputs = {"y"};
  CHECK_NOTHROW(n.validate());
}

TEST_CASE("json round trip") {
  Netlist n = cross_coupled();
  n.gates[1].model = GateModel::inertial;
  n.gates[1].baseline.inertial_window = 1e-12;
  const Netlist back = netlist_from_json_text(netlist_to_json_text(n));
  REQUIRE(back.gates.size() == 2);
  CHECK(back.gates[0].id == "g0");
  CHECK(back.gates[0].kind == GateKind::nor2);
  CHECK(back.gates[1].model == GateModel::inertial);
  CHECK(back.gates[1].baseline.inertial_window == 1e-12);
  CHECK(back.gates[0].params.r_na == n.gates[0].params.r_na);
  CHECK(back.inputs == n.inputs);
  CHECK(back.outputs == n.outputs);
}

TEST_CASE("json defaults and errors") {
  const std::string params = gate_params_to_json_text(tt::table6_params());
  const std::string text = R"({
    "gates": [{"id": "g0", "kind": "nor2", "a": "x", "b": "y", "out": "z",
               "params": )" + params + R"(}],
    "inputs": ["x", "y"],
    "outputs": ["z"]
  })";
  const Netlist n = netlist_from_json_text(text);
  CHECK(n.gates[0].model == GateModel::hybrid);
  // baseline delays default to the characterized single-transition limits
  const GateParams p = tt::table6_params();
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(n.gates[0].baseline.d_fall == mis_delay_falling(p, inf));
  CHECK(n.gates[0].baseline.d_rise == mis_delay_rising(p, inf));

  CHECK_THROWS_AS(netlist_from_json_text("{"), ValidationError);
  CHECK_THROWS_AS(netlist_from_json_text("{\"gates\": []}"), ValidationError);
  const std::string bad_kind = R"({
    "gates": [{"id": "g0", "kind": "xor2", "a": "x", "b": "y", "out": "z",
               "params": )" + params + R"(}],
    "inputs": ["x", "y"], "outputs": ["z"]
  })";
  CHECK_THROWS_AS(netlist_from_json_text(bad_kind), ValidationError);
}

TEST_CASE("stimuli: zero sigma is exactly periodic") {
  StimulusSpec spec;
  spec.mu = 2e-12;
  spec.sigma = 0.0;
  spec.n = 5;
  spec.seed = 1;
  const auto res = generate_stimuli(spec, {"x"});
  REQUIRE(res.traces.size() == 1);
  const Trace& tr = res.traces[0];
  CHECK(tr.initial_level == 0);
  REQUIRE(tr.transitions.size() == 5);
  for (int k = 0; k < 5; ++k) {
    CHECK(tr.transitions[k].time == doctest::Approx((k + 1) * 2e-12));
    CHECK(tr.transitions[k].level == (k + 1) % 2);
  }
  CHECK(res.truncation_rate == 0.0);
}

TEST_CASE("stimuli: deterministic per seed, distinct across inputs") {
  StimulusSpec spec;
  spec.mu = 5e-12;
  spec.sigma = 2e-12;
  spec.n = 50;
  spec.seed = 42;
  const auto a = generate_stimuli(spec, {"x", "y"});
  const auto b = generate_stimuli(spec, {"x", "y"});
  CHECK(a.traces[0] == b.traces[0]);
  CHECK(a.traces[1] == b.traces[1]);
  CHECK(a.traces[0].transitions != a.traces[1].transitions);
  spec.seed = 43;
  const auto c = generate_stimuli(spec, {"x", "y"});
  CHECK(c.traces[0].transitions != a.traces[0].transitions);
}

TEST_CASE("stimuli: empirical gap mean approaches mu") {
  StimulusSpec spec;
  spec.mu = 10e-12;
  spec.sigma = 1e-12;
  spec.n = 20000;
  spec.seed = 7;
  const auto res = generate_stimuli(spec, {"x"});
  const Trace& tr = res.traces[0];
  const double mean = tr.transitions.back().time / spec.n;
  CHECK(std::abs(mean - spec.mu) < 5.0 * spec.sigma / std::sqrt(spec.n));
  CHECK(res.truncation_rate == 0.0);  // 10 sigma away from the floor
}

TEST_CASE("stimuli: floor clamps and reports truncation") {
  StimulusSpec spec;
  spec.mu = 0.05e-12;  // below the default 0.1 ps floor
  spec.sigma = 0.0;
  spec.n = 10;
  const auto res = generate_stimuli(spec, {"x"});
  CHECK(res.truncation_rate == 1.0);
  CHECK(res.traces[0].transitions[0].time == spec.floor);
  CHECK_NOTHROW(res.traces[0].validate());

  spec.mu = 0.0;
  CHECK_THROWS_AS(generate_stimuli(spec, {"x"}), ValidationError);
}
