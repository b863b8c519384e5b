#include <doctest.h>

#include <string>

#include "hybridtime/trace.hpp"

using namespace hybridtime;

namespace {

Trace sample_trace() {
  Trace tr;
  tr.net = "y";
  tr.initial_level = 0;
  tr.t_start = 0.0;
  tr.transitions = {{1.5e-12, 1}, {4.0e-12, 0}, {9.25e-12, 1}};
  return tr;
}

}  // namespace

TEST_CASE("trace validation") {
  Trace tr = sample_trace();
  CHECK_NOTHROW(tr.validate());

  tr.transitions[1].level = 1;  // no alternation
  CHECK_THROWS_AS(tr.validate(), ValidationError);

  tr = sample_trace();
  tr.transitions[2].time = 2e-12;  // out of order
  CHECK_THROWS_AS(tr.validate(), ValidationError);

  tr = sample_trace();
  tr.transitions[0].time = -1e-12;  // before t_start
  CHECK_THROWS_AS(tr.validate(), ValidationError);

  tr = sample_trace();
  tr.initial_level = 2;
  CHECK_THROWS_AS(tr.validate(), ValidationError);

  // a transition exactly at t_start is allowed
  tr = sample_trace();
  tr.transitions[0].time = 0.0;
  CHECK_NOTHROW(tr.validate());
}

TEST_CASE("level queries") {
  const Trace tr = sample_trace();
  CHECK(tr.level_before(1.0e-12) == 0);
  CHECK(tr.level_before(1.5e-12) == 0);  // change takes effect at its time
  CHECK(tr.level_at(1.5e-12) == 1);
  CHECK(tr.level_at(5.0e-12) == 0);
  CHECK(tr.level_at(1.0e-9) == 1);
  CHECK(tr.level_before(-1.0) == 0);
}

TEST_CASE("csv round trip") {
  const Trace tr = sample_trace();
  const std::string text = trace_to_csv_text(tr);
  CHECK(text.substr(0, 13) == "time_s,level\n");
  const Trace back = trace_from_csv_text(text, "y");
  CHECK(back == tr);
}

TEST_CASE("csv parse errors carry line numbers") {
  using doctest::Contains;
  CHECK_THROWS_WITH_AS(trace_from_csv_text("bogus\n", "n"),
                       Contains("line 1"), ValidationError);
  CHECK_THROWS_WITH_AS(
      trace_from_csv_text("time_s,level\n0,0\nnope,1\n", "n"),
      Contains("line 3"), ValidationError);
  CHECK_THROWS_AS(trace_from_csv_text("time_s,level\n0,2\n", "n"),
                  ValidationError);
  CHECK_THROWS_AS(trace_from_csv_text("", "n"), ValidationError);
  CHECK_THROWS_AS(trace_from_csv_text("time_s,level\n", "n"),
                  ValidationError);
}

TEST_CASE("csv tolerates blank lines and CRLF") {
  const Trace tr =
      trace_from_csv_text("time_s,level\r\n\r\n0,1\r\n2e-12,0\r\n", "n");
  CHECK(tr.initial_level == 1);
  CHECK(tr.transitions.size() == 1);
  CHECK(tr.transitions[0].time == 2e-12);
}

TEST_CASE("vcd round trip with multiple signals") {
  Trace a = sample_trace();
  a.net = "a";
  Trace b;
  b.net = "b";
  b.initial_level = 1;
  b.t_start = 0.0;
  b.transitions = {{2.0e-12, 0}};
  const std::string text = traces_to_vcd_text({a, b});
  const auto back = traces_from_vcd_text(text);
  REQUIRE(back.size() == 2);
  CHECK(back[0].net == "a");
  CHECK(back[1].net == "b");
  CHECK(back[0].initial_level == 0);
  CHECK(back[1].initial_level == 1);
  REQUIRE(back[0].transitions.size() == 3);
  // femtosecond quantization
  CHECK(back[0].transitions[2].time == doctest::Approx(9.25e-12).epsilon(1e-9));
  CHECK(back[1].transitions[0].time == doctest::Approx(2.0e-12).epsilon(1e-9));
}

TEST_CASE("vcd timescale scaling") {
  const std::string text =
      "$timescale 10ps $end\n"
      "$var wire 1 ! y $end\n"
      "$enddefinitions $end\n"
      "#0\n0!\n#5\n1!\n";
  const auto traces = traces_from_vcd_text(text);
  REQUIRE(traces.size() == 1);
  CHECK(traces[0].transitions.size() == 1);
  CHECK(traces[0].transitions[0].time == doctest::Approx(50e-12));
}

TEST_CASE("vcd rejects unsupported content") {
  CHECK_THROWS_AS(
      traces_from_vcd_text("$timescale 1fs $end\n$var wire 1 ! y $end\n"
                           "$enddefinitions $end\n#0\nx!\n"),
      ValidationError);
  CHECK_THROWS_AS(
      traces_from_vcd_text("$timescale 1fs $end\n$var wire 8 ! y $end\n"),
      ValidationError);
  CHECK_THROWS_AS(
      traces_from_vcd_text("$var wire 1 ! y $end\n#0\n0!\n"),
      ValidationError);  // missing timescale
  CHECK_THROWS_AS(
      traces_from_vcd_text("$timescale 1fs $end\n#0\n0?\n"),
      ValidationError);  // unknown id
}

TEST_CASE("vcd repeated identical values collapse") {
  const std::string text =
      "$timescale 1fs $end\n$var wire 1 ! y $end\n$enddefinitions $end\n"
      "#0\n0!\n#10\n0!\n#20\n1!\n";
  const auto traces = traces_from_vcd_text(text);
  REQUIRE(traces.size() == 1);
  CHECK(traces[0].transitions.size() == 1);
  CHECK(traces[0].transitions[0].time == doctest::Approx(20e-15));
}

TEST_CASE("empty trace survives both formats") {
  Trace tr;
  tr.net = "idle";
  tr.initial_level = 1;
  tr.t_start = 5e-12;
  CHECK(trace_from_csv_text(trace_to_csv_text(tr), "idle") == tr);
  const auto back = traces_from_vcd_text(traces_to_vcd_text({tr}));
  REQUIRE(back.size() == 1);
  CHECK(back[0].initial_level == 1);
  CHECK(back[0].transitions.empty());
}
