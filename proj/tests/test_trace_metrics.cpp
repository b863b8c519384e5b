#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "hybridtime/trace_metrics.hpp"

using namespace hybridtime;

namespace {

Trace make_trace(int initial, std::vector<double> times) {
  Trace tr;
  tr.initial_level = initial;
  tr.t_start = 0.0;
  int level = initial;
  for (double t : times) {
    level = 1 - level;
    tr.transitions.push_back({t, level});
  }
  return tr;
}

// Straightforward XOR-area integral over the merged breakpoints.
double xor_area(const Trace& a, const Trace& b, double t_end) {
  std::vector<double> pts = {0.0, t_end};
  for (const auto& tr : a.transitions) pts.push_back(tr.time);
  for (const auto& tr : b.transitions) pts.push_back(tr.time);
  std::sort(pts.begin(), pts.end());
  double area = 0.0;
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    const double mid = 0.5 * (pts[i] + pts[i + 1]);
    if (a.level_at(mid) != b.level_at(mid)) area += pts[i + 1] - pts[i];
  }
  return area;
}

}  // namespace

TEST_CASE("identical traces produce an all-zero report") {
  const Trace tr = make_trace(0, {1e-12, 2e-12, 5e-12});
  const DeviationReport rep = compare(tr, tr);
  CHECK(rep.leading_area == 0.0);
  CHECK(rep.trailing_area == 0.0);
  CHECK(rep.net_area_per_transition == 0.0);
  CHECK(rep.glitches.total() == 0);
  CHECK(rep.transition_count == 3);
  CHECK(!rep.greedy_pairing_ambiguous);
}

TEST_CASE("uniform lag shows up as trailing area and per-transition shift") {
  const double d = 0.5e-12;
  std::vector<double> times = {1e-12, 3e-12, 7e-12, 9e-12, 14e-12, 20e-12};
  const Trace ref = make_trace(0, times);
  std::vector<double> shifted;
  for (double t : times) shifted.push_back(t + d);
  const Trace cand = make_trace(0, shifted);

  const DeviationReport rep = compare(ref, cand);
  CHECK(rep.leading_area == doctest::Approx(0.0));
  CHECK(rep.trailing_area == doctest::Approx(6 * d).epsilon(1e-12));
  CHECK(rep.net_area_per_transition == doctest::Approx(-d).epsilon(1e-12));
  CHECK(rep.glitches.total() == 0);

  // the candidate running early flips the sign
  const DeviationReport rev = compare(cand, ref);
  CHECK(rev.trailing_area == doctest::Approx(0.0));
  CHECK(rev.net_area_per_transition == doctest::Approx(d).epsilon(1e-12));
}

TEST_CASE("original suppressed and induced glitches") {
  const Trace ref = make_trace(0, {1e-12, 2e-12});  // lone pulse
  const Trace cand = make_trace(0, {});

  DeviationReport rep = compare(ref, cand);
  CHECK(rep.glitches.original_suppressed == 1);
  CHECK(rep.glitches.original_induced == 0);
  CHECK(rep.leading_area == 0.0);
  CHECK(rep.trailing_area == 0.0);  // glitch area excluded by default

  rep = compare(ref, cand, /*include_glitches=*/true);
  CHECK(rep.trailing_area == doctest::Approx(1e-12));

  const DeviationReport swapped = compare(cand, ref, true);
  CHECK(swapped.glitches.original_induced == 1);
  CHECK(swapped.glitches.original_suppressed == 0);
  CHECK(swapped.leading_area == doctest::Approx(1e-12));
  CHECK(swapped.glitch_rate == doctest::Approx(0.5));  // 1 glitch, 2 cand edges
}

TEST_CASE("inverted glitch attribution to the containing trace") {
  const Trace ref = make_trace(0, {1e-12, 3e-12});
  const Trace cand = make_trace(0, {1.5e-12, 2.5e-12});

  DeviationReport rep = compare(ref, cand);
  CHECK(rep.glitches.inverted_suppressed == 1);
  CHECK(rep.glitches.inverted_induced == 0);
  CHECK(rep.leading_area == 0.0);
  CHECK(rep.trailing_area == 0.0);
  CHECK(!rep.greedy_pairing_ambiguous);

  rep = compare(ref, cand, true);
  // the leading margin opens on the reference side, the closing margin on
  // the candidate side
  CHECK(rep.trailing_area == doctest::Approx(0.5e-12));
  CHECK(rep.leading_area == doctest::Approx(0.5e-12));

  const DeviationReport swapped = compare(cand, ref);
  CHECK(swapped.glitches.inverted_induced == 1);
  CHECK(swapped.glitches.inverted_suppressed == 0);
}

TEST_CASE("swap symmetry") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> gap(0.2e-12, 3e-12);
  for (int rep_i = 0; rep_i < 20; ++rep_i) {
    auto rand_times = [&] {
      std::vector<double> v;
      double t = 0.0;
      const int n = 2 + static_cast<int>(rng() % 10);
      for (int k = 0; k < n; ++k) v.push_back(t += gap(rng));
      return v;
    };
    const Trace a = make_trace(0, rand_times());
    const Trace b = make_trace(0, rand_times());
    for (bool inc : {false, true}) {
      const DeviationReport ab = compare(a, b, inc);
      const DeviationReport ba = compare(b, a, inc);
      CHECK(ab.leading_area == doctest::Approx(ba.trailing_area));
      CHECK(ab.trailing_area == doctest::Approx(ba.leading_area));
      CHECK(ab.glitches.original_suppressed == ba.glitches.original_induced);
      CHECK(ab.glitches.original_induced == ba.glitches.original_suppressed);
      CHECK(ab.glitches.inverted_suppressed == ba.glitches.inverted_induced);
      CHECK(ab.glitches.inverted_induced == ba.glitches.inverted_suppressed);
    }
  }
}

TEST_CASE("total area matches a grid integration when glitches are included") {
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> gap(0.2e-12, 3e-12);
  for (int rep_i = 0; rep_i < 20; ++rep_i) {
    auto rand_times = [&] {
      std::vector<double> v;
      double t = 0.0;
      // even count: both traces return to the initial level, so no
      // deviation interval is left open at the end
      const int n = 2 * (1 + static_cast<int>(rng() % 6));
      for (int k = 0; k < n; ++k) v.push_back(t += gap(rng));
      return v;
    };
    const Trace a = make_trace(0, rand_times());
    const Trace b = make_trace(0, rand_times());
    const DeviationReport rep = compare(a, b, true);
    const double want = xor_area(a, b, 100e-12);
    CHECK(rep.leading_area + rep.trailing_area ==
          doctest::Approx(want).epsilon(1e-9));
  }
}

TEST_CASE("mismatch diagnostics") {
  Trace a = make_trace(0, {1e-12});
  Trace b = make_trace(1, {2e-12});
  CHECK_THROWS_AS(compare(a, b), ValidationError);  // initial levels differ

  a = make_trace(0, {1e-12});
  b = make_trace(0, {2e-12});
  a.net = "x";
  b.net = "y";
  CHECK_THROWS_AS(compare(a, b), ValidationError);  // different nets
  b.net = "";  // unnamed candidate is acceptable
  CHECK_NOTHROW(compare(a, b));
}

TEST_CASE("unexplained count mismatch is flagged") {
  const Trace ref = make_trace(0, {1e-12});  // single edge, never comes back
  const Trace cand = make_trace(0, {});
  const DeviationReport rep = compare(ref, cand);
  CHECK(rep.greedy_pairing_ambiguous);
  CHECK(rep.glitches.total() == 0);
}
