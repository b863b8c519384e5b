#include "hybridtime/trace_metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <vector>

#include <json.hpp>

namespace hybridtime {

namespace {

bool any_in_closed(const std::vector<Transition>& v, double lo, double hi) {
  auto it = std::lower_bound(
      v.begin(), v.end(), lo,
      [](const Transition& tr, double t) { return tr.time < t; });
  return it != v.end() && it->time <= hi;
}

// Indices of transitions strictly inside (lo, hi).
std::pair<size_t, size_t> range_inside(const std::vector<Transition>& v,
                                       double lo, double hi) {
  auto first = std::upper_bound(
      v.begin(), v.end(), lo,
      [](double t, const Transition& tr) { return t < tr.time; });
  auto last = std::lower_bound(
      v.begin(), v.end(), hi,
      [](const Transition& tr, double t) { return tr.time < t; });
  return {static_cast<size_t>(first - v.begin()),
          static_cast<size_t>(last - v.begin())};
}

}  // namespace

DeviationReport compare(const Trace& reference, const Trace& candidate,
                        bool include_glitches) {
  reference.validate();
  candidate.validate();
  if (!reference.net.empty() && !candidate.net.empty() &&
      reference.net != candidate.net) {
    throw ValidationError("compare: traces are for different nets ('" +
                          reference.net + "' vs '" + candidate.net + "')");
  }
  if (reference.initial_level != candidate.initial_level) {
    throw ValidationError("compare: initial-level mismatch (gross mismatch)");
  }

  const auto& rt = reference.transitions;
  const auto& ct = candidate.transitions;
  DeviationReport rep;
  rep.transition_count = static_cast<int>(ct.size());
  rep.glitches_included = include_glitches;

  std::vector<bool> r_used(rt.size(), false), c_used(ct.size(), false);

  // Deviation intervals caused by classified glitches; excluded from the
  // areas unless include_glitches. Endpoints are exact transition times.
  std::set<std::pair<double, double>> excluded;

  // pass 1: original glitches — a pulse in one trace with no transition of
  // the other in [t1, t2], starting from and returning to the other's level
  const auto scan_original = [&](const Trace& x, const Trace& y,
                                 std::vector<bool>& used, int& counter) {
    const auto& xt = x.transitions;
    for (size_t i = 0; i + 1 < xt.size(); ++i) {
      if (used[i] || used[i + 1]) continue;
      const double t1 = xt[i].time, t2 = xt[i + 1].time;
      const int base = 1 - xt[i].level;
      if (any_in_closed(y.transitions, t1, t2)) continue;
      if (y.level_at(t1) != base) continue;
      used[i] = used[i + 1] = true;
      ++counter;
      excluded.insert({t1, t2});
      ++i;
    }
  };
  scan_original(reference, candidate, r_used, rep.glitches.original_suppressed);
  scan_original(candidate, reference, c_used, rep.glitches.original_induced);

  // pass 2: inverted glitches — a pulse properly containing a pulse of the
  // other trace; attributed to the containing trace. Container pulses from
  // both traces are consumed in chronological order so the classification is
  // independent of the argument order (swap symmetry).
  struct Container {
    double t1, t2;
    bool from_ref;
    size_t i;  // index of the container pulse's first transition
  };
  std::vector<Container> containers;
  for (size_t i = 0; i + 1 < rt.size(); ++i) {
    containers.push_back({rt[i].time, rt[i + 1].time, true, i});
  }
  for (size_t i = 0; i + 1 < ct.size(); ++i) {
    containers.push_back({ct[i].time, ct[i + 1].time, false, i});
  }
  std::sort(containers.begin(), containers.end(),
            [](const Container& a, const Container& b) {
              if (a.t1 != b.t1) return a.t1 < b.t1;
              return a.t2 < b.t2;
            });
  for (const Container& cont : containers) {
    const Trace& x = cont.from_ref ? reference : candidate;
    const Trace& y = cont.from_ref ? candidate : reference;
    std::vector<bool>& xu = cont.from_ref ? r_used : c_used;
    std::vector<bool>& yu = cont.from_ref ? c_used : r_used;
    const auto& xt = x.transitions;
    const auto& yt = y.transitions;
    const size_t i = cont.i;
    if (xu[i] || xu[i + 1]) continue;
    const double t1 = cont.t1, t2 = cont.t2;
    const int base = 1 - xt[i].level;
    const auto [j0, j1] = range_inside(yt, t1, t2);
    if (j1 - j0 != 2) continue;
    if (yu[j0] || yu[j0 + 1]) continue;
    if (yt[j0].level != xt[i].level) continue;  // same-polarity pulse
    if (y.level_at(t1) != base) continue;
    xu[i] = xu[i + 1] = true;
    yu[j0] = yu[j0 + 1] = true;
    ++(cont.from_ref ? rep.glitches.inverted_suppressed
                     : rep.glitches.inverted_induced);
    excluded.insert({t1, yt[j0].time});
    excluded.insert({yt[j0 + 1].time, t2});
  }

  // exact XOR walk over the merged transition lists
  size_t i = 0, j = 0;
  int rlev = reference.initial_level, clev = candidate.initial_level;
  bool dev = false;
  double dev_start = 0.0;
  bool opener_is_candidate = false;
  while (i < rt.size() || j < ct.size()) {
    const bool take_ref =
        j >= ct.size() || (i < rt.size() && rt[i].time <= ct[j].time);
    double t;
    bool from_candidate;
    if (take_ref) {
      t = rt[i].time;
      rlev = rt[i].level;
      from_candidate = false;
      ++i;
    } else {
      t = ct[j].time;
      clev = ct[j].level;
      from_candidate = true;
      ++j;
    }
    const bool new_dev = rlev != clev;
    if (new_dev == dev) continue;
    if (new_dev) {
      dev_start = t;
      opener_is_candidate = from_candidate;
    } else {
      const double len = t - dev_start;
      if (include_glitches || !excluded.count({dev_start, t})) {
        (opener_is_candidate ? rep.leading_area : rep.trailing_area) += len;
      }
    }
    dev = new_dev;
  }

  if (rep.transition_count > 0) {
    rep.net_area_per_transition =
        (rep.leading_area - rep.trailing_area) / rep.transition_count;
    rep.glitch_rate =
        static_cast<double>(rep.glitches.total()) / rep.transition_count;
  }

  const long r_left = static_cast<long>(rt.size()) -
                      2L * (rep.glitches.original_suppressed +
                            rep.glitches.inverted_suppressed +
                            rep.glitches.inverted_induced);
  const long c_left = static_cast<long>(ct.size()) -
                      2L * (rep.glitches.original_induced +
                            rep.glitches.inverted_suppressed +
                            rep.glitches.inverted_induced);
  rep.greedy_pairing_ambiguous = r_left != c_left;
  return rep;
}

std::string DeviationReport::to_json() const {
  nlohmann::json j;
  j["leading_area_s"] = leading_area;
  j["trailing_area_s"] = trailing_area;
  j["net_area_per_transition_s"] = net_area_per_transition;
  j["transition_count"] = transition_count;
  j["glitches"] = {{"original_suppressed", glitches.original_suppressed},
                   {"original_induced", glitches.original_induced},
                   {"inverted_suppressed", glitches.inverted_suppressed},
                   {"inverted_induced", glitches.inverted_induced}};
  j["glitch_rate"] = glitch_rate;
  j["glitches_included"] = glitches_included;
  j["greedy_pairing_ambiguous"] = greedy_pairing_ambiguous;
  return j.dump(2) + "\n";
}

std::string DeviationReport::to_table() const {
  char buf[640];
  std::snprintf(
      buf, sizeof buf,
      "leading area          %14.6e s\n"
      "trailing area         %14.6e s\n"
      "net area / transition %14.6e s\n"
      "transitions           %10d\n"
      "glitches  orig supp   %10d\n"
      "          orig ind    %10d\n"
      "          inv  supp   %10d\n"
      "          inv  ind    %10d\n"
      "glitch rate           %14.6e\n"
      "glitches in areas     %10s\n",
      leading_area, trailing_area, net_area_per_transition, transition_count,
      glitches.original_suppressed, glitches.original_induced,
      glitches.inverted_suppressed, glitches.inverted_induced, glitch_rate,
      glitches_included ? "yes" : "no");
  std::string out = buf;
  if (greedy_pairing_ambiguous) {
    out += "note: transition counts differ beyond what the classified "
           "glitches explain\n";
  }
  return out;
}

}  // namespace hybridtime
