#include "hybridtime/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <queue>
#include <thread>

namespace hybridtime {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct QEvent {
  double time;
  int phase;     // 0: net change (commit + record), 1: gate delivery
  size_t actor;  // driver index for phase 0, sink gate index for phase 1
  int port;      // 0 = A, 1 = B (phase 1 only)
  uint64_t seq;
  int level;
  size_t handle;  // phase 0: cancellation handle, SIZE_MAX if none

  bool operator>(const QEvent& o) const {
    if (time != o.time) return time > o.time;
    if (phase != o.phase) return phase > o.phase;
    if (actor != o.actor) return actor > o.actor;
    if (port != o.port) return port > o.port;
    return seq > o.seq;
  }
};

int gate_eval(GateKind kind, int a, int b) {
  if (kind == GateKind::nand2) return (a == 1 && b == 1) ? 0 : 1;
  return (a == 0 && b == 0) ? 1 : 0;
}

}  // namespace

SimulationResult run(const Netlist& netlist, const std::vector<Trace>& stimuli,
                     const SimOptions& options) {
  const auto t0_wall = std::chrono::steady_clock::now();
  netlist.validate();

  std::map<std::string, const Trace*> stim_by_net;
  for (const Trace& tr : stimuli) {
    tr.validate();
    if (!stim_by_net.emplace(tr.net, &tr).second) {
      throw ValidationError("simulate: duplicate stimulus for net " + tr.net);
    }
  }
  for (const std::string& in : netlist.inputs) {
    if (!stim_by_net.count(in)) {
      throw ValidationError("simulate: missing stimulus for input " + in);
    }
  }
  if (stim_by_net.size() != netlist.inputs.size()) {
    throw ValidationError("simulate: stimuli given for non-input nets");
  }

  // settled initial net levels: inputs from stimuli, then relaxation sweeps
  // over the gates (cyclic latches settle in sweep order)
  std::map<std::string, int> level;
  level[kConst0] = 0;
  level[kConst1] = 1;
  for (const std::string& in : netlist.inputs) {
    level[in] = stim_by_net[in]->initial_level;
  }
  for (const Gate& g : netlist.gates) level.emplace(g.out, 0);
  for (size_t sweep = 0; sweep < netlist.gates.size() + 2; ++sweep) {
    bool changed = false;
    for (const Gate& g : netlist.gates) {
      const int lv = gate_eval(g.kind, level[g.in_a], level[g.in_b]);
      if (level[g.out] != lv) {
        level[g.out] = lv;
        changed = true;
      }
    }
    if (!changed) break;
  }

  // per-gate engines
  std::vector<std::unique_ptr<ChannelEngine>> hybrid(netlist.gates.size());
  std::vector<std::unique_ptr<BaselineChannel>> baseline(netlist.gates.size());
  for (size_t i = 0; i < netlist.gates.size(); ++i) {
    const Gate& g = netlist.gates[i];
    if (g.model == GateModel::hybrid) {
      hybrid[i] = std::make_unique<ChannelEngine>(g.params, g.kind);
      hybrid[i]->init(level[g.in_a], level[g.in_b], -kInf);
      level[g.out] = hybrid[i]->initial_output();
    } else {
      BaselineParams bp = g.baseline;
      if (g.model == GateModel::pure) bp.inertial_window = 0.0;
      baseline[i] = std::make_unique<BaselineChannel>(g.kind, bp);
      baseline[i]->init(level[g.in_a], level[g.in_b], -kInf);
      level[g.out] = baseline[i]->initial_output();
    }
  }

  // sinks per net, ordered (gate, port) for the A-before-B contract
  std::map<std::string, std::vector<std::pair<size_t, int>>> sinks;
  for (size_t i = 0; i < netlist.gates.size(); ++i) {
    sinks[netlist.gates[i].in_a].push_back({i, 0});
    sinks[netlist.gates[i].in_b].push_back({i, 1});
  }

  std::map<std::string, size_t> net_of_gate_out;
  SimulationResult res;
  for (const auto& [net, lv] : level) {
    if (net == kConst0 || net == kConst1) continue;
    Trace tr;
    tr.net = net;
    tr.initial_level = lv;
    tr.t_start = 0.0;
    res.traces[net] = tr;
  }

  std::priority_queue<QEvent, std::vector<QEvent>, std::greater<QEvent>> queue;
  std::vector<bool> dead;  // cancellation handles
  uint64_t seq = 0;

  // phase-0 actor ids: gates first, then stimuli in netlist input order
  std::map<std::string, size_t> actor_of_net;
  for (size_t i = 0; i < netlist.gates.size(); ++i) {
    actor_of_net[netlist.gates[i].out] = i;
  }
  for (size_t i = 0; i < netlist.inputs.size(); ++i) {
    actor_of_net[netlist.inputs[i]] = netlist.gates.size() + i;
    for (const Transition& tr : stim_by_net[netlist.inputs[i]]->transitions) {
      queue.push(QEvent{tr.time, 0, netlist.gates.size() + i, 0, seq++,
                        tr.level, SIZE_MAX});
    }
  }
  std::vector<std::string> net_of_actor(netlist.gates.size() +
                                        netlist.inputs.size());
  for (const auto& [net, a] : actor_of_net) net_of_actor[a] = net;

  // latest alive scheduled output handle per hybrid gate, and per-time
  // handles for baseline gates (they can revoke older entries)
  std::vector<size_t> last_handle(netlist.gates.size(), SIZE_MAX);
  std::vector<std::map<double, size_t>> baseline_handles(netlist.gates.size());

  std::map<std::string, long> events_per_net;

  const auto schedule_output = [&](size_t gate_idx, int lv, double t_o) {
    dead.push_back(false);
    const size_t h = dead.size() - 1;
    queue.push(QEvent{t_o, 0, gate_idx, 0, seq++, lv, h});
    return h;
  };

  while (!queue.empty()) {
    QEvent ev = queue.top();
    if (options.t_end > 0.0 && ev.time > options.t_end) break;
    queue.pop();
    ++res.stats.events_processed;

    if (ev.phase == 0) {
      if (ev.handle != SIZE_MAX && dead[ev.handle]) {
        continue;  // cancelled before its crossing
      }
      const std::string& net = net_of_actor[ev.actor];
      if (long& cnt = ++events_per_net[net];
          cnt > options.max_events_per_net) {
        throw NumericError("simulate: net '" + net + "' exceeded " +
                           std::to_string(options.max_events_per_net) +
                           " events (runaway oscillation?)");
      }
      level[net] = ev.level;
      res.traces[net].transitions.push_back({ev.time, ev.level});
      if (ev.actor < netlist.gates.size()) ++res.stats.real_outputs;
      auto it = sinks.find(net);
      if (it != sinks.end()) {
        for (const auto& [gi, port] : it->second) {
          queue.push(QEvent{ev.time, 1, gi, port, seq++, ev.level, SIZE_MAX});
        }
      }
      continue;
    }

    // phase 1: deliver to a gate input
    const size_t gi = ev.actor;
    InputTransition in;
    in.input = ev.port == 0 ? InputPort::A : InputPort::B;
    in.edge = ev.level == 1 ? Edge::rise : Edge::fall;
    in.time = ev.time;
    if (hybrid[gi]) {
      const FeedResult fr = hybrid[gi]->feed_event(in);
      if (fr.resolved && !fr.resolved->real) {
        ++res.stats.virtual_outputs;
        if (last_handle[gi] != SIZE_MAX && !dead[last_handle[gi]]) {
          dead[last_handle[gi]] = true;
          ++res.stats.cancellations;
        }
      }
      if (fr.scheduled.already_virtual) {
        last_handle[gi] = SIZE_MAX;
      } else {
        last_handle[gi] =
            schedule_output(gi, fr.scheduled.level, fr.scheduled.t_o);
      }
    } else {
      const BaselineFeed bf = baseline[gi]->feed_event(in);
      for (double tc : bf.cancelled_times) {
        auto hit = baseline_handles[gi].find(tc);
        if (hit != baseline_handles[gi].end()) {
          dead[hit->second] = true;
          baseline_handles[gi].erase(hit);
          ++res.stats.cancellations;
        }
      }
      if (bf.scheduled) {
        baseline_handles[gi][bf.scheduled->time] =
            schedule_output(gi, bf.scheduled->level, bf.scheduled->time);
      }
    }
  }

  for (auto& [net, tr] : res.traces) tr.validate();
  res.stats.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_wall)
          .count();
  return res;
}

SweepReport sweep(const Netlist& netlist, const StimulusSpec& base,
                  const std::vector<SweepPoint>& grid, int runs_per_point,
                  const SimOptions& options, int jobs) {
  SweepReport report;
  if (grid.empty() || runs_per_point <= 0) return report;
  std::vector<RunRecord> runs;
  unsigned long long seed = base.seed;
  for (const SweepPoint& pt : grid) {
    for (int r = 0; r < runs_per_point; ++r) {
      RunRecord rec;
      rec.point = pt;
      rec.seed = seed++;
      runs.push_back(rec);
    }
  }

  const auto work = [&](RunRecord& rec) {
    try {
      StimulusSpec spec = base;
      spec.mu = rec.point.mu;
      spec.sigma = rec.point.sigma;
      spec.seed = rec.seed;
      const StimulusResult stim = generate_stimuli(spec, netlist.inputs);
      SimOptions opts = options;
      if (opts.t_end == 0.0) {
        double last = 0.0;
        for (const Trace& tr : stim.traces) {
          if (!tr.transitions.empty()) {
            last = std::max(last, tr.transitions.back().time);
          }
        }
        opts.t_end = last + 100.0 * spec.mu;
      }
      rec.stats = run(netlist, stim.traces, opts).stats;
      rec.ok = true;
    } catch (const std::exception& e) {
      rec.ok = false;
      rec.error = e.what();
    }
  };

  if (jobs <= 1) {
    for (RunRecord& rec : runs) work(rec);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    const int nthreads = std::min<int>(jobs, static_cast<int>(runs.size()));
    for (int t = 0; t < nthreads; ++t) {
      pool.emplace_back([&] {
        for (size_t i = next.fetch_add(1); i < runs.size();
             i = next.fetch_add(1)) {
          work(runs[i]);
        }
      });
    }
    for (std::thread& th : pool) th.join();
  }

  double sum = 0.0, sumsq = 0.0;
  long n_ok = 0;
  for (const RunRecord& rec : runs) {
    if (!rec.ok) continue;
    sum += rec.stats.real_outputs;
    sumsq += static_cast<double>(rec.stats.real_outputs) *
             rec.stats.real_outputs;
    ++n_ok;
  }
  if (n_ok > 0) {
    report.mean_real_outputs = sum / n_ok;
    const double var =
        n_ok > 1 ? (sumsq - sum * sum / n_ok) / (n_ok - 1) : 0.0;
    report.stddev_real_outputs = var > 0.0 ? std::sqrt(var) : 0.0;
  }
  report.runs = std::move(runs);
  return report;
}

}  // namespace hybridtime
