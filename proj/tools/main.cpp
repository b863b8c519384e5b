#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hybridtime/characterization.hpp"
#include "hybridtime/simulator.hpp"
#include "hybridtime/trace_metrics.hpp"
#include "hybridtime/units.hpp"

namespace ht = hybridtime;
namespace fs = std::filesystem;

namespace {

bool verbose_logging() {
  const char* env = std::getenv("HYBRIDTIME_LOG");
  return env != nullptr && std::string(env) != "" &&
         std::string(env) != "quiet";
}

void log_note(const std::string& msg) {
  if (verbose_logging()) std::cerr << "[hybridtime] " << msg << "\n";
}

std::vector<double> parse_time_list(const std::string& csv) {
  std::vector<double> out;
  size_t pos = 0;
  while (pos <= csv.size()) {
    const size_t comma = csv.find(',', pos);
    const std::string item =
        csv.substr(pos, comma == std::string::npos ? csv.size() - pos
                                                   : comma - pos);
    if (!item.empty()) out.push_back(ht::parse_time(item));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (out.empty()) throw ht::ValidationError("empty time list: " + csv);
  return out;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ht::ValidationError("cannot write " + path);
  out << text;
}

int cmd_characterize(const std::string& measured_path,
                     const std::string& out_path, double tolerance) {
  const ht::MeasuredDelays m = ht::load_measured_delays(measured_path);
  const ht::GateParams p = ht::characterize(m, tolerance);
  ht::save_gate_params(p, out_path);
  log_note("characterized parameters written to " + out_path);
  std::cout << ht::gate_params_to_json_text(p);
  return 0;
}

std::vector<ht::Trace> load_stimuli(const std::vector<std::string>& paths) {
  std::vector<ht::Trace> stimuli;
  for (const std::string& path : paths) {
    if (path.size() > 4 && path.substr(path.size() - 4) == ".vcd") {
      for (ht::Trace& tr : ht::read_traces_vcd(path)) {
        stimuli.push_back(std::move(tr));
      }
    } else {
      stimuli.push_back(ht::read_trace_csv(path));
    }
  }
  return stimuli;
}

int cmd_simulate(const std::string& netlist_path,
                 const std::vector<std::string>& stimuli_paths,
                 const std::string& t_end_str, const std::string& out_dir,
                 long max_events) {
  const ht::Netlist netlist = ht::load_netlist(netlist_path);
  const std::vector<ht::Trace> stimuli = load_stimuli(stimuli_paths);
  ht::SimOptions opts;
  if (!t_end_str.empty()) opts.t_end = ht::parse_time(t_end_str);
  opts.max_events_per_net = max_events;
  const ht::SimulationResult res = ht::run(netlist, stimuli, opts);

  fs::create_directories(out_dir);
  std::vector<ht::Trace> all;
  for (const auto& [net, tr] : res.traces) all.push_back(tr);
  ht::write_traces_vcd(all, out_dir + "/traces.vcd");
  for (const std::string& out : netlist.outputs) {
    ht::write_trace_csv(res.traces.at(out), out_dir + "/" + out + ".csv");
  }
  nlohmann::json stats;
  stats["events_processed"] = res.stats.events_processed;
  stats["real_outputs"] = res.stats.real_outputs;
  stats["virtual_outputs"] = res.stats.virtual_outputs;
  stats["cancellations"] = res.stats.cancellations;
  stats["wall_time_s"] = res.stats.wall_time_s;
  write_file(out_dir + "/stats.json", stats.dump(2) + "\n");
  std::cout << stats.dump(2) << "\n";
  return 0;
}

int cmd_stimuli(const std::string& netlist_path, const std::string& mu,
                const std::string& sigma, int n, unsigned long long seed,
                const std::string& floor, const std::string& out_dir) {
  const ht::Netlist netlist = ht::load_netlist(netlist_path);
  ht::StimulusSpec spec;
  spec.mu = ht::parse_time(mu);
  spec.sigma = ht::parse_time(sigma);
  spec.n = n;
  spec.seed = seed;
  spec.floor = ht::parse_time(floor);
  const ht::StimulusResult res = ht::generate_stimuli(spec, netlist.inputs);
  fs::create_directories(out_dir);
  for (const ht::Trace& tr : res.traces) {
    ht::write_trace_csv(tr, out_dir + "/" + tr.net + ".csv");
  }
  if (res.truncation_rate > 0.01) {
    std::cerr << "warning: " << res.truncation_rate * 100.0
              << "% of gaps were clamped to the floor\n";
  }
  log_note("stimuli written to " + out_dir);
  return 0;
}

int cmd_compare(const std::string& ref_path, const std::string& cand_path,
                const std::string& report_path, bool include_glitches) {
  ht::Trace ref = ht::read_trace(ref_path);
  ht::Trace cand = ht::read_trace(cand_path);
  cand.net = ref.net;  // compare by position, not by file name
  const ht::DeviationReport rep = ht::compare(ref, cand, include_glitches);
  if (!report_path.empty()) write_file(report_path, rep.to_json());
  std::cout << rep.to_table();
  return 0;
}

int cmd_sweep(const std::string& netlist_path, const std::string& mu_list,
              const std::string& sigma_list, int n, unsigned long long seed,
              int runs, int jobs, const std::string& t_end_str,
              const std::string& report_path) {
  const ht::Netlist netlist = ht::load_netlist(netlist_path);
  ht::StimulusSpec base;
  base.mu = 1e-12;  // replaced per grid point
  base.n = n;
  base.seed = seed;
  std::vector<ht::SweepPoint> grid;
  for (double mu : parse_time_list(mu_list)) {
    for (double sigma : parse_time_list(sigma_list)) {
      grid.push_back({mu, sigma});
    }
  }
  ht::SimOptions opts;
  if (!t_end_str.empty()) opts.t_end = ht::parse_time(t_end_str);
  const ht::SweepReport rep =
      ht::sweep(netlist, base, grid, runs, opts, jobs);

  nlohmann::json j;
  j["mean_real_outputs"] = rep.mean_real_outputs;
  j["stddev_real_outputs"] = rep.stddev_real_outputs;
  j["runs"] = nlohmann::json::array();
  for (const ht::RunRecord& rec : rep.runs) {
    nlohmann::json jr;
    jr["mu_s"] = rec.point.mu;
    jr["sigma_s"] = rec.point.sigma;
    jr["seed"] = rec.seed;
    jr["ok"] = rec.ok;
    if (rec.ok) {
      jr["real_outputs"] = rec.stats.real_outputs;
      jr["events_processed"] = rec.stats.events_processed;
      jr["wall_time_s"] = rec.stats.wall_time_s;
    } else {
      jr["error"] = rec.error;
    }
    j["runs"].push_back(jr);
  }
  if (!report_path.empty()) write_file(report_path, j.dump(2) + "\n");
  std::cout << j.dump(2) << "\n";
  return 0;
}

ht::MeasuredDelays reference_measured() {
  ht::MeasuredDelays m;
  m.fall = {2.190e-12, 3.7226e-12, 3.3798e-12};
  m.rise = {4.107e-12, 3.616e-12, 3.8054e-12};
  m.d_min = 299e-15;
  m.c_load = 0.9431e-15;
  m.vdd = 0.8;
  return m;
}

int cmd_selftest() {
  int failures = 0;
  const auto check = [&](const char* name, bool ok) {
    std::cout << (ok ? "PASS" : "FAIL") << "  " << name << "\n";
    if (!ok) ++failures;
  };
  const auto rel = [](double got, double want) {
    return std::abs(got - want) / std::abs(want);
  };

  const ht::MeasuredDelays m = reference_measured();
  ht::GateParams p;
  try {
    p = ht::characterize(m);
    check("characterization runs", true);
  } catch (const std::exception& e) {
    std::cout << "FAIL  characterization runs (" << e.what() << ")\n";
    return 1;
  }
  check("r_na within 0.5%", rel(p.r_na, 4408.82407303950) < 5e-3);
  check("r_nb within 0.5%", rel(p.r_nb, 3884.42001507398) < 5e-3);
  check("r5 within 0.5%", rel(p.r5, 828.494754381781) < 5e-3);
  check("r within 0.5%", rel(p.r, 1705.76915128527) < 5e-3);
  check("alpha1 within 0.5%", rel(p.alpha1, 966.421722237134e-12) < 5e-3);
  check("alpha2 within 0.5%", rel(p.alpha2, 633.741820902669e-12) < 5e-3);

  check("mis fall delta=0",
        rel(ht::mis_delay_falling(p, 0.0), m.fall.d0) < 1e-3);
  check("mis rise delta=0",
        rel(ht::mis_delay_rising(p, 0.0), m.rise.d0) < 1e-3);

  ht::InputSequence seq;
  seq.initial_a = 0;
  seq.initial_b = 0;
  seq.t0 = -std::numeric_limits<double>::infinity();
  seq.events = {{ht::InputPort::A, ht::Edge::rise, 0.0}};
  const ht::ProcessResult pr =
      ht::process_sequence(p, ht::GateKind::nor2, seq);
  check("single-edge scenario",
        pr.real.size() == 1 && rel(pr.real[0].time, 3.7226e-12) < 5e-3);

  std::cout << (failures == 0 ? "selftest passed\n" : "selftest FAILED\n");
  return failures == 0 ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hybrid NOR/NAND timing model toolkit"};
  app.require_subcommand(1);

  auto* c_char = app.add_subcommand(
      "characterize", "fit gate parameters from measured delays");
  std::string measured_path, params_out = "params.json";
  double tolerance = 1e-3;
  c_char->add_option("--measured", measured_path, "measured-delay JSON file")
      ->required();
  c_char->add_option("--out", params_out, "output parameter file");
  c_char->add_option("--tolerance", tolerance,
                     "relative self-verification tolerance");

  auto* c_sim = app.add_subcommand("simulate", "run a netlist simulation");
  std::string netlist_path, t_end, out_dir = "out";
  std::vector<std::string> stimuli_paths;
  long max_events = 1000000;
  c_sim->add_option("--netlist", netlist_path, "netlist JSON file")
      ->required();
  c_sim->add_option("--stimuli", stimuli_paths,
                    "stimulus trace files (CSV per input, or one VCD)")
      ->required();
  c_sim->add_option("--t-end", t_end, "simulation horizon (e.g. 5ns)");
  c_sim->add_option("--out-dir", out_dir, "output directory");
  c_sim->add_option("--max-events", max_events, "per-net oscillation guard");

  auto* c_stim = app.add_subcommand("stimuli", "generate random stimuli");
  std::string s_netlist, s_mu = "15ps", s_sigma = "5ps", s_floor = "100fs",
              s_out = "stimuli";
  int s_n = 100;
  unsigned long long s_seed = 1;
  c_stim->add_option("--netlist", s_netlist, "netlist JSON file")->required();
  c_stim->add_option("--mu", s_mu, "mean inter-transition gap");
  c_stim->add_option("--sigma", s_sigma, "gap standard deviation");
  c_stim->add_option("--n", s_n, "transitions per input");
  c_stim->add_option("--seed", s_seed, "RNG seed");
  c_stim->add_option("--floor", s_floor, "minimum gap");
  c_stim->add_option("--out-dir", s_out, "output directory");

  auto* c_cmp = app.add_subcommand("compare", "deviation metrics");
  std::string ref_path, cand_path, report_path;
  bool include_glitches = false;
  c_cmp->add_option("--ref", ref_path, "reference trace")->required();
  c_cmp->add_option("--cand", cand_path, "candidate trace")->required();
  c_cmp->add_option("--report", report_path, "JSON report path");
  c_cmp->add_flag("--include-glitches", include_glitches,
                  "count glitch pulses into the areas");

  auto* c_sweep = app.add_subcommand("sweep", "repeated seeded simulations");
  std::string w_netlist, w_mu = "15ps", w_sigma = "5ps", w_t_end,
              w_report;
  int w_n = 100, w_runs = 1, w_jobs = 1;
  unsigned long long w_seed = 1;
  c_sweep->add_option("--netlist", w_netlist, "netlist JSON file")
      ->required();
  c_sweep->add_option("--mu", w_mu, "comma-separated mu grid");
  c_sweep->add_option("--sigma", w_sigma, "comma-separated sigma grid");
  c_sweep->add_option("--n", w_n, "transitions per input");
  c_sweep->add_option("--seed", w_seed, "base RNG seed");
  c_sweep->add_option("--runs", w_runs, "runs per grid point");
  c_sweep->add_option("--jobs", w_jobs, "parallel workers");
  c_sweep->add_option("--t-end", w_t_end, "simulation horizon");
  c_sweep->add_option("--report", w_report, "JSON report path");

  app.add_subcommand("selftest", "golden-value and smoke checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (c_char->parsed()) {
      return cmd_characterize(measured_path, params_out, tolerance);
    }
    if (c_sim->parsed()) {
      return cmd_simulate(netlist_path, stimuli_paths, t_end, out_dir,
                          max_events);
    }
    if (c_stim->parsed()) {
      return cmd_stimuli(s_netlist, s_mu, s_sigma, s_n, s_seed, s_floor,
                         s_out);
    }
    if (c_cmp->parsed()) {
      return cmd_compare(ref_path, cand_path, report_path, include_glitches);
    }
    if (c_sweep->parsed()) {
      return cmd_sweep(w_netlist, w_mu, w_sigma, w_n, w_seed, w_runs, w_jobs,
                       w_t_end, w_report);
    }
    return cmd_selftest();
  } catch (const ht::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const ht::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
