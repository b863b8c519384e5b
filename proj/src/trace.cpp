#include "hybridtime/trace.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>

namespace hybridtime {

namespace {

[[noreturn]] void parse_fail(const std::string& what, int line) {
  char msg[200];
  std::snprintf(msg, sizeof msg, "%s (line %d)", what.c_str(), line);
  throw ValidationError(msg);
}

std::string fmt_time(double t) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", t);
  return buf;
}

// Compact printable VCD identifier for signal index i.
std::string vcd_id(size_t i) {
  std::string id;
  do {
    id.push_back(static_cast<char>('!' + i % 94));
    i /= 94;
  } while (i != 0);
  return id;
}

double vcd_scale_to_seconds(int value, const std::string& unit) {
  static const std::map<std::string, double> kUnit = {
      {"s", 1.0},     {"ms", 1e-3}, {"us", 1e-6},
      {"ns", 1e-9},   {"ps", 1e-12}, {"fs", 1e-15}};
  auto it = kUnit.find(unit);
  if (it == kUnit.end() || value <= 0) {
    throw ValidationError("vcd: unsupported timescale " + std::to_string(value) +
                          unit);
  }
  return value * it->second;
}

}  // namespace

void Trace::validate() const {
  int level = initial_level;
  double t = t_start;
  if (level != 0 && level != 1) {
    throw ValidationError("trace " + net + ": initial level must be 0 or 1");
  }
  for (size_t i = 0; i < transitions.size(); ++i) {
    const Transition& tr = transitions[i];
    if (tr.level != 1 - level) {
      throw ValidationError("trace " + net + ": levels must alternate (index " +
                            std::to_string(i) + ")");
    }
    const bool ok = (i == 0) ? (tr.time >= t) : (tr.time > t);
    if (!ok || !std::isfinite(tr.time)) {
      throw ValidationError("trace " + net +
                            ": times must strictly increase (index " +
                            std::to_string(i) + ")");
    }
    level = tr.level;
    t = tr.time;
  }
}

int Trace::level_before(double t) const {
  auto it = std::lower_bound(
      transitions.begin(), transitions.end(), t,
      [](const Transition& tr, double tt) { return tr.time < tt; });
  if (it == transitions.begin()) return initial_level;
  return std::prev(it)->level;
}

int Trace::level_at(double t) const {
  auto it = std::upper_bound(
      transitions.begin(), transitions.end(), t,
      [](double tt, const Transition& tr) { return tt < tr.time; });
  if (it == transitions.begin()) return initial_level;
  return std::prev(it)->level;
}

Trace trace_from_csv_text(const std::string& text, const std::string& net) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  Trace tr;
  tr.net = net;
  bool have_header = false;
  bool have_initial = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!have_header) {
      if (line != "time_s,level") {
        parse_fail("csv: expected header 'time_s,level'", lineno);
      }
      have_header = true;
      continue;
    }
    double t;
    int level;
    char extra;
    if (std::sscanf(line.c_str(), "%lf,%d %c", &t, &level, &extra) != 2 ||
        (level != 0 && level != 1)) {
      parse_fail("csv: malformed row '" + line + "'", lineno);
    }
    if (!have_initial) {
      tr.t_start = t;
      tr.initial_level = level;
      have_initial = true;
    } else {
      tr.transitions.push_back({t, level});
    }
  }
  if (!have_header) parse_fail("csv: empty file", lineno);
  if (!have_initial) parse_fail("csv: missing initial row", lineno);
  tr.validate();
  return tr;
}

std::string trace_to_csv_text(const Trace& trace) {
  trace.validate();
  std::string out = "time_s,level\n";
  out += fmt_time(trace.t_start) + "," + std::to_string(trace.initial_level) +
         "\n";
  for (const Transition& tr : trace.transitions) {
    out += fmt_time(tr.time) + "," + std::to_string(tr.level) + "\n";
  }
  return out;
}

Trace read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open trace file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  std::string net = path;
  if (auto slash = net.find_last_of('/'); slash != std::string::npos) {
    net = net.substr(slash + 1);
  }
  if (auto dot = net.find_last_of('.'); dot != std::string::npos) {
    net = net.substr(0, dot);
  }
  return trace_from_csv_text(ss.str(), net);
}

void write_trace_csv(const Trace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write trace file: " + path);
  out << trace_to_csv_text(trace);
}

std::vector<Trace> traces_from_vcd_text(const std::string& text) {
  std::istringstream in(text);
  std::string tok;
  double scale = 0.0;
  std::map<std::string, size_t> by_id;
  std::vector<Trace> traces;
  std::vector<bool> seen_initial;
  double now = 0.0;
  int lineno = 1;  // token-level parse; line numbers approximate via '\n'

  const auto next = [&](std::string& t) -> bool {
    if (!(in >> t)) return false;
    return true;
  };
  const auto skip_to_end = [&] {
    std::string t;
    while (next(t) && t != "$end") {
    }
  };

  while (next(tok)) {
    if (tok == "$timescale") {
      std::string body;
      std::string t;
      while (next(t) && t != "$end") body += t;
      int value = 0;
      char unit[8] = {0};
      if (std::sscanf(body.c_str(), "%d%7s", &value, unit) != 2) {
        parse_fail("vcd: malformed $timescale '" + body + "'", lineno);
      }
      scale = vcd_scale_to_seconds(value, unit);
    } else if (tok == "$var") {
      std::string type, width, id, name, t;
      if (!next(type) || !next(width) || !next(id) || !next(name)) {
        parse_fail("vcd: truncated $var", lineno);
      }
      if (type != "wire" || width != "1") {
        parse_fail("vcd: only 'wire 1' variables supported", lineno);
      }
      while (next(t) && t != "$end") name += t;  // tolerate `name [0:0]`
      by_id[id] = traces.size();
      Trace tr;
      tr.net = name;
      traces.push_back(tr);
      seen_initial.push_back(false);
    } else if (tok == "$dumpvars" || tok == "$comment" || tok == "$date" ||
               tok == "$version" || tok == "$scope" || tok == "$upscope") {
      if (tok != "$dumpvars") skip_to_end();
    } else if (tok == "$enddefinitions" || tok == "$end") {
      if (tok == "$enddefinitions") skip_to_end();
    } else if (tok[0] == '#') {
      if (scale == 0.0) parse_fail("vcd: missing $timescale", lineno);
      now = std::strtod(tok.c_str() + 1, nullptr) * scale;
    } else if (tok[0] == '0' || tok[0] == '1') {
      const std::string id = tok.substr(1);
      auto it = by_id.find(id);
      if (it == by_id.end()) {
        parse_fail("vcd: value change for unknown id '" + id + "'", lineno);
      }
      Trace& tr = traces[it->second];
      const int level = tok[0] - '0';
      if (!seen_initial[it->second]) {
        tr.initial_level = level;
        tr.t_start = now;
        seen_initial[it->second] = true;
      } else if (level != (tr.transitions.empty()
                               ? tr.initial_level
                               : tr.transitions.back().level)) {
        tr.transitions.push_back({now, level});
      }
    } else if (tok[0] == 'x' || tok[0] == 'z' || tok[0] == 'X' ||
               tok[0] == 'Z') {
      parse_fail("vcd: X/Z values not supported", lineno);
    } else if (tok[0] == 'b' || tok[0] == 'r') {
      parse_fail("vcd: vector/real values not supported", lineno);
    } else {
      parse_fail("vcd: unexpected token '" + tok + "'", lineno);
    }
  }
  for (Trace& tr : traces) tr.validate();
  return traces;
}

std::string traces_to_vcd_text(const std::vector<Trace>& traces) {
  std::string out = "$timescale 1fs $end\n";
  for (size_t i = 0; i < traces.size(); ++i) {
    traces[i].validate();
    out += "$var wire 1 " + vcd_id(i) + " " + traces[i].net + " $end\n";
  }
  out += "$enddefinitions $end\n";

  // merge all events in time order; each signal's first record is its
  // initial level at t_start
  struct Ev {
    double t;
    size_t sig;
    int level;
  };
  std::vector<Ev> evs;
  for (size_t i = 0; i < traces.size(); ++i) {
    evs.push_back({traces[i].t_start, i, traces[i].initial_level});
    for (const Transition& tr : traces[i].transitions) {
      evs.push_back({tr.time, i, tr.level});
    }
  }
  std::stable_sort(evs.begin(), evs.end(),
                   [](const Ev& a, const Ev& b) { return a.t < b.t; });

  int64_t last_fs = INT64_MIN;
  bool in_dump = false;
  for (const Ev& ev : evs) {
    const int64_t fs = std::llround(ev.t / 1e-15);
    if (fs != last_fs || last_fs == INT64_MIN) {
      if (in_dump) {
        out += "$end\n";
        in_dump = false;
      }
      char buf[32];
      std::snprintf(buf, sizeof buf, "#%" PRId64 "\n", fs);
      out += buf;
      last_fs = fs;
    }
    if (!in_dump && out.find("$dumpvars") == std::string::npos) {
      out += "$dumpvars\n";
      in_dump = true;
    }
    out += std::to_string(ev.level) + vcd_id(ev.sig) + "\n";
  }
  if (in_dump) out += "$end\n";
  return out;
}

std::vector<Trace> read_traces_vcd(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open trace file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return traces_from_vcd_text(ss.str());
}

void write_traces_vcd(const std::vector<Trace>& traces,
                      const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write trace file: " + path);
  out << traces_to_vcd_text(traces);
}

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

Trace read_trace(const std::string& path) {
  if (ends_with(path, ".vcd")) {
    auto traces = read_traces_vcd(path);
    if (traces.size() != 1) {
      throw ValidationError("vcd file must contain exactly one signal here: " +
                            path);
    }
    return traces[0];
  }
  return read_trace_csv(path);
}

void write_trace(const Trace& trace, const std::string& path) {
  if (ends_with(path, ".vcd")) {
    write_traces_vcd({trace}, path);
  } else {
    write_trace_csv(trace, path);
  }
}

}  // namespace hybridtime
