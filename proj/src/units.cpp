#include "hybridtime/units.hpp"

#include <cctype>
#include <cstdlib>
#include <map>

namespace hybridtime {

double parse_time(const std::string& text) {
  std::string s = text;
  s.erase(0, s.find_first_not_of(" \t"));
  s.erase(s.find_last_not_of(" \t") + 1);
  if (s.empty()) throw ValidationError("time value: empty string");

  char* end = nullptr;
  const double value = std::strtod(s.c_str(), &end);
  if (end == s.c_str()) {
    throw ValidationError("time value: cannot parse '" + text + "'");
  }
  std::string suffix(end);
  suffix.erase(0, suffix.find_first_not_of(" \t"));
  if (suffix.empty()) return value;

  static const std::map<std::string, double> kScale = {
      {"fs", 1e-15}, {"ps", 1e-12}, {"ns", 1e-9},
      {"us", 1e-6},  {"ms", 1e-3},  {"s", 1.0}};
  auto it = kScale.find(suffix);
  if (it == kScale.end()) {
    throw ValidationError("time value: unknown unit '" + suffix + "' in '" +
                          text + "'");
  }
  return value * it->second;
}

}  // namespace hybridtime
