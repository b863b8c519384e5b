#pragma once

#include <string>

#include "hybridtime/errors.hpp"

namespace hybridtime {

/// Parses a time value with an optional fs/ps/ns/us/ms/s suffix; a bare
/// number is taken as seconds. Throws ValidationError on malformed input.
double parse_time(const std::string& text);

}  // namespace hybridtime
