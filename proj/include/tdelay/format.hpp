#pragma once

#include <string>

namespace tdelay {

/// Shortest decimal form of value that parses back to the same double.
std::string format_roundtrip(double value);

}  // namespace tdelay
