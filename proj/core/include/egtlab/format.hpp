#pragma once

#include <string>

namespace egt {

/// Shortest decimal string that parses back to the same double. Identical on
/// every platform with a conforming std::to_chars.
std::string format_number(double value);

}  // namespace egt
