#pragma once

#include <string>

namespace memfuzz {

/// 17 significant digits, '.' separator, independent of the C locale.
[[nodiscard]] std::string format_double(double v);

/// Shortest round-trip representation, used in column names such as mu_100.
[[nodiscard]] std::string format_short(double v);

} // namespace memfuzz
