#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

namespace fracstep {

inline constexpr std::string_view kVersion = "0.1.0";

/// 17 significant digits (trailing zeros dropped), enough to round-trip any double.
std::string format_double(double v);
std::string format_optional(const std::optional<double>& v);

/// Writes "# fracstep <version>" and "# config: <json>" comment lines.
void write_provenance(std::ostream& os, std::string_view config_json);

}  // namespace fracstep
