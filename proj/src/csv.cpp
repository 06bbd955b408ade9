#include "fracstep/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <ostream>

namespace fracstep {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                   std::chars_format::general, 17);
    return std::string(buf.data(), res.ptr);
}

std::string format_optional(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
}

void write_provenance(std::ostream& os, std::string_view config_json) {
    os << "# fracstep " << kVersion << '\n';
    os << "# config: " << config_json << '\n';
}

}  // namespace fracstep
