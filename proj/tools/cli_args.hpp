#pragma once

#include <string>
#include <string_view>

namespace nhbl::cli {

/// Radians, with "pi" allowed: "1.2", "pi", "-pi/2", "2pi/3", "2*pi/3".
double parse_angle(std::string_view text);

enum class Format { json, csv, svg };

/// Explicit --format wins; otherwise the --out extension (.json, .csv,
/// .svg); otherwise `fallback`.
Format resolve_format(const std::string& flag, const std::string& out, Format fallback);

std::string_view to_string(Format f);

} // namespace nhbl::cli
