#include "cli_args.hpp"

#include <charconv>
#include <filesystem>

#include "nhbl/bloch.hpp"
#include "nhbl/error.hpp"

namespace nhbl::cli {

namespace {

double parse_number(std::string_view s, std::string_view whole) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw InvalidInput("not an angle: '" + std::string(whole) + "'");
    }
    return v;
}

} // namespace

double parse_angle(std::string_view text) {
    std::string_view s = text;
    double sign = 1.0;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        sign = s.front() == '-' ? -1.0 : 1.0;
        s.remove_prefix(1);
    }
    const auto pi = s.find("pi");
    if (pi == std::string_view::npos) {
        return sign * parse_number(s, text);
    }
    std::string_view coeff = s.substr(0, pi);
    if (!coeff.empty() && coeff.back() == '*') {
        coeff.remove_suffix(1);
    }
    double value = coeff.empty() ? 1.0 : parse_number(coeff, text);
    std::string_view rest = s.substr(pi + 2);
    if (!rest.empty()) {
        if (rest.front() != '/') {
            throw InvalidInput("not an angle: '" + std::string(text) + "'");
        }
        const double den = parse_number(rest.substr(1), text);
        if (den == 0.0) {
            throw InvalidInput("division by zero in angle '" + std::string(text) + "'");
        }
        value /= den;
    }
    return sign * value * kPi;
}

Format resolve_format(const std::string& flag, const std::string& out, Format fallback) {
    auto named = [](std::string_view s) -> Format {
        if (s == "json") {
            return Format::json;
        }
        if (s == "csv") {
            return Format::csv;
        }
        if (s == "svg") {
            return Format::svg;
        }
        throw InvalidInput("format must be json, csv or svg");
    };
    if (!flag.empty()) {
        return named(flag);
    }
    const std::string ext = std::filesystem::path(out).extension().string();
    if (ext == ".json" || ext == ".csv" || ext == ".svg") {
        return named(ext.substr(1));
    }
    return fallback;
}

std::string_view to_string(Format f) {
    switch (f) {
    case Format::json: return "json";
    case Format::csv: return "csv";
    case Format::svg: return "svg";
    }
    return "json";
}

} // namespace nhbl::cli
