// io.hpp - spectrum file parsing and numeric text formatting shared by the CLI.
//
// Spectrum files are JSON objects:
//   { "levels": [ {"energy": 0, "weight": 0.5}, {"energy": 2, "weight": 0.5} ],
//     "hbar": 1.0, "renormalize": false }

#pragma once

#include "tzero/error.hpp"
#include "tzero/spectrum.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace tzero {

namespace detail {

inline double require_number(const nlohmann::json& j, const char* key, const std::string& where) {
    const auto it = j.find(key);
    if (it == j.end()) {
        throw ParseError(where + ": missing key '" + key + "'");
    }
    if (!it->is_number()) {
        throw ParseError(where + ": '" + key + "' must be a number");
    }
    return it->get<double>();
}

} // namespace detail

inline Spectrum load_spectrum(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("malformed spectrum file: ") + e.what());
    }
    if (!doc.is_object()) {
        throw ParseError("spectrum file must be a top-level map");
    }
    for (const auto& [key, value] : doc.items()) {
        if (key != "levels" && key != "hbar" && key != "renormalize") {
            throw ParseError("unknown key '" + key + "'");
        }
    }

    SpectrumOptions opts;
    if (auto it = doc.find("hbar"); it != doc.end()) {
        if (!it->is_number()) throw ParseError("'hbar' must be a number");
        opts.hbar = it->get<double>();
    }
    if (auto it = doc.find("renormalize"); it != doc.end()) {
        if (!it->is_boolean()) throw ParseError("'renormalize' must be a boolean");
        opts.renormalize = it->get<bool>();
    }

    const auto levels_it = doc.find("levels");
    if (levels_it == doc.end()) throw ParseError("missing key 'levels'");
    if (!levels_it->is_array()) throw ParseError("'levels' must be a list");

    std::vector<Level> levels;
    levels.reserve(levels_it->size());
    std::size_t index = 0;
    for (const auto& item : *levels_it) {
        const std::string where = "levels[" + std::to_string(index++) + "]";
        if (!item.is_object()) throw ParseError(where + " must be a map");
        levels.push_back({detail::require_number(item, "energy", where),
                          detail::require_number(item, "weight", where)});
    }
    return Spectrum(std::move(levels), opts);
}

inline Spectrum load_spectrum_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("file not found: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_spectrum(buf.str());
}

// %.<digits>g with negative zero folded to "0".
inline std::string format_sig(double v, int digits = 17) {
    if (v == 0.0) v = 0.0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

inline std::string format_fixed(double v, int decimals = 6) {
    if (v == 0.0) v = 0.0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

// Compact scientific form without exponent padding: 6.1e-17, 0.0e0.
inline std::string format_sci_short(double v, int decimals = 1) {
    if (v == 0.0) v = 0.0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*e", decimals, v);
    std::string s(buf);
    const auto e = s.find('e');
    if (e == std::string::npos) return s;
    std::string mant = s.substr(0, e);
    std::string exp = s.substr(e + 1);
    bool neg = false;
    std::size_t i = 0;
    if (i < exp.size() && (exp[i] == '+' || exp[i] == '-')) {
        neg = exp[i] == '-';
        ++i;
    }
    while (i + 1 < exp.size() && exp[i] == '0') ++i;
    return mant + "e" + (neg ? "-" : "") + exp.substr(i);
}

} // namespace tzero
