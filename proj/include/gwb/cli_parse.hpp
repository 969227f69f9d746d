#pragma once

/**
 * @file cli_parse.hpp
 * @brief Token parsing for the command-line front end.
 */

#include "gwb/geometry.hpp"
#include "gwb/memo_store.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gwb::cli {

class ParseError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

inline int parse_int(const std::string& s) {
    std::size_t used = 0;
    int v = 0;
    try {
        v = std::stoi(s, &used);
    } catch (const std::exception&) {
        throw ParseError("not an integer: '" + s + "'");
    }
    if (used != s.size()) throw ParseError("not an integer: '" + s + "'");
    return v;
}

inline Space parse_space(const std::string& s) {
    if (s == "plain") return Space::plain;
    if (s == "blowup") return Space::blowup;
    throw ParseError("space must be 'plain' or 'blowup', got '" + s + "'");
}

/// "d,e" on the blow-up; "d" (or "d,0") on P^n.
inline CurveClass parse_beta(Space space, const std::string& text) {
    const auto parts = split(text, ',');
    if (parts.empty() || parts.size() > 2) throw ParseError("curve class must be 'd' or 'd,e', got '" + text + "'");
    CurveClass beta{parse_int(parts[0]), parts.size() == 2 ? parse_int(parts[1]) : 0};
    if (space == Space::plain && beta.e != 0) throw ParseError("plain projective space has no exceptional class");
    return beta;
}

/// Comma-separated H<k>/E<k> tokens; "pt" is the point class H<n>.
inline std::vector<BasisIndex> parse_classes(const Geometry& g, const std::string& text) {
    std::vector<BasisIndex> out;
    if (trim(text).empty()) return out;
    for (const auto& tok : split(text, ',')) {
        BasisIndex b;
        if (tok == "pt") {
            b = point_class(g);
        } else {
            try {
                b = parse_class_token(tok);
            } catch (const std::invalid_argument& ex) {
                throw ParseError(ex.what());
            }
        }
        if (!is_valid(g, b)) throw ParseError("class " + tok + " is not in the basis for this geometry");
        out.push_back(b);
    }
    return out;
}

/// key=value lines; '#' starts a comment.
inline std::map<std::string, std::string> read_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot read config file " + path.string());
    std::map<std::string, std::string> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(path.string() + ":" + std::to_string(lineno) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        if (key != "space" && key != "n" && key != "cache_path" && key != "format")
            throw ParseError(path.string() + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
        out[key] = trim(line.substr(eq + 1));
    }
    return out;
}

}  // namespace gwb::cli
