#pragma once

/**
 * @file memo_store.hpp
 * @brief Memo of canonical invariant values and its line-oriented cache file.
 *
 * One record per line:
 *   {"space":"blowup","n":2,"d":3,"e":2,"classes":["H2","H2"],"value":"1/1"}
 * Dumps are sorted lexicographically by line so that files produced by
 * different runs compare byte for byte.
 */

#include "gwb/invariant.hpp"
#include "gwb/rational.hpp"

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace gwb {

class ConflictingCacheEntry : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class CacheFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// "H2" / "E1" tokens.
inline BasisIndex parse_class_token(const std::string& tok) {
    if (tok.size() < 2 || (tok[0] != 'H' && tok[0] != 'E'))
        throw std::invalid_argument("bad class token '" + tok + "'");
    int level = 0;
    for (std::size_t i = 1; i < tok.size(); ++i) {
        if (tok[i] < '0' || tok[i] > '9') throw std::invalid_argument("bad class token '" + tok + "'");
        level = level * 10 + (tok[i] - '0');
        if (level > 100000) throw std::invalid_argument("class level out of range in '" + tok + "'");
    }
    return tok[0] == 'H' ? BasisIndex::H(level) : BasisIndex::E(level);
}

inline std::string to_record(const InvariantKey& key, const ExactRational& value) {
    std::string out = "{\"space\":\"" + to_string(key.geom.space()) + "\",\"n\":" + std::to_string(key.geom.n()) +
                      ",\"d\":" + std::to_string(key.beta.d) + ",\"e\":" + std::to_string(key.beta.e) +
                      ",\"classes\":[";
    bool first = true;
    for (BasisIndex b : key.classes()) {
        if (!first) out += ",";
        out += "\"" + to_string(b) + "\"";
        first = false;
    }
    out += "],\"value\":\"" + to_fraction_string(value) + "\"}";
    return out;
}

inline std::pair<InvariantKey, ExactRational> parse_record(const std::string& line) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& ex) {
        throw CacheFormatError(std::string("malformed cache record: ") + ex.what());
    }
    try {
        const std::string space = j.at("space").get<std::string>();
        if (space != "plain" && space != "blowup") throw CacheFormatError("unknown space '" + space + "'");
        const Geometry g(space == "plain" ? Space::plain : Space::blowup, j.at("n").get<int>());
        const CurveClass beta{j.at("d").get<int>(), j.at("e").get<int>()};
        if (!g.is_blowup() && beta.e != 0) throw CacheFormatError("plain record with nonzero e");
        std::vector<BasisIndex> classes;
        for (const auto& t : j.at("classes")) classes.push_back(parse_class_token(t.get<std::string>()));
        const std::string value = j.at("value").get<std::string>();
        if (value.find('/') == std::string::npos) throw CacheFormatError("value must be num/den: " + value);
        ExactRational q = parse_rational(value);
        if (to_fraction_string(q) != value) throw CacheFormatError("value not in lowest terms: " + value);
        return {make_key(g, beta, classes), std::move(q)};
    } catch (const CacheFormatError&) {
        throw;
    } catch (const std::exception& ex) {
        throw CacheFormatError(std::string("invalid cache record: ") + ex.what());
    }
}

class MemoStore {
public:
    using Map = std::unordered_map<InvariantKey, ExactRational, InvariantKeyHash>;

    const ExactRational* find(const InvariantKey& key) const {
        auto it = values_.find(key);
        return it == values_.end() ? nullptr : &it->second;
    }

    bool contains(const InvariantKey& key) const { return values_.contains(key); }

    /// Insert-if-equal: re-inserting the same value is a no-op, a different
    /// value throws.
    void insert(const InvariantKey& key, const ExactRational& value) {
        auto [it, fresh] = values_.try_emplace(key, value);
        if (fresh) {
            dirty_.insert(key);
            return;
        }
        if (it->second != value)
            throw ConflictingCacheEntry("conflicting values for " + to_string(key) + ": " +
                                        to_display_string(it->second) + " vs " + to_display_string(value));
    }

    void merge(const MemoStore& other) {
        for (const auto& [k, v] : other.values_) insert(k, v);
    }

    std::size_t size() const { return values_.size(); }
    bool empty() const { return values_.empty(); }
    const Map& values() const { return values_; }

    /// Keys added since construction, load or the last save.
    std::size_t dirty_count() const { return dirty_.size(); }
    void clear_dirty() { dirty_.clear(); }

    std::vector<std::string> dump_lines() const {
        std::vector<std::string> lines;
        lines.reserve(values_.size());
        for (const auto& [k, v] : values_) lines.push_back(to_record(k, v));
        std::sort(lines.begin(), lines.end());
        return lines;
    }

    void save(const std::filesystem::path& path) {
        if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
        const auto tmp = std::filesystem::path(path.string() + ".tmp");
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) throw std::runtime_error("cannot write cache file " + tmp.string());
            for (const auto& line : dump_lines()) out << line << '\n';
            if (!out) throw std::runtime_error("write failed for " + tmp.string());
        }
        std::filesystem::rename(tmp, path);
        clear_dirty();
    }

    static MemoStore load(const std::filesystem::path& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw std::runtime_error("cannot read cache file " + path.string());
        MemoStore store;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            try {
                auto [k, v] = parse_record(line);
                store.insert(k, v);
            } catch (const CacheFormatError& ex) {
                throw CacheFormatError(path.string() + ":" + std::to_string(lineno) + ": " + ex.what());
            }
        }
        store.clear_dirty();
        return store;
    }

private:
    Map values_;
    std::unordered_set<InvariantKey, InvariantKeyHash> dirty_;
};

}  // namespace gwb
