#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "subperc/errors.hpp"

namespace subperc {

/// Flat key=value configuration with dotted keys. Lines starting with '#'
/// and blank lines are ignored. Every key must belong to the known-key
/// registry and the whole file parses before any computation starts.
class KeyValueConfig {
public:
    static KeyValueConfig parse_file(const std::string& path, const std::set<std::string>& known_keys) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open config file: " + path);
        std::ostringstream buf;
        buf << in.rdbuf();
        return parse_text(buf.str(), known_keys, path);
    }

    static KeyValueConfig parse_text(const std::string& text, const std::set<std::string>& known_keys,
                                     const std::string& origin = "<text>") {
        KeyValueConfig cfg;
        std::istringstream in(text);
        std::string line;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            const std::string trimmed = trim(line);
            if (trimmed.empty() || trimmed[0] == '#') continue;
            const auto eq = trimmed.find('=');
            if (eq == std::string::npos)
                throw ConfigError(origin + ":" + std::to_string(line_no) + ": expected key=value");
            const std::string key = trim(trimmed.substr(0, eq));
            const std::string value = trim(trimmed.substr(eq + 1));
            if (key.empty())
                throw ConfigError(origin + ":" + std::to_string(line_no) + ": empty key");
            if (known_keys.count(key) == 0)
                throw ConfigError(origin + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
            if (cfg.values_.count(key))
                throw ConfigError(origin + ":" + std::to_string(line_no) + ": duplicate key '" + key + "'");
            cfg.values_[key] = value;
        }
        return cfg;
    }

    bool has(const std::string& key) const { return values_.count(key) != 0; }

    std::string get_string(const std::string& key, const std::string& fallback) const {
        const auto it = values_.find(key);
        return it == values_.end() ? fallback : it->second;
    }

    std::string require_string(const std::string& key) const {
        const auto it = values_.find(key);
        if (it == values_.end()) throw ConfigError("missing required config key '" + key + "'");
        return it->second;
    }

    double get_real(const std::string& key, double fallback) const {
        return has(key) ? to_real(key, values_.at(key)) : fallback;
    }

    std::int64_t get_int(const std::string& key, std::int64_t fallback) const {
        return has(key) ? to_int(key, values_.at(key)) : fallback;
    }

    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const {
        const auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        try {
            std::size_t pos = 0;
            const std::uint64_t v = std::stoull(it->second, &pos);
            if (pos != it->second.size()) throw std::invalid_argument("trailing junk");
            return v;
        } catch (const std::exception&) {
            throw ConfigError("config key '" + key + "' is not an unsigned integer: " + it->second);
        }
    }

    std::vector<double> get_real_list(const std::string& key, const std::vector<double>& fallback) const {
        const auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        std::vector<double> out;
        std::istringstream ss(it->second);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(to_real(key, trim(item)));
        if (out.empty()) throw ConfigError("config key '" + key + "' holds an empty list");
        return out;
    }

    const std::map<std::string, std::string>& entries() const { return values_; }

private:
    static std::string trim(const std::string& s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return "";
        const auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    }

    static double to_real(const std::string& key, const std::string& v) {
        try {
            std::size_t pos = 0;
            const double x = std::stod(v, &pos);
            if (pos != v.size()) throw std::invalid_argument("trailing junk");
            return x;
        } catch (const std::exception&) {
            throw ConfigError("config key '" + key + "' is not a number: " + v);
        }
    }

    static std::int64_t to_int(const std::string& key, const std::string& v) {
        try {
            std::size_t pos = 0;
            const std::int64_t x = std::stoll(v, &pos);
            if (pos != v.size()) throw std::invalid_argument("trailing junk");
            return x;
        } catch (const std::exception&) {
            throw ConfigError("config key '" + key + "' is not an integer: " + v);
        }
    }

    std::map<std::string, std::string> values_;
};

}  // namespace subperc
