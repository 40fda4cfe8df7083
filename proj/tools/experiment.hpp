#pragma once

// Experiment plumbing for the CLI: deterministic CSV tables, a JSON metadata
// sidecar carrying seeds/tolerances/digest, and config-file overrides.

#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <stdexcept>
#include <type_traits>
#include <string>
#include <vector>

#include <json.hpp>

namespace expt {

using nlohmann::json;

inline uint64_t fnv1a64(const std::string& s) {
    uint64_t x = 1469598103934665603ull;
    for (unsigned char c : s) {
        x ^= c;
        x *= 1099511628211ull;
    }
    return x;
}

/// Locale-independent shortest-ish formatting so CSV bodies are byte-stable.
inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}
inline std::string fmt(bool v) { return v ? "1" : "0"; }
template <typename T, typename std::enable_if<std::is_integral<T>::value, int>::type = 0>
std::string fmt(T v) {
    return std::to_string(v);
}
inline std::string fmt(const std::string& v) { return v; }
inline std::string fmt(const char* v) { return v; }

struct ResultTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    explicit ResultTable(std::vector<std::string> cols) : columns(std::move(cols)) {}

    template <typename... Ts>
    void add(const Ts&... vals) {
        std::vector<std::string> row{fmt(vals)...};
        if (row.size() != columns.size()) throw std::logic_error("ResultTable: column count mismatch");
        rows.push_back(std::move(row));
    }

    std::string body() const {
        std::string out;
        for (size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + columns[i];
        out += "\n";
        for (const auto& row : rows) {
            for (size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + row[i];
            out += "\n";
        }
        return out;
    }
};

inline std::string iso8601_now() {
    std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

/// Writes <path> (CSV) and <path>.meta.json.  The sidecar carries the full
/// resolved config, its digest, library version and timestamp; the CSV body
/// is a pure function of the config.
inline void write_outputs(const std::string& path, const std::string& command, const json& config,
                          const ResultTable& table, json extra = json::object()) {
    std::ofstream csv(path, std::ios::binary);
    if (!csv) throw std::runtime_error("cannot write " + path);
    csv << table.body();
    csv.close();

    json meta;
    meta["command"] = command;
    meta["config"] = config;
    json hashed = config;  // the digest names the computation, not the destination
    hashed.erase("out");
    meta["config_digest"] = fnv1a64(command + "\n" + hashed.dump());
    meta["library_version"] = TRAPWALK_VERSION;
    meta["generated_at"] = iso8601_now();
    meta["columns"] = table.columns;
    meta["rows"] = table.rows.size();
    for (auto& [k, v] : extra.items()) meta[k] = v;

    std::ofstream side(path + ".meta.json", std::ios::binary);
    if (!side) throw std::runtime_error("cannot write " + path + ".meta.json");
    side << meta.dump(2) << "\n";
}

/// Flags are collected into `cfg` first; a config file, when given, overrides
/// any keys it mentions.
inline void apply_config_file(json& cfg, const std::string& file) {
    if (file.empty()) return;
    std::ifstream in(file);
    if (!in) throw std::invalid_argument("config file not found: " + file);
    json over = json::parse(in);
    for (auto& [k, v] : over.items()) {
        if (!cfg.contains(k)) throw std::invalid_argument("config file key not recognized by this command: " + k);
        cfg[k] = v;
    }
}

}  // namespace expt
