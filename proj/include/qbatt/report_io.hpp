#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qbatt/config.hpp"

namespace qbatt {

inline constexpr const char* kArtifactVersion = "0.1.0";

// Flat numeric table; integer-valued cells print without a decimal point
// and the divergence sentinel prints as "inf".
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

struct RunManifest {
    std::string artifact_version = kArtifactVersion;
    std::string scenario;
    std::string config_hash;  // FNV-1a of the canonical config echo
    nlohmann::ordered_json config_echo;
    std::vector<int> truncation_dims;
    std::vector<double> discarded_tails;
    std::vector<double> chosen_g_tau;  // per-window best times, when applicable
    std::vector<std::string> warnings;
    long wall_clock_ms = 0;
};

struct ScenarioResult {
    Table table;
    RunManifest manifest;
};

// 64-bit FNV-1a, hex-encoded.
std::string fnv1a_hex(const std::string& text);

// "%.12g" with "inf" for the divergence sentinel.
std::string format_number(double v);

// Executes the configured scenario and assembles its table and manifest.
ScenarioResult run_scenario(const RunConfig& config);

// Units comment, header row, data rows, and a trailing manifest comment
// (without the wall clock, so identical configs give identical bytes).
std::string to_csv(const ScenarioResult& result);

// Full structured form, manifest inline; the sentinel becomes the string
// "inf" in place of a number.
std::string to_json(const ScenarioResult& result);

// Writes the table to config.out_path in the configured format, plus a
// "<path>.manifest.json" sidecar for CSV. An empty path or "-" prints the
// table to stdout instead.
void write_result(const RunConfig& config, const ScenarioResult& result);

}  // namespace qbatt
