#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qbatt/protocols.hpp"
#include "qbatt/sweeps.hpp"

namespace qbatt {

enum class Scenario {
    JcSingle,
    Sequential,
    Parallel,
    NoiseSweep,
    SpeedCompare,
    RwaCompare,
    CouplingProfile,
};

const char* scenario_name(Scenario s);
Scenario parse_scenario(const std::string& name);

enum class OutputFormat { Csv, Json };

// Knobs of the sequential-vs-parallel charging-speed comparison. At most
// one of the two cavity degradations may be active.
struct SpeedSettings {
    std::vector<int> m_values{2, 3, 4, 5};
    double qubit_q = 1e-3;
    double detuning_ratio = 1e-3;
    double n_th = 1e-2;
    double attenuation_p = 0.0;
};

struct RunConfig {
    Scenario scenario = Scenario::JcSingle;
    ProtocolSpec spec;
    int threads = 0;  // 0: environment override or hardware default
    std::string out_path;
    OutputFormat format = OutputFormat::Csv;

    SweepAxis sweep_axis;
    std::vector<double> photon_budgets{1, 2, 3, 4, 5};
    GaussianSearchSpace search;
    SpeedSettings speed;
    std::vector<double> rwa_couplings{1e-2, 1e-3};
    std::vector<double> profile_deltas{3e-2, 1e-2, 3e-3};
};

// Scenario-appropriate defaults; the starting point for file overrides.
RunConfig default_config(Scenario scenario);

// Parses and validates a JSON config. Collects every problem it can find
// and throws one ConfigError carrying the full path-qualified list.
RunConfig parse_config(const std::string& text);

// Canonical echo of the effective configuration, defaults included.
nlohmann::ordered_json config_to_json(const RunConfig& config);

}  // namespace qbatt
