#include "qbatt/config.hpp"

#include <cmath>
#include <set>

namespace qbatt {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr const char* kScenarioNames[] = {
    "jc-single",     "sequential",  "parallel",        "noise-sweep",
    "speed-compare", "rwa-compare", "coupling-profile",
};

// Accumulates path-qualified validation issues across the whole walk.
struct Issues {
    std::vector<std::string> list;

    void add(const std::string& path, const std::string& what) {
        list.push_back(path + ": " + what);
    }
    void finish() const {
        if (!list.empty()) throw ConfigError(list);
    }
};

void reject_unknown_keys(const json& obj, const std::string& path,
                         const std::set<std::string>& allowed, Issues& issues) {
    for (const auto& item : obj.items()) {
        if (!allowed.count(item.key()))
            issues.add(path.empty() ? item.key() : path + "." + item.key(), "unknown key");
    }
}

bool expect_object(const json& v, const std::string& path, Issues& issues) {
    if (v.is_object()) return true;
    issues.add(path, "expected an object");
    return false;
}

template <class T>
bool read_field(const json& obj, const std::string& path, const char* key, T& out,
                Issues& issues) {
    if (!obj.contains(key)) return false;
    const json& v = obj.at(key);
    try {
        out = v.get<T>();
        return true;
    } catch (const json::exception&) {
        issues.add(path.empty() ? key : path + "." + std::string(key), "wrong type");
        return false;
    }
}

void check_range(bool ok, const std::string& path, const std::string& what, Issues& issues) {
    if (!ok) issues.add(path, what);
}

}  // namespace

const char* scenario_name(Scenario s) { return kScenarioNames[static_cast<int>(s)]; }

Scenario parse_scenario(const std::string& name) {
    for (int i = 0; i < 7; ++i)
        if (name == kScenarioNames[i]) return static_cast<Scenario>(i);
    throw std::invalid_argument("unknown scenario \"" + name + "\"");
}

RunConfig default_config(Scenario scenario) {
    RunConfig c;
    c.scenario = scenario;
    c.search = default_gaussian_search();
    c.spec.kind = scenario == Scenario::Parallel ? ProtocolKind::Parallel
                                                 : ProtocolKind::Sequential;
    switch (scenario) {
        case Scenario::JcSingle:
            c.spec.num_qubits = 1;
            c.spec.cavity = FockSpec{1};
            break;
        case Scenario::Sequential:
        case Scenario::NoiseSweep:
            c.spec.num_qubits = 5;
            c.spec.cavity = FockSpec{5};
            break;
        case Scenario::Parallel:
            c.spec.num_qubits = 2;
            c.spec.cavity = FockSpec{2};
            break;
        case Scenario::SpeedCompare:
            c.spec.num_qubits = 2;
            c.spec.cavity = FockSpec{2};
            break;
        case Scenario::RwaCompare:
            c.spec.num_qubits = 1;
            c.spec.cavity = FockSpec{5};
            break;
        case Scenario::CouplingProfile:
            c.spec.num_qubits = 1;
            c.spec.cavity = FockSpec{5};
            c.spec.params.omega_cav = 1.0 - 5e-3;
            c.spec.params.profile = SmoothedSquare{1e-2, 0.0};
            break;
    }
    return c;
}

RunConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError({std::string("not valid JSON: ") + e.what()});
    }

    Issues issues;
    if (!root.is_object()) {
        issues.add("config", "top level must be a JSON object");
        issues.finish();
    }

    std::string scenario_text;
    if (!read_field(root, "", "scenario", scenario_text, issues))
        issues.add("scenario", "required");
    issues.finish();

    RunConfig config;
    try {
        config = default_config(parse_scenario(scenario_text));
    } catch (const std::invalid_argument& e) {
        issues.add("scenario", e.what());
        issues.finish();
    }

    reject_unknown_keys(root, "",
                        {"scenario", "num_qubits", "cavity", "qubit", "model", "tau_grid",
                         "objective", "threads", "output", "sweep", "gaussian_search", "speed",
                         "rwa_compare", "coupling_profile"},
                        issues);

    if (read_field(root, "", "num_qubits", config.spec.num_qubits, issues))
        check_range(config.spec.num_qubits >= 1 && config.spec.num_qubits <= 12, "num_qubits",
                    "must be between 1 and 12", issues);

    std::string cavity_text;
    if (read_field(root, "", "cavity", cavity_text, issues)) {
        try {
            config.spec.cavity = parse_cavity_state(cavity_text);
        } catch (const std::exception& e) {
            issues.add("cavity", e.what());
        }
    }

    if (root.contains("qubit") && expect_object(root["qubit"], "qubit", issues)) {
        const json& q = root["qubit"];
        reject_unknown_keys(q, "qubit", {"q"}, issues);
        if (read_field(q, "qubit", "q", config.spec.qubit.q, issues))
            check_range(config.spec.qubit.q >= 0.0 && config.spec.qubit.q <= 1.0, "qubit.q",
                        "must be in [0, 1]", issues);
    }

    if (root.contains("model") && expect_object(root["model"], "model", issues)) {
        const json& m = root["model"];
        reject_unknown_keys(m, "model", {"omega_qub", "omega_cav", "g", "rwa", "coupling"},
                            issues);
        ModelParams& p = config.spec.params;
        if (read_field(m, "model", "omega_qub", p.omega_qub, issues))
            check_range(p.omega_qub > 0.0, "model.omega_qub", "must be positive", issues);
        if (read_field(m, "model", "omega_cav", p.omega_cav, issues))
            check_range(p.omega_cav > 0.0, "model.omega_cav", "must be positive", issues);
        if (read_field(m, "model", "g", p.g, issues))
            check_range(p.g > 0.0, "model.g", "must be positive", issues);
        read_field(m, "model", "rwa", p.rwa, issues);
        if (m.contains("coupling") && expect_object(m["coupling"], "model.coupling", issues)) {
            const json& cp = m["coupling"];
            reject_unknown_keys(cp, "model.coupling", {"profile", "g_delta", "t_tilde"}, issues);
            std::string profile = "constant";
            read_field(cp, "model.coupling", "profile", profile, issues);
            if (profile == "constant") {
                p.profile = ConstantCoupling{};
            } else if (profile == "smoothed-square") {
                SmoothedSquare ss;
                if (std::holds_alternative<SmoothedSquare>(p.profile))
                    ss = std::get<SmoothedSquare>(p.profile);
                if (read_field(cp, "model.coupling", "g_delta", ss.g_delta, issues))
                    check_range(ss.g_delta > 0.0, "model.coupling.g_delta", "must be positive",
                                issues);
                if (read_field(cp, "model.coupling", "t_tilde", ss.t_tilde, issues))
                    check_range(ss.t_tilde >= 0.0, "model.coupling.t_tilde",
                                "must be >= 0 (0 requests the automatic half charging time)",
                                issues);
                p.profile = ss;
            } else {
                issues.add("model.coupling.profile",
                           "must be \"constant\" or \"smoothed-square\"");
            }
        }
    }

    if (root.contains("tau_grid") && expect_object(root["tau_grid"], "tau_grid", issues)) {
        const json& t = root["tau_grid"];
        reject_unknown_keys(t, "tau_grid", {"points", "g_tau_max"}, issues);
        if (read_field(t, "tau_grid", "points", config.spec.tau_grid.points, issues))
            check_range(config.spec.tau_grid.points >= 100, "tau_grid.points",
                        "must be at least 100", issues);
        if (read_field(t, "tau_grid", "g_tau_max", config.spec.tau_grid.g_tau_max, issues))
            check_range(config.spec.tau_grid.g_tau_max >= 0.0, "tau_grid.g_tau_max",
                        "must be >= 0 (0 requests the automatic span)", issues);
    }

    std::string objective;
    if (read_field(root, "", "objective", objective, issues)) {
        if (objective == "max-snr")
            config.spec.objective = WindowObjective::MaxSNR;
        else if (objective == "max-fidelity")
            config.spec.objective = WindowObjective::MaxFidelity;
        else
            issues.add("objective", "must be \"max-snr\" or \"max-fidelity\"");
    }

    if (read_field(root, "", "threads", config.threads, issues))
        check_range(config.threads >= 0, "threads", "must be >= 0", issues);

    if (root.contains("output") && expect_object(root["output"], "output", issues)) {
        const json& o = root["output"];
        reject_unknown_keys(o, "output", {"path", "format"}, issues);
        read_field(o, "output", "path", config.out_path, issues);
        std::string format;
        if (read_field(o, "output", "format", format, issues)) {
            if (format == "csv")
                config.format = OutputFormat::Csv;
            else if (format == "json")
                config.format = OutputFormat::Json;
            else
                issues.add("output.format", "must be \"csv\" or \"json\"");
        }
    }

    if (root.contains("sweep") && expect_object(root["sweep"], "sweep", issues)) {
        const json& s = root["sweep"];
        reject_unknown_keys(s, "sweep", {"axis", "values", "mean_photons"}, issues);
        std::string axis;
        if (read_field(s, "sweep", "axis", axis, issues)) {
            try {
                config.sweep_axis.parameter = parse_sweep_parameter(axis);
            } catch (const std::invalid_argument& e) {
                issues.add("sweep.axis", e.what());
            }
        }
        read_field(s, "sweep", "values", config.sweep_axis.values, issues);
        if (read_field(s, "sweep", "mean_photons", config.photon_budgets, issues))
            check_range(!config.photon_budgets.empty(), "sweep.mean_photons",
                        "must not be empty", issues);
    }

    if (root.contains("gaussian_search") &&
        expect_object(root["gaussian_search"], "gaussian_search", issues)) {
        const json& g = root["gaussian_search"];
        reject_unknown_keys(g, "gaussian_search", {"r_min", "r_max", "r_step"}, issues);
        double r_min = 0.0, r_max = 1.2, r_step = 0.05;
        read_field(g, "gaussian_search", "r_min", r_min, issues);
        read_field(g, "gaussian_search", "r_max", r_max, issues);
        read_field(g, "gaussian_search", "r_step", r_step, issues);
        if (r_min < 0.0) issues.add("gaussian_search.r_min", "must be >= 0");
        if (r_max < r_min) issues.add("gaussian_search.r_max", "must be >= r_min");
        if (!(r_step > 0.0)) issues.add("gaussian_search.r_step", "must be positive");
        if (r_min >= 0.0 && r_max >= r_min && r_step > 0.0) {
            config.search.r_grid.clear();
            for (double r = r_min; r <= r_max + 1e-12; r += r_step)
                config.search.r_grid.push_back(r);
        }
    }

    if (root.contains("speed") && expect_object(root["speed"], "speed", issues)) {
        const json& s = root["speed"];
        reject_unknown_keys(
            s, "speed", {"m_values", "qubit_q", "detuning_ratio", "n_th", "attenuation_p"},
            issues);
        SpeedSettings& sp = config.speed;
        if (read_field(s, "speed", "m_values", sp.m_values, issues)) {
            for (int m : sp.m_values)
                check_range(m >= 1 && m <= 6, "speed.m_values", "entries must be in [1, 6]",
                            issues);
            check_range(!sp.m_values.empty(), "speed.m_values", "must not be empty", issues);
        }
        if (read_field(s, "speed", "qubit_q", sp.qubit_q, issues))
            check_range(sp.qubit_q >= 0.0 && sp.qubit_q <= 1.0, "speed.qubit_q",
                        "must be in [0, 1]", issues);
        if (read_field(s, "speed", "detuning_ratio", sp.detuning_ratio, issues))
            check_range(std::abs(sp.detuning_ratio) < 1.0, "speed.detuning_ratio",
                        "must have magnitude below 1", issues);
        if (read_field(s, "speed", "n_th", sp.n_th, issues))
            check_range(sp.n_th >= 0.0, "speed.n_th", "must be >= 0", issues);
        if (read_field(s, "speed", "attenuation_p", sp.attenuation_p, issues))
            check_range(sp.attenuation_p >= 0.0 && sp.attenuation_p <= 1.0,
                        "speed.attenuation_p", "must be in [0, 1]", issues);
        if (sp.n_th > 0.0 && sp.attenuation_p > 0.0)
            issues.add("speed", "set at most one of n_th and attenuation_p");
    }

    if (root.contains("rwa_compare") &&
        expect_object(root["rwa_compare"], "rwa_compare", issues)) {
        const json& r = root["rwa_compare"];
        reject_unknown_keys(r, "rwa_compare", {"couplings"}, issues);
        if (read_field(r, "rwa_compare", "couplings", config.rwa_couplings, issues))
            check_range(!config.rwa_couplings.empty(), "rwa_compare.couplings",
                        "must not be empty", issues);
    }

    if (root.contains("coupling_profile") &&
        expect_object(root["coupling_profile"], "coupling_profile", issues)) {
        const json& r = root["coupling_profile"];
        reject_unknown_keys(r, "coupling_profile", {"g_deltas"}, issues);
        if (read_field(r, "coupling_profile", "g_deltas", config.profile_deltas, issues))
            check_range(!config.profile_deltas.empty(), "coupling_profile.g_deltas",
                        "must not be empty", issues);
    }

    // Cross-field checks and scenario requirements.
    switch (config.scenario) {
        case Scenario::JcSingle:
        case Scenario::RwaCompare:
        case Scenario::CouplingProfile:
            if (config.spec.num_qubits != 1)
                issues.add("num_qubits",
                           std::string("must be 1 for scenario ") +
                               scenario_name(config.scenario));
            break;
        case Scenario::Parallel:
            if (config.spec.num_qubits > 6)
                issues.add("num_qubits", "parallel protocol supports at most 6 qubits");
            if (!config.spec.params.constant_coupling())
                issues.add("model.coupling.profile",
                           "parallel scenario requires constant coupling");
            break;
        case Scenario::NoiseSweep:
            if (config.sweep_axis.values.empty())
                issues.add("sweep.values", "required for scenario noise-sweep");
            break;
        default:
            break;
    }
    if (config.scenario == Scenario::CouplingProfile &&
        !std::holds_alternative<SmoothedSquare>(config.spec.params.profile))
        issues.add("model.coupling.profile",
                   "coupling-profile scenario requires the smoothed-square pulse");

    // Resolve the automatic pulse half-time once the cavity is known.
    if (auto* ss = std::get_if<SmoothedSquare>(&config.spec.params.profile);
        ss && ss->t_tilde <= 0.0 && config.spec.params.g > 0.0) {
        const double n = std::max(1.0, nominal_mean_photons(config.spec.cavity));
        ss->t_tilde = M_PI / (4.0 * std::sqrt(n)) / config.spec.params.g;
    }

    // Dimension guard: the composite space must stay within the hard cap.
    if (config.spec.num_qubits >= 1 && config.spec.num_qubits <= 12) {
        try {
            const int d = recommended_cavity_dim(
                config.spec.cavity, config.scenario == Scenario::Parallel
                                        ? config.spec.num_qubits
                                        : 1);
            const long total = (1L << (config.scenario == Scenario::Parallel
                                           ? config.spec.num_qubits
                                           : 1)) *
                               d;
            if (total > kMaxTotalDim)
                issues.add("cavity", "state and qubit count need dimension " +
                                         std::to_string(total) + ", above the cap " +
                                         std::to_string(kMaxTotalDim));
        } catch (const TruncationError& e) {
            issues.add("cavity", e.what());
        } catch (const std::exception&) {
            // Cavity already reported above.
        }
    }

    issues.finish();
    return config;
}

nlohmann::ordered_json config_to_json(const RunConfig& config) {
    ordered_json j;
    j["scenario"] = scenario_name(config.scenario);
    j["num_qubits"] = config.spec.num_qubits;
    j["cavity"] = to_string(config.spec.cavity);
    j["qubit"] = {{"q", config.spec.qubit.q}};
    ordered_json coupling;
    if (const auto* ss = std::get_if<SmoothedSquare>(&config.spec.params.profile)) {
        coupling = {{"profile", "smoothed-square"},
                    {"g_delta", ss->g_delta},
                    {"t_tilde", ss->t_tilde}};
    } else {
        coupling = {{"profile", "constant"}};
    }
    j["model"] = {{"omega_qub", config.spec.params.omega_qub},
                  {"omega_cav", config.spec.params.omega_cav},
                  {"g", config.spec.params.g},
                  {"rwa", config.spec.params.rwa},
                  {"coupling", coupling}};
    j["tau_grid"] = {{"points", config.spec.tau_grid.points},
                     {"g_tau_max", config.spec.tau_grid.g_tau_max}};
    j["objective"] =
        config.spec.objective == WindowObjective::MaxSNR ? "max-snr" : "max-fidelity";
    j["threads"] = config.threads;
    j["output"] = {{"path", config.out_path},
                   {"format", config.format == OutputFormat::Csv ? "csv" : "json"}};
    switch (config.scenario) {
        case Scenario::NoiseSweep:
            j["sweep"] = {{"axis", sweep_parameter_name(config.sweep_axis.parameter)},
                          {"values", config.sweep_axis.values},
                          {"mean_photons", config.photon_budgets}};
            j["gaussian_search"] = {{"r_grid", config.search.r_grid}};
            break;
        case Scenario::SpeedCompare:
            j["speed"] = {{"m_values", config.speed.m_values},
                          {"qubit_q", config.speed.qubit_q},
                          {"detuning_ratio", config.speed.detuning_ratio},
                          {"n_th", config.speed.n_th},
                          {"attenuation_p", config.speed.attenuation_p}};
            break;
        case Scenario::RwaCompare:
            j["rwa_compare"] = {{"couplings", config.rwa_couplings}};
            break;
        case Scenario::CouplingProfile:
            j["coupling_profile"] = {{"g_deltas", config.profile_deltas}};
            break;
        default:
            break;
    }
    return j;
}

}  // namespace qbatt
