#include "qbatt/report_io.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "qbatt/parallel.hpp"

namespace qbatt {

namespace {

using nlohmann::ordered_json;

void add_truncation(RunManifest& manifest, int dim, double tail) {
    for (size_t i = 0; i < manifest.truncation_dims.size(); ++i)
        if (manifest.truncation_dims[i] == dim && manifest.discarded_tails[i] == tail) return;
    manifest.truncation_dims.push_back(dim);
    manifest.discarded_tails.push_back(tail);
}

void merge_truncations(RunManifest& manifest, const std::vector<TruncationRecord>& recs) {
    for (const auto& r : recs) add_truncation(manifest, r.dim, r.tail);
}

void fill_charge_table(Table& table, RunManifest& manifest, const ChargeReport& report,
                       bool with_window_column) {
    table.columns.clear();
    if (with_window_column) table.columns.push_back("window_index");
    for (const char* c : {"g_tau", "mean", "variance", "snr", "fidelity"})
        table.columns.push_back(c);
    const bool collective = !report.windows.empty() && !report.windows.front().collective.empty();
    if (collective)
        for (const char* c : {"collective_mean", "collective_variance", "collective_snr"})
            table.columns.push_back(c);

    for (const auto& w : report.windows) {
        manifest.chosen_g_tau.push_back(w.g_tau_star);
        for (size_t i = 0; i < w.g_tau.size(); ++i) {
            std::vector<double> row;
            if (with_window_column) row.push_back(w.window_index);
            row.push_back(w.g_tau[i]);
            row.push_back(w.stats[i].mean);
            row.push_back(w.stats[i].variance);
            row.push_back(w.stats[i].snr);
            row.push_back(w.fidelity[i]);
            if (collective) {
                row.push_back(w.collective[i].mean);
                row.push_back(w.collective[i].variance);
                row.push_back(w.collective[i].snr);
            }
            table.rows.push_back(std::move(row));
        }
    }
    manifest.warnings.insert(manifest.warnings.end(), report.warnings.begin(),
                             report.warnings.end());
}

void run_charge_scenario(const RunConfig& config, int threads, ScenarioResult& result) {
    const bool parallel = config.scenario == Scenario::Parallel;
    const ChargeReport report = parallel ? run_parallel(config.spec, threads)
                                         : run_sequential(config.spec, threads);
    add_truncation(result.manifest, report.cavity_dim,
                   truncation_tail(config.spec.cavity, report.cavity_dim));
    fill_charge_table(result.table, result.manifest, report, !parallel);
}

void run_noise_sweep(const RunConfig& config, int threads, ScenarioResult& result) {
    const SweepTable t = sweep_D(config.sweep_axis, config.spec, config.spec, config.search,
                                 config.photon_budgets, threads);
    result.table.columns = {"axis_value", "mean_photons",  "fock_snr",      "gaussian_snr",
                            "advantage",  "gaussian_r",    "gaussian_alpha"};
    for (const auto& r : t.rows)
        result.table.rows.push_back({r.axis_value, r.mean_photons, r.fock_snr, r.gaussian_snr,
                                     r.advantage, r.gaussian_r, r.gaussian_alpha});
    result.manifest.warnings.insert(result.manifest.warnings.end(), t.notes.begin(),
                                    t.notes.end());
    merge_truncations(result.manifest, t.truncations);
}

void run_speed_compare(const RunConfig& config, int threads, ScenarioResult& result) {
    result.table.columns = {"num_qubits", "sequential_snr_per_time", "parallel_snr_per_time",
                            "ratio"};
    for (int m : config.speed.m_values) {
        ProtocolSpec seq = config.spec;
        seq.kind = ProtocolKind::Sequential;
        seq.num_qubits = m;
        if (config.speed.n_th > 0.0)
            seq.cavity = ThermalizedFockSpec{m, config.speed.n_th};
        else if (config.speed.attenuation_p > 0.0)
            seq.cavity = AttenuatedFockSpec{m, config.speed.attenuation_p};
        else
            seq.cavity = FockSpec{m};
        seq.qubit.q = config.speed.qubit_q;
        seq.params.omega_cav = seq.params.omega_qub * (1.0 - config.speed.detuning_ratio);

        ProtocolSpec par = config.spec;
        par.kind = ProtocolKind::Parallel;
        par.num_qubits = m;
        par.cavity = FockSpec{m};
        par.qubit.q = 0.0;
        par.params.omega_cav = par.params.omega_qub;

        const ChargeReport seq_report = run_sequential(seq, threads);
        const ChargeReport par_report = run_parallel(par, threads);
        add_truncation(result.manifest, seq_report.cavity_dim,
                       truncation_tail(seq.cavity, seq_report.cavity_dim));
        add_truncation(result.manifest, par_report.cavity_dim,
                       truncation_tail(par.cavity, par_report.cavity_dim));
        const double s = snr_per_time(seq_report);
        const double p = snr_per_time(par_report);
        result.table.rows.push_back({static_cast<double>(m), s, p, s / p});
    }
}

void run_rwa_compare(const RunConfig& config, int threads, ScenarioResult& result) {
    const RwaTable t = sweep_rwa_comparison(config.spec, config.rwa_couplings, 0.6, threads);
    result.table.columns = {"coupling",          "fock_jc_max_snr",     "fock_rabi_max_snr",
                            "squeezed_jc_max_snr", "squeezed_rabi_max_snr", "rabi_gap",
                            "mean_deviation"};
    for (const auto& r : t.rows)
        result.table.rows.push_back({r.coupling, r.fock_jc_max, r.fock_rabi_max,
                                     r.squeezed_jc_max, r.squeezed_rabi_max, r.rabi_gap,
                                     r.mean_deviation});
    merge_truncations(result.manifest, t.truncations);
}

void run_coupling_profile(const RunConfig& config, int threads, ScenarioResult& result) {
    const ProfileTable t =
        sweep_coupling_profile(config.spec, config.profile_deltas, 0.6, threads);
    result.table.columns = {"g_delta", "fock_max_snr", "squeezed_max_snr", "gap"};
    for (const auto& r : t.rows)
        result.table.rows.push_back(
            {r.g_delta, r.fock_max_snr, r.squeezed_max_snr, r.gap});
    merge_truncations(result.manifest, t.truncations);
}

ordered_json manifest_to_json(const RunManifest& m, bool with_wall_clock) {
    ordered_json j;
    j["artifact_version"] = m.artifact_version;
    j["scenario"] = m.scenario;
    j["config_hash"] = m.config_hash;
    j["config"] = m.config_echo;
    j["truncation_dims"] = m.truncation_dims;
    j["discarded_tails"] = m.discarded_tails;
    if (!m.chosen_g_tau.empty()) j["chosen_g_tau"] = m.chosen_g_tau;
    j["warnings"] = m.warnings;
    j["units"] = {{"energy", "quanta of the qubit frequency"}, {"time", "g*tau"}};
    if (with_wall_clock) j["wall_clock_ms"] = m.wall_clock_ms;
    return j;
}

}  // namespace

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string format_number(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

ScenarioResult run_scenario(const RunConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    ScenarioResult result;
    result.manifest.scenario = scenario_name(config.scenario);
    result.manifest.config_echo = config_to_json(config);
    result.manifest.config_hash = fnv1a_hex(result.manifest.config_echo.dump());
    const int threads = resolve_threads(config.threads);

    switch (config.scenario) {
        case Scenario::JcSingle:
        case Scenario::Sequential:
        case Scenario::Parallel:
            run_charge_scenario(config, threads, result);
            break;
        case Scenario::NoiseSweep:
            run_noise_sweep(config, threads, result);
            break;
        case Scenario::SpeedCompare:
            run_speed_compare(config, threads, result);
            break;
        case Scenario::RwaCompare:
            run_rwa_compare(config, threads, result);
            break;
        case Scenario::CouplingProfile:
            run_coupling_profile(config, threads, result);
            break;
    }

    result.manifest.wall_clock_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                        std::chrono::steady_clock::now() - start)
                                        .count();
    return result;
}

std::string to_csv(const ScenarioResult& result) {
    std::string out = "# units: energy in quanta of the qubit frequency; time axis is g*tau\n";
    for (size_t c = 0; c < result.table.columns.size(); ++c) {
        if (c) out += ',';
        out += result.table.columns[c];
    }
    out += '\n';
    for (const auto& row : result.table.rows) {
        for (size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += format_number(row[c]);
        }
        out += '\n';
    }
    out += "# manifest: " + manifest_to_json(result.manifest, false).dump() + "\n";
    return out;
}

std::string to_json(const ScenarioResult& result) {
    ordered_json j;
    j["scenario"] = result.manifest.scenario;
    j["columns"] = result.table.columns;
    ordered_json rows = ordered_json::array();
    for (const auto& row : result.table.rows) {
        ordered_json r = ordered_json::array();
        for (double v : row) {
            if (std::isinf(v))
                r.push_back(v > 0 ? "inf" : "-inf");
            else
                r.push_back(v);
        }
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    j["manifest"] = manifest_to_json(result.manifest, true);
    return j.dump(2) + "\n";
}

void write_result(const RunConfig& config, const ScenarioResult& result) {
    const std::string text =
        config.format == OutputFormat::Csv ? to_csv(result) : to_json(result);
    if (config.out_path.empty() || config.out_path == "-") {
        std::cout << text;
        return;
    }
    {
        std::ofstream f(config.out_path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open output file " + config.out_path);
        f << text;
        if (!f) throw std::runtime_error("failed writing output file " + config.out_path);
    }
    if (config.format == OutputFormat::Csv) {
        const std::string side = config.out_path + ".manifest.json";
        std::ofstream f(side, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open manifest file " + side);
        f << manifest_to_json(result.manifest, true).dump(2) << "\n";
        if (!f) throw std::runtime_error("failed writing manifest file " + side);
    }
}

}  // namespace qbatt
