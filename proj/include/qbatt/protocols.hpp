#pragma once

#include <optional>
#include <string>

#include "qbatt/cavity_states.hpp"
#include "qbatt/counting_stats.hpp"

namespace qbatt {

// Interaction-time grid in g*tau units. A non-positive g_tau_max asks for
// the per-window automatic span 1.5*pi/sqrt(remaining photons).
struct TauGrid {
    int points = 2000;
    double g_tau_max = 0.0;
};

enum class WindowObjective { MaxSNR, MaxFidelity };
enum class ProtocolKind { Sequential, Parallel };

struct QubitStateSpec {
    double q = 0.0;  // initial excited-state weight
};

struct ProtocolSpec {
    ProtocolKind kind = ProtocolKind::Sequential;
    int num_qubits = 1;
    CavityStateSpec cavity = FockSpec{1};
    QubitStateSpec qubit;
    ModelParams params;
    TauGrid tau_grid;
    WindowObjective objective = WindowObjective::MaxSNR;
};

// One charging window: counting statistics of the active qubit across the
// time grid, its excited-state fidelity, and (parallel protocol only) the
// statistics of the collective counter.
struct WindowRecord {
    int window_index = 1;
    std::vector<double> g_tau;
    std::vector<EnergyStats> stats;
    std::vector<double> fidelity;
    std::vector<EnergyStats> collective;
    int best_index = 0;
    double g_tau_star = 0.0;
};

struct ChargeReport {
    ProtocolSpec spec;
    int cavity_dim = 0;
    double mean_photons = 0.0;  // nominal, used for spans and normalization
    std::vector<WindowRecord> windows;
    // Reduced cavity state after each window (sequential) or at the chosen
    // time (parallel).
    std::vector<DensityMatrix> cavity_after;
    double total_g_tau = 0.0;
    std::vector<std::string> warnings;
};

std::vector<double> tau_grid_points(const TauGrid& grid, double mean_photons, int window_index);

// One qubit at a time against the shared cavity; the cavity is never reset
// and each window advances it at that window's chosen time.
ChargeReport run_sequential(const ProtocolSpec& spec, int threads = 1);

// All qubits coupled at once; reports both the first-qubit and the
// collective counter.
ChargeReport run_parallel(const ProtocolSpec& spec, int threads = 1);

// True when two specs agree in everything except the cavity preparation.
bool same_protocol_settings(const ProtocolSpec& a, const ProtocolSpec& b);

// Largest ratio across one window's grid; the divergence sentinel wins
// over every finite value.
double window_max_snr(const WindowRecord& rec);

// Sum over windows of the per-window maximum ratio, normalized by the
// nominal photon number. Divergent maxima are replaced by divergence_cap
// when given and rejected otherwise.
double averaged_snr(const ChargeReport& report, double mean_photons,
                    std::optional<double> divergence_cap = std::nullopt);

// Difference of averaged ratios between two runs that agree in everything
// but the cavity preparation.
double advantage_D(const ChargeReport& fock, const ChargeReport& gaussian, double mean_photons);

// Charging speed figure: averaged per-window maximum ratio divided by the
// total charging time (sequential), or the single-qubit maximum divided by
// the time it is reached (parallel).
double snr_per_time(const ChargeReport& report);

}  // namespace qbatt
