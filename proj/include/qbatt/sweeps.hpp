#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qbatt/protocols.hpp"

namespace qbatt {

enum class SweepParameter {
    ThermalOccupation,
    AttenuationP,
    DetuningRatio,
    QubitQ,
    MeanPhotons,
    CouplingDelta,
};

const char* sweep_parameter_name(SweepParameter p);
SweepParameter parse_sweep_parameter(const std::string& name);

// One swept control knob and the values to visit, ascending.
struct SweepAxis {
    SweepParameter parameter = SweepParameter::ThermalOccupation;
    std::vector<double> values;
};

// Squeeze-parameter grid searched under a fixed photon budget; the
// displacement is solved from the budget for each squeeze value.
struct GaussianSearchSpace {
    std::vector<double> r_grid;
};

// r in {0, 0.05, ..., 1.2}.
GaussianSearchSpace default_gaussian_search();

// Displacement amplitude matching the photon budget at squeeze r, or
// nothing when the squeeze alone already exceeds the budget.
std::optional<double> gaussian_alpha_for(double r, double mean_photons);

struct GaussianOptimum {
    double r = 0.0;
    double alpha = 0.0;
    double averaged = 0.0;                // averaged ratio of the winner
    std::vector<std::string> notes;       // skipped grid points
};

// Grid search maximizing the averaged ratio over the squeeze grid with the
// displacement tied to the photon budget. Ties go to the smallest squeeze.
GaussianOptimum optimize_gaussian(const GaussianSearchSpace& search, const ProtocolSpec& base,
                                  double mean_photons, int threads = 1);

// Cavity truncation actually used by a run, with the initial-state weight
// beyond it.
struct TruncationRecord {
    int dim = 0;
    double tail = 0.0;
};

struct SweepRow {
    double axis_value = 0.0;
    double mean_photons = 0.0;
    double fock_snr = 0.0;      // averaged ratio, number-state branch
    double gaussian_snr = 0.0;  // averaged ratio, best Gaussian branch
    double advantage = 0.0;     // fock_snr - gaussian_snr
    double gaussian_r = 0.0;
    double gaussian_alpha = 0.0;
};

struct SweepTable {
    SweepAxis axis;
    std::vector<SweepRow> rows;
    std::vector<std::string> notes;
    std::vector<TruncationRecord> truncations;
};

// Number-state vs best-Gaussian advantage across one noise/imperfection
// axis and a list of photon budgets. Thermal-occupation and attenuation
// values degrade only the number-state branch (the Gaussian comparator is
// optimized once per budget and reused); detuning and qubit-population
// values apply to both branches, with the Gaussian re-optimized per value.
SweepTable sweep_D(const SweepAxis& axis, const ProtocolSpec& fock_base,
                   const ProtocolSpec& gaussian_base, const GaussianSearchSpace& search,
                   const std::vector<double>& photon_budgets, int threads = 1);

struct RwaRow {
    double coupling = 0.0;  // g / omega_qub
    double fock_jc_max = 0.0;
    double fock_rabi_max = 0.0;
    double squeezed_jc_max = 0.0;
    double squeezed_rabi_max = 0.0;
    double rabi_gap = 0.0;         // fock_rabi_max - squeezed_rabi_max
    double mean_deviation = 0.0;   // max |mean_rabi - mean_jc| on the grid
};

struct RwaTable {
    std::vector<RwaRow> rows;
    std::vector<TruncationRecord> truncations;
};

// Single-qubit charging with and without the counter-rotating terms, for
// the number state named by the spec and a squeezed comparator at the same
// photon budget.
RwaTable sweep_rwa_comparison(const ProtocolSpec& spec, const std::vector<double>& couplings,
                              double squeeze_r = 0.6, int threads = 1);

struct ProfileRow {
    double g_delta = 0.0;
    double fock_max_snr = 0.0;
    double squeezed_max_snr = 0.0;
    double gap = 0.0;
};

struct ProfileTable {
    std::vector<ProfileRow> rows;
    std::vector<TruncationRecord> truncations;
};

// Single-qubit charging under the smoothed-square coupling pulse for a
// list of edge widths, number state vs squeezed comparator.
ProfileTable sweep_coupling_profile(const ProtocolSpec& spec, const std::vector<double>& deltas,
                                    double squeeze_r = 0.6, int threads = 1);

}  // namespace qbatt
