#pragma once

#include <functional>
#include <vector>

#include "qbatt/dynamics.hpp"

namespace qbatt {

// Variances below this floor are treated as exactly zero when forming
// signal-to-noise ratios.
inline constexpr double kVarianceFloor = 1e-12;

// Moments of the injected energy at one interaction time, energies in
// units of one qubit quantum. snr is +infinity when the variance vanishes
// with a nonzero mean, and 0 when both vanish.
struct EnergyStats {
    double mean = 0.0;
    double variance = 0.0;
    double snr = 0.0;
    double g_tau = 0.0;
};

bool snr_is_divergent(double snr);

// Trace of the tilted state.
cx generating_function(const TiltedState& state);

// First two moments from a generating-function sampler chi -> G(chi):
// five-point central differences at spacings h and h/2 combined by one
// Richardson step. fd_error is the spacing-h/2 error estimate; warning is
// raised when it exceeds 1e-6 relative to the second moment.
struct MomentEstimate {
    EnergyStats stats;
    double fd_error = 0.0;
    bool warning = false;
};
MomentEstimate moments_fd(const std::function<cx(double)>& gf, double h_chi = 1e-3);

// Exact moments from measurement outcome weights. The weights must sum to
// 1 within 1e-8.
struct OutcomeWeight {
    double weight = 0.0;
    double energy = 0.0;
};
EnergyStats moments_trace(const std::vector<OutcomeWeight>& outcomes);

double snr_from_moments(double mean, double variance);

// Overlap with the fully charged qubit state |e>.
double fidelity_excited(const DensityMatrix& rho_qubit);

// Closed-form statistics for the resonant two-qubit collective protocol
// started from |n> (or a number-basis mixture with the given populations):
// single-qubit counter and both-qubit counter variants.
EnergyStats tc2_single_qubit_stats(int n, double g_tau);
EnergyStats tc2_two_qubit_stats(int n, double g_tau);
EnergyStats tc2_single_qubit_stats(const RVec& populations, double g_tau);
EnergyStats tc2_two_qubit_stats(const RVec& populations, double g_tau);

}  // namespace qbatt
