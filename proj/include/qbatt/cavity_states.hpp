#pragma once

#include <string>
#include <variant>

#include "qbatt/fock_space.hpp"

namespace qbatt {

// Cavity preparations. Displacement parameters are real and non-negative;
// squeezing parameters are real (squeeze applied after the displacement, so
// the mean photon number is alpha^2*exp(-2r) + sinh(r)^2).

struct FockSpec {
    int n = 0;
};
struct CoherentSpec {
    double alpha = 0.0;
};
struct SqueezedCoherentSpec {
    double r = 0.0;
    double alpha = 0.0;
};
// Diagonal part of the squeezed coherent state in the number basis (all
// phase coherences dropped).
struct PhaseRandomizedSqueezedSpec {
    double r = 0.0;
    double alpha = 0.0;
};
// Number state equilibrated with a thermal environment of occupation n_th.
struct ThermalizedFockSpec {
    int n = 0;
    double n_th = 0.0;
};
// Number state after a beam splitter of transmissivity p.
struct AttenuatedFockSpec {
    int n = 0;
    double p = 1.0;
};

using CavityStateSpec = std::variant<FockSpec, CoherentSpec, SqueezedCoherentSpec,
                                     PhaseRandomizedSqueezedSpec, ThermalizedFockSpec,
                                     AttenuatedFockSpec>;

bool is_pure(const CavityStateSpec& spec);
bool is_diagonal(const CavityStateSpec& spec);

// Mean photon number used when normalizing figures of merit. For the noisy
// number-state variants this is the nominal n of the underlying number
// state, not the degraded actual mean.
double nominal_mean_photons(const CavityStateSpec& spec);

// Truncation size policy: number-state family gets n + num_qubits + 3
// levels (extended for the thermalized variant until the discarded mass is
// below 1e-10); smooth states get the smallest dimension with discarded
// mass below 1e-10. Both are capped at 64 levels.
int recommended_cavity_dim(const CavityStateSpec& spec, int num_qubits);

inline constexpr int kMaxCavityDim = 64;
inline constexpr double kTailBound = 1e-10;

// Probability mass of the untruncated distribution at or above cavity_dim.
double truncation_tail(const CavityStateSpec& spec, int cavity_dim);

// Number-basis amplitudes of a pure preparation, renormalized after
// truncation. Throws TruncationError if the discarded mass reaches 1e-10
// and std::invalid_argument for mixed specs.
Vec pure_amplitudes(const CavityStateSpec& spec, int cavity_dim);

// Number-basis populations (diagonal of the density matrix) for any
// preparation, renormalized after truncation.
RVec diagonal_populations(const CavityStateSpec& spec, int cavity_dim);

// Weight of |m> in the thermalized number state. Evaluated in log space;
// throws NormalizationError when alternating-series cancellation leaves
// fewer than 8 reliable digits.
double thermal_fock_weight(int m, int n, double n_th);

DensityMatrix make_cavity(const CavityStateSpec& spec, int cavity_dim);
DensityMatrix make_fock(int n, int cavity_dim);
DensityMatrix make_coherent(double alpha, int cavity_dim);
DensityMatrix make_squeezed_coherent(double r, double alpha, int cavity_dim);
DensityMatrix make_phase_randomized(double r, double alpha, int cavity_dim);
DensityMatrix make_thermalized_fock(int n, double n_th, int cavity_dim);
DensityMatrix make_attenuated_fock(int n, double p, int cavity_dim);

// Qubit prepared as q|e><e| + (1-q)|g><g| on a one-qubit layout.
DensityMatrix make_qubit(double q);

// Plain-text round trip, e.g. "fock(5)", "coherent(2.2360679...)",
// "squeezed(0.6,3.9057...)", "squeezed-diag(0.6,3.9057...)",
// "thermal-fock(5,0.1)", "attenuated-fock(5,0.95)".
std::string to_string(const CavityStateSpec& spec);
CavityStateSpec parse_cavity_state(const std::string& text);

}  // namespace qbatt
