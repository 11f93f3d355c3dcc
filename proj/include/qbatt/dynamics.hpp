#pragma once

#include <array>
#include <functional>
#include <utility>
#include <variant>
#include <vector>

#include "qbatt/fock_space.hpp"

namespace qbatt {

struct ConstantCoupling {};

// Flat-top coupling pulse with logistic edges of width delta = g_delta/g:
// ramps on around t1 = 20*g_delta*t_tilde, is flat at g in the middle, and
// ramps off around t2 = 2*t_tilde - t1. t_tilde is half the nominal
// charging time, in the same time units as the Hamiltonian.
struct SmoothedSquare {
    double g_delta = 1e-2;
    double t_tilde = 0.0;
};

using CouplingProfile = std::variant<ConstantCoupling, SmoothedSquare>;

struct ModelParams {
    double omega_qub = 1.0;
    double omega_cav = 1.0;
    double g = 0.01;
    bool rwa = true;
    CouplingProfile profile = ConstantCoupling{};

    double detuning() const { return omega_qub - omega_cav; }
    bool constant_coupling() const {
        return std::holds_alternative<ConstantCoupling>(profile);
    }
};

// Instantaneous coupling strength J(t) for peak strength g.
double coupling_J(double t, double g, const CouplingProfile& profile);

FockOperator free_hamiltonian(const ModelParams& params, const HilbertLayout& layout);
// Coupling term at peak strength g: rotating-wave ladder exchange, or the
// full sigma_x (a + a^dagger) form when params.rwa is false (one qubit only).
FockOperator interaction_hamiltonian(const ModelParams& params, const HilbertLayout& layout);
FockOperator jc_hamiltonian(const ModelParams& params, const HilbertLayout& layout);
FockOperator tc_hamiltonian(const ModelParams& params, const HilbertLayout& layout);
FockOperator rabi_hamiltonian(const ModelParams& params, const HilbertLayout& layout);

// Which qubits the energy counter watches.
struct TiltSpec {
    enum class Generator { SingleQubit, AllQubits };
    Generator generator = Generator::SingleQubit;
    int qubit_index = 1;  // 1-based; used by SingleQubit
    double chi = 0.0;
};

// Diagonal of the counted-energy observable (sum of omega_qub/2 * sigma_z
// over watched qubits) in the composite basis.
RVec counted_energies(const HilbertLayout& layout, const TiltSpec& tilt, double omega_qub);

// Counting-field decoration of the interaction: conjugation by
// exp(+-i*chi/2 * H_counted), which multiplies each matrix element by a
// phase set by the counted-energy difference of its basis pair. Returns
// the (+chi, -chi) pair.
std::pair<FockOperator, FockOperator> tilt_interaction(const FockOperator& h_int,
                                                       const HilbertLayout& layout,
                                                       const TiltSpec& tilt, double omega_qub);

struct TiltedState {
    HilbertLayout layout;
    Mat entries;
    double chi = 0.0;
};

// Solves d rho/dt = -i (h_plus rho - rho h_minus) for time-independent
// Hermitian generators via eigendecomposition, evaluated at each requested
// time (strictly increasing, starting at or after 0).
std::vector<TiltedState> propagate_tilted(const DensityMatrix& rho0, const FockOperator& h_plus,
                                          const FockOperator& h_minus,
                                          const std::vector<double>& times, double tol = 1e-10);

// Same equation with H(t) = h_free + J(t) * w, integrated adaptively
// (embedded 5th/4th order pair) in the rotating frame of h_free, which must
// be diagonal. Throws IntegrationError carrying the time reached if the
// step size underflows.
struct TimeDependentGenerator {
    FockOperator h_free;
    FockOperator w_plus;
    FockOperator w_minus;
    double g = 0.0;
    CouplingProfile profile;
};

std::vector<TiltedState> propagate_tilted(const DensityMatrix& rho0,
                                          const TimeDependentGenerator& gen,
                                          const std::vector<double>& times, double tol = 1e-10);

// Batch pure-state propagation i d psi/dt = (h_free + J(t) w) psi for a set
// of column vectors, sampled at the requested times. The streaming variant
// hands each sample to on_sample instead of accumulating them.
std::vector<Mat> propagate_columns(const Mat& columns, const FockOperator& h_free,
                                   const FockOperator& w, double g,
                                   const CouplingProfile& profile,
                                   const std::vector<double>& times, double tol = 1e-10);
void propagate_columns(const Mat& columns, const FockOperator& h_free, const FockOperator& w,
                       double g, const CouplingProfile& profile,
                       const std::vector<double>& times, double tol,
                       const std::function<void(size_t, const Mat&)>& on_sample);

// Eigendecomposition cache for repeated exp(-i h t) applications.
struct SpectralPropagator {
    RVec eigenvalues;
    Mat basis;

    explicit SpectralPropagator(const Mat& h_hermitian);
    Mat to_eigenbasis(const Mat& columns) const { return basis.adjoint() * columns; }
    // basis * diag(exp(-i*lambda*t)) * coeffs
    Mat evolve(const Mat& coeffs_in_eigenbasis, double t) const;
    Mat propagator(double t) const;
};

// Entire-in-s evaluations used by the closed-form two-qubit propagator;
// well defined for s <= 0 through the hyperbolic continuation.
double cos_sqrt(double s, double x);     // cos(x*sqrt(s))
double sinc_sqrt(double s, double x);    // sin(x*sqrt(s))/sqrt(s), -> x at s=0
double cosm1_over(double s, double x);   // (cos(x*sqrt(s))-1)/s, -> -x^2/2 at s=0

// Closed-form two-qubit collective propagator at resonance, as 16 cavity-
// space blocks in the ordered qubit basis {ee, eg, ge, gg} (interaction
// picture). Row/column indices are 1-based.
Mat tc2_block(int row, int col, double g_tau, int cavity_dim);
std::array<std::array<Mat, 4>, 4> tc2_block_exp(double g_tau, int cavity_dim);

// Full two-qubit propagator including free phases. Resonant, constant
// coupling, rotating-wave only; other regimes are rejected.
FockOperator tc2_evolution(double tau, const ModelParams& params, int cavity_dim);

}  // namespace qbatt
