#pragma once

#include <complex>

namespace qbatt::oracle {

// Scalar reference results for the two-qubit collective charging problem
// with the cavity prepared in a number state. This module deliberately
// depends on nothing else in the library so it can arbitrate the matrix
// pipeline.

// Probability weights for transferring two quanta (f) respectively one
// quantum through either qubit (h) out of |n> after interaction time
// g_tau, with both qubits starting in the ground state.
struct FHPair {
    double f = 0.0;
    double h = 0.0;
};

FHPair eval_fh(int n, double g_tau);

// Single-qubit counting statistics derived from eval_fh: the marginal is a
// Bernoulli variable with success probability f + h. Divergent ratios map
// to +infinity, the all-zero case to 0 (same convention as the library's
// variance floor of 1e-12).
double oracle_snr(int n, double g_tau);

// Closed-form single-qubit generating function, chi conjugate to energy in
// units of one quantum: G(chi) = 1 - p + p*exp(i*chi) with p = f + h.
std::complex<double> oracle_gf(int n, double g_tau, double chi);

}  // namespace qbatt::oracle
