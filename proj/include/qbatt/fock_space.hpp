#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qbatt/errors.hpp"

namespace qbatt {

using cx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

inline constexpr int kMaxTotalDim = 4096;

// Composite space of num_qubits two-level systems and one truncated bosonic
// mode, ordered qubit 1 (slowest index) through qubit M, then the cavity
// Fock index (fastest). Each qubit slot is {|e>, |g>} with |e> first, so a
// basis index decomposes as bits*cavity_dim + n where bit j-1 of `bits`
// (counting from the most significant of the M bits) is 0 for qubit j
// excited. cavity_dim == 1 denotes a layout with no cavity slot.
struct HilbertLayout {
    int num_qubits = 0;
    int cavity_dim = 1;

    HilbertLayout() = default;
    HilbertLayout(int m, int d) : num_qubits(m), cavity_dim(d) {
        if (m < 0) throw std::invalid_argument("layout: num_qubits must be >= 0");
        if (d < 1) throw std::invalid_argument("layout: cavity_dim must be >= 1");
        long total = static_cast<long>(1L << m) * d;
        if (m > 12 || total > kMaxTotalDim)
            throw ResourceError("layout: total dimension " + std::to_string(total) +
                                " exceeds limit " + std::to_string(kMaxTotalDim));
    }

    int dim() const { return (1 << num_qubits) * cavity_dim; }
    int qubit_states() const { return 1 << num_qubits; }

    int index(unsigned qubit_bits, int n) const {
        return static_cast<int>(qubit_bits) * cavity_dim + n;
    }
    unsigned bits_of(int index) const { return static_cast<unsigned>(index / cavity_dim); }
    int cavity_of(int index) const { return index % cavity_dim; }

    // qubit_index is 1-based; bit 0 in that position means |e>.
    bool excited(unsigned qubit_bits, int qubit_index) const {
        int shift = num_qubits - qubit_index;
        return ((qubit_bits >> shift) & 1u) == 0u;
    }
    int excitation_count(unsigned qubit_bits) const {
        int k = 0;
        for (int j = 1; j <= num_qubits; ++j)
            if (excited(qubit_bits, j)) ++k;
        return k;
    }

    bool operator==(const HilbertLayout& o) const {
        return num_qubits == o.num_qubits && cavity_dim == o.cavity_dim;
    }
};

// Dense operator tagged with its layout and a human-readable label.
struct FockOperator {
    HilbertLayout layout;
    Mat entries;
    std::string label;

    FockOperator() = default;
    FockOperator(HilbertLayout lay, Mat m, std::string lbl = "");
};

// Dense state with the standard invariants enforced at construction:
// Hermitian to 1e-12 elementwise, unit trace to 1e-10, and smallest
// eigenvalue >= -1e-10.
struct DensityMatrix {
    HilbertLayout layout;
    Mat entries;

    DensityMatrix() = default;
    DensityMatrix(HilbertLayout lay, Mat m, const std::string& what = "state");
};

// Subsystems retained by a partial trace. An empty selection is rejected.
struct KeepSelector {
    bool cavity = false;
    std::vector<int> qubits;  // 1-based, strictly increasing
};

FockOperator annihilation(int cavity_dim);
FockOperator number_operator(int cavity_dim);

enum class SigmaKind { Z, Plus, Minus, X };

// Single-qubit Pauli-type operator embedded in the composite space by
// identity padding. qubit_index is 1-based.
FockOperator qubit_sigma(SigmaKind kind, const HilbertLayout& layout, int qubit_index);

FockOperator identity_operator(const HilbertLayout& layout);

// Kronecker product. The left operand must be qubits-only (cavity_dim 1)
// so the composition respects the qubits-then-cavity ordering.
FockOperator tensor(const FockOperator& a, const FockOperator& b);
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

DensityMatrix partial_trace(const DensityMatrix& rho, const KeepSelector& keep);

// exp(scale * a) via Pade scaling-and-squaring on the dense matrix.
Mat matrix_exp(const Mat& a, cx scale);
FockOperator matrix_exp(const FockOperator& a, cx scale);

// exp(-i * h * t) for Hermitian h via eigendecomposition.
Mat hermitian_propagator(const Mat& h, double t);

cx expectation(const DensityMatrix& rho, const FockOperator& obs);

}  // namespace qbatt
