#include "qbatt/fock_space.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace qbatt {

namespace {

void require_square(const Mat& m, int dim, const std::string& what) {
    if (m.rows() != dim || m.cols() != dim)
        throw std::invalid_argument(what + ": entries are " + std::to_string(m.rows()) + "x" +
                                    std::to_string(m.cols()) + ", layout dimension is " +
                                    std::to_string(dim));
}

}  // namespace

FockOperator::FockOperator(HilbertLayout lay, Mat m, std::string lbl)
    : layout(lay), entries(std::move(m)), label(std::move(lbl)) {
    require_square(entries, layout.dim(), label.empty() ? "operator" : label);
}

DensityMatrix::DensityMatrix(HilbertLayout lay, Mat m, const std::string& what)
    : layout(lay), entries(std::move(m)) {
    require_square(entries, layout.dim(), what);
    const double herm = (entries - entries.adjoint()).cwiseAbs().maxCoeff();
    if (!(herm <= 1e-12))
        throw std::invalid_argument(what + ": not Hermitian (max asymmetry " +
                                    std::to_string(herm) + ")");
    const double tr = entries.trace().real();
    if (std::abs(tr - 1.0) > 1e-10)
        throw std::invalid_argument(what + ": trace " + std::to_string(tr) + " is not 1");
    Eigen::SelfAdjointEigenSolver<Mat> es(entries, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    if (lo < -1e-10)
        throw std::invalid_argument(what + ": negative eigenvalue " + std::to_string(lo));
}

FockOperator annihilation(int cavity_dim) {
    if (cavity_dim < 2) throw std::invalid_argument("annihilation: cavity_dim must be >= 2");
    HilbertLayout lay(0, cavity_dim);
    Mat a = Mat::Zero(cavity_dim, cavity_dim);
    for (int n = 1; n < cavity_dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return {lay, std::move(a), "a"};
}

FockOperator number_operator(int cavity_dim) {
    if (cavity_dim < 2) throw std::invalid_argument("number_operator: cavity_dim must be >= 2");
    HilbertLayout lay(0, cavity_dim);
    Mat n = Mat::Zero(cavity_dim, cavity_dim);
    for (int k = 0; k < cavity_dim; ++k) n(k, k) = static_cast<double>(k);
    return {lay, std::move(n), "n"};
}

FockOperator qubit_sigma(SigmaKind kind, const HilbertLayout& layout, int qubit_index) {
    if (qubit_index < 1 || qubit_index > layout.num_qubits)
        throw std::invalid_argument("qubit_sigma: qubit_index " + std::to_string(qubit_index) +
                                    " outside 1.." + std::to_string(layout.num_qubits));
    const int dim = layout.dim();
    const unsigned flip = 1u << (layout.num_qubits - qubit_index);
    Mat m = Mat::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
        const unsigned bits = layout.bits_of(i);
        const int n = layout.cavity_of(i);
        const bool exc = layout.excited(bits, qubit_index);
        switch (kind) {
            case SigmaKind::Z:
                m(i, i) = exc ? 1.0 : -1.0;
                break;
            case SigmaKind::Plus:  // |e><g|: acts on ground components
                if (!exc) m(layout.index(bits ^ flip, n), i) = 1.0;
                break;
            case SigmaKind::Minus:  // |g><e|
                if (exc) m(layout.index(bits ^ flip, n), i) = 1.0;
                break;
            case SigmaKind::X:
                m(layout.index(bits ^ flip, n), i) = 1.0;
                break;
        }
    }
    const char* names[] = {"sz", "s+", "s-", "sx"};
    return {layout, std::move(m), std::string(names[static_cast<int>(kind)]) + std::to_string(qubit_index)};
}

FockOperator identity_operator(const HilbertLayout& layout) {
    return {layout, Mat::Identity(layout.dim(), layout.dim()), "I"};
}

namespace {

HilbertLayout composed_layout(const HilbertLayout& a, const HilbertLayout& b) {
    if (a.cavity_dim != 1)
        throw std::invalid_argument(
            "tensor: left operand has a cavity slot; ordering is qubits then cavity");
    return HilbertLayout(a.num_qubits + b.num_qubits, b.cavity_dim);
}

Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

}  // namespace

FockOperator tensor(const FockOperator& a, const FockOperator& b) {
    HilbertLayout lay = composed_layout(a.layout, b.layout);
    return {lay, kron(a.entries, b.entries), a.label + "*" + b.label};
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
    HilbertLayout lay = composed_layout(a.layout, b.layout);
    return {lay, kron(a.entries, b.entries), "product state"};
}

DensityMatrix partial_trace(const DensityMatrix& rho, const KeepSelector& keep) {
    const HilbertLayout& lay = rho.layout;
    if (!keep.cavity && keep.qubits.empty())
        throw std::invalid_argument("partial_trace: nothing kept");
    int prev = 0;
    for (int q : keep.qubits) {
        if (q <= prev || q > lay.num_qubits)
            throw std::invalid_argument("partial_trace: kept qubit list must be strictly "
                                        "increasing within 1.." +
                                        std::to_string(lay.num_qubits));
        prev = q;
    }
    const int kept_q = static_cast<int>(keep.qubits.size());
    HilbertLayout out_lay(kept_q, keep.cavity ? lay.cavity_dim : 1);

    auto kept_bits = [&](unsigned bits) {
        unsigned k = 0;
        for (int q : keep.qubits) k = (k << 1) | (lay.excited(bits, q) ? 0u : 1u);
        return k;
    };
    auto traced_bits = [&](unsigned bits) {
        unsigned t = 0;
        for (int q = 1; q <= lay.num_qubits; ++q) {
            bool kept = false;
            for (int kq : keep.qubits) kept = kept || (kq == q);
            if (!kept) t = (t << 1) | (lay.excited(bits, q) ? 0u : 1u);
        }
        return t;
    };

    const int dim = lay.dim();
    Mat out = Mat::Zero(out_lay.dim(), out_lay.dim());
    for (int i = 0; i < dim; ++i) {
        const unsigned bi = lay.bits_of(i);
        const int ni = lay.cavity_of(i);
        const unsigned ki = kept_bits(bi);
        const unsigned ti = traced_bits(bi);
        for (int j = 0; j < dim; ++j) {
            const unsigned bj = lay.bits_of(j);
            const int nj = lay.cavity_of(j);
            if (traced_bits(bj) != ti) continue;
            if (!keep.cavity && nj != ni) continue;
            const int r = keep.cavity ? out_lay.index(ki, ni) : static_cast<int>(ki);
            const int c = keep.cavity ? out_lay.index(kept_bits(bj), nj)
                                      : static_cast<int>(kept_bits(bj));
            out(r, c) += rho.entries(i, j);
        }
    }
    return {out_lay, std::move(out), "reduced state"};
}

Mat matrix_exp(const Mat& a, cx scale) {
    if (a.rows() != a.cols()) throw std::invalid_argument("matrix_exp: matrix not square");
    if (!a.allFinite()) throw std::invalid_argument("matrix_exp: non-finite entries");
    Mat scaled = scale * a;
    return scaled.exp();
}

FockOperator matrix_exp(const FockOperator& a, cx scale) {
    return {a.layout, matrix_exp(a.entries, scale), "exp(" + a.label + ")"};
}

Mat hermitian_propagator(const Mat& h, double t) {
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("hermitian_propagator: eigendecomposition failed");
    const auto& lam = es.eigenvalues();
    const Mat& v = es.eigenvectors();
    Vec phases(lam.size());
    for (int k = 0; k < lam.size(); ++k) phases(k) = std::exp(cx(0.0, -lam(k) * t));
    return v * phases.asDiagonal() * v.adjoint();
}

cx expectation(const DensityMatrix& rho, const FockOperator& obs) {
    if (!(rho.layout == obs.layout))
        throw std::invalid_argument("expectation: layout mismatch");
    return (rho.entries * obs.entries).trace();
}

}  // namespace qbatt
