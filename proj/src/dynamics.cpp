#include "qbatt/dynamics.hpp"

#include <cmath>
#include <functional>

namespace qbatt {

double coupling_J(double t, double g, const CouplingProfile& profile) {
    if (std::holds_alternative<ConstantCoupling>(profile)) return g;
    const auto& p = std::get<SmoothedSquare>(profile);
    if (!(p.g_delta > 0.0) || !(p.t_tilde > 0.0))
        throw std::invalid_argument("coupling_J: edge width and t_tilde must be positive");
    const double delta = p.g_delta / g;
    const double t1 = 20.0 * p.g_delta * p.t_tilde;
    const double t2 = 2.0 * p.t_tilde - t1;
    if (t < t1 + 10.0 * delta) return g / (1.0 + std::exp(-(t - t1) / delta));
    if (t > t2 - 10.0 * delta) return g / (1.0 + std::exp((t - t2) / delta));
    return g;
}

FockOperator free_hamiltonian(const ModelParams& params, const HilbertLayout& layout) {
    const int dim = layout.dim();
    Mat h = Mat::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
        const unsigned bits = layout.bits_of(i);
        double e = params.omega_cav * layout.cavity_of(i);
        for (int j = 1; j <= layout.num_qubits; ++j)
            e += 0.5 * params.omega_qub * (layout.excited(bits, j) ? 1.0 : -1.0);
        h(i, i) = e;
    }
    return {layout, std::move(h), "H_free"};
}

FockOperator interaction_hamiltonian(const ModelParams& params, const HilbertLayout& layout) {
    const int dim = layout.dim();
    const int d = layout.cavity_dim;
    if (d < 2) throw std::invalid_argument("interaction_hamiltonian: layout has no cavity");
    Mat h = Mat::Zero(dim, dim);
    if (params.rwa) {
        for (int i = 0; i < dim; ++i) {
            const unsigned bits = layout.bits_of(i);
            const int n = layout.cavity_of(i);
            for (int j = 1; j <= layout.num_qubits; ++j) {
                if (!layout.excited(bits, j) && n >= 1) {
                    // sigma_+^j a : |g, n> -> |e, n-1>
                    const unsigned flip = 1u << (layout.num_qubits - j);
                    const int target = layout.index(bits ^ flip, n - 1);
                    h(target, i) += params.g * std::sqrt(static_cast<double>(n));
                }
            }
        }
        h = (h + Mat(h.adjoint())).eval();  // add sigma_-^j a^dagger
        return {layout, std::move(h), "H_int"};
    }
    if (layout.num_qubits != 1)
        throw UnsupportedRegimeError(
            "interaction_hamiltonian: counter-rotating coupling supported for one qubit only");
    for (int i = 0; i < dim; ++i) {
        const unsigned bits = layout.bits_of(i);
        const int n = layout.cavity_of(i);
        const unsigned flip = 1u;
        if (n >= 1) h(layout.index(bits ^ flip, n - 1), i) += params.g * std::sqrt(double(n));
        if (n + 1 < d)
            h(layout.index(bits ^ flip, n + 1), i) += params.g * std::sqrt(double(n + 1));
    }
    return {layout, std::move(h), "H_int_full"};
}

FockOperator jc_hamiltonian(const ModelParams& params, const HilbertLayout& layout) {
    if (layout.num_qubits != 1)
        throw std::invalid_argument("jc_hamiltonian: exactly one qubit required");
    if (!params.rwa)
        throw UnsupportedRegimeError("jc_hamiltonian: requires the rotating-wave form");
    Mat h = free_hamiltonian(params, layout).entries + interaction_hamiltonian(params, layout).entries;
    return {layout, std::move(h), "H_jc"};
}

FockOperator tc_hamiltonian(const ModelParams& params, const HilbertLayout& layout) {
    if (layout.num_qubits < 1)
        throw std::invalid_argument("tc_hamiltonian: at least one qubit required");
    if (!params.rwa)
        throw UnsupportedRegimeError("tc_hamiltonian: requires the rotating-wave form");
    Mat h = free_hamiltonian(params, layout).entries + interaction_hamiltonian(params, layout).entries;
    return {layout, std::move(h), "H_tc"};
}

FockOperator rabi_hamiltonian(const ModelParams& params, const HilbertLayout& layout) {
    if (layout.num_qubits != 1)
        throw std::invalid_argument("rabi_hamiltonian: exactly one qubit required");
    if (params.rwa)
        throw UnsupportedRegimeError("rabi_hamiltonian: set rwa=false for the full coupling");
    Mat h = free_hamiltonian(params, layout).entries + interaction_hamiltonian(params, layout).entries;
    return {layout, std::move(h), "H_rabi"};
}

RVec counted_energies(const HilbertLayout& layout, const TiltSpec& tilt, double omega_qub) {
    if (tilt.generator == TiltSpec::Generator::SingleQubit &&
        (tilt.qubit_index < 1 || tilt.qubit_index > layout.num_qubits))
        throw std::invalid_argument("counted_energies: qubit_index outside layout");
    const int dim = layout.dim();
    RVec e(dim);
    for (int i = 0; i < dim; ++i) {
        const unsigned bits = layout.bits_of(i);
        double v = 0.0;
        if (tilt.generator == TiltSpec::Generator::SingleQubit) {
            v = 0.5 * omega_qub * (layout.excited(bits, tilt.qubit_index) ? 1.0 : -1.0);
        } else {
            for (int j = 1; j <= layout.num_qubits; ++j)
                v += 0.5 * omega_qub * (layout.excited(bits, j) ? 1.0 : -1.0);
        }
        e(i) = v;
    }
    return e;
}

std::pair<FockOperator, FockOperator> tilt_interaction(const FockOperator& h_int,
                                                       const HilbertLayout& layout,
                                                       const TiltSpec& tilt, double omega_qub) {
    if (!(h_int.layout == layout))
        throw std::invalid_argument("tilt_interaction: operator layout mismatch");
    const RVec e = counted_energies(layout, tilt, omega_qub);
    const int dim = layout.dim();
    Mat plus(dim, dim), minus(dim, dim);
    for (int a = 0; a < dim; ++a) {
        for (int b = 0; b < dim; ++b) {
            const double phase = 0.5 * tilt.chi * (e(a) - e(b));
            const cx fp(std::cos(phase), std::sin(phase));
            plus(a, b) = h_int.entries(a, b) * fp;
            minus(a, b) = h_int.entries(a, b) * std::conj(fp);
        }
    }
    return {FockOperator(layout, std::move(plus), h_int.label + "(+chi)"),
            FockOperator(layout, std::move(minus), h_int.label + "(-chi)")};
}

namespace {

void check_times(const std::vector<double>& times) {
    if (times.empty()) throw std::invalid_argument("propagation: empty time list");
    for (size_t i = 0; i < times.size(); ++i) {
        if (!std::isfinite(times[i]) || times[i] < 0.0)
            throw std::invalid_argument("propagation: times must be finite and >= 0");
        if (i > 0 && times[i] <= times[i - 1])
            throw std::invalid_argument("propagation: times must be strictly increasing");
    }
}

void check_hermitian(const Mat& h, const char* what) {
    const double dev = (h - h.adjoint()).cwiseAbs().maxCoeff();
    const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
    if (dev > 1e-12 * scale)
        throw std::invalid_argument(std::string(what) + ": generator is not Hermitian");
}

// Dormand-Prince 5(4) with elementwise error control and dense sampling by
// step clipping. The state is a complex matrix; rhs(t, y, dy) fills dy.
void rk_integrate(Mat& y, double t_start, const std::vector<double>& samples, double tol,
                  const std::function<void(double, const Mat&, Mat&)>& rhs,
                  const std::function<void(size_t, const Mat&)>& emit) {
    static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static const double a21 = 1.0 / 5;
    static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
    static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static const double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                        e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                        e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

    double t = t_start;
    size_t next = 0;
    while (next < samples.size() && samples[next] <= t) {
        emit(next, y);
        ++next;
    }
    if (next >= samples.size()) return;

    Mat k1(y.rows(), y.cols()), k2 = k1, k3 = k1, k4 = k1, k5 = k1, k6 = k1, k7 = k1;
    Mat ytmp = k1, ynew = k1, err = k1;
    rhs(t, y, k1);
    double h = std::min((samples.back() - t) / 100.0, samples[next] - t);
    long steps = 0;
    const long max_steps = 20'000'000;

    while (next < samples.size()) {
        if (++steps > max_steps)
            throw IntegrationError("adaptive integration exceeded the step budget", t);
        const double target = samples[next];
        bool clipped = false;
        double hs = h;
        if (t + hs >= target) {
            hs = target - t;
            clipped = true;
        }
        if (hs < 1e-14 * std::max(1.0, std::abs(t)))
            throw IntegrationError("adaptive integration step underflow", t);

        ytmp = y + hs * a21 * k1;
        rhs(t + c2 * hs, ytmp, k2);
        ytmp = y + hs * (a31 * k1 + a32 * k2);
        rhs(t + c3 * hs, ytmp, k3);
        ytmp = y + hs * (a41 * k1 + a42 * k2 + a43 * k3);
        rhs(t + c4 * hs, ytmp, k4);
        ytmp = y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
        rhs(t + c5 * hs, ytmp, k5);
        ytmp = y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
        rhs(t + hs, ytmp, k6);
        ynew = y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        rhs(t + hs, ynew, k7);
        err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        const double scale =
            tol * (1.0 + std::max(y.cwiseAbs().maxCoeff(), ynew.cwiseAbs().maxCoeff()));
        const double err_ratio = err.cwiseAbs().maxCoeff() / scale;
        if (err_ratio <= 1.0) {
            t = clipped ? target : t + hs;
            y.swap(ynew);
            k1.swap(k7);
            if (clipped) {
                emit(next, y);
                ++next;
            }
        }
        const double factor =
            err_ratio > 0.0 ? 0.9 * std::pow(err_ratio, -0.2) : 5.0;
        h = hs * std::min(5.0, std::max(0.2, factor));
    }
}

RVec diagonal_of(const FockOperator& op, const char* what) {
    const Mat& m = op.entries;
    Mat off = m;
    off.diagonal().setZero();
    if (off.cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff()))
        throw std::invalid_argument(std::string(what) + ": free part must be diagonal");
    return m.diagonal().real();
}

}  // namespace

std::vector<TiltedState> propagate_tilted(const DensityMatrix& rho0, const FockOperator& h_plus,
                                          const FockOperator& h_minus,
                                          const std::vector<double>& times, double tol) {
    (void)tol;  // exact path
    check_times(times);
    if (!(rho0.layout == h_plus.layout) || !(rho0.layout == h_minus.layout))
        throw std::invalid_argument("propagate_tilted: layout mismatch");
    check_hermitian(h_plus.entries, "propagate_tilted(+)");
    check_hermitian(h_minus.entries, "propagate_tilted(-)");
    Eigen::SelfAdjointEigenSolver<Mat> esp(h_plus.entries), esm(h_minus.entries);
    if (esp.info() != Eigen::Success || esm.info() != Eigen::Success)
        throw std::runtime_error("propagate_tilted: eigendecomposition failed");
    const Mat cp = esp.eigenvectors().adjoint() * rho0.entries * esm.eigenvectors();
    std::vector<TiltedState> out;
    out.reserve(times.size());
    const int dim = rho0.layout.dim();
    Mat phased(dim, dim);
    for (double t : times) {
        for (int a = 0; a < dim; ++a) {
            const cx pa = std::exp(cx(0.0, -esp.eigenvalues()(a) * t));
            for (int b = 0; b < dim; ++b)
                phased(a, b) = pa * cp(a, b) * std::exp(cx(0.0, esm.eigenvalues()(b) * t));
        }
        out.push_back({rho0.layout, esp.eigenvectors() * phased * esm.eigenvectors().adjoint(),
                       0.0});
    }
    return out;
}

std::vector<TiltedState> propagate_tilted(const DensityMatrix& rho0,
                                          const TimeDependentGenerator& gen,
                                          const std::vector<double>& times, double tol) {
    check_times(times);
    const HilbertLayout& lay = rho0.layout;
    if (!(lay == gen.h_free.layout) || !(lay == gen.w_plus.layout) || !(lay == gen.w_minus.layout))
        throw std::invalid_argument("propagate_tilted: layout mismatch");
    const RVec d = diagonal_of(gen.h_free, "propagate_tilted");
    const int dim = lay.dim();

    Vec u(dim);
    Mat work(dim, dim);
    auto rhs = [&](double t, const Mat& sigma, Mat& out) {
        for (int a = 0; a < dim; ++a) u(a) = std::exp(cx(0.0, d(a) * t));
        const double j = coupling_J(t, gen.g, gen.profile);
        // W~(t) X = U W U^* X ; X W~(t) = X U W U^*
        work = u.conjugate().asDiagonal() * sigma;
        work = gen.w_plus.entries * work;
        out = u.asDiagonal() * work;
        work = sigma * u.asDiagonal();
        work = work * gen.w_minus.entries;
        work = work * u.conjugate().asDiagonal();
        out -= work;
        out *= cx(0.0, -j);
    };

    std::vector<TiltedState> out(times.size());
    Mat y = rho0.entries;
    rk_integrate(y, 0.0, times, tol, rhs, [&](size_t i, const Mat& sigma) {
        const double t = times[i];
        Mat rho(dim, dim);
        for (int a = 0; a < dim; ++a) {
            const cx pa = std::exp(cx(0.0, -d(a) * t));
            for (int b = 0; b < dim; ++b)
                rho(a, b) = pa * sigma(a, b) * std::exp(cx(0.0, d(b) * t));
        }
        out[i] = {lay, std::move(rho), 0.0};
    });
    return out;
}

void propagate_columns(const Mat& columns, const FockOperator& h_free, const FockOperator& w,
                       double g, const CouplingProfile& profile,
                       const std::vector<double>& times, double tol,
                       const std::function<void(size_t, const Mat&)>& on_sample) {
    check_times(times);
    const int dim = h_free.layout.dim();
    if (columns.rows() != dim)
        throw std::invalid_argument("propagate_columns: column size does not match layout");
    const RVec d = diagonal_of(h_free, "propagate_columns");

    Vec u(dim);
    Mat work(dim, columns.cols());
    auto rhs = [&](double t, const Mat& psi, Mat& out) {
        for (int a = 0; a < dim; ++a) u(a) = std::exp(cx(0.0, d(a) * t));
        const double j = coupling_J(t, g, profile);
        work = u.conjugate().asDiagonal() * psi;
        work = w.entries * work;
        out = u.asDiagonal() * work;
        out *= cx(0.0, -j);
    };

    Mat y = columns;
    Mat s(dim, columns.cols());
    rk_integrate(y, 0.0, times, tol, rhs, [&](size_t i, const Mat& psi) {
        const double t = times[i];
        for (int a = 0; a < dim; ++a) {
            const cx pa = std::exp(cx(0.0, -d(a) * t));
            for (int c = 0; c < columns.cols(); ++c) s(a, c) = pa * psi(a, c);
        }
        on_sample(i, s);
    });
}

std::vector<Mat> propagate_columns(const Mat& columns, const FockOperator& h_free,
                                   const FockOperator& w, double g,
                                   const CouplingProfile& profile,
                                   const std::vector<double>& times, double tol) {
    std::vector<Mat> out(times.size());
    propagate_columns(columns, h_free, w, g, profile, times, tol,
                      [&](size_t i, const Mat& s) { out[i] = s; });
    return out;
}

SpectralPropagator::SpectralPropagator(const Mat& h_hermitian) {
    check_hermitian(h_hermitian, "SpectralPropagator");
    Eigen::SelfAdjointEigenSolver<Mat> es(h_hermitian);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("SpectralPropagator: eigendecomposition failed");
    eigenvalues = es.eigenvalues();
    basis = es.eigenvectors();
}

Mat SpectralPropagator::evolve(const Mat& coeffs, double t) const {
    Vec phases(eigenvalues.size());
    for (int k = 0; k < eigenvalues.size(); ++k)
        phases(k) = std::exp(cx(0.0, -eigenvalues(k) * t));
    return basis * (phases.asDiagonal() * coeffs);
}

Mat SpectralPropagator::propagator(double t) const {
    Vec phases(eigenvalues.size());
    for (int k = 0; k < eigenvalues.size(); ++k)
        phases(k) = std::exp(cx(0.0, -eigenvalues(k) * t));
    return basis * phases.asDiagonal() * basis.adjoint();
}

double cos_sqrt(double s, double x) {
    if (s >= 0.0) return std::cos(x * std::sqrt(s));
    return std::cosh(x * std::sqrt(-s));
}

double sinc_sqrt(double s, double x) {
    const double z = s * x * x;
    if (std::abs(z) < 1e-8) return x * (1.0 - z / 6.0 + z * z / 120.0);
    if (s > 0.0) {
        const double r = std::sqrt(s);
        return std::sin(x * r) / r;
    }
    const double r = std::sqrt(-s);
    return std::sinh(x * r) / r;
}

double cosm1_over(double s, double x) {
    const double z = s * x * x;
    if (std::abs(z) < 1e-8) return x * x * (-0.5 + z / 24.0 - z * z / 720.0);
    return (cos_sqrt(s, x) - 1.0) / s;
}

namespace {

Mat diag_from(int d, const std::function<double(int)>& f) {
    Mat m = Mat::Zero(d, d);
    for (int n = 0; n < d; ++n) m(n, n) = f(n);
    return m;
}

}  // namespace

Mat tc2_block(int row, int col, double g_tau, int cavity_dim) {
    if (cavity_dim < 3)
        throw std::invalid_argument("tc2_block: cavity_dim must be >= 3");
    if (row < 1 || row > 4 || col < 1 || col > 4)
        throw std::invalid_argument("tc2_block: indices are 1..4");
    const double x = g_tau;
    const int d = cavity_dim;
    const Mat a = annihilation(d).entries;
    const Mat ad = a.adjoint();
    const cx mi(0.0, -1.0);
    auto s3 = [](int n) { return 2.0 * (2.0 * n + 3.0); };
    auto s1 = [](int n) { return 2.0 * (2.0 * n + 1.0); };
    auto sm = [](int n) { return 2.0 * (2.0 * n - 1.0); };

    const int key = row * 10 + col;
    switch (key) {
        case 11:
            return diag_from(d, [&](int n) {
                return (n + 2.0 + (n + 1.0) * cos_sqrt(s3(n), x)) / (2.0 * n + 3.0);
            });
        case 12:
        case 13:
            return mi * (diag_from(d, [&](int n) { return sinc_sqrt(s3(n), x); }) * a);
        case 14:
            return 2.0 * (diag_from(d, [&](int n) { return cosm1_over(s3(n), x); }) * a * a);
        case 21:
        case 31:
            return mi * (diag_from(d, [&](int n) { return sinc_sqrt(s1(n), x); }) * ad);
        case 22:
        case 33:
            return diag_from(d, [&](int n) { return 0.5 * (1.0 + cos_sqrt(s1(n), x)); });
        case 23:
        case 32:
            return diag_from(d, [&](int n) { return 0.5 * (cos_sqrt(s1(n), x) - 1.0); });
        case 24:
        case 34:
            return mi * (diag_from(d, [&](int n) { return sinc_sqrt(s1(n), x); }) * a);
        case 41:
            return 2.0 * (diag_from(d, [&](int n) { return cosm1_over(sm(n), x); }) * ad * ad);
        case 42:
        case 43:
            return mi * (diag_from(d, [&](int n) { return sinc_sqrt(sm(n), x); }) * ad);
        case 44:
            return diag_from(d, [&](int n) {
                if (n == 0) return 1.0;
                return (n - 1.0 + n * cos_sqrt(sm(n), x)) / (2.0 * n - 1.0);
            });
        default:
            throw std::invalid_argument("tc2_block: bad indices");
    }
}

std::array<std::array<Mat, 4>, 4> tc2_block_exp(double g_tau, int cavity_dim) {
    std::array<std::array<Mat, 4>, 4> blocks;
    for (int i = 1; i <= 4; ++i)
        for (int j = 1; j <= 4; ++j) blocks[i - 1][j - 1] = tc2_block(i, j, g_tau, cavity_dim);
    return blocks;
}

FockOperator tc2_evolution(double tau, const ModelParams& params, int cavity_dim) {
    if (std::abs(params.detuning()) > 1e-14 * params.omega_qub)
        throw UnsupportedRegimeError("tc2_evolution: resonant case only");
    if (!params.rwa)
        throw UnsupportedRegimeError("tc2_evolution: rotating-wave form only");
    if (!params.constant_coupling())
        throw UnsupportedRegimeError("tc2_evolution: constant coupling only");
    const double g_tau = params.g * tau;
    auto blocks = tc2_block_exp(g_tau, cavity_dim);
    HilbertLayout lay(2, cavity_dim);
    const int d = cavity_dim;
    Mat u = Mat::Zero(lay.dim(), lay.dim());
    const double qz[4] = {1.0, 0.0, 0.0, -1.0};  // net sigma_z/2 sum per qubit sector
    for (int i = 0; i < 4; ++i) {
        Vec phases(d);
        for (int n = 0; n < d; ++n)
            phases(n) = std::exp(cx(0.0, -params.omega_qub * tau * (n + qz[i])));
        for (int j = 0; j < 4; ++j)
            u.block(i * d, j * d, d, d) = phases.asDiagonal() * blocks[i][j];
    }
    return {lay, std::move(u), "U_tc2"};
}

}  // namespace qbatt
