#include "qbatt/protocols.hpp"

#include <cmath>

#include "qbatt/parallel.hpp"
#include "qbatt/two_qubit_oracle.hpp"

namespace qbatt {

namespace {

constexpr double kWeightCutoff = 1e-16;
constexpr double kBoundaryPopulation = 1e-8;

bool resonant(const ModelParams& p) {
    return std::abs(p.detuning()) <= 1e-14 * p.omega_qub;
}

void validate_spec(const ProtocolSpec& spec) {
    if (spec.num_qubits < 1) throw std::invalid_argument("protocol: num_qubits must be >= 1");
    if (spec.tau_grid.points < 100)
        throw std::invalid_argument("protocol: tau grid needs at least 100 points");
    if (!(spec.qubit.q >= 0.0 && spec.qubit.q <= 1.0))
        throw std::invalid_argument("protocol: qubit q must be in [0,1]");
    if (!(spec.params.g > 0.0))
        throw std::invalid_argument("protocol: coupling g must be positive");
    if (!(spec.params.omega_qub > 0.0))
        throw std::invalid_argument("protocol: omega_qub must be positive");
}

double objective_value(const WindowRecord& rec, int i, WindowObjective obj) {
    return obj == WindowObjective::MaxSNR ? rec.stats[i].snr : rec.fidelity[i];
}

// Highest objective; divergent ratios beat any finite one; ties keep the
// earliest (smallest) time.
int pick_best(const WindowRecord& rec, WindowObjective obj) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(rec.g_tau.size()); ++i) {
        const double a = objective_value(rec, i, obj);
        const double b = objective_value(rec, best, obj);
        const bool better = (std::isinf(a) && !std::isinf(b)) ||
                            (!std::isinf(a) && !std::isinf(b) && a > b);
        if (better) best = i;
    }
    return best;
}

EnergyStats window_stats(double w_plus, double w_minus, double g_tau) {
    EnergyStats s =
        moments_trace({{w_plus, 1.0}, {w_minus, -1.0}, {1.0 - w_plus - w_minus, 0.0}});
    s.g_tau = g_tau;
    return s;
}

// Cavity state carried between windows: number-basis populations under the
// ladder-exchange coupling (where the reduced state stays diagonal), a pure
// vector for a fresh smooth preparation, or a general matrix otherwise.
struct CavityCarry {
    enum class Kind { Diagonal, Pure, Full };
    Kind kind = Kind::Diagonal;
    RVec diag;
    Vec pure;
    Mat full;

    int dim() const {
        switch (kind) {
            case Kind::Diagonal: return static_cast<int>(diag.size());
            case Kind::Pure: return static_cast<int>(pure.size());
            default: return static_cast<int>(full.rows());
        }
    }

    DensityMatrix snapshot(const std::string& what) const {
        const int d = dim();
        HilbertLayout lay(0, d);
        if (kind == Kind::Diagonal) {
            Mat m = Mat::Zero(d, d);
            for (int n = 0; n < d; ++n) m(n, n) = diag(n);
            return {lay, std::move(m), what};
        }
        if (kind == Kind::Pure) return {lay, pure * pure.adjoint(), what};
        return {lay, full, what};
    }

    double boundary_population() const {
        const int d = dim();
        if (kind == Kind::Diagonal) return diag(d - 1);
        if (kind == Kind::Pure) return std::norm(pure(d - 1));
        return full(d - 1, d - 1).real();
    }
};

CavityCarry initial_carry(const CavityStateSpec& spec, int d) {
    CavityCarry c;
    if (is_pure(spec) && !is_diagonal(spec)) {
        c.kind = CavityCarry::Kind::Pure;
        c.pure = pure_amplitudes(spec, d);
    } else {
        c.kind = CavityCarry::Kind::Diagonal;
        c.diag = diagonal_populations(spec, d);
    }
    return c;
}

// Resonant constant-coupling ladder-exchange window in closed form: only
// the populations matter, and the carried state stays diagonal.
WindowRecord resonant_window(const RVec& w, double q, const std::vector<double>& grid,
                             WindowObjective obj, int threads, RVec* advanced) {
    const int d = static_cast<int>(w.size());
    const int points = static_cast<int>(grid.size());
    WindowRecord rec;
    rec.g_tau = grid;
    rec.stats.resize(points);
    rec.fidelity.resize(points);

    parallel_for(points, threads, [&](int i) {
        const double x = grid[i];
        double up = 0.0;    // P(excitation gained | started ground)
        double down = 0.0;  // P(excitation lost | started excited)
        for (int m = 1; m < d; ++m) {
            const double s = std::sin(x * std::sqrt(static_cast<double>(m)));
            up += w(m) * s * s;
        }
        for (int m = 0; m + 1 < d; ++m) {
            const double s = std::sin(x * std::sqrt(static_cast<double>(m + 1)));
            down += w(m) * s * s;
        }
        rec.stats[i] = window_stats((1.0 - q) * up, q * down, x);
        rec.fidelity[i] = (1.0 - q) * up + q * (1.0 - down);
    });

    rec.best_index = pick_best(rec, obj);
    rec.g_tau_star = grid[rec.best_index];

    if (advanced) {
        const double x = rec.g_tau_star;
        RVec out = RVec::Zero(d);
        for (int m = 0; m < d; ++m) {
            const double swap_up =
                m + 1 < d ? std::pow(std::sin(x * std::sqrt(static_cast<double>(m + 1))), 2)
                          : 0.0;
            const double swap_down =
                m >= 1 ? std::pow(std::sin(x * std::sqrt(static_cast<double>(m))), 2) : 0.0;
            out(m) += q * w(m) * (1.0 - swap_up);
            if (m + 1 < d) out(m + 1) += q * w(m) * swap_up;
            out(m) += (1.0 - q) * w(m) * (1.0 - swap_down);
            if (m >= 1) out(m - 1) += (1.0 - q) * w(m) * swap_down;
        }
        *advanced = std::move(out);
    }
    return rec;
}

struct ColumnSet {
    Mat columns;                 // full-space initial vectors
    std::vector<double> weight;  // probability of each column
    std::vector<int> sector;     // initial qubit sector: 0 excited, 1 ground
};

ColumnSet build_window_columns(const CavityCarry& carry, double q, const HilbertLayout& lay) {
    const int d = lay.cavity_dim;
    std::vector<std::pair<Vec, double>> cavity_cols;
    switch (carry.kind) {
        case CavityCarry::Kind::Pure:
            cavity_cols.emplace_back(carry.pure, 1.0);
            break;
        case CavityCarry::Kind::Diagonal:
            for (int m = 0; m < d; ++m) {
                if (carry.diag(m) > kWeightCutoff) {
                    Vec v = Vec::Zero(d);
                    v(m) = 1.0;
                    cavity_cols.emplace_back(std::move(v), carry.diag(m));
                }
            }
            break;
        case CavityCarry::Kind::Full: {
            Eigen::SelfAdjointEigenSolver<Mat> es(carry.full);
            for (int k = 0; k < d; ++k) {
                if (es.eigenvalues()(k) > kWeightCutoff)
                    cavity_cols.emplace_back(es.eigenvectors().col(k), es.eigenvalues()(k));
            }
            break;
        }
    }
    std::vector<std::pair<int, double>> sectors;
    if (q > kWeightCutoff) sectors.emplace_back(0, q);
    if (1.0 - q > kWeightCutoff) sectors.emplace_back(1, 1.0 - q);

    ColumnSet set;
    const int count = static_cast<int>(cavity_cols.size() * sectors.size());
    set.columns = Mat::Zero(lay.dim(), count);
    set.weight.reserve(count);
    set.sector.reserve(count);
    int c = 0;
    double total = 0.0;
    for (const auto& [s, ws] : sectors) {
        for (const auto& [v, wc] : cavity_cols) {
            set.columns.block(s * d, c, d, 1) = v;
            set.weight.push_back(ws * wc);
            set.sector.push_back(s);
            total += ws * wc;
            ++c;
        }
    }
    for (double& wv : set.weight) wv /= total;
    return set;
}

// One charging window by explicit propagation on the qubit+cavity space:
// covers detuning, time-dependent coupling and the counter-rotating model.
WindowRecord numeric_window(const ModelParams& params, double q, const CavityCarry& carry,
                            const std::vector<double>& grid, WindowObjective obj, int threads,
                            Mat* advanced) {
    const int d = carry.dim();
    HilbertLayout lay(1, d);
    const ColumnSet set = build_window_columns(carry, q, lay);
    const int cols = static_cast<int>(set.weight.size());
    const int points = static_cast<int>(grid.size());

    std::vector<double> times(points);
    for (int i = 0; i < points; ++i) times[i] = grid[i] / params.g;

    WindowRecord rec;
    rec.g_tau = grid;
    rec.stats.resize(points);
    rec.fidelity.resize(points);

    auto reduce = [&](int i, const Mat& amps) {
        double up = 0.0, down = 0.0, fid = 0.0;
        for (int c = 0; c < cols; ++c) {
            double pe = 0.0;
            for (int n = 0; n < d; ++n) pe += std::norm(amps(n, c));
            pe = std::min(pe, 1.0);
            if (set.sector[c] == 1)
                up += set.weight[c] * pe;
            else
                down += set.weight[c] * (1.0 - pe);
            fid += set.weight[c] * pe;
        }
        rec.stats[i] = window_stats(up, down, grid[i]);
        rec.fidelity[i] = fid;
    };

    auto advance_from = [&](const Mat& amps) {
        Mat rho = Mat::Zero(d, d);
        for (int c = 0; c < cols; ++c) {
            // Rescale away integrator norm drift: each column is unitary.
            const double nrm = amps.col(c).squaredNorm();
            const double scale = nrm > 0.0 ? set.weight[c] / nrm : 0.0;
            for (int s = 0; s < 2; ++s)
                rho.noalias() += scale * amps.block(s * d, c, d, 1) *
                                 amps.block(s * d, c, d, 1).adjoint();
        }
        return rho;
    };

    if (params.constant_coupling()) {
        const Mat h = free_hamiltonian(params, lay).entries +
                      interaction_hamiltonian(params, lay).entries;
        SpectralPropagator sp(h);
        const Mat coeffs = sp.to_eigenbasis(set.columns);
        parallel_for(points, threads, [&](int i) { reduce(i, sp.evolve(coeffs, times[i])); });
        rec.best_index = pick_best(rec, obj);
        rec.g_tau_star = grid[rec.best_index];
        if (advanced) *advanced = advance_from(sp.evolve(coeffs, times[rec.best_index]));
        return rec;
    }

    // Time-dependent coupling: stream the sample reductions, then rerun to
    // the chosen time for the advanced state.
    ModelParams unit = params;
    unit.g = 1.0;
    const FockOperator h_free = free_hamiltonian(params, lay);
    const FockOperator w_unit = interaction_hamiltonian(unit, lay);
    propagate_columns(set.columns, h_free, w_unit, params.g, params.profile, times, 1e-10,
                      [&](size_t i, const Mat& amps) { reduce(static_cast<int>(i), amps); });
    rec.best_index = pick_best(rec, obj);
    rec.g_tau_star = grid[rec.best_index];
    if (advanced) {
        if (rec.best_index == 0) {
            *advanced = advance_from(set.columns);
        } else {
            propagate_columns(set.columns, h_free, w_unit, params.g, params.profile,
                              {times[rec.best_index]}, 1e-10,
                              [&](size_t, const Mat& amps) { *advanced = advance_from(amps); });
        }
    }
    return rec;
}

void check_boundary(const CavityCarry& carry, int window_index) {
    if (carry.boundary_population() > kBoundaryPopulation)
        throw TruncationError("sequential window " + std::to_string(window_index) +
                              ": cavity population reached the truncation boundary");
}

}  // namespace

std::vector<double> tau_grid_points(const TauGrid& grid, double mean_photons, int window_index) {
    if (grid.points < 2) throw std::invalid_argument("tau grid needs at least 2 points");
    double span = grid.g_tau_max;
    if (!(span > 0.0)) {
        const double remaining = std::max(1.0, mean_photons - (window_index - 1));
        span = 1.5 * M_PI / std::sqrt(remaining);
    }
    std::vector<double> pts(grid.points);
    for (int i = 0; i < grid.points; ++i)
        pts[i] = span * static_cast<double>(i) / static_cast<double>(grid.points - 1);
    return pts;
}

ChargeReport run_sequential(const ProtocolSpec& spec, int threads) {
    validate_spec(spec);
    int d = recommended_cavity_dim(spec.cavity, spec.num_qubits);
    // Counter-rotating terms leak population upward; add headroom.
    if (!spec.params.rwa) d = std::min(kMaxCavityDim, d + 6);
    const double n_nom = nominal_mean_photons(spec.cavity);

    ChargeReport report;
    report.spec = spec;
    report.cavity_dim = d;
    report.mean_photons = n_nom;

    CavityCarry carry = initial_carry(spec.cavity, d);
    // The closed-form window is exact only when the whole run stays in the
    // number basis, which needs a population-diagonal preparation.
    const bool closed_form = resonant(spec.params) && spec.params.rwa &&
                             spec.params.constant_coupling() && is_diagonal(spec.cavity);

    for (int j = 1; j <= spec.num_qubits; ++j) {
        const std::vector<double> grid = tau_grid_points(spec.tau_grid, n_nom, j);
        WindowRecord rec;
        CavityCarry next;
        if (closed_form) {
            next.kind = CavityCarry::Kind::Diagonal;
            rec = resonant_window(carry.diag, spec.qubit.q, grid, spec.objective, threads,
                                  &next.diag);
        } else {
            Mat advanced;
            rec = numeric_window(spec.params, spec.qubit.q, carry, grid, spec.objective,
                                 threads, &advanced);
            if (spec.params.rwa && carry.kind == CavityCarry::Kind::Diagonal) {
                // Ladder exchange keeps a diagonal cavity state diagonal.
                next.kind = CavityCarry::Kind::Diagonal;
                next.diag = advanced.diagonal().real();
            } else {
                next.kind = CavityCarry::Kind::Full;
                next.full = 0.5 * (advanced + Mat(advanced.adjoint()));
            }
        }
        rec.window_index = j;
        carry = std::move(next);
        check_boundary(carry, j);
        report.cavity_after.push_back(carry.snapshot("cavity after window " + std::to_string(j)));
        report.total_g_tau += rec.g_tau_star;
        report.windows.push_back(std::move(rec));
    }
    return report;
}

namespace {

// Closed-form resonant two-qubit parallel run from diagonal populations.
WindowRecord parallel_analytic_window(const RVec& w, const std::vector<double>& grid,
                                      WindowObjective obj, int threads, RVec* cavity_at_star) {
    const int points = static_cast<int>(grid.size());
    WindowRecord rec;
    rec.g_tau = grid;
    rec.stats.resize(points);
    rec.fidelity.resize(points);
    rec.collective.resize(points);

    parallel_for(points, threads, [&](int i) {
        rec.stats[i] = tc2_single_qubit_stats(w, grid[i]);
        rec.collective[i] = tc2_two_qubit_stats(w, grid[i]);
        rec.fidelity[i] = rec.stats[i].mean;
    });
    rec.best_index = pick_best(rec, obj);
    rec.g_tau_star = grid[rec.best_index];

    if (cavity_at_star) {
        const int d = static_cast<int>(w.size());
        const double x = rec.g_tau_star;
        RVec out = RVec::Zero(d);
        for (int m = 0; m < d; ++m) {
            const auto fh = oracle::eval_fh(m, x);
            out(m) += w(m) * (1.0 - fh.f - 2.0 * fh.h);
            if (m >= 1) out(m - 1) += w(m) * 2.0 * fh.h;
            if (m >= 2) out(m - 2) += w(m) * fh.f;
        }
        *cavity_at_star = std::move(out);
    }
    return rec;
}

}  // namespace

ChargeReport run_parallel(const ProtocolSpec& spec, int threads) {
    validate_spec(spec);
    if (spec.num_qubits > 6)
        throw ResourceError("parallel protocol supports at most 6 qubits");
    if (!spec.params.rwa)
        throw UnsupportedRegimeError("parallel protocol requires the rotating-wave coupling");
    if (!spec.params.constant_coupling())
        throw UnsupportedRegimeError("parallel protocol requires constant coupling");

    const int M = spec.num_qubits;
    const int d = recommended_cavity_dim(spec.cavity, M);
    const double n_nom = nominal_mean_photons(spec.cavity);

    ChargeReport report;
    report.spec = spec;
    report.cavity_dim = d;
    report.mean_photons = n_nom;
    const std::vector<double> grid = tau_grid_points(spec.tau_grid, n_nom, 1);

    if (M == 2 && resonant(spec.params) && spec.qubit.q <= kWeightCutoff &&
        is_diagonal(spec.cavity)) {
        const RVec w = diagonal_populations(spec.cavity, d);
        RVec cav;
        WindowRecord rec =
            parallel_analytic_window(w, grid, spec.objective, threads, &cav);
        report.total_g_tau = rec.g_tau_star;
        CavityCarry carry;
        carry.kind = CavityCarry::Kind::Diagonal;
        carry.diag = std::move(cav);
        report.cavity_after.push_back(carry.snapshot("cavity at chosen time"));
        report.windows.push_back(std::move(rec));
        return report;
    }

    HilbertLayout lay(M, d);
    const Mat h = free_hamiltonian(spec.params, lay).entries +
                  interaction_hamiltonian(spec.params, lay).entries;
    SpectralPropagator sp(h);

    // Initial columns: qubit bitstrings weighted by the product preparation
    // times either the pure cavity vector or each occupied number state.
    std::vector<std::pair<Vec, double>> cavity_cols;
    if (is_pure(spec.cavity) && !is_diagonal(spec.cavity)) {
        cavity_cols.emplace_back(pure_amplitudes(spec.cavity, d), 1.0);
    } else {
        const RVec w = diagonal_populations(spec.cavity, d);
        for (int m = 0; m < d; ++m) {
            if (w(m) > kWeightCutoff) {
                Vec v = Vec::Zero(d);
                v(m) = 1.0;
                cavity_cols.emplace_back(std::move(v), w(m));
            }
        }
    }
    const double q = spec.qubit.q;
    std::vector<std::pair<unsigned, double>> qubit_sectors;
    for (unsigned bits = 0; bits < static_cast<unsigned>(lay.qubit_states()); ++bits) {
        const int k = lay.excitation_count(bits);
        const double wq = std::pow(q, k) * std::pow(1.0 - q, M - k);
        if (wq > kWeightCutoff) qubit_sectors.emplace_back(bits, wq);
    }

    const int count = static_cast<int>(cavity_cols.size() * qubit_sectors.size());
    Mat columns = Mat::Zero(lay.dim(), count);
    std::vector<double> weight;
    std::vector<unsigned> start_bits;
    double total = 0.0;
    for (const auto& [bits, wq] : qubit_sectors) {
        for (const auto& [v, wc] : cavity_cols) {
            const int c = static_cast<int>(weight.size());
            columns.block(bits * d, c, d, 1) = v;
            weight.push_back(wq * wc);
            start_bits.push_back(bits);
            total += wq * wc;
        }
    }
    for (double& wv : weight) wv /= total;

    std::vector<int> row_excited1(lay.dim()), row_count(lay.dim());
    for (int i = 0; i < lay.dim(); ++i) {
        const unsigned bits = lay.bits_of(i);
        row_excited1[i] = lay.excited(bits, 1) ? 1 : 0;
        row_count[i] = lay.excitation_count(bits);
    }

    const Mat coeffs = sp.to_eigenbasis(columns);
    const int points = static_cast<int>(grid.size());
    WindowRecord rec;
    rec.g_tau = grid;
    rec.stats.resize(points);
    rec.fidelity.resize(points);
    rec.collective.resize(points);

    parallel_for(points, threads, [&](int i) {
        const Mat amps = sp.evolve(coeffs, grid[i] / spec.params.g);
        std::vector<double> w1(3, 0.0);            // single-qubit quanta -1, 0, +1
        std::vector<double> wall(2 * M + 1, 0.0);  // collective quanta -M..M
        double fid = 0.0;
        for (int c = 0; c < count; ++c) {
            const unsigned b0 = start_bits[c];
            const int e1 = lay.excited(b0, 1) ? 1 : 0;
            const int k0 = lay.excitation_count(b0);
            for (int row = 0; row < lay.dim(); ++row) {
                const double p = weight[c] * std::norm(amps(row, c));
                w1[row_excited1[row] - e1 + 1] += p;
                wall[row_count[row] - k0 + M] += p;
                if (row_excited1[row]) fid += p;
            }
        }
        EnergyStats s1 = moments_trace(
            {{w1[2], 1.0}, {w1[0], -1.0}, {w1[1], 0.0}});
        s1.g_tau = grid[i];
        std::vector<OutcomeWeight> oc;
        for (int de = -M; de <= M; ++de) oc.push_back({wall[de + M], static_cast<double>(de)});
        EnergyStats sall = moments_trace(oc);
        sall.g_tau = grid[i];
        rec.stats[i] = s1;
        rec.collective[i] = sall;
        rec.fidelity[i] = fid;
    });

    rec.best_index = pick_best(rec, spec.objective);
    rec.g_tau_star = grid[rec.best_index];
    report.total_g_tau = rec.g_tau_star;

    const Mat amps = sp.evolve(coeffs, rec.g_tau_star / spec.params.g);
    Mat cav = Mat::Zero(d, d);
    for (int c = 0; c < count; ++c) {
        for (int s = 0; s < lay.qubit_states(); ++s)
            cav.noalias() += weight[c] * amps.block(s * d, c, d, 1) *
                             amps.block(s * d, c, d, 1).adjoint();
    }
    report.cavity_after.emplace_back(HilbertLayout(0, d), 0.5 * (cav + Mat(cav.adjoint())),
                                     "cavity at chosen time");
    report.windows.push_back(std::move(rec));
    return report;
}

double window_max_snr(const WindowRecord& rec) {
    double best = 0.0;
    for (const auto& s : rec.stats) {
        if (std::isinf(s.snr)) return s.snr;
        best = std::max(best, s.snr);
    }
    return best;
}

namespace {

bool same_profile(const CouplingProfile& a, const CouplingProfile& b) {
    if (a.index() != b.index()) return false;
    if (std::holds_alternative<SmoothedSquare>(a)) {
        const auto& x = std::get<SmoothedSquare>(a);
        const auto& y = std::get<SmoothedSquare>(b);
        return x.g_delta == y.g_delta && x.t_tilde == y.t_tilde;
    }
    return true;
}

}  // namespace

bool same_protocol_settings(const ProtocolSpec& a, const ProtocolSpec& b) {
    return a.kind == b.kind && a.num_qubits == b.num_qubits && a.qubit.q == b.qubit.q &&
           a.params.omega_qub == b.params.omega_qub && a.params.omega_cav == b.params.omega_cav &&
           a.params.g == b.params.g && a.params.rwa == b.params.rwa &&
           same_profile(a.params.profile, b.params.profile) &&
           a.tau_grid.points == b.tau_grid.points && a.tau_grid.g_tau_max == b.tau_grid.g_tau_max &&
           a.objective == b.objective;
}

double averaged_snr(const ChargeReport& report, double mean_photons,
                    std::optional<double> divergence_cap) {
    if (!(mean_photons > 0.0))
        throw std::invalid_argument("averaged_snr: mean_photons must be positive");
    double sum = 0.0;
    for (const auto& w : report.windows) {
        double m = window_max_snr(w);
        if (std::isinf(m)) {
            if (!divergence_cap)
                throw std::invalid_argument(
                    "averaged_snr: divergent window maximum and no cap supplied");
            m = *divergence_cap;
        }
        sum += m;
    }
    return sum / mean_photons;
}

double advantage_D(const ChargeReport& fock, const ChargeReport& gaussian, double mean_photons) {
    if (!same_protocol_settings(fock.spec, gaussian.spec))
        throw std::invalid_argument("advantage_D: protocol settings differ beyond the cavity");
    return averaged_snr(fock, mean_photons) - averaged_snr(gaussian, mean_photons);
}

double snr_per_time(const ChargeReport& report) {
    if (report.windows.empty()) throw std::invalid_argument("snr_per_time: empty report");
    if (report.spec.kind == ProtocolKind::Sequential) {
        if (!(report.total_g_tau > 0.0))
            throw std::invalid_argument("snr_per_time: zero total charging time");
        double sum = 0.0;
        for (const auto& w : report.windows) sum += window_max_snr(w);
        return sum / static_cast<double>(report.windows.size()) / report.total_g_tau;
    }
    const WindowRecord& w = report.windows.front();
    int arg = 0;
    for (int i = 1; i < static_cast<int>(w.stats.size()); ++i) {
        const double a = w.stats[i].snr, b = w.stats[arg].snr;
        if ((std::isinf(a) && !std::isinf(b)) || (!std::isinf(a) && !std::isinf(b) && a > b))
            arg = i;
    }
    if (!(w.g_tau[arg] > 0.0))
        throw std::invalid_argument("snr_per_time: maximum at zero charging time");
    return w.stats[arg].snr / w.g_tau[arg];
}

}  // namespace qbatt
