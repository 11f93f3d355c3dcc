#include "qbatt/counting_stats.hpp"

#include <cmath>
#include <limits>

#include "qbatt/two_qubit_oracle.hpp"

namespace qbatt {

bool snr_is_divergent(double snr) { return std::isinf(snr); }

cx generating_function(const TiltedState& state) { return state.entries.trace(); }

MomentEstimate moments_fd(const std::function<cx(double)>& gf, double h_chi) {
    if (!(h_chi > 0.0)) throw std::invalid_argument("moments_fd: spacing must be positive");
    const double h = h_chi;
    const cx g0 = gf(0.0);
    const cx gp1 = gf(0.5 * h), gm1 = gf(-0.5 * h);
    const cx gp2 = gf(h), gm2 = gf(-h);
    const cx gp4 = gf(2.0 * h), gm4 = gf(-2.0 * h);

    auto d1 = [](cx m2, cx m1, cx p1, cx p2, double s) {
        return (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * s);
    };
    auto d2 = [](cx m2, cx m1, cx c, cx p1, cx p2, double s) {
        return (-m2 + 16.0 * m1 - 30.0 * c + 16.0 * p1 - p2) / (12.0 * s * s);
    };
    const cx d1h = d1(gm4, gm2, gp2, gp4, h);
    const cx d1h2 = d1(gm2, gm1, gp1, gp2, 0.5 * h);
    const cx d2h = d2(gm4, gm2, g0, gp2, gp4, h);
    const cx d2h2 = d2(gm2, gm1, g0, gp1, gp2, 0.5 * h);

    const cx d1r = (16.0 * d1h2 - d1h) / 15.0;
    const cx d2r = (16.0 * d2h2 - d2h) / 15.0;

    MomentEstimate est;
    est.stats.mean = (cx(0.0, -1.0) * d1r).real();
    const double m2 = (-d2r).real();
    est.stats.variance = m2 - est.stats.mean * est.stats.mean;
    est.stats.snr = snr_from_moments(est.stats.mean, est.stats.variance);
    est.fd_error = std::max(std::abs(d1h2 - d1h), std::abs(d2h2 - d2h)) / 15.0;
    est.warning = est.fd_error > 1e-6 * std::max(1.0, std::abs(m2));
    return est;
}

EnergyStats moments_trace(const std::vector<OutcomeWeight>& outcomes) {
    double sum = 0.0, mean = 0.0, m2 = 0.0;
    for (const auto& o : outcomes) {
        if (o.weight < -1e-10)
            throw NormalizationError("moments_trace: negative outcome weight " +
                                     std::to_string(o.weight));
        sum += o.weight;
        mean += o.weight * o.energy;
        m2 += o.weight * o.energy * o.energy;
    }
    if (std::abs(sum - 1.0) > 1e-8)
        throw NormalizationError("moments_trace: outcome weights sum to " + std::to_string(sum));
    EnergyStats s;
    s.mean = mean;
    s.variance = std::max(0.0, m2 - mean * mean);
    s.snr = snr_from_moments(s.mean, s.variance);
    return s;
}

double snr_from_moments(double mean, double variance) {
    const double mean_sq = mean * mean;
    if (variance < kVarianceFloor) {
        if (mean_sq > kVarianceFloor) return std::numeric_limits<double>::infinity();
        return 0.0;
    }
    return mean_sq / variance;
}

double fidelity_excited(const DensityMatrix& rho_qubit) {
    if (rho_qubit.layout.num_qubits != 1 || rho_qubit.layout.cavity_dim != 1)
        throw std::invalid_argument("fidelity_excited: expects a single-qubit state");
    return rho_qubit.entries(0, 0).real();
}

namespace {

EnergyStats bernoulli_stats(double p, double g_tau) {
    EnergyStats s = moments_trace({{p, 1.0}, {1.0 - p, 0.0}});
    s.g_tau = g_tau;
    return s;
}

EnergyStats collective_stats(double f, double h, double g_tau) {
    EnergyStats s = moments_trace({{f, 2.0}, {h, 1.0}, {h, 1.0}, {1.0 - f - 2.0 * h, 0.0}});
    s.g_tau = g_tau;
    return s;
}

}  // namespace

EnergyStats tc2_single_qubit_stats(int n, double g_tau) {
    const auto fh = oracle::eval_fh(n, g_tau);
    return bernoulli_stats(fh.f + fh.h, g_tau);
}

EnergyStats tc2_two_qubit_stats(int n, double g_tau) {
    const auto fh = oracle::eval_fh(n, g_tau);
    return collective_stats(fh.f, fh.h, g_tau);
}

EnergyStats tc2_single_qubit_stats(const RVec& populations, double g_tau) {
    double p = 0.0;
    for (int m = 0; m < populations.size(); ++m) {
        const auto fh = oracle::eval_fh(m, g_tau);
        p += populations(m) * (fh.f + fh.h);
    }
    return bernoulli_stats(p, g_tau);
}

EnergyStats tc2_two_qubit_stats(const RVec& populations, double g_tau) {
    double f = 0.0, h = 0.0;
    for (int m = 0; m < populations.size(); ++m) {
        const auto fh = oracle::eval_fh(m, g_tau);
        f += populations(m) * fh.f;
        h += populations(m) * fh.h;
    }
    return collective_stats(f, h, g_tau);
}

}  // namespace qbatt
