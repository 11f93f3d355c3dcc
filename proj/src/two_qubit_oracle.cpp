#include "qbatt/two_qubit_oracle.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qbatt::oracle {

FHPair eval_fh(int n, double g_tau) {
    if (n < 0) throw std::invalid_argument("eval_fh: photon number must be >= 0");
    if (n == 0) return {0.0, 0.0};
    const double denom = 2.0 * n - 1.0;
    const double arg = g_tau * std::sqrt(2.0 * denom);
    const double c = std::cos(arg);
    const double s = std::sin(arg);
    FHPair out;
    out.f = (c - 1.0) / denom * (c - 1.0) / denom * n * (n - 1.0);
    out.h = s * s * n / (2.0 * denom);
    return out;
}

double oracle_snr(int n, double g_tau) {
    const FHPair fh = eval_fh(n, g_tau);
    const double p = fh.f + fh.h;
    const double mean_sq = p * p;
    const double var = p * (1.0 - p);
    constexpr double floor = 1e-12;
    if (var < floor) {
        if (mean_sq > floor) return std::numeric_limits<double>::infinity();
        return 0.0;
    }
    return mean_sq / var;
}

std::complex<double> oracle_gf(int n, double g_tau, double chi) {
    const FHPair fh = eval_fh(n, g_tau);
    const double p = fh.f + fh.h;
    return {1.0 - p + p * std::cos(chi), p * std::sin(chi)};
}

}  // namespace qbatt::oracle
