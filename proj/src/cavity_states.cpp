#include "qbatt/cavity_states.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

namespace qbatt {

namespace {

constexpr double kThermalZeroTol = 1e-12;

// Scaled Hermite recurrence shared by the squeezed amplitude and its
// phase-randomized weight: t_n = (tanh r / 2)^(n/2) * H_n(x) / sqrt(n!)
// with x = a*(1+tanh r)/sqrt(2 tanh r) and a the post-squeeze equivalent
// displacement. The combination stays regular as r -> 0, where it reduces
// to the coherent amplitude a^n/sqrt(n!).
std::vector<double> scaled_hermite(double r, double a, int count) {
    const double th = std::tanh(r);
    std::vector<double> t(count);
    if (count == 0) return t;
    t[0] = 1.0;
    if (count == 1) return t;
    t[1] = a * (1.0 + th);
    for (int n = 1; n + 1 < count; ++n) {
        const double next =
            (a * (1.0 + th) * t[n] - th * std::sqrt(static_cast<double>(n)) * t[n - 1]) /
            std::sqrt(static_cast<double>(n + 1));
        if (std::abs(next) > 1e200)
            throw std::overflow_error("squeezed amplitude recurrence overflow at level " +
                                      std::to_string(n + 1));
        t[n + 1] = next;
    }
    return t;
}

// Displacement seen after commuting S(r) past D(alpha): for real
// parameters D(alpha) precedes S(r), equivalent to S(r) D'(alpha e^{-r}).
double effective_displacement(double r, double alpha) { return alpha * std::exp(-r); }

std::vector<double> squeezed_amplitudes_raw(double r, double alpha, int count) {
    const double a = effective_displacement(r, alpha);
    const double th = std::tanh(r);
    std::vector<double> t = scaled_hermite(r, a, count);
    const double pref = std::exp(-0.5 * a * a * (1.0 + th)) / std::sqrt(std::cosh(r));
    for (double& v : t) v *= pref;
    return t;
}

std::vector<double> phase_randomized_weights_raw(double r, double alpha, int count) {
    const double a = effective_displacement(r, alpha);
    const double th = std::tanh(r);
    std::vector<double> t = scaled_hermite(r, a, count);
    const double pref = std::exp(-a * a * (1.0 + th)) / std::cosh(r);
    std::vector<double> w(count);
    for (int n = 0; n < count; ++n) w[n] = t[n] * t[n] * pref;
    return w;
}

double poisson_weight(double alpha, int n) {
    if (alpha == 0.0) return n == 0 ? 1.0 : 0.0;
    const double lw = -alpha * alpha + 2.0 * n * std::log(alpha) - std::lgamma(n + 1.0);
    return std::exp(lw);
}

double log_binomial(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

std::vector<double> attenuated_weights(int n, double p, int count) {
    std::vector<double> w(count, 0.0);
    for (int k = 0; k <= n && k < count; ++k) {
        double lw = log_binomial(n, k);
        if (k > 0) lw += k * std::log(p);
        if (n - k > 0) lw += (n - k) * std::log1p(-p);
        if ((k > 0 && p == 0.0) || (n - k > 0 && p == 1.0)) continue;
        w[k] = std::exp(lw);
    }
    return w;
}

void validate_spec(const CavityStateSpec& spec) {
    std::visit(
        [](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, FockSpec>) {
                if (s.n < 0) throw std::invalid_argument("fock: n must be >= 0");
            } else if constexpr (std::is_same_v<T, CoherentSpec>) {
                if (!(s.alpha >= 0.0)) throw std::invalid_argument("coherent: alpha must be >= 0");
            } else if constexpr (std::is_same_v<T, SqueezedCoherentSpec> ||
                                 std::is_same_v<T, PhaseRandomizedSqueezedSpec>) {
                if (!(s.r >= 0.0)) throw std::invalid_argument("squeezed: r must be >= 0");
                if (!(s.alpha >= 0.0)) throw std::invalid_argument("squeezed: alpha must be >= 0");
            } else if constexpr (std::is_same_v<T, ThermalizedFockSpec>) {
                if (s.n < 0) throw std::invalid_argument("thermal-fock: n must be >= 0");
                if (!(s.n_th >= 0.0))
                    throw std::invalid_argument("thermal-fock: n_th must be >= 0");
            } else if constexpr (std::is_same_v<T, AttenuatedFockSpec>) {
                if (s.n < 0) throw std::invalid_argument("attenuated-fock: n must be >= 0");
                if (!(s.p >= 0.0 && s.p <= 1.0))
                    throw std::invalid_argument("attenuated-fock: p must be in [0,1]");
            }
        },
        spec);
}

std::vector<double> raw_populations(const CavityStateSpec& spec, int count) {
    return std::visit(
        [count](const auto& s) -> std::vector<double> {
            using T = std::decay_t<decltype(s)>;
            std::vector<double> w(count, 0.0);
            if constexpr (std::is_same_v<T, FockSpec>) {
                if (s.n < count) w[s.n] = 1.0;
            } else if constexpr (std::is_same_v<T, CoherentSpec>) {
                for (int n = 0; n < count; ++n) w[n] = poisson_weight(s.alpha, n);
            } else if constexpr (std::is_same_v<T, SqueezedCoherentSpec>) {
                auto amp = squeezed_amplitudes_raw(s.r, s.alpha, count);
                for (int n = 0; n < count; ++n) w[n] = amp[n] * amp[n];
            } else if constexpr (std::is_same_v<T, PhaseRandomizedSqueezedSpec>) {
                w = phase_randomized_weights_raw(s.r, s.alpha, count);
            } else if constexpr (std::is_same_v<T, ThermalizedFockSpec>) {
                for (int m = 0; m < count; ++m) w[m] = thermal_fock_weight(m, s.n, s.n_th);
            } else if constexpr (std::is_same_v<T, AttenuatedFockSpec>) {
                w = attenuated_weights(s.n, s.p, count);
            }
            return w;
        },
        spec);
}

}  // namespace

bool is_pure(const CavityStateSpec& spec) {
    if (std::holds_alternative<ThermalizedFockSpec>(spec)) {
        return std::get<ThermalizedFockSpec>(spec).n_th < kThermalZeroTol;
    }
    if (std::holds_alternative<AttenuatedFockSpec>(spec)) {
        const auto& a = std::get<AttenuatedFockSpec>(spec);
        return a.p == 1.0 || a.p == 0.0 || a.n == 0;
    }
    return !std::holds_alternative<PhaseRandomizedSqueezedSpec>(spec);
}

bool is_diagonal(const CavityStateSpec& spec) {
    if (std::holds_alternative<CoherentSpec>(spec))
        return std::get<CoherentSpec>(spec).alpha == 0.0;
    if (std::holds_alternative<SqueezedCoherentSpec>(spec)) {
        const auto& s = std::get<SqueezedCoherentSpec>(spec);
        return s.r == 0.0 && s.alpha == 0.0;
    }
    return true;
}

double nominal_mean_photons(const CavityStateSpec& spec) {
    return std::visit(
        [](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, FockSpec>) {
                return s.n;
            } else if constexpr (std::is_same_v<T, CoherentSpec>) {
                return s.alpha * s.alpha;
            } else if constexpr (std::is_same_v<T, SqueezedCoherentSpec> ||
                                 std::is_same_v<T, PhaseRandomizedSqueezedSpec>) {
                const double sh = std::sinh(s.r);
                return s.alpha * s.alpha * std::exp(-2.0 * s.r) + sh * sh;
            } else if constexpr (std::is_same_v<T, ThermalizedFockSpec>) {
                return s.n;
            } else {
                return s.n;
            }
        },
        spec);
}

double truncation_tail(const CavityStateSpec& spec, int cavity_dim) {
    validate_spec(spec);
    if (cavity_dim < 1) throw std::invalid_argument("truncation_tail: cavity_dim must be >= 1");
    auto w = raw_populations(spec, cavity_dim);
    double sum = 0.0;
    for (double v : w) sum += v;
    return std::max(0.0, 1.0 - sum);
}

int recommended_cavity_dim(const CavityStateSpec& spec, int num_qubits) {
    validate_spec(spec);
    if (num_qubits < 0) throw std::invalid_argument("recommended_cavity_dim: negative qubit count");
    const int cap = kMaxCavityDim;
    return std::visit(
        [&](const auto& s) -> int {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, FockSpec> || std::is_same_v<T, AttenuatedFockSpec>) {
                return std::min(cap, s.n + num_qubits + 3);
            } else if constexpr (std::is_same_v<T, ThermalizedFockSpec>) {
                int d = std::min(cap, s.n + num_qubits + 3);
                while (d < cap && truncation_tail(spec, d) >= kTailBound) ++d;
                if (truncation_tail(spec, d) >= kTailBound)
                    throw TruncationError("state does not fit below the cavity dimension cap " +
                                          std::to_string(cap));
                return d;
            } else {
                int d = 2;
                while (d < cap && truncation_tail(spec, d) >= kTailBound) ++d;
                if (truncation_tail(spec, d) >= kTailBound)
                    throw TruncationError("state does not fit below the cavity dimension cap " +
                                          std::to_string(cap));
                return d;
            }
        },
        spec);
}

namespace {

// Dimension hint for truncation errors; -1 when no dimension under the cap
// would do.
int feasible_dim_hint(const CavityStateSpec& spec) {
    try {
        return recommended_cavity_dim(spec, 0);
    } catch (const TruncationError&) {
        return -1;
    }
}

}  // namespace

Vec pure_amplitudes(const CavityStateSpec& spec, int cavity_dim) {
    validate_spec(spec);
    if (!is_pure(spec))
        throw std::invalid_argument("pure_amplitudes: spec describes a mixed state");
    std::vector<double> amp;
    if (std::holds_alternative<FockSpec>(spec)) {
        const int n = std::get<FockSpec>(spec).n;
        if (n >= cavity_dim)
            throw TruncationError("fock level " + std::to_string(n) +
                                      " does not fit cavity_dim " + std::to_string(cavity_dim),
                                  n + 1);
        amp.assign(cavity_dim, 0.0);
        amp[n] = 1.0;
    } else if (std::holds_alternative<CoherentSpec>(spec)) {
        const double alpha = std::get<CoherentSpec>(spec).alpha;
        amp = squeezed_amplitudes_raw(0.0, alpha, cavity_dim);
    } else if (std::holds_alternative<SqueezedCoherentSpec>(spec)) {
        const auto& s = std::get<SqueezedCoherentSpec>(spec);
        amp = squeezed_amplitudes_raw(s.r, s.alpha, cavity_dim);
    } else if (std::holds_alternative<ThermalizedFockSpec>(spec)) {
        amp.assign(cavity_dim, 0.0);
        const int n = std::get<ThermalizedFockSpec>(spec).n;
        if (n >= cavity_dim)
            throw TruncationError("fock level does not fit cavity_dim", n + 1);
        amp[n] = 1.0;
    } else if (std::holds_alternative<AttenuatedFockSpec>(spec)) {
        const auto& a = std::get<AttenuatedFockSpec>(spec);
        const int n = a.p == 0.0 ? 0 : a.n;
        if (n >= cavity_dim)
            throw TruncationError("fock level does not fit cavity_dim", n + 1);
        amp.assign(cavity_dim, 0.0);
        amp[n] = 1.0;
    } else {
        throw std::invalid_argument("pure_amplitudes: spec describes a mixed state");
    }
    double norm2 = 0.0;
    for (double v : amp) norm2 += v * v;
    if (1.0 - norm2 >= kTailBound)
        throw TruncationError("state tail " + std::to_string(1.0 - norm2) +
                                  " exceeds bound at cavity_dim " + std::to_string(cavity_dim),
                              feasible_dim_hint(spec));
    Vec out(cavity_dim);
    const double scale = 1.0 / std::sqrt(norm2);
    for (int n = 0; n < cavity_dim; ++n) out(n) = amp[n] * scale;
    return out;
}

RVec diagonal_populations(const CavityStateSpec& spec, int cavity_dim) {
    validate_spec(spec);
    auto w = raw_populations(spec, cavity_dim);
    double sum = 0.0;
    for (double v : w) {
        if (v < 0.0) throw NormalizationError("negative population in number-basis weights");
        sum += v;
    }
    if (1.0 - sum >= kTailBound)
        throw TruncationError("state tail " + std::to_string(1.0 - sum) +
                                  " exceeds bound at cavity_dim " + std::to_string(cavity_dim),
                              feasible_dim_hint(spec));
    RVec out(cavity_dim);
    for (int n = 0; n < cavity_dim; ++n) out(n) = w[n] / sum;
    return out;
}

double thermal_fock_weight(int m, int n, double n_th) {
    if (m < 0 || n < 0) throw std::invalid_argument("thermal_fock_weight: negative index");
    if (!(n_th >= 0.0)) throw std::invalid_argument("thermal_fock_weight: n_th must be >= 0");
    if (n_th < kThermalZeroTol) return m == n ? 1.0 : 0.0;

    const double log_ratio = std::log(n_th) - std::log1p(n_th);
    const double base = std::lgamma(m + 1.0) - std::lgamma(n + 1.0) - std::log(n_th);

    std::vector<std::pair<double, int>> terms;  // (log magnitude, sign)
    const int k_lo = std::max(0, m - n);
    for (int k = k_lo; k <= m; ++k) {
        for (int kp = k_lo; kp <= m; ++kp) {
            const int pw = k + kp + n - m;
            double lt = -std::lgamma(k + 1.0) - std::lgamma(kp + 1.0) + log_binomial(n, m - k) +
                        log_binomial(n, m - kp) + std::lgamma(pw + 1.0) +
                        (pw + 1.0) * log_ratio;
            terms.emplace_back(base + lt, ((k + kp) % 2 == 0) ? 1 : -1);
        }
    }
    double mx = -std::numeric_limits<double>::infinity();
    for (const auto& [l, s] : terms) mx = std::max(mx, l);
    if (!std::isfinite(mx)) return 0.0;
    double pos = 0.0, neg = 0.0;
    for (const auto& [l, s] : terms) {
        const double v = std::exp(l - mx);
        (s > 0 ? pos : neg) += v;
    }
    const double diff = pos - neg;
    const double rel_err = (pos + neg) * 1e-16 / std::max(std::abs(diff), 1e-300);
    if (rel_err > 1e-8)
        throw NormalizationError("thermal weight m=" + std::to_string(m) + " n=" +
                                 std::to_string(n) + ": alternating-series cancellation leaves " +
                                 "fewer than 8 reliable digits");
    const double val = diff * std::exp(mx);
    return val < 0.0 ? 0.0 : val;
}

namespace {

DensityMatrix wrap_cavity(const CavityStateSpec& spec, int cavity_dim) {
    HilbertLayout lay(0, cavity_dim);
    if (is_pure(spec) && !is_diagonal(spec)) {
        Vec v = pure_amplitudes(spec, cavity_dim);
        return {lay, v * v.adjoint(), "cavity state"};
    }
    RVec w = diagonal_populations(spec, cavity_dim);
    Mat rho = Mat::Zero(cavity_dim, cavity_dim);
    for (int n = 0; n < cavity_dim; ++n) rho(n, n) = w(n);
    return {lay, std::move(rho), "cavity state"};
}

}  // namespace

DensityMatrix make_cavity(const CavityStateSpec& spec, int cavity_dim) {
    if (cavity_dim < 2) throw std::invalid_argument("make_cavity: cavity_dim must be >= 2");
    return wrap_cavity(spec, cavity_dim);
}

DensityMatrix make_fock(int n, int cavity_dim) { return make_cavity(FockSpec{n}, cavity_dim); }
DensityMatrix make_coherent(double alpha, int cavity_dim) {
    return make_cavity(CoherentSpec{alpha}, cavity_dim);
}
DensityMatrix make_squeezed_coherent(double r, double alpha, int cavity_dim) {
    return make_cavity(SqueezedCoherentSpec{r, alpha}, cavity_dim);
}
DensityMatrix make_phase_randomized(double r, double alpha, int cavity_dim) {
    return make_cavity(PhaseRandomizedSqueezedSpec{r, alpha}, cavity_dim);
}
DensityMatrix make_thermalized_fock(int n, double n_th, int cavity_dim) {
    return make_cavity(ThermalizedFockSpec{n, n_th}, cavity_dim);
}
DensityMatrix make_attenuated_fock(int n, double p, int cavity_dim) {
    return make_cavity(AttenuatedFockSpec{n, p}, cavity_dim);
}

DensityMatrix make_qubit(double q) {
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("make_qubit: q must be in [0,1]");
    HilbertLayout lay(1, 1);
    Mat rho = Mat::Zero(2, 2);
    rho(0, 0) = q;
    rho(1, 1) = 1.0 - q;
    return {lay, std::move(rho), "qubit state"};
}

namespace {

// Shortest decimal form that parses back to the same double.
std::string fmt(double v) {
    char buf[40];
    for (int precision = 1; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof buf, "%.*g", precision, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t");
    size_t b = s.find_last_not_of(" \t");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& s, const std::string& ctx) {
    try {
        size_t used = 0;
        double v = std::stod(trim(s), &used);
        if (used != trim(s).size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw std::invalid_argument("cavity state: cannot parse number '" + s + "' in " + ctx);
    }
}

int parse_int(const std::string& s, const std::string& ctx) {
    const double v = parse_double(s, ctx);
    const int i = static_cast<int>(std::lround(v));
    if (std::abs(v - i) > 0.0)
        throw std::invalid_argument("cavity state: expected integer, got '" + s + "' in " + ctx);
    return i;
}

}  // namespace

std::string to_string(const CavityStateSpec& spec) {
    return std::visit(
        [](const auto& s) -> std::string {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, FockSpec>) {
                return "fock(" + std::to_string(s.n) + ")";
            } else if constexpr (std::is_same_v<T, CoherentSpec>) {
                return "coherent(" + fmt(s.alpha) + ")";
            } else if constexpr (std::is_same_v<T, SqueezedCoherentSpec>) {
                return "squeezed(" + fmt(s.r) + "," + fmt(s.alpha) + ")";
            } else if constexpr (std::is_same_v<T, PhaseRandomizedSqueezedSpec>) {
                return "squeezed-diag(" + fmt(s.r) + "," + fmt(s.alpha) + ")";
            } else if constexpr (std::is_same_v<T, ThermalizedFockSpec>) {
                return "thermal-fock(" + std::to_string(s.n) + "," + fmt(s.n_th) + ")";
            } else {
                return "attenuated-fock(" + std::to_string(s.n) + "," + fmt(s.p) + ")";
            }
        },
        spec);
}

CavityStateSpec parse_cavity_state(const std::string& text) {
    const std::string t = trim(text);
    const size_t open = t.find('(');
    if (open == std::string::npos || t.back() != ')')
        throw std::invalid_argument("cavity state: expected name(args), got '" + text + "'");
    const std::string name = trim(t.substr(0, open));
    const std::string inner = t.substr(open + 1, t.size() - open - 2);
    std::vector<std::string> args;
    size_t start = 0;
    while (true) {
        size_t comma = inner.find(',', start);
        if (comma == std::string::npos) {
            args.push_back(inner.substr(start));
            break;
        }
        args.push_back(inner.substr(start, comma - start));
        start = comma + 1;
    }
    auto need = [&](size_t n) {
        if (args.size() != n)
            throw std::invalid_argument("cavity state: " + name + " takes " + std::to_string(n) +
                                        " argument(s), got " + std::to_string(args.size()));
    };
    CavityStateSpec spec;
    if (name == "fock") {
        need(1);
        spec = FockSpec{parse_int(args[0], name)};
    } else if (name == "coherent") {
        need(1);
        spec = CoherentSpec{parse_double(args[0], name)};
    } else if (name == "squeezed") {
        need(2);
        spec = SqueezedCoherentSpec{parse_double(args[0], name), parse_double(args[1], name)};
    } else if (name == "squeezed-diag") {
        need(2);
        spec = PhaseRandomizedSqueezedSpec{parse_double(args[0], name),
                                           parse_double(args[1], name)};
    } else if (name == "thermal-fock") {
        need(2);
        spec = ThermalizedFockSpec{parse_int(args[0], name), parse_double(args[1], name)};
    } else if (name == "attenuated-fock") {
        need(2);
        spec = AttenuatedFockSpec{parse_int(args[0], name), parse_double(args[1], name)};
    } else {
        throw std::invalid_argument("cavity state: unknown kind '" + name + "'");
    }
    validate_spec(spec);
    return spec;
}

}  // namespace qbatt
