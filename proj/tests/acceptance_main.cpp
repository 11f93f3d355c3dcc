// Release gate: runs every acceptance criterion and prints one PASS/FAIL
// line per criterion. Exits nonzero if any criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "qbatt/cavity_states.hpp"
#include "qbatt/config.hpp"
#include "qbatt/counting_stats.hpp"
#include "qbatt/dynamics.hpp"
#include "qbatt/fock_space.hpp"
#include "qbatt/parallel.hpp"
#include "qbatt/protocols.hpp"
#include "qbatt/sweeps.hpp"
#include "qbatt/two_qubit_oracle.hpp"

using namespace qbatt;

namespace {

const double kPi = std::acos(-1.0);

struct Gate {
    std::vector<std::string> problems;
    void check(bool ok, const std::string& what) {
        if (!ok) problems.push_back(what);
    }
};

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// All qubits in the ground state, cavity in |n>.
DensityMatrix ground_stack(const HilbertLayout& lay, int n) {
    Mat rho = Mat::Zero(lay.dim(), lay.dim());
    unsigned bits = static_cast<unsigned>(lay.qubit_states() - 1);
    rho(lay.index(bits, n), lay.index(bits, n)) = 1.0;
    return DensityMatrix(lay, rho);
}

// Generating function of the two-qubit collective protocol sampled through
// the full tilted pipeline, for every counting-field value the moment
// stencils will request.
std::map<long long, std::vector<cx>> tilted_gf_table(int n, int cavity_dim,
                                                     const std::vector<double>& times,
                                                     double h_chi, TiltSpec::Generator generator) {
    ModelParams params;
    params.g = 1.0;  // time axis coincides with the g*tau axis
    HilbertLayout lay(2, cavity_dim);
    FockOperator h_tc = tc_hamiltonian(params, lay);
    FockOperator h_int = interaction_hamiltonian(params, lay);
    Mat h_free = h_tc.entries - h_int.entries;
    DensityMatrix rho0 = ground_stack(lay, n);

    const std::array<double, 7> chis = {0.0,          0.5 * h_chi, -0.5 * h_chi, h_chi,
                                        -h_chi,       2.0 * h_chi, -2.0 * h_chi};
    std::map<long long, std::vector<cx>> table;
    for (double chi : chis) {
        TiltSpec tilt;
        tilt.generator = generator;
        tilt.chi = chi;
        auto [wp, wm] = tilt_interaction(h_int, lay, tilt, params.omega_qub);
        FockOperator hp{lay, h_free + wp.entries, ""};
        FockOperator hm{lay, h_free + wm.entries, ""};
        auto states = propagate_tilted(rho0, hp, hm, times);
        std::vector<cx> g(times.size());
        for (size_t i = 0; i < times.size(); ++i) g[i] = generating_function(states[i]);
        table[std::llround(chi / (0.5 * h_chi))] = std::move(g);
    }
    return table;
}

MomentEstimate moments_at(const std::map<long long, std::vector<cx>>& table, size_t i,
                          double h_chi) {
    auto gf = [&](double chi) { return table.at(std::llround(chi / (0.5 * h_chi))).at(i); };
    return moments_fd(gf, h_chi);
}

// Criterion 1: the numeric counting pipeline reproduces the independent
// closed-form ratio for the two-qubit collective exchange.
void oracle_equivalence(Gate& gate, int) {
    // Step sized so finite-difference roundoff stays ~1e-7 on the ratio;
    // the counted variable is bounded, so the stencil bias stays ~1e-10.
    const double h_chi = 3e-2;
    std::vector<double> times(300);
    for (size_t i = 0; i < times.size(); ++i) times[i] = 3.0 * double(i) / 299.0;

    double worst = 0.0;
    double worst_trace = 0.0;
    for (int n : {1, 2, 3, 5}) {
        const int d = std::min(12, n + 3);
        auto table = tilted_gf_table(n, d, times, h_chi, TiltSpec::Generator::SingleQubit);
        for (const cx& g0 : table.at(0)) worst_trace = std::max(worst_trace, std::abs(g0 - 1.0));
        for (size_t i = 0; i < times.size(); ++i) {
            MomentEstimate est = moments_at(table, i, h_chi);
            double reference = oracle::oracle_snr(n, times[i]);
            bool div_num = snr_is_divergent(est.stats.snr);
            bool div_ref = snr_is_divergent(reference);
            if (div_num != div_ref) {
                gate.check(false, "sentinel mismatch at n=" + std::to_string(n) +
                                      ", g_tau=" + num(times[i]));
            } else if (!div_num) {
                worst = std::max(worst, std::abs(est.stats.snr - reference));
            }
        }
    }
    gate.check(worst <= 1e-6, "max |ratio - closed form| = " + num(worst) + " > 1e-6");
    gate.check(worst_trace <= 1e-10,
               "chi=0 trace deviated by " + num(worst_trace) + " > 1e-10");
}

// Criterion 2: five ideal windows each reach a clean swap, leave nothing in
// the cavity, and their chosen times scale as 1/sqrt(remaining photons).
void perfect_sequential_charge(Gate& gate, int threads) {
    ProtocolSpec spec;
    spec.num_qubits = 5;
    spec.cavity = FockSpec{5};
    // 2001 grid steps put the quarter-period swap times exactly on the grid.
    spec.tau_grid.points = 2002;
    ChargeReport report = run_sequential(spec, threads);

    gate.check(report.windows.size() == 5, "expected five charging windows");
    for (const auto& w : report.windows) {
        const int j = w.window_index;
        double fid = w.fidelity[w.best_index];
        double var = w.stats[w.best_index].variance;
        gate.check(fid >= 1.0 - 1e-6,
                   "window " + std::to_string(j) + ": fidelity " + num(fid) + " < 1 - 1e-6");
        gate.check(var <= 1e-10,
                   "window " + std::to_string(j) + ": variance " + num(var) + " > 1e-10");

        double expected = kPi / (2.0 * std::sqrt(6.0 - j));
        double step = w.g_tau[1] - w.g_tau[0];
        gate.check(std::abs(w.g_tau_star - expected) <= step,
                   "window " + std::to_string(j) + ": chosen time " + num(w.g_tau_star) +
                       " not within one grid step of " + num(expected));
    }

    const DensityMatrix& cavity = report.cavity_after.back();
    double leftover = expectation(cavity, number_operator(cavity.layout.cavity_dim)).real();
    gate.check(leftover <= 1e-6, "final cavity occupation " + num(leftover) + " > 1e-6");
}

// Criterion 3: the collective mean doubles the single-qubit mean, while the
// collective variance is not a fixed multiple of the single-qubit one.
void mean_doubling(Gate& gate, int) {
    double worst = 0.0;
    for (int i = 0; i <= 300; ++i) {
        double g_tau = 3.0 * i / 300.0;
        EnergyStats one = tc2_single_qubit_stats(3, g_tau);
        EnergyStats both = tc2_two_qubit_stats(3, g_tau);
        worst = std::max(worst, std::abs(both.mean - 2.0 * one.mean));
    }
    gate.check(worst <= 1e-12, "closed form: |collective - 2 x single| = " + num(worst));

    // The same doubling through the full tilted pipeline.
    const double h_chi = 1e-2;
    std::vector<double> times;
    for (int i = 1; i <= 10; ++i) times.push_back(3.0 * i / 10.0);
    auto single = tilted_gf_table(3, 6, times, h_chi, TiltSpec::Generator::SingleQubit);
    auto all = tilted_gf_table(3, 6, times, h_chi, TiltSpec::Generator::AllQubits);
    double worst_pipeline = 0.0;
    for (size_t i = 0; i < times.size(); ++i) {
        double m1 = moments_at(single, i, h_chi).stats.mean;
        double m2 = moments_at(all, i, h_chi).stats.mean;
        worst_pipeline = std::max(worst_pipeline, std::abs(m2 - 2.0 * m1));
    }
    gate.check(worst_pipeline <= 1e-9,
               "pipeline: |collective - 2 x single| = " + num(worst_pipeline));

    EnergyStats one = tc2_single_qubit_stats(2, 1.0);
    EnergyStats both = tc2_two_qubit_stats(2, 1.0);
    gate.check(std::abs(both.variance - 2.0 * one.variance) > 1e-3,
               "collective variance indistinguishable from 2 x single at n=2");
    gate.check(std::abs(both.variance - 4.0 * one.variance) > 1e-3,
               "collective variance indistinguishable from 4 x single at n=2");
}

const SweepRow* find_row(const SweepTable& table, double axis_value, double budget) {
    for (const SweepRow& row : table.rows)
        if (std::abs(row.axis_value - axis_value) < 1e-12 &&
            std::abs(row.mean_photons - budget) < 1e-12)
            return &row;
    return nullptr;
}

// Criterion 4: the thermal-noise advantage surface stays positive, with the
// expected magnitudes at low occupation.
void thermal_advantage(Gate& gate, int threads) {
    RunConfig base = default_config(Scenario::NoiseSweep);
    SweepAxis axis{SweepParameter::ThermalOccupation, {0.02, 0.1, 0.2}};
    SweepTable table = sweep_D(axis, base.spec, base.spec, default_gaussian_search(),
                               {1, 2, 3, 4, 5}, threads);

    gate.check(table.rows.size() == 15, "expected 15 sweep rows");
    for (const SweepRow& row : table.rows)
        gate.check(row.advantage > 0.0, "D <= 0 at n_th=" + num(row.axis_value) +
                                            ", photons=" + num(row.mean_photons) +
                                            " (D=" + num(row.advantage) + ")");

    const SweepRow* low1 = find_row(table, 0.02, 1.0);
    const SweepRow* low5 = find_row(table, 0.02, 5.0);
    gate.check(low1 != nullptr && low1->advantage >= 25.0 && low1->advantage <= 100.0,
               "D(n_th=0.02, photons=1) = " + num(low1 ? low1->advantage : -1.0) +
                   " outside [25, 100]");
    gate.check(low5 != nullptr && low5->advantage >= 75.0 && low5->advantage <= 300.0,
               "D(n_th=0.02, photons=5) = " + num(low5 ? low5->advantage : -1.0) +
                   " outside [75, 300]");
}

// Criterion 5: the attenuation advantage point.
void attenuation_advantage(Gate& gate, int threads) {
    RunConfig base = default_config(Scenario::NoiseSweep);
    SweepAxis axis{SweepParameter::AttenuationP, {0.95}};
    SweepTable table =
        sweep_D(axis, base.spec, base.spec, default_gaussian_search(), {2}, threads);
    const SweepRow* row = find_row(table, 0.95, 2.0);
    gate.check(row != nullptr && row->advantage >= 12.0 && row->advantage <= 50.0,
               "D(p=0.95, photons=2) = " + num(row ? row->advantage : -1.0) +
                   " outside [12, 50]");
}

// Criterion 6: the detuning advantage point, and the advantage shrinking as
// the qubits start partially excited.
void detuning_advantage(Gate& gate, int threads) {
    RunConfig base = default_config(Scenario::NoiseSweep);
    SweepAxis axis{SweepParameter::DetuningRatio, {1e-3}};
    SweepTable table =
        sweep_D(axis, base.spec, base.spec, default_gaussian_search(), {4}, threads);
    const SweepRow* row = find_row(table, 1e-3, 4.0);
    gate.check(row != nullptr && row->advantage >= 450.0 && row->advantage <= 1800.0,
               "D(detuning=1e-3, photons=4) = " + num(row ? row->advantage : -1.0) +
                   " outside [450, 1800]");

    RunConfig detuned = default_config(Scenario::NoiseSweep);
    detuned.spec.params.omega_cav = 1.0 - 1e-3;
    SweepAxis q_axis{SweepParameter::QubitQ, {0.0, 1e-3, 1e-2}};
    SweepTable q_table = sweep_D(q_axis, detuned.spec, detuned.spec, default_gaussian_search(),
                                 {1}, threads);
    gate.check(q_table.rows.size() == 3, "expected three qubit-population rows");
    for (size_t i = 1; i < q_table.rows.size(); ++i)
        gate.check(q_table.rows[i].advantage < q_table.rows[i - 1].advantage,
                   "D not decreasing from q=" + num(q_table.rows[i - 1].axis_value) + " to q=" +
                       num(q_table.rows[i].axis_value));
}

double peak_fidelity(const ChargeReport& report) {
    const auto& f = report.windows.front().fidelity;
    return *std::max_element(f.begin(), f.end());
}

// Criterion 7: in the parallel protocol the number-state advantage in peak
// fidelity narrows as the stack grows, and perfect charging is lost.
void parallel_saturation(Gate& gate, int threads) {
    double previous_gap = 2.0;
    for (int m : {2, 3, 4, 5}) {
        ProtocolSpec fock;
        fock.kind = ProtocolKind::Parallel;
        fock.num_qubits = m;
        fock.cavity = FockSpec{m};
        ChargeReport rf = run_parallel(fock, threads);
        double fock_max = peak_fidelity(rf);

        auto alpha = gaussian_alpha_for(0.6, double(m));
        gate.check(alpha.has_value(), "no squeezed comparator at photons=" + std::to_string(m));
        if (!alpha) return;
        ProtocolSpec squeezed = fock;
        squeezed.cavity = SqueezedCoherentSpec{0.6, *alpha};
        ChargeReport rs = run_parallel(squeezed, threads);
        double squeezed_max = peak_fidelity(rs);

        double gap = fock_max - squeezed_max;
        gate.check(gap > 0.0, "gap <= 0 at M=" + std::to_string(m) + " (" + num(gap) + ")");
        gate.check(gap <= previous_gap + 1e-12,
                   "gap grew from " + num(previous_gap) + " to " + num(gap) + " at M=" +
                       std::to_string(m));
        previous_gap = gap;

        if (m == 5)
            gate.check(fock_max < 1.0 - 1e-6,
                       "number-state peak fidelity " + num(fock_max) + " not below 1 at M=5");
    }
}

// Criterion 8: under realistic imperfections the sequential protocol charges
// faster (in ratio per unit time) than the ideal parallel protocol.
void charging_speed(Gate& gate, int threads) {
    for (int m : {2, 3, 4}) {
        ProtocolSpec seq;
        seq.num_qubits = m;
        seq.cavity = ThermalizedFockSpec{m, 1e-2};
        seq.qubit.q = 1e-3;
        seq.params.omega_cav = 1.0 - 1e-3;
        double s = snr_per_time(run_sequential(seq, threads));

        ProtocolSpec par;
        par.kind = ProtocolKind::Parallel;
        par.num_qubits = m;
        par.cavity = FockSpec{m};
        double p = snr_per_time(run_parallel(par, threads));

        gate.check(s > p, "M=" + std::to_string(m) + ": sequential " + num(s) +
                              " not above parallel " + num(p));
    }
}

// Criterion 9: structural properties that must hold everywhere.
void property_suite(Gate& gate, int threads) {
    // Trace preservation at zero counting field, exact and adaptive paths.
    {
        ModelParams params;
        HilbertLayout lay(2, 8);
        FockOperator h_tc = tc_hamiltonian(params, lay);
        FockOperator h_int = interaction_hamiltonian(params, lay);
        DensityMatrix rho0 = ground_stack(lay, 5);
        std::vector<double> times;
        for (int i = 1; i <= 40; ++i) times.push_back(300.0 * i / 40.0);
        auto states = propagate_tilted(rho0, h_tc, h_tc, times);
        double worst = 0.0;
        for (const auto& s : states)
            worst = std::max(worst, std::abs(generating_function(s) - 1.0));
        gate.check(worst <= 1e-10, "exact propagation trace deviated by " + num(worst));

        Mat h_free = h_tc.entries - h_int.entries;
        ModelParams unit = params;
        unit.g = 1.0;
        FockOperator w = interaction_hamiltonian(unit, lay);
        TimeDependentGenerator gen{FockOperator{lay, h_free, ""}, w, w, params.g,
                                   ConstantCoupling{}};
        auto adaptive = propagate_tilted(rho0, gen, times, 1e-10);
        worst = 0.0;
        for (const auto& s : adaptive)
            worst = std::max(worst, std::abs(generating_function(s) - 1.0));
        gate.check(worst <= 1e-10, "adaptive propagation trace deviated by " + num(worst));
    }

    // Every cavity preparation builds a valid density matrix.
    try {
        for (const CavityStateSpec& spec :
             {CavityStateSpec{FockSpec{5}}, CavityStateSpec{CoherentSpec{2.0}},
              CavityStateSpec{SqueezedCoherentSpec{0.6, 3.905745637}},
              CavityStateSpec{PhaseRandomizedSqueezedSpec{0.6, 3.905745637}},
              CavityStateSpec{ThermalizedFockSpec{5, 0.1}},
              CavityStateSpec{AttenuatedFockSpec{5, 0.95}}}) {
            make_cavity(spec, recommended_cavity_dim(spec, 1));
        }
    } catch (const std::exception& e) {
        gate.check(false, std::string("state construction violated an invariant: ") + e.what());
    }

    // Interior unitarity of the closed-form two-qubit evolution.
    {
        const int d = 8;
        ModelParams params;
        FockOperator u = tc2_evolution(137.0, params, d);
        HilbertLayout lay = u.layout;
        Mat defect = u.entries.adjoint() * u.entries - Mat::Identity(lay.dim(), lay.dim());
        double worst = 0.0;
        for (int i = 0; i < lay.dim(); ++i)
            for (int j = 0; j < lay.dim(); ++j)
                if (lay.cavity_of(i) <= d - 3 && lay.cavity_of(j) <= d - 3)
                    worst = std::max(worst, std::abs(defect(i, j)));
        gate.check(worst <= 1e-10, "interior unitarity defect " + num(worst));
    }

    // Thermalized number-state normalization and geometric reduction.
    {
        double total = 0.0;
        for (int m = 0; m < kMaxCavityDim; ++m) total += thermal_fock_weight(m, 5, 0.1);
        gate.check(std::abs(total - 1.0) <= 1e-8,
                   "thermal weights sum to " + num(total) + " at n=5");
        double worst = 0.0;
        const double n_th = 0.3;
        for (int m = 0; m <= 30; ++m) {
            double geometric = std::pow(n_th / (1.0 + n_th), m) / (1.0 + n_th);
            worst = std::max(worst, std::abs(thermal_fock_weight(m, 0, n_th) - geometric));
        }
        gate.check(worst <= 1e-8, "n=0 thermal state deviates from geometric by " + num(worst));
    }

    // Dephased squeezed populations equal the squared pure amplitudes.
    for (auto [r, alpha] : {std::pair<double, double>{0.6, 3.905745637},
                            std::pair<double, double>{0.3, 1.2}}) {
        CavityStateSpec mixed = PhaseRandomizedSqueezedSpec{r, alpha};
        CavityStateSpec pure = SqueezedCoherentSpec{r, alpha};
        int d = recommended_cavity_dim(mixed, 1);
        RVec pops = diagonal_populations(mixed, d);
        Vec amps = pure_amplitudes(pure, d);
        double worst = 0.0;
        for (int n = 0; n < d; ++n)
            worst = std::max(worst, std::abs(pops(n) - std::norm(amps(n))));
        gate.check(worst <= 1e-10, "dephased populations deviate by " + num(worst) +
                                       " at r=" + num(r));
    }

    // Counter-rotating corrections shrink as the coupling weakens.
    {
        ProtocolSpec spec;
        spec.num_qubits = 1;
        spec.cavity = FockSpec{5};
        RwaTable table = sweep_rwa_comparison(spec, {1e-3, 1e-2}, 0.6, threads);
        gate.check(table.rows.size() == 2, "expected two coupling rows");
        if (table.rows.size() == 2) {
            double weak = table.rows[0].mean_deviation;
            double strong = table.rows[1].mean_deviation;
            gate.check(weak > 0.0 && strong > 0.0, "deviations not positive");
            gate.check(weak < strong, "deviation " + num(weak) + " at g/w=1e-3 not below " +
                                          num(strong) + " at g/w=1e-2");
        }
    }
}

}  // namespace

int main() {
    const int threads = resolve_threads(0);

    struct Entry {
        int id;
        const char* title;
        void (*fn)(Gate&, int);
    };
    const Entry entries[] = {
        {1, "counting pipeline matches the independent closed form", oracle_equivalence},
        {2, "ideal five-photon sequential charge is exact", perfect_sequential_charge},
        {3, "collective mean doubles; variance is not proportional", mean_doubling},
        {4, "thermal-noise advantage surface is positive", thermal_advantage},
        {5, "attenuation advantage point", attenuation_advantage},
        {6, "detuning advantage point and population monotonicity", detuning_advantage},
        {7, "parallel number-state advantage narrows with size", parallel_saturation},
        {8, "sequential beats ideal parallel speed under imperfections", charging_speed},
        {9, "structural property suite", property_suite},
    };

    int failures = 0;
    for (const Entry& entry : entries) {
        Gate gate;
        auto start = std::chrono::steady_clock::now();
        try {
            entry.fn(gate, threads);
        } catch (const std::exception& e) {
            gate.check(false, std::string("unexpected exception: ") + e.what());
        }
        double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (gate.problems.empty()) {
            std::printf("criterion %d: PASS (%.1f s) %s\n", entry.id, seconds, entry.title);
        } else {
            std::printf("criterion %d: FAIL (%.1f s) %s\n", entry.id, seconds, entry.title);
            for (const auto& p : gate.problems) std::printf("  - %s\n", p.c_str());
            ++failures;
        }
    }

    if (failures == 0) {
        std::printf("all criteria passed\n");
        return 0;
    }
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
}
