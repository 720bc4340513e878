// Copyright 2026 The ptdd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Acceptance suite: one PASS/FAIL line per criterion. Exit status is
// non-zero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../oracle.h"
#include "ptdd/commands.h"

using namespace ptdd;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char *f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), f, x);
    return buf;
}
std::string g(double x) {
    return fmt("%.6g", x);
}

std::size_t column(const ResultTable &t, const std::string &name) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        if (t.columns[i] == name) {
            return i;
        }
    }
    throw std::runtime_error("missing column " + name);
}
double cell(const ResultTable &t, std::size_t row, const std::string &name) {
    return std::stod(t.rows[row][column(t, name)]);
}

const double kBeta = 2000.0 * std::numbers::pi;

Outcome not_gate_times() {
    double a = not_gate_time(PTParams(1e4, 1e3)) / 2 * 1e6;
    double b = not_gate_time(PTParams(1e3, 500.0)) / 8 * 1e6;
    return {std::abs(a - 73.9) <= 0.05 && std::abs(b - 151.2) <= 0.1,
            "T_NOT/2 = " + fmt("%.4f", a) + " us (73.9 +- 0.05), T_NOT/8 = " + fmt("%.4f", b) + " us (151.2 +- 0.1)"};
}

Outcome ideal_period_check() {
    PTParams p(1e4, 1e3);
    double tp = ideal_period(p);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
        double T = 2e-3 * k / 19.0;
        for (StateVec2 psi : {StateVec2{1.0, 0.0}, StateVec2{0.0, 1.0}, StateVec2{M_SQRT1_2, M_SQRT1_2}}) {
            worst = std::max(worst, max_abs_diff(ideal_density(p, T, psi).matrix(),
                                                 ideal_density(p, T + tp, psi).matrix()));
        }
    }
    return {std::abs(tp * 1e6 - 315.8) <= 0.1 && worst < 1e-9,
            "T_p = " + fmt("%.4f", tp * 1e6) + " us (315.8 +- 0.1), max deviation " + g(worst) + " (< 1e-9)"};
}

Outcome magnus_closed_forms() {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst1 = 0.0;
    double worst2 = 0.0;
    for (int i = 0; i < 100; ++i) {
        PTParams p(2e4 * u(rng), 2e4 * u(rng));
        double tau = 1e-6 + 2e-4 * u(rng);
        double beta = 2e4 * (u(rng) - 0.5);
        double dg = 5e3 * u(rng);
        auto compile = [&](SequenceKind kind) {
            SequenceSpec seq{kind, tau, 1};
            double wall = seq.wall_time();
            return toggle_frame(compile_schedule(seq, p, NoiseTrajectory::constant(beta, wall),
                                                 NoiseTrajectory::constant(dg, wall)))
                .schedule;
        };
        Operator2 expected = 0.5 * h_pt_passive(p) - kImag * dg * Operator2::identity();
        double r1 = spectral_norm(magnus1(compile(SequenceKind::CpmgLike)) - expected) /
                    spectral_norm(h_pt_passive(p));
        double h = spectral_norm(h_total(p, {beta, dg, 0.0}));
        double r2 = spectral_norm(magnus2(compile(SequenceKind::Cpmg))) / (h * h * 2.0 * tau);
        worst1 = std::max(worst1, r1);
        worst2 = std::max(worst2, r2);
    }
    return {worst1 < 1e-12 && worst2 < 1e-12, "max |H1(s1) - closed form| / |H~| = " + g(worst1) +
                                                  ", max |H2(s2)| / (|H|^2 tau_c) = " + g(worst2) + " (< 1e-12)"};
}

double cycle_error(SequenceKind kind, double tau) {
    PTParams p(1e4, 1e3);
    SequenceSpec seq{kind, tau, 1};
    double wall = seq.wall_time();
    auto toggled = toggle_frame(compile_schedule(seq, p, NoiseTrajectory::constant(kBeta, wall),
                                                 NoiseTrajectory::constant(0.0, wall)));
    Operator2 u = schedule_propagator(toggled.schedule);
    return spectral_norm(u - expm_closed(h_pt_passive(p), tau));
}

double loglog_slope(const std::vector<double> &x, const std::vector<double> &y) {
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= x.size();
    my /= x.size();
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
        sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
    }
    return sxy / sxx;
}

Outcome protection_order() {
    std::vector<double> taus;
    std::vector<double> e1;
    std::vector<double> e2;
    for (double t = 1e-6; t <= 32e-6 * (1 + 1e-9); t *= 2) {
        taus.push_back(t);
        e1.push_back(cycle_error(SequenceKind::CpmgLike, t));
        e2.push_back(cycle_error(SequenceKind::Cpmg, t));
    }
    double s1 = loglog_slope(taus, e1);
    double s2 = loglog_slope(taus, e2);
    return {std::abs(s1 - 2.0) <= 0.15 && std::abs(s2 - 3.0) <= 0.15,
            "slope s1 = " + fmt("%.3f", s1) + " (2 +- 0.15), s2 = " + fmt("%.3f", s2) + " (3 +- 0.15)"};
}

Outcome fig1a() {
    auto cfg = preset_config("fig1a");
    PTParams p(cfg.coupling, cfg.loss);
    double tau = not_gate_time(p) / 2;
    // Engine values at the figure point.
    apply_setting(cfg, "sequences", "unprotected,s1,s2");
    auto point = cmd_simulate(cfg, "acceptance");
    double fu = cell(point, 0, "F_unprotected");
    double fp = cell(point, 0, "F_s1");
    double f2 = cell(point, 0, "F_s2");
    // Fine-step oracle (10 ns RK4) for the same point.
    oracle::Field beta{0.0, INFINITY, {kBeta}};
    oracle::Field zero{};
    auto ideal = oracle::ideal(1e4, 1e3, 2 * tau, {0.0, 1.0}, 1e-8);
    auto run = [&](SequenceKind k) {
        auto psi = oracle::evolve_sequence(k, 1e4, 1e3, tau, 2, beta, zero, {0.0, 1.0}, 1e-8);
        return oracle::fidelity(ideal, oracle::density(psi));
    };
    double ou = run(SequenceKind::Unprotected);
    double op = run(SequenceKind::CpmgLike);
    bool oracle_agrees = std::abs(ou - fu) < 1e-8 && std::abs(op - fp) < 1e-8;

    auto sweep = cmd_sweep(preset_config("fig1a"), "acceptance");
    bool ordered = true;
    double worst_gap = INFINITY;
    for (std::size_t i = 0; i < sweep.rows.size(); ++i) {
        double gap = cell(sweep, i, "F_s1") - cell(sweep, i, "F_unprotected");
        worst_gap = std::min(worst_gap, gap);
        ordered = ordered && gap >= 0.0;
    }
    bool pass = fp > 0.999 && fu < 0.9 && ordered && oracle_agrees;
    return {pass, "protected (s1) F = " + fmt("%.6f", fp) + " (need > 0.999; s2 gives " + fmt("%.6f", f2) +
                      "), unprotected F = " + fmt("%.6f", fu) + " (need < 0.9); 10 ns RK4 oracle: s1 " +
                      fmt("%.6f", op) + ", unprotected " + fmt("%.6f", ou) +
                      (oracle_agrees ? " (agrees)" : " (DISAGREES)") + "; min(F_s1 - F_u) over " +
                      std::to_string(sweep.rows.size()) + " beta in [0, 4000pi] = " + g(worst_gap)};
}

Outcome paired_ensemble(const std::string &preset, double check_axis_value, double check_min) {
    auto t = cmd_sweep(preset_config(preset), "acceptance");
    std::string axis = t.columns[1];
    bool ordered = true;
    double worst = INFINITY;
    double at_check = NAN;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        double fu = cell(t, i, "F_unprotected");
        double fp = cell(t, i, "F_s1");
        double su = cell(t, i, "spread_unprotected");
        double sp = cell(t, i, "spread_s1");
        double margin = fp - (fu - 3.0 * std::hypot(su, sp));
        worst = std::min(worst, margin);
        ordered = ordered && margin >= 0.0;
        if (std::abs(cell(t, i, axis) - check_axis_value) < 1e-9 * std::max(1.0, check_axis_value)) {
            at_check = fp;
        }
    }
    std::string detail = std::to_string(t.rows.size()) + " points x " + t.rows[0][column(t, "trials_s1")] +
                         " trials; min(F_p - F_u + 3 std) = " + g(worst);
    bool pass = ordered;
    if (!std::isnan(check_min)) {
        pass = pass && at_check > check_min;
        detail += "; F_s1 at " + axis + "=" + g(check_axis_value) + " is " + fmt("%.6f", at_check) + " (> " +
                  g(check_min) + ")";
    }
    return {pass, detail};
}

Outcome fig4a_order() {
    auto t = cmd_sweep(preset_config("fig4a"), "acceptance");
    int bad_21 = 0;
    int bad_1u = 0;
    std::string where;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        double fu = cell(t, i, "F_unprotected");
        double f1 = cell(t, i, "F_s1");
        double f2 = cell(t, i, "F_s2");
        if (f2 < f1) {
            ++bad_21;
        }
        if (f1 < fu) {
            ++bad_1u;
            where += " " + fmt("%.1f", cell(t, i, "tau_s") * 1e6) + "us(" + fmt("%.4f", f1) + "<" + fmt("%.4f", fu) +
                     ")";
        }
    }
    return {bad_21 == 0 && bad_1u == 0, std::to_string(t.rows.size()) + " tau points; s2 < s1 at " +
                                            std::to_string(bad_21) + ", s1 < unprotected at " +
                                            std::to_string(bad_1u) + (where.empty() ? "" : ":" + where)};
}

Outcome expm_oracle() {
    std::mt19937_64 rng(99);
    std::normal_distribution<double> n(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    int n_ep = 0;
    int n_near = 0;
    for (int i = 0; i < 10000; ++i) {
        Operator2 a;
        double t = 1.0;
        switch (i % 4) {
            case 0: {  // generic complex
                double s = 0.1 + 2.0 * u(rng);
                a = Operator2{{n(rng), n(rng)}, {n(rng), n(rng)}, {n(rng), n(rng)}, {n(rng), n(rng)}} * s;
                break;
            }
            case 1: {  // exceptional point of the passive Hamiltonian, physical scale
                double J = 1e4 * u(rng) + 1.0;
                a = h_pt_passive(PTParams(J, J));
                t = 3.0 / J * u(rng);
                ++n_ep;
                break;
            }
            case 2: {  // generic nilpotent c.sigma plus identity
                cplx x{n(rng), n(rng)};
                cplx y{n(rng), n(rng)};
                cplx z = kImag * std::sqrt(x * x + y * y);
                a = pauli_recompose({cplx(n(rng), n(rng)) * 0.3, x, y, z});
                ++n_ep;
                break;
            }
            default: {  // near the exceptional point
                double J = 1e4 * u(rng) + 1.0;
                double eps = std::pow(10.0, -12.0 + 8.0 * u(rng)) * (u(rng) < 0.5 ? -1.0 : 1.0);
                a = h_pt_passive(PTParams(J, J * (1.0 + eps)));
                t = 3.0 / J * u(rng);
                ++n_near;
                break;
            }
        }
        worst = std::max(worst, max_abs_diff(expm_closed(a, t), expm_series(a, t)));
    }
    return {worst < 1e-10, "10000 matrices (" + std::to_string(n_ep) + " nilpotent/EP, " + std::to_string(n_near) +
                               " near-EP); max entry error " + g(worst) + " (< 1e-10)"};
}

std::vector<std::string> data_rows(const std::string &path) {
    std::ifstream in(path);
    std::vector<std::string> rows;
    for (std::string line; std::getline(in, line);) {
        if (!line.empty() && line[0] != '#') {
            rows.push_back(line);
        }
    }
    return rows;
}

Outcome determinism() {
#ifdef PTDD_CLI_PATH
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "ptdd_acceptance";
    fs::create_directories(dir);
    std::vector<std::vector<std::string>> outputs;
    for (int workers : {1, 8}) {
        fs::path out = dir / ("fig2a_w" + std::to_string(workers) + ".csv");
        std::string cmd = std::string("\"") + PTDD_CLI_PATH + "\" sweep --preset fig2a --seed 42 --workers " +
                          std::to_string(workers) + " --out \"" + out.string() + "\"";
        int rc = std::system(cmd.c_str());
        if (rc != 0) {
            return {false, "command failed: " + cmd};
        }
        outputs.push_back(data_rows(out.string()));
    }
    bool same = outputs[0] == outputs[1] && outputs[0].size() == 12;
    return {same, "fig2a --seed 42: " + std::to_string(outputs[0].size()) + " vs " +
                      std::to_string(outputs[1].size()) + " CSV lines, " +
                      (same ? "byte-identical" : "DIFFERENT") + " at --workers 1 and 8"};
#else
    return {false, "CLI binary not built"};
#endif
}

Outcome broken_phase() {
    PTParams p(1e3, 1.2e3);
    double worst = 1.0;
    for (StateVec2 psi : {StateVec2{1.0, 0.0}, StateVec2{0.0, 1.0}, StateVec2{M_SQRT1_2, M_SQRT1_2}}) {
        for (int k = 0; k <= 90; ++k) {
            double t = 5e-3 + 5e-4 * k;
            worst = std::min(worst, fidelity(ideal_density(p, t, psi), ideal_density(p, t + 1e-4, psi)));
        }
    }
    return {worst > 0.9999, "min F(rho(t), rho(t + 100 us)) over t in [5, 50] ms = " + fmt("%.10f", worst) +
                                " (> 0.9999)"};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char *name;
        double budget_s;
        std::function<Outcome()> run;
    };
    std::vector<Criterion> criteria{
        {1, "NOT-gate time", 1.0, not_gate_times},
        {2, "ideal-evolution period", 1.0, ideal_period_check},
        {3, "average-Hamiltonian closed forms", 1.0, magnus_closed_forms},
        {4, "protection-order scaling", 5.0, protection_order},
        {5, "fig1a constant detuning", 10.0, fig1a},
        {6, "fig2a Gaussian detuning ensemble", 120.0,
         [] { return paired_ensemble("fig2a", 1200.0, 0.99); }},
        {7, "fig3a dissipative-noise ensemble", 120.0, [] { return paired_ensemble("fig3a", 0.0, NAN); }},
        {8, "fig4a s2 >= s1 >= unprotected", 10.0, fig4a_order},
        {9, "closed-form vs series exponential", 5.0, expm_oracle},
        {10, "CLI determinism across worker counts", 240.0, determinism},
        {11, "broken-phase steady state", 1.0, broken_phase},
    };
    int failed = 0;
    for (const auto &c : criteria) {
        auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        bool in_time = secs <= c.budget_s;
        bool pass = o.pass && in_time;
        failed += !pass;
        std::printf("%s criterion %d (%s): %s [%.2f s of %.0f s]%s\n", pass ? "PASS" : "FAIL", c.id, c.name,
                    o.detail.c_str(), secs, c.budget_s, in_time ? "" : " OVER TIME BUDGET");
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
