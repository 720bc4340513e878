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

#include "ptdd/commands.h"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include "ptdd/errors.h"

namespace ptdd {

namespace {

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot read config file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void merge_config(ExperimentConfig &cfg, std::string_view text) {
    // Keys present in the file override the preset; a file is still checked
    // for unknown and duplicate keys by parsing it on its own first.
    parse_config(text);
    std::size_t pos = 0;
    int line_no = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        std::string_view line = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
        pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            continue;
        }
        std::string key(line.substr(0, eq));
        key.erase(0, key.find_first_not_of(" \t"));
        key.erase(key.find_last_not_of(" \t\r") + 1);
        apply_setting(cfg, key, line.substr(eq + 1), line_no);
    }
}

std::string format_matrix(const Operator2 &a) {
    auto entry = [](cplx z) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%+.9e%+.9ei", z.real(), z.imag());
        return std::string(buf);
    };
    return "  [" + entry(a.a00) + "  " + entry(a.a01) + "]\n  [" + entry(a.a10) + "  " + entry(a.a11) + "]\n";
}

std::string format_short(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", x);
    return buf;
}

ToggledSchedule one_cycle(SequenceKind kind, const PTParams &p, double tau, double beta, double dgamma) {
    SequenceSpec seq{kind, tau, 1};
    double wall = seq.wall_time();
    auto sched = compile_schedule(seq, p, NoiseTrajectory::constant(beta, wall), NoiseTrajectory::constant(dgamma, wall));
    return toggle_frame(sched);
}

struct MagnusResiduals {
    Operator2 m1;
    Operator2 m2;
    double m1_residual = 0.0;
    double m1_scale = 0.0;
    double m2_norm = 0.0;
    double m2_scale = 0.0;
};

MagnusResiduals magnus_residuals(SequenceKind kind, const PTParams &p, double tau, double beta, double dgamma) {
    auto toggled = one_cycle(kind, p, tau, beta, dgamma);
    MagnusResiduals r;
    r.m1 = magnus1(toggled.schedule);
    r.m2 = magnus2(toggled.schedule);
    Operator2 passive = h_pt_passive(p);
    Operator2 expected = 0.5 * passive - kImag * dgamma * Operator2::identity();
    r.m1_residual = spectral_norm(r.m1 - expected);
    r.m1_scale = spectral_norm(passive);
    double h_scale = spectral_norm(h_total(p, NoiseFields{beta, dgamma, 0.0}));
    r.m2_norm = spectral_norm(r.m2);
    r.m2_scale = h_scale * h_scale * 2.0 * tau;
    return r;
}

void add_check(Report &report, std::string name, bool pass, std::string detail) {
    report.checks.push_back({std::move(name), pass, std::move(detail)});
}

std::string render_checks(const Report &report) {
    std::string text;
    for (const auto &c : report.checks) {
        text += std::string(c.pass ? "PASS " : "FAIL ") + c.name + ": " + c.detail + "\n";
    }
    return text;
}

}  // namespace

bool Report::pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckLine &c) { return c.pass; });
}

ExperimentConfig load_config(const ConfigSources &sources) {
    ExperimentConfig cfg;
    if (!sources.preset.empty()) {
        cfg = preset_config(sources.preset);
    }
    if (!sources.config_path.empty()) {
        std::string text = read_file(sources.config_path);
        if (sources.preset.empty()) {
            cfg = parse_config(text);
        } else {
            merge_config(cfg, text);
        }
    }
    for (const auto &setting : sources.settings) {
        auto eq = setting.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("--set expects key=value, got '" + setting + "'");
        }
        std::string key = setting.substr(0, eq);
        key.erase(0, key.find_first_not_of(" \t"));
        key.erase(key.find_last_not_of(" \t") + 1);
        apply_setting(cfg, key, std::string_view(setting).substr(eq + 1));
    }
    if (sources.seed) {
        cfg.seed = *sources.seed;
    }
    if (sources.trials) {
        if (*sources.trials == 0) {
            throw ConfigError("--trials must be at least 1");
        }
        cfg.trials = *sources.trials;
    }
    if (sources.workers) {
        if (*sources.workers == 0) {
            throw ConfigError("--workers must be at least 1");
        }
        cfg.workers = *sources.workers;
    }
    if (sources.out) {
        cfg.out = *sources.out;
    }
    if (sources.normalization) {
        apply_setting(cfg, "normalization", *sources.normalization);
    }
    if (sources.points) {
        if (*sources.points == 0) {
            throw ConfigError("--points must be at least 1");
        }
        for (auto &axis : cfg.axes) {
            axis.count = *sources.points;
        }
    }
    return cfg;
}

PointConfig base_point(const ExperimentConfig &cfg) {
    PointConfig p = cfg.point();
    if (p.tau_not_divisor == 0 && !(p.tau > 0.0)) {
        for (const auto &axis : cfg.axes) {
            if (axis.axis == SweepAxis::Tau) {
                p.tau = axis.start;
            }
        }
    }
    return p;
}

std::string utc_timestamp() {
    std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

ResultTable cmd_simulate(const ExperimentConfig &cfg, const std::string &timestamp) {
    PointConfig p = base_point(cfg);
    EnsembleOptions options{cfg.normalization, cfg.workers, cfg.batches};
    SweepRow row;
    row.result = run_point(p, cfg.trials, SeedPolicy{cfg.seed}, options, 0);
    return make_result_table(cfg, {row}, "simulate", timestamp);
}

ResultTable cmd_sweep(const ExperimentConfig &cfg, const std::string &timestamp) {
    if (cfg.axes.empty()) {
        throw ConfigError("sweep needs at least one sweep.<axis> = start:stop:count entry");
    }
    auto rows = run_sweep(cfg.sweep());
    return make_result_table(cfg, rows, "sweep", timestamp);
}

Report cmd_magnus(const ExperimentConfig &cfg) {
    PointConfig p = base_point(cfg);
    const double tau = p.resolved_tau();
    const double beta = cfg.detuning.scale;
    const double dgamma = cfg.loss_shift.scale;
    Report report;
    std::ostringstream text;
    text << "J = " << format_real(p.params.coupling()) << ", Gamma = " << format_real(p.params.loss())
         << ", tau = " << format_real(tau) << " s, constant beta = " << format_real(beta)
         << ", dGamma = " << format_real(dgamma) << "\n";
    text << "expected first order (both sequences): H~/2 - i dGamma I\n";

    double m2_s1 = 0.0;
    for (SequenceKind kind : {SequenceKind::CpmgLike, SequenceKind::Cpmg}) {
        auto r = magnus_residuals(kind, p.params, tau, beta, dgamma);
        std::string name(to_string(kind));
        text << name << " magnus1:\n" << format_matrix(r.m1);
        text << name << " magnus2:\n" << format_matrix(r.m2);
        text << name << " |magnus1 - closed form| = " << format_short(r.m1_residual) << ", |magnus2| = "
             << format_short(r.m2_norm) << "\n";
        add_check(report, name + " magnus1", r.m1_residual < 1e-12 * std::max(r.m1_scale, 1.0),
                  "residual " + format_short(r.m1_residual) + " vs tolerance " +
                      format_short(1e-12 * std::max(r.m1_scale, 1.0)));
        if (kind == SequenceKind::Cpmg) {
            add_check(report, "s2 magnus2 == 0", r.m2_norm < 1e-12 * std::max(r.m2_scale, 1e-300),
                      "norm " + format_short(r.m2_norm) + " vs tolerance " + format_short(1e-12 * r.m2_scale));
            text << "second-order norms: s1 " << format_short(m2_s1) << ", s2 " << format_short(r.m2_norm) << "\n";
        } else {
            m2_s1 = r.m2_norm;
        }
    }
    report.text = text.str() + render_checks(report);
    return report;
}

std::string cmd_presets() {
    std::ostringstream out;
    out << "units: " << kUnitConvention << "\n";
    for (const auto &preset : presets()) {
        ExperimentConfig cfg = parse_config(preset.config);
        out << "\n" << preset.name << "  " << preset.summary << "\n";
        if (cfg.tau_not_divisor > 0) {
            double tau = not_gate_time(PTParams(cfg.coupling, cfg.loss)) / cfg.tau_not_divisor;
            out << "    (tau = T_NOT/" << cfg.tau_not_divisor << " = " << format_short(tau * 1e6) << " us)\n";
        }
        std::istringstream lines(preset.config);
        for (std::string line; std::getline(lines, line);) {
            out << "    " << line << "\n";
        }
    }
    return out.str();
}

Report cmd_selftest() {
    Report report;
    auto tau_check = [&](const std::string &preset, double expected_us, double tol_us) {
        ExperimentConfig cfg = preset_config(preset);
        double tau_us = cfg.point().resolved_tau() * 1e6;
        add_check(report, preset + " tau", std::abs(tau_us - expected_us) <= tol_us,
                  format_short(tau_us) + " us, expected " + format_short(expected_us) + " +- " + format_short(tol_us));
    };
    tau_check("fig1a", 73.9, 0.05);
    tau_check("fig2a", 151.2, 0.1);
    tau_check("fig3a", 151.2, 0.1);

    double tp_us = ideal_period(PTParams(1e4, 1e3)) * 1e6;
    add_check(report, "ideal period J=1e4 Gamma=1e3", std::abs(tp_us - 315.8) <= 0.1,
              format_short(tp_us) + " us, expected 315.8 +- 0.1");

    for (const auto &preset : presets()) {
        bool ok = true;
        std::string detail = "parses and validates";
        try {
            parse_config(preset.config).sweep();
        } catch (const Error &e) {
            ok = false;
            detail = e.what();
        }
        add_check(report, "preset " + preset.name, ok, detail);
    }

    {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        bool ok = true;
        double worst = 0.0;
        for (int i = 0; i < 200; ++i) {
            PTParams p(1e4 * std::abs(u(rng)) + 1.0, 1e4 * std::abs(u(rng)));
            double tau = 1e-6 + 50e-6 * std::abs(u(rng));
            double beta = 1e4 * u(rng);
            double dgamma = 1e3 * u(rng);
            auto s1 = magnus_residuals(SequenceKind::CpmgLike, p, tau, beta, dgamma);
            auto s2 = magnus_residuals(SequenceKind::Cpmg, p, tau, beta, dgamma);
            worst = std::max({worst, s1.m1_residual / std::max(s1.m1_scale, 1.0),
                              s2.m2_norm / std::max(s2.m2_scale, 1e-300)});
            ok = ok && s1.m1_residual < 1e-12 * std::max(s1.m1_scale, 1.0) &&
                 s2.m1_residual < 1e-12 * std::max(s2.m1_scale, 1.0) && s2.m2_norm < 1e-12 * s2.m2_scale;
        }
        add_check(report, "average Hamiltonian closed forms", ok, "worst relative residual " + format_short(worst));
    }

    {
        std::mt19937_64 rng(11);
        std::normal_distribution<double> n(0.0, 1.0);
        double worst = 0.0;
        for (int i = 0; i < 500; ++i) {
            Operator2 a{{n(rng), n(rng)}, {n(rng), n(rng)}, {n(rng), n(rng)}, {n(rng), n(rng)}};
            worst = std::max(worst, max_abs_diff(expm_closed(a, 1.0), expm_series(a, 1.0)));
        }
        add_check(report, "expm closed form vs series", worst < 1e-10, "max entry error " + format_short(worst));
    }

    {
        ExperimentConfig cfg = preset_config("fig1a");
        PointConfig p = base_point(cfg);
        auto run = [&](double beta) {
            apply_axis(p, SweepAxis::Detuning, beta);
            return run_point(p, 1, SeedPolicy{0});
        };
        auto quiet = run(0.0);
        double worst = 0.0;
        for (const auto &o : quiet.outcomes) {
            worst = std::max(worst, std::abs(1.0 - o.result->fidelity));
        }
        add_check(report, "fig1a beta=0 fidelities", worst < 1e-9, "max |1 - F| " + format_short(worst));
        auto noisy = run(2000.0 * std::numbers::pi);
        double fu = noisy.outcomes[0].result->fidelity;
        double fp = noisy.outcomes[1].result->fidelity;
        add_check(report, "fig1a beta=2000pi ordering", fp > fu,
                  "s1 " + format_short(fp) + " vs unprotected " + format_short(fu));
    }

    report.text = render_checks(report);
    return report;
}

std::string schedule_dump(const ExperimentConfig &cfg) {
    PointConfig p = base_point(cfg);
    const double tau = p.resolved_tau();
    SeedPolicy policy{cfg.seed};
    std::string out;
    for (SequenceKind kind : cfg.sequences) {
        SequenceSpec seq{kind, tau, p.cycles};
        seq.validate();
        double wall = seq.wall_time();
        auto beta_rng = trial_stream(policy, 0, 0, NoiseField::Detuning);
        auto dgamma_rng = trial_stream(policy, 0, 0, NoiseField::LossShift);
        auto beta = sample_trajectory(p.detuning.resolve(tau), wall, beta_rng);
        auto dgamma = sample_trajectory(p.loss_shift.resolve(tau), wall, dgamma_rng);
        out += "# sequence " + std::string(to_string(kind)) + "\n";
        out += dump_schedule(compile_schedule(seq, p.params, beta, dgamma));
    }
    return out;
}

void write_file_atomic(const std::string &path, const std::string &content) {
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw ConfigError("cannot write output file '" + tmp.string() + "'");
        }
        out << content;
        out.flush();
        if (!out) {
            throw ConfigError("failed writing output file '" + tmp.string() + "'");
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw ConfigError("cannot move output into place at '" + path + "'");
    }
}

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Dynamical decoupling under PT-symmetric qubit Hamiltonians.\nUnits: " +
                     std::string(kUnitConvention),
                 "ptdd"};
    app.set_version_flag("--version", PTDD_VERSION);
    app.require_subcommand(1);

    ConfigSources sources;
    bool dump = false;
    std::uint64_t seed = 0;
    std::size_t trials = 0;
    unsigned workers = 0;
    std::string out_path;
    std::string normalization;
    std::size_t points = 0;

    auto add_config_flags = [&](CLI::App *cmd, bool with_run_flags) {
        cmd->add_option("--config", sources.config_path, "key = value config file");
        cmd->add_option("--preset", sources.preset, "built-in figure preset (see `ptdd presets`)");
        cmd->add_option("--set", sources.settings, "override one config key, key=value (repeatable)");
        cmd->add_option("--seed", seed, "master seed");
        if (with_run_flags) {
            cmd->add_option("--trials", trials, "Monte Carlo trials per point and sequence");
            cmd->add_option("--workers", workers, "worker threads");
            cmd->add_option("--out", out_path, "CSV output path (default: stdout)");
            cmd->add_option("--normalization", normalization, "per-trial or post-average");
        }
    };

    auto *simulate = app.add_subcommand("simulate", "evaluate the base point of a config");
    add_config_flags(simulate, true);
    simulate->add_flag("--dump-schedule", dump, "print the compiled schedules (trial 0 noise) instead of running");
    auto *sweep = app.add_subcommand("sweep", "evaluate every point of the configured sweep grid");
    add_config_flags(sweep, true);
    sweep->add_option("--points", points, "replace the point count of every sweep axis");
    auto *magnus = app.add_subcommand("magnus", "average Hamiltonians of one s1 and one s2 cycle");
    add_config_flags(magnus, false);
    app.add_subcommand("presets", "list the built-in figure presets");
    app.add_subcommand("selftest", "internal consistency checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success &e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError &e) {
        app.exit(e, out, err);
        return kExitConfig;
    }

    auto finalize = [&](CLI::App *cmd) {
        if (cmd->count("--seed")) {
            sources.seed = seed;
        }
        if (cmd->get_option_no_throw("--trials") && cmd->count("--trials")) {
            sources.trials = trials;
        }
        if (cmd->get_option_no_throw("--workers") && cmd->count("--workers")) {
            sources.workers = workers;
        }
        if (cmd->get_option_no_throw("--out") && cmd->count("--out")) {
            sources.out = out_path;
        }
        if (cmd->get_option_no_throw("--normalization") && cmd->count("--normalization")) {
            sources.normalization = normalization;
        }
        if (cmd->get_option_no_throw("--points") && cmd->count("--points")) {
            sources.points = points;
        }
        if (sources.preset.empty() && sources.config_path.empty()) {
            throw ConfigError("give --preset <name> or --config <path>");
        }
        return load_config(sources);
    };

    auto emit = [&](const ExperimentConfig &cfg, const std::string &text) {
        if (cfg.out.empty()) {
            out << text;
        } else {
            write_file_atomic(cfg.out, text);
        }
    };

    try {
        if (app.got_subcommand("presets")) {
            out << cmd_presets();
            return kExitOk;
        }
        if (app.got_subcommand("selftest")) {
            Report report = cmd_selftest();
            out << report.text;
            out << (report.pass() ? "selftest passed\n" : "selftest FAILED\n");
            return report.pass() ? kExitOk : kExitSelftest;
        }
        if (simulate->parsed()) {
            ExperimentConfig cfg = finalize(simulate);
            if (dump) {
                out << schedule_dump(cfg);
                return kExitOk;
            }
            emit(cfg, cmd_simulate(cfg).to_csv());
            return kExitOk;
        }
        if (sweep->parsed()) {
            ExperimentConfig cfg = finalize(sweep);
            emit(cfg, cmd_sweep(cfg).to_csv());
            return kExitOk;
        }
        if (magnus->parsed()) {
            ExperimentConfig cfg = finalize(magnus);
            Report report = cmd_magnus(cfg);
            out << report.text;
            return report.pass() ? kExitOk : kExitSelftest;
        }
    } catch (const ConfigError &e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return kExitDomain;
    }
    return kExitConfig;
}

}  // namespace ptdd
