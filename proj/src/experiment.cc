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

#include "ptdd/experiment.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "ptdd/errors.h"

namespace ptdd {

namespace {

std::string_view trim(std::string_view s) {
    auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
    while (!s.empty() && is_space(s.front())) {
        s.remove_prefix(1);
    }
    while (!s.empty() && is_space(s.back())) {
        s.remove_suffix(1);
    }
    return s;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view expected, int line) {
    throw ConfigError("key '" + std::string(key) + "': cannot use '" + std::string(value) + "' (expected " +
                          std::string(expected) + ")",
                      line);
}

/// A real number, optionally followed by "*pi" or "pi", or "inf".
double parse_real(std::string_view key, std::string_view text, int line) {
    std::string_view s = trim(text);
    if (s == "inf") {
        return std::numeric_limits<double>::infinity();
    }
    double factor = 1.0;
    if (s.ends_with("pi")) {
        s.remove_suffix(2);
        s = trim(s);
        if (s.ends_with("*")) {
            s.remove_suffix(1);
            s = trim(s);
        }
        factor = std::numbers::pi;
        if (s.empty()) {
            return factor;
        }
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value)) {
        bad_value(key, text, "a real number", line);
    }
    return value * factor;
}

template <class Int>
Int parse_int(std::string_view key, std::string_view text, int line, Int min_value) {
    std::string_view s = trim(text);
    Int value{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size() || value < min_value) {
        bad_value(key, text, "an integer >= " + std::to_string(min_value), line);
    }
    return value;
}

NoiseSpec::Kind parse_noise_kind(std::string_view key, std::string_view text, int line) {
    for (auto kind : {NoiseSpec::Kind::Zero, NoiseSpec::Kind::Constant, NoiseSpec::Kind::Gaussian,
                      NoiseSpec::Kind::Uniform}) {
        if (trim(text) == to_string(kind)) {
            return kind;
        }
    }
    bad_value(key, text, "zero, constant, gaussian or uniform", line);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t pos = 0;
    while (true) {
        std::size_t next = s.find(sep, pos);
        parts.push_back(trim(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos)));
        if (next == std::string_view::npos) {
            break;
        }
        pos = next + 1;
    }
    return parts;
}

std::string format_period(double period_in_tau) {
    return std::isinf(period_in_tau) ? "inf" : format_real(period_in_tau);
}

}  // namespace

std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x + 0.0);
    return buf;
}

StateVec2 parse_initial_state(std::string_view name) {
    const double r = 1.0 / std::numbers::sqrt2;
    if (name == "0") {
        return {1.0, 0.0};
    }
    if (name == "1") {
        return {0.0, 1.0};
    }
    if (name == "plus") {
        return {r, r};
    }
    if (name == "minus") {
        return {r, -r};
    }
    throw ConfigError("unknown initial_state '" + std::string(name) + "' (expected 0, 1, plus or minus)");
}

void apply_setting(ExperimentConfig &cfg, std::string_view key, std::string_view value, int line) {
    value = trim(value);
    if (key == "J") {
        cfg.coupling = parse_real(key, value, line);
    } else if (key == "Gamma") {
        cfg.loss = parse_real(key, value, line);
    } else if (key == "m") {
        cfg.cycles = parse_int<int>(key, value, line, 1);
    } else if (key == "tau") {
        if (value.starts_with("T_NOT/")) {
            cfg.tau_not_divisor = parse_int<int>(key, value.substr(6), line, 1);
            cfg.tau = 0.0;
        } else {
            cfg.tau = parse_real(key, value, line);
            cfg.tau_not_divisor = 0;
            if (!(cfg.tau > 0.0) || std::isinf(cfg.tau)) {
                bad_value(key, value, "a positive time in seconds or T_NOT/<n>", line);
            }
        }
    } else if (key == "initial_state") {
        try {
            parse_initial_state(value);
        } catch (const ConfigError &) {
            bad_value(key, value, "0, 1, plus or minus", line);
        }
        cfg.initial_state = std::string(value);
    } else if (key == "beta_noise" || key == "dgamma_noise") {
        (key == "beta_noise" ? cfg.detuning : cfg.loss_shift).kind = parse_noise_kind(key, value, line);
    } else if (key == "beta" || key == "dgamma") {
        (key == "beta" ? cfg.detuning : cfg.loss_shift).scale = parse_real(key, value, line);
    } else if (key == "beta_period" || key == "dgamma_period") {
        double period = parse_real(key, value, line);
        if (!(period > 0.0)) {
            bad_value(key, value, "a positive multiple of tau or inf", line);
        }
        (key == "beta_period" ? cfg.detuning : cfg.loss_shift).period_in_tau = period;
    } else if (key == "sequences") {
        std::vector<SequenceKind> kinds;
        for (auto name : split(value, ',')) {
            try {
                SequenceKind kind = parse_sequence_kind(name);
                if (std::find(kinds.begin(), kinds.end(), kind) != kinds.end()) {
                    bad_value(key, value, "each sequence at most once", line);
                }
                kinds.push_back(kind);
            } catch (const DomainError &) {
                bad_value(key, value, "a comma list of unprotected, s1, s2", line);
            }
        }
        cfg.sequences = std::move(kinds);
    } else if (key == "trials") {
        cfg.trials = parse_int<std::size_t>(key, value, line, 1);
    } else if (key == "seed") {
        cfg.seed = parse_int<std::uint64_t>(key, value, line, 0);
    } else if (key == "workers") {
        cfg.workers = parse_int<unsigned>(key, value, line, 1);
    } else if (key == "batches") {
        cfg.batches = parse_int<unsigned>(key, value, line, 1);
    } else if (key == "normalization") {
        try {
            cfg.normalization = parse_normalization(value);
        } catch (const DomainError &) {
            bad_value(key, value, "per-trial or post-average", line);
        }
    } else if (key == "out") {
        cfg.out = std::string(value);
    } else if (key.starts_with("sweep.")) {
        SweepAxis axis;
        try {
            axis = parse_sweep_axis(key.substr(6));
        } catch (const DomainError &) {
            throw ConfigError("unknown sweep axis in key '" + std::string(key) + "' (expected tau, J, beta, sigma or w)",
                              line);
        }
        auto parts = split(value, ':');
        if (parts.size() != 3) {
            bad_value(key, value, "start:stop:count", line);
        }
        AxisRange range{axis, parse_real(key, parts[0], line), parse_real(key, parts[1], line),
                        parse_int<std::size_t>(key, parts[2], line, 1)};
        std::erase_if(cfg.axes, [&](const AxisRange &a) { return a.axis == axis; });
        cfg.axes.push_back(range);
    } else {
        throw ConfigError("unknown key '" + std::string(key) + "'", line);
    }
}

ExperimentConfig parse_config(std::string_view text) {
    ExperimentConfig cfg;
    std::set<std::string, std::less<>> seen;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        std::string_view line = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
        pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
        ++line_no;

        if (auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("expected 'key = value', got '" + std::string(line) + "'", line_no);
        }
        std::string_view key = trim(line.substr(0, eq));
        if (key.empty()) {
            throw ConfigError("missing key before '='", line_no);
        }
        if (!seen.emplace(key).second) {
            throw ConfigError("duplicate key '" + std::string(key) + "'", line_no);
        }
        apply_setting(cfg, key, line.substr(eq + 1), line_no);
    }
    return cfg;
}

std::string format_config(const ExperimentConfig &cfg) {
    std::ostringstream out;
    out << "J = " << format_real(cfg.coupling) << '\n';
    out << "Gamma = " << format_real(cfg.loss) << '\n';
    out << "m = " << cfg.cycles << '\n';
    if (cfg.tau_not_divisor > 0) {
        out << "tau = T_NOT/" << cfg.tau_not_divisor << '\n';
    } else if (cfg.tau > 0.0) {
        out << "tau = " << format_real(cfg.tau) << '\n';
    }
    out << "initial_state = " << cfg.initial_state << '\n';
    out << "beta_noise = " << to_string(cfg.detuning.kind) << '\n';
    out << "beta = " << format_real(cfg.detuning.scale) << '\n';
    out << "beta_period = " << format_period(cfg.detuning.period_in_tau) << '\n';
    out << "dgamma_noise = " << to_string(cfg.loss_shift.kind) << '\n';
    out << "dgamma = " << format_real(cfg.loss_shift.scale) << '\n';
    out << "dgamma_period = " << format_period(cfg.loss_shift.period_in_tau) << '\n';
    out << "sequences = ";
    for (std::size_t i = 0; i < cfg.sequences.size(); ++i) {
        out << (i ? "," : "") << to_string(cfg.sequences[i]);
    }
    out << '\n';
    out << "trials = " << cfg.trials << '\n';
    out << "seed = " << cfg.seed << '\n';
    out << "workers = " << cfg.workers << '\n';
    out << "batches = " << cfg.batches << '\n';
    out << "normalization = " << to_string(cfg.normalization) << '\n';
    if (!cfg.out.empty()) {
        out << "out = " << cfg.out << '\n';
    }
    for (const auto &axis : cfg.axes) {
        out << "sweep." << to_string(axis.axis) << " = " << format_real(axis.start) << ':' << format_real(axis.stop)
            << ':' << axis.count << '\n';
    }
    return out.str();
}

bool operator==(const ExperimentConfig &a, const ExperimentConfig &b) {
    return format_config(a) == format_config(b);
}

PointConfig ExperimentConfig::point() const {
    bool tau_swept = std::any_of(axes.begin(), axes.end(), [](const AxisRange &a) { return a.axis == SweepAxis::Tau; });
    if (tau_not_divisor == 0 && !(tau > 0.0) && !tau_swept) {
        throw ConfigError("tau is not set (give seconds, T_NOT/<n>, or a sweep.tau axis)");
    }
    if (sequences.empty()) {
        throw ConfigError("sequences must name at least one sequence");
    }
    PointConfig p;
    try {
        p.params = PTParams(coupling, loss);
    } catch (const DomainError &e) {
        throw ConfigError(e.what());
    }
    p.tau = tau;
    p.tau_not_divisor = tau_not_divisor;
    p.cycles = cycles;
    p.detuning = detuning;
    p.loss_shift = loss_shift;
    p.initial = parse_initial_state(initial_state);
    p.kinds = sequences;
    return p;
}

SweepSpec ExperimentConfig::sweep() const {
    SweepSpec spec;
    spec.axes = axes;
    spec.base = point();
    spec.n_trials = trials;
    spec.seed.master_seed = seed;
    spec.options.workers = workers;
    spec.options.batches = batches;
    spec.options.normalization = normalization;
    return spec;
}

const std::vector<Preset> &presets() {
    static const std::vector<Preset> kPresets = {
        {"fig1a", "NOT gate vs constant detuning beta in [0, 4000pi]; m=2, J=10 kHz, Gamma=1 kHz, |1>, tau=T_NOT/2",
         R"(J = 10000
Gamma = 1000
m = 2
tau = T_NOT/2
initial_state = 1
beta_noise = constant
beta = 2000*pi
sequences = unprotected,s1
# constant noise: every trial is identical
trials = 1
sweep.beta = 0:4000*pi:41
)"},
        {"fig1b", "evolution vs tau in (0, 200 us]; m=2, J=10 kHz, Gamma=1 kHz, |0>, beta=2000pi",
         R"(J = 10000
Gamma = 1000
m = 2
initial_state = 0
beta_noise = constant
beta = 2000*pi
sequences = unprotected,s1
trials = 1
sweep.tau = 2e-6:200e-6:100
)"},
        {"fig1cd", "F(tau, J) map; m=2, J in [1, 10] kHz, Gamma=1 kHz, |0>, tau in (0, 200 us], beta=2000pi",
         R"(Gamma = 1000
m = 2
initial_state = 0
beta_noise = constant
beta = 2000*pi
sequences = unprotected,s1
trials = 1
sweep.J = 1000:10000:41
sweep.tau = 5e-6:200e-6:40
)"},
        {"fig2a", "NOT gate vs Gaussian detuning sigma in [0, 2.4 kHz]; m=8, J=1 kHz, Gamma=0.5 kHz, |1>, tau=T_NOT/8",
         R"(J = 1000
Gamma = 500
m = 8
tau = T_NOT/8
initial_state = 1
beta_noise = gaussian
beta = 1200
beta_period = 2
sequences = unprotected,s1
trials = 2000
sweep.sigma = 0:2400:11
)"},
        {"fig2b", "evolution vs tau in (0, 2 ms]; m=4, J=1 kHz, Gamma=0.5 kHz, |0>, sigma=1.2 kHz",
         R"(J = 1000
Gamma = 500
m = 4
initial_state = 0
beta_noise = gaussian
beta = 1200
beta_period = 2
sequences = unprotected,s1
trials = 2000
sweep.tau = 50e-6:2e-3:40
)"},
        {"fig2cd", "F(tau, J) map; m=4, J in [1, 3] kHz, Gamma=1.2 kHz, |0>, tau in (0, 1.6 ms], sigma=1.2 kHz",
         R"(Gamma = 1200
m = 4
initial_state = 0
beta_noise = gaussian
beta = 1200
beta_period = 2
sequences = unprotected,s1
trials = 2000
sweep.J = 1000:3000:41
sweep.tau = 40e-6:1.6e-3:40
)"},
        {"fig3a", "NOT gate vs dissipative-beam noise width w in [0, 1 kHz]; m=8, J=1 kHz, Gamma=0.5 kHz, |1>, "
                  "tau=T_NOT/8",
         R"(J = 1000
Gamma = 500
m = 8
tau = T_NOT/8
initial_state = 1
dgamma_noise = uniform
dgamma = 100
dgamma_period = 2
sequences = unprotected,s1
trials = 2000
sweep.w = 0:1000:11
)"},
        {"fig3b", "evolution vs tau in (0, 3 ms]; m=4, J=1 kHz, Gamma=0.5 kHz, |0>, w=100 Hz",
         R"(J = 1000
Gamma = 500
m = 4
initial_state = 0
dgamma_noise = uniform
dgamma = 100
dgamma_period = 2
sequences = unprotected,s1
trials = 2000
sweep.tau = 75e-6:3e-3:40
)"},
        {"fig3cd", "F(tau, J) map; m=4, J in [1, 3] kHz, Gamma=0.5 kHz, |0>, tau in (0, 3 ms], w=100 Hz "
                   "(100 rad/s; a 100 kHz width would swamp Gamma and is not used)",
         R"(Gamma = 500
m = 4
initial_state = 0
dgamma_noise = uniform
dgamma = 100
dgamma_period = 2
sequences = unprotected,s1
trials = 2000
sweep.J = 1000:3000:41
sweep.tau = 75e-6:3e-3:40
)"},
        {"fig4a", "s2 vs s1 vs unprotected, tau in [4, 80] us; m=4, J=10 kHz, Gamma=1 kHz, (|0>+|1>)/sqrt2, "
                  "beta=2000pi, dGamma=2000 constant",
         R"(J = 10000
Gamma = 1000
m = 4
initial_state = plus
beta_noise = constant
beta = 2000*pi
dgamma_noise = constant
dgamma = 2000
sequences = unprotected,s1,s2
trials = 1
sweep.tau = 4e-6:80e-6:21
)"},
        {"fig4bcd", "F(tau, J) maps for unprotected/s1/s2; m=4, J in [6, 10] kHz, Gamma=1 kHz, (|0>+|1>)/sqrt2, "
                    "tau in (0, 80 us], per-trial constant beta ~ N(0, 1200) and dGamma ~ U[0, 100] (w=100 Hz, "
                    "not 100 kHz)",
         R"(Gamma = 1000
m = 4
initial_state = plus
beta_noise = gaussian
beta = 1200
beta_period = inf
dgamma_noise = uniform
dgamma = 100
dgamma_period = inf
sequences = unprotected,s1,s2
trials = 2000
sweep.J = 6000:10000:41
sweep.tau = 2e-6:80e-6:40
)"},
    };
    return kPresets;
}

ExperimentConfig preset_config(std::string_view name) {
    for (const auto &p : presets()) {
        if (p.name == name) {
            return parse_config(p.config);
        }
    }
    throw ConfigError("unknown preset '" + std::string(name) + "' (see `ptdd presets`)");
}

namespace {

std::string csv_safe(std::string s) {
    for (char &c : s) {
        if (c == ',' || c == '\n' || c == '\r') {
            c = ';';
        }
    }
    return s;
}

}  // namespace

std::string ResultTable::to_csv() const {
    std::ostringstream out;
    for (const auto &h : header) {
        out << "# " << h << '\n';
    }
    for (std::size_t i = 0; i < columns.size(); ++i) {
        out << (i ? "," : "") << columns[i];
    }
    out << '\n';
    for (const auto &row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? "," : "") << row[i];
        }
        out << '\n';
    }
    return out.str();
}

ResultTable make_result_table(const ExperimentConfig &cfg, const std::vector<SweepRow> &rows,
                              std::string_view command, std::string_view timestamp) {
    ResultTable table;
    std::size_t failures = 0;
    std::size_t failed_points = 0;
    for (const auto &row : rows) {
        if (!row.result.error.empty()) {
            ++failed_points;
        }
        for (const auto &o : row.result.outcomes) {
            failures += o.n_failed;
            if (!o.result) {
                ++failed_points;
            }
        }
    }

    table.header.push_back("ptdd " PTDD_VERSION " " + std::string(command));
    table.header.push_back("timestamp = " + std::string(timestamp));
    table.header.push_back("units = " + std::string(kUnitConvention));
    table.header.push_back("seed = " + std::to_string(cfg.seed));
    table.header.push_back("n_trials = " + std::to_string(cfg.trials));
    table.header.push_back("normalization = " + std::string(to_string(cfg.normalization)));
    table.header.push_back("failed_trials = " + std::to_string(failures));
    table.header.push_back("failed_points = " + std::to_string(failed_points));
    std::istringstream echo(format_config(cfg));
    for (std::string line; std::getline(echo, line);) {
        table.header.push_back("config: " + line);
    }

    table.columns.push_back("point");
    if (command != "simulate") {
        for (const auto &axis : cfg.axes) {
            table.columns.emplace_back(to_string(axis.axis));
        }
    }
    table.columns.push_back("tau_s");
    for (SequenceKind kind : cfg.sequences) {
        std::string k(to_string(kind));
        table.columns.push_back("F_" + k);
        table.columns.push_back("spread_" + k);
        table.columns.push_back("trials_" + k);
        table.columns.push_back("failed_" + k);
    }
    table.columns.push_back("status");

    const std::string nan = "nan";
    for (const auto &row : rows) {
        std::vector<std::string> cells;
        cells.push_back(std::to_string(row.index));
        for (double v : row.axis_values) {
            cells.push_back(format_real(v));
        }
        cells.push_back(format_real(row.result.tau));
        std::string status = row.result.error.empty() ? "ok" : "error: " + row.result.error;
        for (SequenceKind kind : cfg.sequences) {
            auto it = std::find_if(row.result.outcomes.begin(), row.result.outcomes.end(),
                                   [&](const KindOutcome &o) { return o.kind == kind; });
            if (it == row.result.outcomes.end() || !it->result) {
                cells.insert(cells.end(), {nan, nan, "0"});
                cells.push_back(it == row.result.outcomes.end() ? "0" : std::to_string(it->n_failed));
                if (it != row.result.outcomes.end() && status == "ok") {
                    status = "error: " + std::string(to_string(kind)) + " " + it->error;
                }
                continue;
            }
            cells.push_back(format_real(it->result->fidelity));
            cells.push_back(format_real(it->result->fidelity_spread));
            cells.push_back(std::to_string(it->result->n_trials));
            cells.push_back(std::to_string(it->result->n_failed));
        }
        cells.push_back(csv_safe(status));
        table.rows.push_back(std::move(cells));
    }
    return table;
}

}  // namespace ptdd
