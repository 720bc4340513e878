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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "ptdd/commands.h"
#include "ptdd/errors.h"

using namespace ptdd;

namespace {

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun cli(std::vector<std::string> args) {
    std::vector<const char *> argv{"ptdd"};
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> data_rows(const std::string &csv) {
    std::vector<std::string> rows;
    std::istringstream in(csv);
    for (std::string line; std::getline(in, line);) {
        if (!line.empty() && line[0] != '#') {
            rows.push_back(line);
        }
    }
    return rows;
}

std::size_t column(const ResultTable &t, const std::string &name) {
    auto it = std::find(t.columns.begin(), t.columns.end(), name);
    EXPECT_NE(it, t.columns.end()) << name;
    return static_cast<std::size_t>(it - t.columns.begin());
}

double cell(const ResultTable &t, std::size_t row, const std::string &name) {
    return std::stod(t.rows[row][column(t, name)]);
}

std::filesystem::path temp_path(const std::string &name) {
    return std::filesystem::temp_directory_path() / ("ptdd_cli_test_" + name);
}

}  // namespace

TEST(ParseConfig, UnknownKeyIsNamed) {
    try {
        parse_config("J = 1000\ngamma_khz = 1\n");
        FAIL();
    } catch (const ConfigError &e) {
        EXPECT_NE(std::string(e.what()).find("gamma_khz"), std::string::npos);
        EXPECT_EQ(e.line(), 2);
    }
}

TEST(ParseConfig, RejectsDuplicatesAndBadValues) {
    EXPECT_THROW(parse_config("J = 1\nJ = 2\n"), ConfigError);
    EXPECT_THROW(parse_config("J = ten\n"), ConfigError);
    EXPECT_THROW(parse_config("m = 0\n"), ConfigError);
    EXPECT_THROW(parse_config("tau = -1e-5\n"), ConfigError);
    EXPECT_THROW(parse_config("tau = T_NOT/0\n"), ConfigError);
    EXPECT_THROW(parse_config("sequences = s1,s3\n"), ConfigError);
    EXPECT_THROW(parse_config("beta_noise = pink\n"), ConfigError);
    EXPECT_THROW(parse_config("sweep.tau = 1:2\n"), ConfigError);
    EXPECT_THROW(parse_config("sweep.tau = 1:2:0\n"), ConfigError);
    EXPECT_THROW(parse_config("sweep.alpha = 1:2:3\n"), ConfigError);
    EXPECT_THROW(parse_config("just words\n"), ConfigError);
    EXPECT_THROW(parse_config("normalization = none\n"), ConfigError);
}

TEST(ParseConfig, CommentsAndPiValues) {
    auto cfg = parse_config("# comment\n\n  beta = 2000*pi   # trailing\nbeta_noise = constant\ntau = T_NOT/2\n");
    EXPECT_DOUBLE_EQ(cfg.detuning.scale, 2000.0 * std::numbers::pi);
    EXPECT_EQ(cfg.tau_not_divisor, 2);
    EXPECT_EQ(parse_config("beta = 3pi\n").detuning.scale, 3.0 * std::numbers::pi);
}

TEST(ParseConfig, RoundTripsEveryPreset) {
    for (const auto &p : presets()) {
        auto cfg = parse_config(p.config);
        EXPECT_EQ(parse_config(format_config(cfg)), cfg) << p.name;
    }
}

TEST(Presets, Names) {
    std::vector<std::string> names;
    for (const auto &p : presets()) {
        names.push_back(p.name);
    }
    EXPECT_EQ(names, (std::vector<std::string>{"fig1a", "fig1b", "fig1cd", "fig2a", "fig2b", "fig2cd", "fig3a",
                                               "fig3b", "fig3cd", "fig4a", "fig4bcd"}));
    EXPECT_THROW(preset_config("fig5"), ConfigError);
}

TEST(Presets, Fig2a) {
    auto cfg = preset_config("fig2a");
    EXPECT_EQ(cfg.cycles, 8);
    EXPECT_EQ(cfg.coupling, 1e3);
    EXPECT_EQ(cfg.loss, 500.0);
    EXPECT_EQ(cfg.initial_state, "1");
    EXPECT_NEAR(cfg.point().resolved_tau() * 1e6, 151.2, 0.1);
    EXPECT_EQ(cfg.detuning.kind, NoiseSpec::Kind::Gaussian);
    ASSERT_EQ(cfg.axes.size(), 1u);
    EXPECT_EQ(cfg.axes[0].axis, SweepAxis::DetuningSigma);
    EXPECT_EQ(cfg.axes[0].count, 11u);
    EXPECT_EQ(cfg.trials, 2000u);
}

TEST(Presets, Fig3b) {
    auto cfg = preset_config("fig3b");
    EXPECT_EQ(cfg.cycles, 4);
    EXPECT_EQ(cfg.coupling, 1e3);
    EXPECT_EQ(cfg.loss, 500.0);
    EXPECT_EQ(cfg.initial_state, "0");
    EXPECT_EQ(cfg.loss_shift.kind, NoiseSpec::Kind::Uniform);
    EXPECT_EQ(cfg.loss_shift.scale, 100.0);
}

TEST(Presets, Fig1aAndFig4a) {
    auto a = preset_config("fig1a");
    EXPECT_NEAR(a.point().resolved_tau() * 1e6, 73.9, 0.05);
    EXPECT_EQ(a.cycles, 2);
    EXPECT_DOUBLE_EQ(a.detuning.scale, 2000.0 * std::numbers::pi);
    auto d = preset_config("fig4a");
    EXPECT_EQ(d.cycles, 4);
    EXPECT_EQ(d.initial_state, "plus");
    EXPECT_EQ(d.loss_shift.kind, NoiseSpec::Kind::Constant);
    EXPECT_EQ(d.loss_shift.scale, 2000.0);
    EXPECT_EQ(d.axes.at(0).count, 21u);
}

TEST(Presets, ListingIsStable) {
    EXPECT_EQ(cmd_presets(), cmd_presets());
    EXPECT_NE(cmd_presets().find("100 Hz"), std::string::npos);
}

TEST(Simulate, Fig1aWithoutNoise) {
    auto cfg = preset_config("fig1a");
    apply_setting(cfg, "beta", "0");
    apply_setting(cfg, "sequences", "unprotected,s1,s2");
    auto t = cmd_simulate(cfg, "now");
    ASSERT_EQ(t.rows.size(), 1u);
    for (const char *k : {"F_unprotected", "F_s1", "F_s2"}) {
        EXPECT_NEAR(cell(t, 0, k), 1.0, 1e-9);
    }
}

TEST(Simulate, Fig1aOrdering) {
    auto t = cmd_simulate(preset_config("fig1a"), "now");
    EXPECT_GT(cell(t, 0, "F_s1"), cell(t, 0, "F_unprotected"));
}

TEST(Sweep, AxisChecks) {
    auto cfg = preset_config("fig1a");
    cfg.axes.clear();
    EXPECT_THROW(cmd_sweep(cfg, "now"), ConfigError);
    EXPECT_THROW(apply_setting(cfg, "sweep.beta", "0:1:0"), ConfigError);
}

TEST(Sweep, Fig1bRevivalNearIdealPeriod) {
    // The unprotected fidelity dips and recovers; its recovery peak in
    // effective time sits near the ideal period.
    auto cfg = preset_config("fig1b");
    auto t = cmd_sweep(cfg, "now");
    double tp = ideal_period(PTParams(1e4, 1e3));
    double best_t = 0.0;
    double best_f = -1.0;
    double dip = 2.0;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        double T = 2.0 * cell(t, i, "tau_s");
        double f = cell(t, i, "F_unprotected");
        if (T < tp / 2) {
            continue;
        }
        dip = std::min(dip, f);
        if (f > best_f) {
            best_f = f;
            best_t = T;
        }
    }
    EXPECT_GT(best_f - dip, 0.2);
    EXPECT_NEAR(best_t / tp, 1.0, 0.1);
}

TEST(Sweep, Fig4aCpmgOnTop) {
    auto t = cmd_sweep(preset_config("fig4a"), "now");
    ASSERT_EQ(t.rows.size(), 21u);
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        EXPECT_GE(cell(t, i, "F_s2"), cell(t, i, "F_s1"));
        EXPECT_GE(cell(t, i, "F_s2"), cell(t, i, "F_unprotected"));
    }
}

TEST(ResultTable, HeaderAndFormat) {
    auto cfg = preset_config("fig2a");
    cfg.trials = 40;
    cfg.seed = 1234;
    auto t = cmd_sweep(cfg, "2026-01-01T00:00:00Z");
    std::string csv = t.to_csv();
    for (const char *needle : {"# units = paper units", "# seed = 1234", "# n_trials = 40",
                               "# normalization = per-trial", "# failed_trials = 0", "# failed_points = 0",
                               "# timestamp = 2026-01-01T00:00:00Z", "# config: m = 8"}) {
        EXPECT_NE(csv.find(needle), std::string::npos) << needle;
    }
    EXPECT_EQ(t.columns.front(), "point");
    EXPECT_EQ(t.columns.back(), "status");
    EXPECT_EQ(t.rows.size(), 11u);
    // 17 significant digits round-trip.
    EXPECT_EQ(t.rows[3][column(t, "sigma")], "720");
    double f = cell(t, 3, "F_s1");
    EXPECT_EQ(format_real(f), t.rows[3][column(t, "F_s1")]);
    EXPECT_EQ(std::stod(format_real(0.1 + 0.2)), 0.1 + 0.2);
}

TEST(ResultTable, RowsAreReproducible) {
    auto cfg = preset_config("fig3a");
    cfg.trials = 60;
    auto a = cmd_sweep(cfg, "a");
    cfg.workers = 4;
    auto b = cmd_sweep(cfg, "b");
    EXPECT_EQ(a.rows, b.rows);
    EXPECT_EQ(data_rows(a.to_csv()), data_rows(b.to_csv()));
}

TEST(ResultTable, FailuresAreCounted) {
    auto cfg = parse_config(
        "J = 0\nGamma = 0\nm = 1\ntau = 1e-3\ninitial_state = 1\ndgamma_noise = constant\ndgamma = 1e7\n"
        "sequences = unprotected\ntrials = 3\n");
    auto t = cmd_simulate(cfg, "now");
    std::string csv = t.to_csv();
    EXPECT_NE(csv.find("# failed_trials = 3"), std::string::npos);
    EXPECT_NE(csv.find("# failed_points = 1"), std::string::npos);
    EXPECT_EQ(t.rows[0][column(t, "F_unprotected")], "nan");
    EXPECT_EQ(t.rows[0].back().rfind("error:", 0), 0u);
}

TEST(Magnus, Report) {
    auto r = cmd_magnus(preset_config("fig4a"));
    EXPECT_TRUE(r.pass());
    auto cfg = preset_config("fig1a");
    auto r1 = cmd_magnus(cfg);
    EXPECT_TRUE(r1.pass());
    EXPECT_NE(r1.text.find("PASS s1 magnus1"), std::string::npos);
}

TEST(Selftest, Passes) {
    auto r = cmd_selftest();
    EXPECT_TRUE(r.pass()) << r.text;
}

TEST(LoadConfig, Overrides) {
    ConfigSources s;
    s.preset = "fig2a";
    s.settings = {"m = 4", "J=2000"};
    s.seed = 9;
    s.trials = 17;
    s.workers = 3;
    s.normalization = "post-average";
    s.points = 4;
    auto cfg = load_config(s);
    EXPECT_EQ(cfg.cycles, 4);
    EXPECT_EQ(cfg.coupling, 2000.0);
    EXPECT_EQ(cfg.seed, 9u);
    EXPECT_EQ(cfg.trials, 17u);
    EXPECT_EQ(cfg.workers, 3u);
    EXPECT_EQ(cfg.normalization, Normalization::PostAverage);
    EXPECT_EQ(cfg.axes[0].count, 4u);
    s.settings = {"nonsense"};
    EXPECT_THROW(load_config(s), ConfigError);
}

TEST(LoadConfig, FileOverPreset) {
    auto path = temp_path("over.cfg");
    std::ofstream(path) << "m = 3\nseed = 5\n";
    ConfigSources s;
    s.preset = "fig1a";
    s.config_path = path.string();
    auto cfg = load_config(s);
    EXPECT_EQ(cfg.cycles, 3);
    EXPECT_EQ(cfg.seed, 5u);
    EXPECT_EQ(cfg.coupling, 1e4);
    std::filesystem::remove(path);
}

TEST(RunCli, ExitCodes) {
    EXPECT_EQ(cli({"presets"}).code, kExitOk);
    EXPECT_EQ(cli({"selftest"}).code, kExitOk);
    EXPECT_EQ(cli({}).code, kExitConfig);
    EXPECT_EQ(cli({"frobnicate"}).code, kExitConfig);
    EXPECT_EQ(cli({"simulate"}).code, kExitConfig);
    EXPECT_EQ(cli({"simulate", "--preset", "nope"}).code, kExitConfig);
    EXPECT_EQ(cli({"simulate", "--config", "/nonexistent/x.cfg"}).code, kExitConfig);
    auto bad = cli({"simulate", "--preset", "fig1a", "--set", "gamma_khz=1"});
    EXPECT_EQ(bad.code, kExitConfig);
    EXPECT_NE(bad.err.find("gamma_khz"), std::string::npos);
    EXPECT_EQ(cli({"simulate", "--preset", "fig1a", "--normalization", "sideways"}).code, kExitConfig);
    // T_NOT does not exist past the exceptional point.
    auto domain = cli({"simulate", "--preset", "fig1a", "--set", "Gamma=2e4"});
    EXPECT_EQ(domain.code, kExitDomain);
    EXPECT_NE(domain.err.find("not_gate_time"), std::string::npos);
    EXPECT_EQ(cli({"magnus", "--preset", "fig4a"}).code, kExitOk);
}

TEST(RunCli, SimulateToStdoutAndFile) {
    auto r = cli({"simulate", "--preset", "fig1a", "--seed", "3"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_NE(r.out.find("# seed = 3"), std::string::npos);
    EXPECT_EQ(data_rows(r.out).size(), 2u);

    auto path = temp_path("out.csv");
    std::filesystem::remove(path);
    auto w = cli({"sweep", "--preset", "fig2a", "--trials", "20", "--workers", "2", "--out", path.string()});
    ASSERT_EQ(w.code, kExitOk) << w.err;
    EXPECT_TRUE(w.out.empty());
    std::ifstream in(path);
    std::stringstream content;
    content << in.rdbuf();
    EXPECT_EQ(data_rows(content.str()).size(), 12u);
    EXPECT_FALSE(std::filesystem::exists(path.string() + ".tmp"));
    std::filesystem::remove(path);
}

TEST(RunCli, ScheduleDump) {
    auto r = cli({"simulate", "--preset", "fig4a", "--dump-schedule"});
    ASSERT_EQ(r.code, kExitOk);
    EXPECT_EQ(r.out.rfind("# sequence unprotected\nschedule items=4 pieces=4", 0), 0u);
    EXPECT_NE(r.out.find("# sequence s2\nschedule items=20 pieces=12"), std::string::npos);
}
