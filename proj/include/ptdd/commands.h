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

#ifndef PTDD_COMMANDS_H_
#define PTDD_COMMANDS_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ptdd/experiment.h"

namespace ptdd {

enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 2,
    kExitDomain = 3,
    kExitSelftest = 4,
};

/// Command-line overrides, applied on top of the preset or config file in
/// the order: preset, config file, --set entries, individual flags.
struct ConfigSources {
    std::string preset;
    std::string config_path;
    std::vector<std::string> settings;  ///< "key=value"
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::optional<unsigned> workers;
    std::optional<std::string> out;
    std::optional<std::string> normalization;
    std::optional<std::size_t> points;  ///< replaces the count of every sweep axis
};

/// Throws ConfigError.
ExperimentConfig load_config(const ConfigSources &sources);

/// The single point evaluated by `simulate` and `magnus`: sweep axes are
/// ignored, except that a missing tau falls back to the start of sweep.tau.
PointConfig base_point(const ExperimentConfig &cfg);

std::string utc_timestamp();

ResultTable cmd_simulate(const ExperimentConfig &cfg, const std::string &timestamp = utc_timestamp());

/// Throws ConfigError when no sweep axis is configured.
ResultTable cmd_sweep(const ExperimentConfig &cfg, const std::string &timestamp = utc_timestamp());

struct CheckLine {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct Report {
    std::string text;  ///< matrices and notes, then one line per check
    std::vector<CheckLine> checks;

    bool pass() const;
};

/// First- and second-order average Hamiltonians of one s1 and one s2 cycle
/// under constant noise (the configured beta and dgamma scales), with
/// residuals against the closed forms: magnus1 = H~/2 - i dGamma I for both,
/// magnus2 = 0 for s2.
Report cmd_magnus(const ExperimentConfig &cfg);

std::string cmd_presets();

/// Internal consistency checks: preset tau values against not_gate_time,
/// the ideal period, closed-form average Hamiltonians, and expm agreement.
Report cmd_selftest();

/// Ordered text dump of the compiled schedule of every configured sequence,
/// with the noise of trial 0.
std::string schedule_dump(const ExperimentConfig &cfg);

/// Writes `content` to `path` through a temporary file and rename.
void write_file_atomic(const std::string &path, const std::string &content);

/// Full command-line entry point; returns the process exit code.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace ptdd

#endif  // PTDD_COMMANDS_H_
