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

#ifndef PTDD_EXPERIMENT_H_
#define PTDD_EXPERIMENT_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ptdd/engine.h"

namespace ptdd {

/// Unit convention used by every config and output file: a parameter quoted
/// as "X kHz" is entered as X*1e3 rad/s, "X Hz" as X rad/s; times in seconds.
inline constexpr std::string_view kUnitConvention =
    "paper units: frequencies in rad/s (a stated 'X kHz' is X*1e3 rad/s, 'X Hz' is X rad/s), times in s";

/// One experiment: a parameter point, optional sweep axes and run options.
/// Serialized as a flat `key = value` document; see parse_config.
struct ExperimentConfig {
    double coupling = 1e4;
    double loss = 1e3;
    int cycles = 2;
    double tau = 0.0;
    int tau_not_divisor = 0;  ///< tau = T_NOT / divisor when > 0
    std::string initial_state = "1";
    NoiseSpec detuning;
    NoiseSpec loss_shift;
    std::vector<SequenceKind> sequences{SequenceKind::Unprotected, SequenceKind::CpmgLike, SequenceKind::Cpmg};
    std::vector<AxisRange> axes;
    std::size_t trials = 10000;
    std::uint64_t seed = 0;
    unsigned workers = 1;
    unsigned batches = 10;
    Normalization normalization = Normalization::PerTrial;
    std::string out;

    /// The base point (sweep axes not applied). Throws ConfigError.
    PointConfig point() const;
    SweepSpec sweep() const;
};

/// "0", "1", "plus" ((|0>+|1>)/sqrt 2) or "minus".
StateVec2 parse_initial_state(std::string_view name);

/// Applies one `key = value` setting. Throws ConfigError naming the key;
/// `line` is attached to the message when > 0.
void apply_setting(ExperimentConfig &cfg, std::string_view key, std::string_view value, int line = 0);

/// Parses a config document: one `key = value` per line, '#' starts a
/// comment, blank lines ignored, keys case-sensitive and unique.
///
/// Keys: J, Gamma (rad/s); m; tau (seconds, or T_NOT/<n>); initial_state;
/// beta_noise, dgamma_noise (zero|constant|gaussian|uniform); beta, dgamma
/// (value, sigma or width); beta_period, dgamma_period (grid period in units
/// of tau, or inf for one draw per trial); sequences (comma list of
/// unprotected,s1,s2); trials; seed; workers; batches; normalization
/// (per-trial|post-average); out; sweep.<axis> = start:stop:count with axis
/// one of tau, J, beta, sigma, w.
ExperimentConfig parse_config(std::string_view text);

/// Canonical `key = value` listing; parse_config(format_config(c)) == c.
std::string format_config(const ExperimentConfig &cfg);

bool operator==(const ExperimentConfig &a, const ExperimentConfig &b);

struct Preset {
    std::string name;
    std::string summary;
    std::string config;  ///< document accepted by parse_config
};

/// Built-in figure presets, in a fixed order.
const std::vector<Preset> &presets();

/// Throws ConfigError for an unknown name.
ExperimentConfig preset_config(std::string_view name);

/// Header block plus rows. Reals use 17 significant digits; header lines
/// are written with a leading '#'.
struct ResultTable {
    std::vector<std::string> header;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    std::string to_csv() const;
};

/// `command` names the producing subcommand. Failure counts are totalled
/// into the header.
ResultTable make_result_table(const ExperimentConfig &cfg, const std::vector<SweepRow> &rows,
                              std::string_view command, std::string_view timestamp);

/// 17 significant digits, '.' decimal.
std::string format_real(double x);

}  // namespace ptdd

#endif  // PTDD_EXPERIMENT_H_
