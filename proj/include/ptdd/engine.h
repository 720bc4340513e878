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

#ifndef PTDD_ENGINE_H_
#define PTDD_ENGINE_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ptdd/linalg.h"
#include "ptdd/model.h"
#include "ptdd/noise.h"
#include "ptdd/sequence.h"

namespace ptdd {

/// Applies every piece (via expm_closed) and pulse of `sched` in time order.
/// The result is not renormalized. DegenerateStateError when the final norm
/// drops below 1e-150.
StateVec2 propagate(const PiecewiseSchedule &sched, const StateVec2 &psi0);

/// Full propagator of a schedule, latest factor on the left.
Operator2 schedule_propagator(const PiecewiseSchedule &sched);

/// Normalized U psi0 psi0^dag U^dag for U = exp(-i h_pt_passive(p) T).
DensityMatrix2 ideal_density(const PTParams &p, double duration, const StateVec2 &psi0);

/// |Tr(a b)| / sqrt(Tr(a^2) Tr(b^2)).
double fidelity(const DensityMatrix2 &a, const DensityMatrix2 &b);

/// How trial density matrices are combined.
enum class Normalization {
    PerTrial,     ///< normalize each trial, then take the arithmetic mean
    PostAverage,  ///< average unnormalized outer products, normalize once
};

std::string_view to_string(Normalization mode);
/// Accepts "per-trial" and "post-average". Throws DomainError.
Normalization parse_normalization(std::string_view name);

struct EnsembleOptions {
    Normalization normalization = Normalization::PerTrial;
    unsigned workers = 1;
    /// Trials are split into this many contiguous batches for the spread
    /// estimate.
    unsigned batches = 10;
};

struct TrialConfig {
    PTParams params{0.0, 0.0};
    SequenceSpec sequence;
    NoiseModel detuning = ZeroNoise{};
    NoiseModel loss_shift = ZeroNoise{};
    StateVec2 initial{0.0, 1.0};
};

struct EnsembleResult {
    DensityMatrix2 rho_avg;
    double fidelity = 0.0;
    std::size_t n_trials = 0;  ///< trials that contributed
    std::size_t n_failed = 0;  ///< trials dropped for total population loss
    double fidelity_spread = 0.0;  ///< sample std of per-batch fidelities
};

/// Monte Carlo ensemble for one sequence kind. Trials run on
/// `options.workers` threads; the reduction runs in trial-index order, so
/// the result is bit-identical for any worker count. `point` selects the
/// noise streams (see trial_stream). Throws DegenerateStateError if every
/// trial failed.
EnsembleResult run_ensemble(const TrialConfig &cfg, std::size_t n_trials, const SeedPolicy &policy,
                            const EnsembleOptions &options = {}, std::uint64_t point = 0);

/// One parameter point evaluated for several sequence kinds. Within a trial
/// all kinds see the same noise trajectories (paired comparison).
struct PointConfig {
    PTParams params{0.0, 0.0};
    double tau = 0.0;
    /// When > 0, tau is replaced by not_gate_time(params) / tau_not_divisor.
    int tau_not_divisor = 0;
    int cycles = 1;
    NoiseSpec detuning;
    NoiseSpec loss_shift;
    StateVec2 initial{0.0, 1.0};
    std::vector<SequenceKind> kinds{SequenceKind::Unprotected, SequenceKind::CpmgLike};

    /// tau after resolving tau_not_divisor.
    double resolved_tau() const;
};

struct KindOutcome {
    SequenceKind kind;
    std::optional<EnsembleResult> result;
    std::size_t n_failed = 0;
    std::string error;  ///< set when no result could be formed
};

struct PointResult {
    double tau = 0.0;  ///< resolved sequence spacing
    std::vector<KindOutcome> outcomes;
    std::string error;  ///< set when the point itself was invalid
};

PointResult run_point(const PointConfig &cfg, std::size_t n_trials, const SeedPolicy &policy,
                      const EnsembleOptions &options = {}, std::uint64_t point = 0);

enum class SweepAxis { Tau, Coupling, Detuning, DetuningSigma, LossWidth };

std::string_view to_string(SweepAxis axis);
/// Accepts "tau", "J", "beta", "sigma", "w". Throws DomainError.
SweepAxis parse_sweep_axis(std::string_view name);

/// `count` evenly spaced values from `start` to `stop` inclusive.
struct AxisRange {
    SweepAxis axis = SweepAxis::Tau;
    double start = 0.0;
    double stop = 0.0;
    std::size_t count = 1;

    std::vector<double> values() const;
};

/// Sets one axis value on a point: tau, J, a constant detuning, the Gaussian
/// detuning sigma, or the uniform loss-noise width.
void apply_axis(PointConfig &cfg, SweepAxis axis, double value);

struct SweepSpec {
    std::vector<AxisRange> axes;  ///< first axis varies slowest
    PointConfig base;
    std::size_t n_trials = 10000;
    SeedPolicy seed;
    EnsembleOptions options;
};

struct SweepRow {
    std::size_t index = 0;
    std::vector<double> axis_values;
    PointResult result;
};

/// One row per grid point in row-major order. Failures are recorded per
/// point and the sweep continues.
std::vector<SweepRow> run_sweep(const SweepSpec &spec);

}  // namespace ptdd

#endif  // PTDD_ENGINE_H_
