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

#include "ptdd/engine.h"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "parallel.h"
#include "ptdd/errors.h"

namespace ptdd {

StateVec2 propagate(const PiecewiseSchedule &sched, const StateVec2 &psi0) {
    StateVec2 psi = psi0;
    for (const auto &item : sched.items()) {
        if (const auto *piece = std::get_if<SchedulePiece>(&item)) {
            psi = expm_closed(piece->generator, piece->duration) * psi;
        } else {
            psi = std::get<SchedulePulse>(item).op * psi;
        }
    }
    if (!(psi.norm() >= 1e-150)) {
        throw DegenerateStateError("propagate: state norm fell below 1e-150");
    }
    return psi;
}

Operator2 schedule_propagator(const PiecewiseSchedule &sched) {
    Operator2 u = Operator2::identity();
    for (const auto &item : sched.items()) {
        if (const auto *piece = std::get_if<SchedulePiece>(&item)) {
            u = expm_closed(piece->generator, piece->duration) * u;
        } else {
            u = std::get<SchedulePulse>(item).op * u;
        }
    }
    return u;
}

DensityMatrix2 ideal_density(const PTParams &p, double duration, const StateVec2 &psi0) {
    if (!(duration >= 0.0)) {
        throw DomainError("ideal_density: duration must be >= 0");
    }
    return dm_from_state(expm_closed(h_pt_passive(p), duration) * psi0);
}

double fidelity(const DensityMatrix2 &a, const DensityMatrix2 &b) {
    double overlap = std::abs((a.matrix() * b.matrix()).trace());
    return overlap / std::sqrt(a.purity() * b.purity());
}

std::string_view to_string(Normalization mode) {
    return mode == Normalization::PerTrial ? "per-trial" : "post-average";
}

Normalization parse_normalization(std::string_view name) {
    if (name == "per-trial") {
        return Normalization::PerTrial;
    }
    if (name == "post-average") {
        return Normalization::PostAverage;
    }
    throw DomainError("unknown normalization '" + std::string(name) + "' (expected per-trial or post-average)");
}

namespace {

/// Runs every trial for every sequence in `specs`, sharing one pair of noise
/// trajectories per trial, and reduces each kind in trial order.
std::vector<KindOutcome> run_kinds(const PTParams &params, const std::vector<SequenceSpec> &specs,
                                   const NoiseModel &detuning, const NoiseModel &loss_shift, const StateVec2 &initial,
                                   std::size_t n_trials, const SeedPolicy &policy, const EnsembleOptions &options,
                                   std::uint64_t point) {
    if (n_trials < 1) {
        throw DomainError("ensemble needs at least one trial");
    }
    if (!(initial.norm() > 0.0)) {
        throw DomainError("initial state has zero norm");
    }
    validate(detuning);
    validate(loss_shift);
    double wall = 0.0;
    for (const auto &s : specs) {
        s.validate();
        wall = std::max(wall, s.wall_time());
    }
    const double effective_time = specs.front().effective_time();
    const DensityMatrix2 ideal = ideal_density(params, effective_time, initial);

    const std::size_t n_kinds = specs.size();
    std::vector<Operator2> mats(n_kinds * n_trials);
    std::vector<std::uint8_t> ok(n_kinds * n_trials, 0);

    internal::parallel_for(n_trials, options.workers, [&](std::size_t trial) {
        RandomStream det_rng = trial_stream(policy, point, trial, NoiseField::Detuning);
        RandomStream loss_rng = trial_stream(policy, point, trial, NoiseField::LossShift);
        NoiseTrajectory det_traj = sample_trajectory(detuning, wall, det_rng);
        NoiseTrajectory loss_traj = sample_trajectory(loss_shift, wall, loss_rng);
        for (std::size_t k = 0; k < n_kinds; ++k) {
            PiecewiseSchedule sched = compile_schedule(specs[k], params, det_traj, loss_traj);
            const std::size_t slot = k * n_trials + trial;
            try {
                StateVec2 psi = propagate(sched, initial);
                Operator2 m = outer(psi, psi);
                if (options.normalization == Normalization::PerTrial) {
                    m = m / m.trace();
                }
                mats[slot] = m;
                ok[slot] = 1;
            } catch (const DegenerateStateError &) {
                ok[slot] = 0;
            }
        }
    });

    const std::size_t n_batches = std::max<std::size_t>(1, std::min<std::size_t>(options.batches, n_trials));
    std::vector<KindOutcome> out;
    out.reserve(n_kinds);
    for (std::size_t k = 0; k < n_kinds; ++k) {
        KindOutcome outcome{specs[k].kind, std::nullopt, 0, {}};
        Operator2 total;
        std::size_t used = 0;
        std::vector<Operator2> batch_sum(n_batches);
        std::vector<std::size_t> batch_used(n_batches, 0);
        for (std::size_t i = 0; i < n_trials; ++i) {
            const std::size_t slot = k * n_trials + i;
            if (!ok[slot]) {
                ++outcome.n_failed;
                continue;
            }
            total += mats[slot];
            ++used;
            const std::size_t b = i * n_batches / n_trials;
            batch_sum[b] += mats[slot];
            ++batch_used[b];
        }
        if (used == 0) {
            outcome.error = "all trials lost their population";
            out.push_back(std::move(outcome));
            continue;
        }

        DensityMatrix2 rho = dm_normalize(total);
        std::vector<double> batch_fid;
        for (std::size_t b = 0; b < n_batches; ++b) {
            if (batch_used[b] > 0) {
                batch_fid.push_back(fidelity(ideal, dm_normalize(batch_sum[b])));
            }
        }
        double spread = 0.0;
        if (batch_fid.size() >= 2) {
            double mean = 0.0;
            for (double f : batch_fid) {
                mean += f;
            }
            mean /= static_cast<double>(batch_fid.size());
            double ss = 0.0;
            for (double f : batch_fid) {
                ss += (f - mean) * (f - mean);
            }
            spread = std::sqrt(ss / static_cast<double>(batch_fid.size() - 1));
        }
        outcome.result = EnsembleResult{rho, fidelity(ideal, rho), used, outcome.n_failed, spread};
        out.push_back(std::move(outcome));
    }
    return out;
}

}  // namespace

EnsembleResult run_ensemble(const TrialConfig &cfg, std::size_t n_trials, const SeedPolicy &policy,
                            const EnsembleOptions &options, std::uint64_t point) {
    auto outcomes = run_kinds(cfg.params, {cfg.sequence}, cfg.detuning, cfg.loss_shift, cfg.initial, n_trials, policy,
                              options, point);
    if (!outcomes.front().result) {
        throw DegenerateStateError("run_ensemble: " + outcomes.front().error);
    }
    return *outcomes.front().result;
}

double PointConfig::resolved_tau() const {
    if (tau_not_divisor > 0) {
        return not_gate_time(params) / tau_not_divisor;
    }
    return tau;
}

PointResult run_point(const PointConfig &cfg, std::size_t n_trials, const SeedPolicy &policy,
                      const EnsembleOptions &options, std::uint64_t point) {
    if (cfg.kinds.empty()) {
        throw DomainError("run_point: no sequence kinds requested");
    }
    const double tau = cfg.resolved_tau();
    std::vector<SequenceSpec> specs;
    for (SequenceKind kind : cfg.kinds) {
        specs.push_back({kind, tau, cfg.cycles});
    }
    PointResult result;
    result.tau = tau;
    result.outcomes = run_kinds(cfg.params, specs, cfg.detuning.resolve(tau), cfg.loss_shift.resolve(tau),
                                cfg.initial, n_trials, policy, options, point);
    return result;
}

std::string_view to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::Tau:
            return "tau";
        case SweepAxis::Coupling:
            return "J";
        case SweepAxis::Detuning:
            return "beta";
        case SweepAxis::DetuningSigma:
            return "sigma";
        case SweepAxis::LossWidth:
            return "w";
    }
    return "unknown";
}

SweepAxis parse_sweep_axis(std::string_view name) {
    for (SweepAxis axis : {SweepAxis::Tau, SweepAxis::Coupling, SweepAxis::Detuning, SweepAxis::DetuningSigma,
                           SweepAxis::LossWidth}) {
        if (name == to_string(axis)) {
            return axis;
        }
    }
    throw DomainError("unknown sweep axis '" + std::string(name) + "' (expected tau, J, beta, sigma or w)");
}

std::vector<double> AxisRange::values() const {
    if (count < 1) {
        throw DomainError("sweep axis '" + std::string(to_string(axis)) + "' is empty");
    }
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = count == 1 ? start : start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    out.back() = count == 1 ? start : stop;
    return out;
}

void apply_axis(PointConfig &cfg, SweepAxis axis, double value) {
    switch (axis) {
        case SweepAxis::Tau:
            cfg.tau = value;
            cfg.tau_not_divisor = 0;
            break;
        case SweepAxis::Coupling:
            cfg.params = PTParams(value, cfg.params.loss());
            break;
        case SweepAxis::Detuning:
            cfg.detuning.kind = NoiseSpec::Kind::Constant;
            cfg.detuning.scale = value;
            break;
        case SweepAxis::DetuningSigma:
            cfg.detuning.kind = NoiseSpec::Kind::Gaussian;
            cfg.detuning.scale = value;
            break;
        case SweepAxis::LossWidth:
            cfg.loss_shift.kind = NoiseSpec::Kind::Uniform;
            cfg.loss_shift.scale = value;
            break;
    }
}

std::vector<SweepRow> run_sweep(const SweepSpec &spec) {
    std::vector<std::vector<double>> grids;
    std::size_t total = 1;
    for (const auto &axis : spec.axes) {
        grids.push_back(axis.values());
        total *= grids.back().size();
    }

    std::vector<SweepRow> rows(total);
    for (std::size_t index = 0; index < total; ++index) {
        SweepRow &row = rows[index];
        row.index = index;
        row.axis_values.resize(grids.size());
        std::size_t rem = index;
        for (std::size_t a = grids.size(); a-- > 0;) {
            row.axis_values[a] = grids[a][rem % grids[a].size()];
            rem /= grids[a].size();
        }
        try {
            PointConfig cfg = spec.base;
            for (std::size_t a = 0; a < grids.size(); ++a) {
                apply_axis(cfg, spec.axes[a].axis, row.axis_values[a]);
            }
            row.result = run_point(cfg, spec.n_trials, spec.seed, spec.options, index);
        } catch (const Error &e) {
            row.result.error = e.what();
        }
    }
    return rows;
}

}  // namespace ptdd
