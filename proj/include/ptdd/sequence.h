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

#ifndef PTDD_SEQUENCE_H_
#define PTDD_SEQUENCE_H_

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ptdd/linalg.h"
#include "ptdd/model.h"
#include "ptdd/noise.h"

namespace ptdd {

/// Unprotected: plain evolution under the noisy Hamiltonian.
/// CpmgLike (s1): per cycle P, free(tau), P, drive(tau); first-order protection.
/// Cpmg (s2): per cycle drive(tau/2), P, free(tau), P, drive(tau/2); symmetric,
/// so every even average-Hamiltonian order vanishes.
enum class SequenceKind { Unprotected, CpmgLike, Cpmg };

std::string_view to_string(SequenceKind kind);
/// Accepts "unprotected", "s1"/"cpmg-like", "s2"/"cpmg". Throws DomainError.
SequenceKind parse_sequence_kind(std::string_view name);

/// Drive segments evolve under h_total, free segments under h_noise only.
enum class SegmentKind { Drive, FreeNoise };

struct PulseElement {
    Operator2 op;
};
struct SegmentElement {
    SegmentKind kind;
    double duration;
};
using CycleElement = std::variant<PulseElement, SegmentElement>;

/// Time-ordered (earliest first) elements of one cycle.
struct CycleSpec {
    std::vector<CycleElement> elements;
    double duration = 0.0;
};

CycleSpec build_cycle(SequenceKind kind, double tau);

struct SequenceSpec {
    SequenceKind kind = SequenceKind::Unprotected;
    double tau = 0.0;
    int cycles = 1;

    /// Throws DomainError unless tau > 0 and cycles >= 1.
    void validate() const;
    /// Length of one cycle: tau unprotected, 2*tau for s1/s2.
    double cycle_duration() const;
    /// cycles * cycle_duration()
    double wall_time() const;
    /// Time spent under the target Hamiltonian, cycles * tau.
    double effective_time() const;
};

struct SchedulePiece {
    Operator2 generator;
    double duration;
    SegmentKind kind;
};
struct SchedulePulse {
    Operator2 op;
};
using ScheduleItem = std::variant<SchedulePiece, SchedulePulse>;

/// Time-ordered piecewise-constant generators with instantaneous pulses in
/// between. Immutable once built.
class PiecewiseSchedule {
   public:
    PiecewiseSchedule() = default;
    /// Throws DomainError for a non-positive or non-finite piece duration.
    explicit PiecewiseSchedule(std::vector<ScheduleItem> items);

    const std::vector<ScheduleItem> &items() const {
        return items_;
    }
    /// Compensated sum of piece durations.
    double wall_time() const {
        return wall_time_;
    }
    bool has_pulses() const;
    std::size_t piece_count() const;

   private:
    std::vector<ScheduleItem> items_;
    double wall_time_ = 0.0;
};

/// Expands `seq` against the two noise trajectories. Every segment that
/// contains a breakpoint of either trajectory is split there; each piece
/// gets the generator for the field values on that piece. RangeError when a
/// trajectory does not cover seq.wall_time().
PiecewiseSchedule compile_schedule(const SequenceSpec &seq, const PTParams &p, const NoiseTrajectory &detuning,
                                   const NoiseTrajectory &loss_shift);

/// Pulse-free form of a schedule: each generator H is replaced by Q^dag H Q,
/// Q the product of the pulses applied before it, and `residual` is the
/// product of all pulses. The original propagator equals
/// residual * (propagator of the toggled schedule).
struct ToggledSchedule {
    PiecewiseSchedule schedule;
    Operator2 residual;
};

/// Throws InvalidPulseError on a non-unitary pulse.
ToggledSchedule toggle_frame(const PiecewiseSchedule &sched);

/// First-order average Hamiltonian (1/T) sum_k H_k t_k of a pulse-free
/// schedule. DomainError for schedules with pulses or zero duration.
Operator2 magnus1(const PiecewiseSchedule &toggled);

/// Second-order average Hamiltonian (1/(2iT)) sum_{j>k} [H_j, H_k] t_j t_k
/// (later piece on the left). Same preconditions as magnus1.
Operator2 magnus2(const PiecewiseSchedule &toggled);

/// Whether the toggling-frame Hamiltonian of the cycle, compiled with
/// generic constant noise, satisfies H(t) = H(tau_c - t).
bool symmetry_check(const CycleSpec &cycle);

/// Line-oriented listing: a header line, then one `pulse` or `segment` line
/// per item with fixed field order and 17 significant digits.
std::string dump_schedule(const PiecewiseSchedule &sched);

}  // namespace ptdd

#endif  // PTDD_SEQUENCE_H_
