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

#include "ptdd/sequence.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "ptdd/errors.h"

namespace ptdd {

std::string_view to_string(SequenceKind kind) {
    switch (kind) {
        case SequenceKind::Unprotected:
            return "unprotected";
        case SequenceKind::CpmgLike:
            return "s1";
        case SequenceKind::Cpmg:
            return "s2";
    }
    return "unknown";
}

SequenceKind parse_sequence_kind(std::string_view name) {
    if (name == "unprotected") {
        return SequenceKind::Unprotected;
    }
    if (name == "s1" || name == "cpmg-like") {
        return SequenceKind::CpmgLike;
    }
    if (name == "s2" || name == "cpmg") {
        return SequenceKind::Cpmg;
    }
    throw DomainError("unknown sequence kind '" + std::string(name) + "' (expected unprotected, s1 or s2)");
}

CycleSpec build_cycle(SequenceKind kind, double tau) {
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        throw DomainError("build_cycle: tau must be finite and > 0");
    }
    const PulseElement pulse{pi_pulse_y()};
    switch (kind) {
        case SequenceKind::Unprotected:
            return {{SegmentElement{SegmentKind::Drive, tau}}, tau};
        case SequenceKind::CpmgLike:
            return {{pulse, SegmentElement{SegmentKind::FreeNoise, tau}, pulse, SegmentElement{SegmentKind::Drive, tau}},
                    2.0 * tau};
        case SequenceKind::Cpmg:
            return {{SegmentElement{SegmentKind::Drive, 0.5 * tau}, pulse, SegmentElement{SegmentKind::FreeNoise, tau},
                     pulse, SegmentElement{SegmentKind::Drive, 0.5 * tau}},
                    2.0 * tau};
    }
    throw DomainError("build_cycle: unknown sequence kind");
}

void SequenceSpec::validate() const {
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        throw DomainError("sequence tau must be finite and > 0");
    }
    if (cycles < 1) {
        throw DomainError("sequence needs at least one cycle");
    }
}

double SequenceSpec::cycle_duration() const {
    return kind == SequenceKind::Unprotected ? tau : 2.0 * tau;
}

double SequenceSpec::wall_time() const {
    return cycles * cycle_duration();
}

double SequenceSpec::effective_time() const {
    return cycles * tau;
}

PiecewiseSchedule::PiecewiseSchedule(std::vector<ScheduleItem> items) : items_(std::move(items)) {
    double sum = 0.0;
    double carry = 0.0;
    for (const auto &item : items_) {
        if (const auto *piece = std::get_if<SchedulePiece>(&item)) {
            if (!(piece->duration > 0.0) || !std::isfinite(piece->duration)) {
                throw DomainError("schedule piece duration must be finite and > 0");
            }
            double y = piece->duration - carry;
            double t = sum + y;
            carry = (t - sum) - y;
            sum = t;
        }
    }
    wall_time_ = sum;
}

bool PiecewiseSchedule::has_pulses() const {
    return std::any_of(items_.begin(), items_.end(),
                       [](const ScheduleItem &i) { return std::holds_alternative<SchedulePulse>(i); });
}

std::size_t PiecewiseSchedule::piece_count() const {
    return static_cast<std::size_t>(std::count_if(
        items_.begin(), items_.end(), [](const ScheduleItem &i) { return std::holds_alternative<SchedulePiece>(i); }));
}

namespace {

PiecewiseSchedule compile_cycles(const CycleSpec &cycle, int cycles, const PTParams &p,
                                 const NoiseTrajectory &detuning, const NoiseTrajectory &loss_shift) {
    const double wall = cycles * cycle.duration;
    for (const NoiseTrajectory *traj : {&detuning, &loss_shift}) {
        if (traj->duration() < wall * (1.0 - 1e-12)) {
            throw RangeError("compile_schedule: noise trajectory covers " + std::to_string(traj->duration()) +
                             " s but the schedule needs " + std::to_string(wall) + " s");
        }
    }

    // Segment end offsets within one cycle; the last one is pinned to the
    // cycle duration so consecutive cycles tile exactly.
    std::vector<double> seg_start;
    std::vector<double> seg_end;
    double offset = 0.0;
    std::size_t last_segment = 0;
    for (std::size_t i = 0; i < cycle.elements.size(); ++i) {
        if (const auto *seg = std::get_if<SegmentElement>(&cycle.elements[i])) {
            seg_start.push_back(offset);
            offset += seg->duration;
            seg_end.push_back(offset);
            last_segment = seg_end.size() - 1;
        } else {
            seg_start.push_back(offset);
            seg_end.push_back(offset);
        }
    }
    if (!seg_end.empty()) {
        seg_end[last_segment] = cycle.duration;
    }

    std::vector<ScheduleItem> items;
    std::vector<double> cuts;
    for (int c = 0; c < cycles; ++c) {
        const double base = c * cycle.duration;
        for (std::size_t i = 0; i < cycle.elements.size(); ++i) {
            const auto &element = cycle.elements[i];
            if (const auto *pulse = std::get_if<PulseElement>(&element)) {
                items.emplace_back(SchedulePulse{pulse->op});
                continue;
            }
            const auto &seg = std::get<SegmentElement>(element);
            const double a = base + seg_start[i];
            const double b = (i == last_segment) ? (c + 1) * cycle.duration : base + seg_end[i];
            cuts.clear();
            cuts.push_back(a);
            for (const NoiseTrajectory *traj : {&detuning, &loss_shift}) {
                auto bps = traj->breakpoints_in(a, b);
                cuts.insert(cuts.end(), bps.begin(), bps.end());
            }
            cuts.push_back(b);
            std::sort(cuts.begin(), cuts.end());
            cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
            for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
                const double mid = 0.5 * (cuts[k] + cuts[k + 1]);
                NoiseFields fields;
                fields.detuning = detuning.value_at(std::min(mid, detuning.duration()));
                fields.loss_shift = loss_shift.value_at(std::min(mid, loss_shift.duration()));
                Operator2 gen = seg.kind == SegmentKind::Drive ? h_total(p, fields) : h_noise(fields);
                items.emplace_back(SchedulePiece{gen, cuts[k + 1] - cuts[k], seg.kind});
            }
        }
    }
    return PiecewiseSchedule(std::move(items));
}

void require_pulse_free(const PiecewiseSchedule &s, const char *op) {
    if (s.has_pulses()) {
        throw DomainError(std::string(op) + ": schedule still contains pulses; apply toggle_frame first");
    }
    if (!(s.wall_time() > 0.0)) {
        throw DomainError(std::string(op) + ": schedule has zero total duration");
    }
}

}  // namespace

PiecewiseSchedule compile_schedule(const SequenceSpec &seq, const PTParams &p, const NoiseTrajectory &detuning,
                                   const NoiseTrajectory &loss_shift) {
    seq.validate();
    return compile_cycles(build_cycle(seq.kind, seq.tau), seq.cycles, p, detuning, loss_shift);
}

ToggledSchedule toggle_frame(const PiecewiseSchedule &sched) {
    Operator2 q = Operator2::identity();
    std::vector<ScheduleItem> out;
    out.reserve(sched.items().size());
    for (const auto &item : sched.items()) {
        if (const auto *pulse = std::get_if<SchedulePulse>(&item)) {
            if (!is_unitary(pulse->op)) {
                throw InvalidPulseError("toggle_frame: pulse is not unitary");
            }
            q = pulse->op * q;
        } else {
            const auto &piece = std::get<SchedulePiece>(item);
            out.emplace_back(SchedulePiece{q.adjoint() * piece.generator * q, piece.duration, piece.kind});
        }
    }
    return {PiecewiseSchedule(std::move(out)), q};
}

Operator2 magnus1(const PiecewiseSchedule &toggled) {
    require_pulse_free(toggled, "magnus1");
    Operator2 sum;
    for (const auto &item : toggled.items()) {
        const auto &piece = std::get<SchedulePiece>(item);
        sum += piece.generator * piece.duration;
    }
    return sum * (1.0 / toggled.wall_time());
}

Operator2 magnus2(const PiecewiseSchedule &toggled) {
    require_pulse_free(toggled, "magnus2");
    Operator2 earlier;  // sum of H_k t_k over pieces already passed
    Operator2 sum;
    for (const auto &item : toggled.items()) {
        const auto &piece = std::get<SchedulePiece>(item);
        Operator2 weighted = piece.generator * piece.duration;
        sum += commutator(weighted, earlier);
        earlier += weighted;
    }
    return sum / (2.0 * kImag * toggled.wall_time());
}

bool symmetry_check(const CycleSpec &cycle) {
    if (!(cycle.duration > 0.0)) {
        return true;
    }
    // Generic, mutually incommensurate values so no accidental commutation
    // hides an asymmetry.
    const double rate = 1.0 / cycle.duration;
    PTParams p(1.37 * rate, 0.41 * rate);
    auto detuning = NoiseTrajectory::constant(0.73 * rate, cycle.duration);
    auto loss_shift = NoiseTrajectory::constant(0.29 * rate, cycle.duration);
    auto toggled = toggle_frame(compile_cycles(cycle, 1, p, detuning, loss_shift)).schedule;

    std::vector<SchedulePiece> pieces;
    for (const auto &item : toggled.items()) {
        const auto &piece = std::get<SchedulePiece>(item);
        if (!pieces.empty() && max_abs_diff(pieces.back().generator, piece.generator) <= 1e-12 * rate) {
            pieces.back().duration += piece.duration;
        } else {
            pieces.push_back(piece);
        }
    }
    for (std::size_t i = 0, j = pieces.size(); i < j--; ++i) {
        if (std::abs(pieces[i].duration - pieces[j].duration) > 1e-12 * cycle.duration ||
            max_abs_diff(pieces[i].generator, pieces[j].generator) > 1e-12 * rate) {
            return false;
        }
    }
    return true;
}

namespace {

std::string fmt_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x + 0.0);
    return buf;
}

void write_entries(std::ostream &out, const Operator2 &m) {
    for (cplx z : {m.a00, m.a01, m.a10, m.a11}) {
        out << ' ' << fmt_real(z.real()) << ' ' << fmt_real(z.imag());
    }
}

}  // namespace

std::string dump_schedule(const PiecewiseSchedule &sched) {
    std::ostringstream out;
    out << "schedule items=" << sched.items().size() << " pieces=" << sched.piece_count()
        << " wall_time=" << fmt_real(sched.wall_time()) << '\n';
    for (const auto &item : sched.items()) {
        if (const auto *pulse = std::get_if<SchedulePulse>(&item)) {
            out << "pulse";
            write_entries(out, pulse->op);
        } else {
            const auto &piece = std::get<SchedulePiece>(item);
            out << "segment " << (piece.kind == SegmentKind::Drive ? "drive" : "free") << ' '
                << fmt_real(piece.duration);
            write_entries(out, piece.generator);
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace ptdd
