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

#include "ptdd/model.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ptdd/errors.h"

namespace ptdd {

PTParams::PTParams(double coupling, double loss) : coupling_(coupling), loss_(loss) {
    if (!std::isfinite(coupling) || coupling < 0.0) {
        throw DomainError("coupling J must be finite and >= 0, got " + std::to_string(coupling));
    }
    if (!std::isfinite(loss) || loss < 0.0) {
        throw DomainError("loss Gamma must be finite and >= 0, got " + std::to_string(loss));
    }
}

Operator2 h_pt(const PTParams &p) {
    return (2.0 * kImag * p.loss()) * spin_z() + (2.0 * p.coupling()) * spin_x();
}

Operator2 h_pt_passive(const PTParams &p) {
    Operator2 h = h_pt(p);
    h.a00 -= kImag * p.loss();
    h.a11 -= kImag * p.loss();
    return h;
}

Operator2 h_noise(const NoiseFields &n) {
    Operator2 h = (2.0 * kImag * n.loss_shift + 2.0 * n.detuning) * spin_z() + n.transverse * spin_x();
    h.a00 -= kImag * n.loss_shift;
    h.a11 -= kImag * n.loss_shift;
    return h;
}

Operator2 h_total(const PTParams &p, const NoiseFields &n) {
    return h_pt_passive(p) + h_noise(n);
}

Operator2 pt_transform(const Operator2 &h) {
    return sigma_x() * h.conj() * sigma_x();
}

PTPhase classify_phase(const PTParams &p) {
    double j = p.coupling();
    double g = p.loss();
    if (std::abs(g - j) <= kExceptionalPointTolerance * std::max(j, g)) {
        return PTPhase::ExceptionalPoint;
    }
    return g < j ? PTPhase::SymmetryPreserving : PTPhase::SymmetryBroken;
}

std::string_view to_string(PTPhase phase) {
    switch (phase) {
        case PTPhase::SymmetryPreserving:
            return "symmetry-preserving";
        case PTPhase::ExceptionalPoint:
            return "exceptional-point";
        case PTPhase::SymmetryBroken:
            return "symmetry-broken";
    }
    return "unknown";
}

namespace {

void require_preserving(const PTParams &p, const char *what) {
    if (classify_phase(p) != PTPhase::SymmetryPreserving) {
        throw DomainError(std::string(what) + " requires J > Gamma (got J=" + std::to_string(p.coupling()) +
                          ", Gamma=" + std::to_string(p.loss()) + ")");
    }
}

}  // namespace

double not_gate_time(const PTParams &p) {
    require_preserving(p, "not_gate_time");
    double r = p.loss() / p.coupling();
    return (std::numbers::pi - 2.0 * std::asin(r)) / (2.0 * p.coupling() * std::sqrt(1.0 - r * r));
}

double ideal_period(const PTParams &p) {
    require_preserving(p, "ideal_period");
    double j = p.coupling();
    double g = p.loss();
    return std::numbers::pi / std::sqrt((j - g) * (j + g));
}

Operator2 pi_pulse_y() {
    return {0.0, -1.0, 1.0, 0.0};
}

}  // namespace ptdd
