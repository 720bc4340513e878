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

#ifndef PTDD_MODEL_H_
#define PTDD_MODEL_H_

#include <string_view>

#include "ptdd/linalg.h"

namespace ptdd {

/// Coupling strength J and effective loss parameter Gamma, both in rad/s
/// and both non-negative.
class PTParams {
   public:
    /// Throws DomainError for negative or non-finite values.
    PTParams(double coupling, double loss);

    double coupling() const {
        return coupling_;
    }
    double loss() const {
        return loss_;
    }

   private:
    double coupling_;
    double loss_;
};

/// Instantaneous values of the environmental fields, rad/s.
struct NoiseFields {
    double detuning = 0.0;    ///< beta, couples to I_z
    double loss_shift = 0.0;  ///< delta_Gamma, fluctuation of the dissipative beam
    double transverse = 0.0;  ///< alpha, couples to I_x; held at zero by every experiment here
};

/// 2i*Gamma*I_z + 2J*I_x
Operator2 h_pt(const PTParams &p);

/// The loss-only form h_pt(p) - i*Gamma*I = 2J*I_x - 2i*Gamma*|1><1|.
Operator2 h_pt_passive(const PTParams &p);

/// [2i*dG + 2*beta] I_z + alpha*I_x - i*dG*I
Operator2 h_noise(const NoiseFields &n);

/// h_pt_passive(p) + h_noise(n)
Operator2 h_total(const PTParams &p, const NoiseFields &n);

/// sigma_x * conj(H) * sigma_x. A Hamiltonian is PT-symmetric when this
/// returns H itself.
Operator2 pt_transform(const Operator2 &h);

enum class PTPhase { SymmetryPreserving, ExceptionalPoint, SymmetryBroken };

/// Relative tolerance on |Gamma - J| / J for calling a point exceptional.
inline constexpr double kExceptionalPointTolerance = 1e-12;

PTPhase classify_phase(const PTParams &p);
std::string_view to_string(PTPhase phase);

/// Duration of the faster-than-Hermitian NOT gate,
///   (pi - 2 asin(Gamma/J)) / (2J sqrt(1 - (Gamma/J)^2)).
/// DomainError unless the point is in the symmetry-preserving phase.
double not_gate_time(const PTParams &p);

/// Period pi / sqrt(J^2 - Gamma^2) of the normalized ideal density matrix.
/// DomainError unless the point is in the symmetry-preserving phase.
double ideal_period(const PTParams &p);

/// exp(-i*pi*I_y) = [[0, -1], [1, 0]], the instantaneous decoupling pulse.
Operator2 pi_pulse_y();

}  // namespace ptdd

#endif  // PTDD_MODEL_H_
