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

#ifndef PTDD_LINALG_H_
#define PTDD_LINALG_H_

#include <complex>
#include <utility>

namespace ptdd {

using cplx = std::complex<double>;

inline constexpr cplx kImag{0.0, 1.0};

/// Dense 2x2 complex matrix, row-major entries. Hamiltonians, propagators,
/// pulses and (unnormalized) density matrices are all stored this way.
struct Operator2 {
    cplx a00{};
    cplx a01{};
    cplx a10{};
    cplx a11{};

    static Operator2 identity() {
        return {1.0, 0.0, 0.0, 1.0};
    }
    static Operator2 zero() {
        return {};
    }

    Operator2 adjoint() const {
        return {std::conj(a00), std::conj(a10), std::conj(a01), std::conj(a11)};
    }
    Operator2 conj() const {
        return {std::conj(a00), std::conj(a01), std::conj(a10), std::conj(a11)};
    }
    cplx trace() const {
        return a00 + a11;
    }
    cplx det() const {
        return a00 * a11 - a01 * a10;
    }

    Operator2 &operator+=(const Operator2 &o) {
        a00 += o.a00;
        a01 += o.a01;
        a10 += o.a10;
        a11 += o.a11;
        return *this;
    }
    Operator2 &operator-=(const Operator2 &o) {
        a00 -= o.a00;
        a01 -= o.a01;
        a10 -= o.a10;
        a11 -= o.a11;
        return *this;
    }
    Operator2 &operator*=(cplx s) {
        a00 *= s;
        a01 *= s;
        a10 *= s;
        a11 *= s;
        return *this;
    }

    bool operator==(const Operator2 &) const = default;
};

inline Operator2 operator+(Operator2 a, const Operator2 &b) {
    return a += b;
}
inline Operator2 operator-(Operator2 a, const Operator2 &b) {
    return a -= b;
}
inline Operator2 operator-(const Operator2 &a) {
    return {-a.a00, -a.a01, -a.a10, -a.a11};
}
inline Operator2 operator*(Operator2 a, cplx s) {
    return a *= s;
}
inline Operator2 operator*(cplx s, Operator2 a) {
    return a *= s;
}
inline Operator2 operator*(Operator2 a, double s) {
    return a *= cplx(s);
}
inline Operator2 operator*(double s, Operator2 a) {
    return a *= cplx(s);
}
inline Operator2 operator/(Operator2 a, cplx s) {
    return a *= (1.0 / s);
}
inline Operator2 operator*(const Operator2 &a, const Operator2 &b) {
    return {a.a00 * b.a00 + a.a01 * b.a10, a.a00 * b.a01 + a.a01 * b.a11,
            a.a10 * b.a00 + a.a11 * b.a10, a.a10 * b.a01 + a.a11 * b.a11};
}

inline Operator2 commutator(const Operator2 &a, const Operator2 &b) {
    return a * b - b * a;
}

/// Pauli matrices.
Operator2 sigma_x();
Operator2 sigma_y();
Operator2 sigma_z();

/// Spin-1/2 angular momentum operators, I_k = sigma_k / 2.
Operator2 spin_x();
Operator2 spin_y();
Operator2 spin_z();

/// Two amplitudes over the basis {|0>, |1>}; never renormalized implicitly.
struct StateVec2 {
    cplx c0{};
    cplx c1{};

    double norm() const;
    bool operator==(const StateVec2 &) const = default;
};

inline StateVec2 operator*(const Operator2 &a, const StateVec2 &v) {
    return {a.a00 * v.c0 + a.a01 * v.c1, a.a10 * v.c0 + a.a11 * v.c1};
}

/// |a><b|
Operator2 outer(const StateVec2 &a, const StateVec2 &b);

double frobenius_norm(const Operator2 &a);
double max_abs_entry(const Operator2 &a);
double max_abs_diff(const Operator2 &a, const Operator2 &b);
bool is_finite(const Operator2 &a);
bool is_unitary(const Operator2 &a, double tol = 1e-12);
/// Largest singular value.
double spectral_norm(const Operator2 &a);
/// Eigenvalues from the characteristic polynomial.
std::pair<cplx, cplx> eigenvalues(const Operator2 &a);

/// Coefficients of A = c0*I + cx*sigma_x + cy*sigma_y + cz*sigma_z.
struct PauliCoefficients {
    cplx c0{};
    cplx cx{};
    cplx cy{};
    cplx cz{};
};

PauliCoefficients pauli_decompose(const Operator2 &a);
Operator2 pauli_recompose(const PauliCoefficients &c);

/// |lambda t| below this uses the truncated series branch of expm_closed.
inline constexpr double kExpmSeriesThreshold = 1e-6;

/// exp(-i A t) in closed form via the Pauli split
///   exp(-i c0 t) [cos(lambda t) I - i sin(lambda t)/lambda (c.sigma)],
/// lambda^2 = cx^2 + cy^2 + cz^2 (complex). Works for non-Hermitian A,
/// including the nilpotent case lambda = 0. Throws DomainError on non-finite
/// input or when the result overflows.
Operator2 expm_closed(const Operator2 &a, double t);

/// exp(-i A t) by scaling and squaring of a Taylor sum. Independent of
/// expm_closed; used as its oracle.
Operator2 expm_series(const Operator2 &a, double t);

namespace detail {
/// expm_closed with an explicit choice of square-root branch for lambda
/// (`negate_root` picks -sqrt(lambda^2)). The result must not depend on it.
Operator2 expm_closed_branch(const Operator2 &a, double t, bool negate_root);
}  // namespace detail

/// Hermitian, unit-trace, positive semidefinite 2x2 matrix. Only obtainable
/// through dm_normalize / dm_from_state, so the unit trace always holds.
class DensityMatrix2 {
   public:
    const Operator2 &matrix() const {
        return m_;
    }
    /// Tr(rho^2).
    double purity() const;
    /// max |rho - rho^dagger| entrywise.
    double hermiticity_residual() const;
    /// Smaller eigenvalue of the Hermitian part.
    double min_eigenvalue() const;
    /// trace = 1, Hermitian and PSD, all within `tol`.
    bool is_valid(double tol = 1e-12) const;

   private:
    explicit DensityMatrix2(const Operator2 &m) : m_(m) {
    }
    friend DensityMatrix2 dm_normalize(const Operator2 &m);
    Operator2 m_;
};

/// M / Tr(M). Throws DegenerateStateError when |Tr M| < 1e-300 (total
/// population loss).
DensityMatrix2 dm_normalize(const Operator2 &m);

/// |psi><psi| / <psi|psi>.
DensityMatrix2 dm_from_state(const StateVec2 &psi);

}  // namespace ptdd

#endif  // PTDD_LINALG_H_
