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

#include "ptdd/linalg.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "ptdd/errors.h"

namespace ptdd {

Operator2 sigma_x() {
    return {0.0, 1.0, 1.0, 0.0};
}
Operator2 sigma_y() {
    return {0.0, -kImag, kImag, 0.0};
}
Operator2 sigma_z() {
    return {1.0, 0.0, 0.0, -1.0};
}
Operator2 spin_x() {
    return 0.5 * sigma_x();
}
Operator2 spin_y() {
    return 0.5 * sigma_y();
}
Operator2 spin_z() {
    return 0.5 * sigma_z();
}

double StateVec2::norm() const {
    return std::sqrt(std::norm(c0) + std::norm(c1));
}

Operator2 outer(const StateVec2 &a, const StateVec2 &b) {
    return {a.c0 * std::conj(b.c0), a.c0 * std::conj(b.c1), a.c1 * std::conj(b.c0), a.c1 * std::conj(b.c1)};
}

double frobenius_norm(const Operator2 &a) {
    return std::sqrt(std::norm(a.a00) + std::norm(a.a01) + std::norm(a.a10) + std::norm(a.a11));
}

double max_abs_entry(const Operator2 &a) {
    return std::max({std::abs(a.a00), std::abs(a.a01), std::abs(a.a10), std::abs(a.a11)});
}

double max_abs_diff(const Operator2 &a, const Operator2 &b) {
    return max_abs_entry(a - b);
}

bool is_finite(const Operator2 &a) {
    for (cplx z : {a.a00, a.a01, a.a10, a.a11}) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            return false;
        }
    }
    return true;
}

bool is_unitary(const Operator2 &a, double tol) {
    return max_abs_diff(a.adjoint() * a, Operator2::identity()) <= tol;
}

double spectral_norm(const Operator2 &a) {
    double f2 = std::norm(a.a00) + std::norm(a.a01) + std::norm(a.a10) + std::norm(a.a11);
    double d = std::abs(a.det());
    double disc = std::max(0.0, f2 * f2 - 4.0 * d * d);
    return std::sqrt(0.5 * (f2 + std::sqrt(disc)));
}

std::pair<cplx, cplx> eigenvalues(const Operator2 &a) {
    cplx half_trace = 0.5 * a.trace();
    cplx root = std::sqrt(half_trace * half_trace - a.det());
    return {half_trace + root, half_trace - root};
}

PauliCoefficients pauli_decompose(const Operator2 &a) {
    return {
        0.5 * (a.a00 + a.a11),
        0.5 * (a.a01 + a.a10),
        0.5 * kImag * (a.a01 - a.a10),
        0.5 * (a.a00 - a.a11),
    };
}

Operator2 pauli_recompose(const PauliCoefficients &c) {
    return {c.c0 + c.cz, c.cx - kImag * c.cy, c.cx + kImag * c.cy, c.c0 - c.cz};
}

namespace {

void require_finite(const Operator2 &a, double t, const char *op) {
    if (!is_finite(a) || !std::isfinite(t)) {
        throw DomainError(std::string(op) + ": non-finite input");
    }
}

}  // namespace

namespace detail {

Operator2 expm_closed_branch(const Operator2 &a, double t, bool negate_root) {
    require_finite(a, t, "expm_closed");
    PauliCoefficients c = pauli_decompose(a);
    cplx lambda_sq = c.cx * c.cx + c.cy * c.cy + c.cz * c.cz;
    cplx x_sq = lambda_sq * (t * t);

    // cos(lambda t) and sin(lambda t)/lambda are even in lambda, so only
    // lambda^2 enters the series branch.
    cplx cos_term;
    cplx sinc_t;
    // Growth factor e^shift moved from cos/sin into the phase so that large
    // but cancelling exponents (strong loss) do not overflow.
    double shift = 0.0;
    if (std::abs(x_sq) < kExpmSeriesThreshold * kExpmSeriesThreshold) {
        cos_term = 1.0 - x_sq / 2.0 + x_sq * x_sq / 24.0;
        sinc_t = t * (1.0 - x_sq / 6.0 + x_sq * x_sq / 120.0);
    } else {
        cplx lambda = std::sqrt(lambda_sq);
        if (negate_root) {
            lambda = -lambda;
        }
        cplx z = lambda * t;
        if (std::abs(z.imag()) > 1.0) {
            shift = std::abs(z.imag());
            cplx up = std::exp(kImag * z - shift);
            cplx down = std::exp(-kImag * z - shift);
            cos_term = 0.5 * (up + down);
            sinc_t = (up - down) / (2.0 * kImag * lambda);
        } else {
            cos_term = std::cos(z);
            sinc_t = std::sin(z) / lambda;
        }
    }

    cplx phase = std::exp(-kImag * c.c0 * t + shift);
    cplx k = -kImag * sinc_t;
    Operator2 out{
        phase * (cos_term + k * c.cz),
        phase * (k * (c.cx - kImag * c.cy)),
        phase * (k * (c.cx + kImag * c.cy)),
        phase * (cos_term - k * c.cz),
    };
    if (!is_finite(out)) {
        throw DomainError("expm_closed: result overflowed");
    }
    return out;
}

}  // namespace detail

Operator2 expm_closed(const Operator2 &a, double t) {
    return detail::expm_closed_branch(a, t, false);
}

Operator2 expm_series(const Operator2 &a, double t) {
    require_finite(a, t, "expm_series");
    Operator2 x = (-kImag * t) * a;

    double norm1 = std::max(std::abs(x.a00) + std::abs(x.a10), std::abs(x.a01) + std::abs(x.a11));
    int squarings = 0;
    if (norm1 > 0.25) {
        squarings = static_cast<int>(std::ceil(std::log2(norm1 / 0.25)));
    }
    x *= cplx(std::ldexp(1.0, -squarings));

    Operator2 sum = Operator2::identity();
    Operator2 term = Operator2::identity();
    for (int k = 1; k <= 40; ++k) {
        term = (term * x) * cplx(1.0 / k);
        sum += term;
        if (max_abs_entry(term) <= 1e-18 * max_abs_entry(sum)) {
            break;
        }
    }
    for (int i = 0; i < squarings; ++i) {
        sum = sum * sum;
    }
    return sum;
}

double DensityMatrix2::purity() const {
    return (m_ * m_).trace().real();
}

double DensityMatrix2::hermiticity_residual() const {
    return max_abs_diff(m_, m_.adjoint());
}

double DensityMatrix2::min_eigenvalue() const {
    double a = m_.a00.real();
    double d = m_.a11.real();
    cplx b = 0.5 * (m_.a01 + std::conj(m_.a10));
    double half_gap = 0.5 * (a - d);
    return 0.5 * (a + d) - std::sqrt(half_gap * half_gap + std::norm(b));
}

bool DensityMatrix2::is_valid(double tol) const {
    return std::abs(m_.trace() - 1.0) <= tol && hermiticity_residual() <= tol && min_eigenvalue() >= -tol;
}

DensityMatrix2 dm_normalize(const Operator2 &m) {
    cplx tr = m.trace();
    if (!(std::abs(tr) >= 1e-300)) {
        throw DegenerateStateError("dm_normalize: trace vanished (total population loss)");
    }
    return DensityMatrix2(m / tr);
}

DensityMatrix2 dm_from_state(const StateVec2 &psi) {
    return dm_normalize(outer(psi, psi));
}

}  // namespace ptdd
