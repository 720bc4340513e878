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

#ifndef PTDD_NOISE_H_
#define PTDD_NOISE_H_

#include <cstdint>
#include <limits>
#include <string_view>
#include <variant>
#include <vector>

namespace ptdd {

/// Identically zero field.
struct ZeroNoise {};

/// The same value at all times and in every trial.
struct ConstantNoise {
    double value = 0.0;
};

/// Zero-mean Gaussian samples, piecewise constant with the given period.
/// An infinite period draws one value per trial (quasi-static noise).
struct GaussianNoise {
    double sigma = 0.0;
    double period = std::numeric_limits<double>::infinity();
};

/// Samples uniform on [0, width], piecewise constant with the given period.
/// An infinite period draws one value per trial.
struct UniformNoise {
    double width = 0.0;
    double period = std::numeric_limits<double>::infinity();
};

using NoiseModel = std::variant<ZeroNoise, ConstantNoise, GaussianNoise, UniformNoise>;

/// Throws DomainError when sigma < 0, width < 0 or period <= 0.
void validate(const NoiseModel &model);

/// True for models whose trajectories do not consume randomness.
bool is_deterministic(const NoiseModel &model);

/// Counter-based generator: draw n of a stream is a pure function of
/// (key, n), so streams can be created anywhere and consumed in any order
/// without affecting each other. Satisfies UniformRandomBitGenerator.
class RandomStream {
   public:
    using result_type = std::uint64_t;

    explicit RandomStream(std::uint64_t key) : key_(key) {
    }

    static constexpr result_type min() {
        return 0;
    }
    static constexpr result_type max() {
        return std::numeric_limits<result_type>::max();
    }
    result_type operator()();

    std::uint64_t key() const {
        return key_;
    }
    std::uint64_t position() const {
        return counter_;
    }

   private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// Which stochastic field a stream feeds.
enum class NoiseField : std::uint8_t { Detuning = 1, LossShift = 2 };

struct SeedPolicy {
    std::uint64_t master_seed = 0;
};

/// Deterministic stream for one (parameter point, trial, field) triple.
RandomStream trial_stream(const SeedPolicy &policy, std::uint64_t point, std::uint64_t trial, NoiseField field);

/// One realization of a piecewise-constant field. values[0] holds on
/// [0, offset); values[k] on [offset + (k-1)*period, offset + k*period).
/// An infinite period means a single value for the whole duration.
class NoiseTrajectory {
   public:
    NoiseTrajectory(double offset, double period, std::vector<double> values, double duration);

    static NoiseTrajectory constant(double value, double duration);

    /// Right-continuous at breakpoints. RangeError outside [0, duration].
    double value_at(double t) const;

    /// Grid breakpoints strictly inside (t0, t1), ascending.
    std::vector<double> breakpoints_in(double t0, double t1) const;

    double offset() const {
        return offset_;
    }
    double period() const {
        return period_;
    }
    double duration() const {
        return duration_;
    }
    const std::vector<double> &values() const {
        return values_;
    }

   private:
    double offset_;
    double period_;
    std::vector<double> values_;
    double duration_;
};

/// Draws the grid offset uniformly from [0, period), then
/// ceil((duration + offset) / period) + 1 i.i.d. values. Draw order is
/// offset first, then values in time order, so a longer duration extends a
/// shorter one drawn from the same stream without changing its prefix.
NoiseTrajectory sample_trajectory(const NoiseModel &model, double duration, RandomStream &rng);

/// A noise model whose grid period is expressed in units of the sequence
/// spacing tau (the experiments use period = 2*tau). `scale` is the constant
/// value, the Gaussian sigma or the uniform width depending on `kind`.
struct NoiseSpec {
    enum class Kind { Zero, Constant, Gaussian, Uniform };

    Kind kind = Kind::Zero;
    double scale = 0.0;
    double period_in_tau = 2.0;

    NoiseModel resolve(double tau) const;
};

std::string_view to_string(NoiseSpec::Kind kind);

}  // namespace ptdd

#endif  // PTDD_NOISE_H_
