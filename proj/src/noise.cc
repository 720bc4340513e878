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

#include "ptdd/noise.h"

#include <cmath>
#include <random>
#include <string>

#include "ptdd/errors.h"

namespace ptdd {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Uniform on [0, 1) with 53 random bits.
double unit_interval(RandomStream &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

}  // namespace

void validate(const NoiseModel &model) {
    auto check_period = [](double period) {
        if (!(period > 0.0)) {
            throw DomainError("noise period must be > 0");
        }
    };
    std::visit(overloaded{
                   [](const ZeroNoise &) {},
                   [](const ConstantNoise &c) {
                       if (!std::isfinite(c.value)) {
                           throw DomainError("constant noise value must be finite");
                       }
                   },
                   [&](const GaussianNoise &g) {
                       if (!(g.sigma >= 0.0) || !std::isfinite(g.sigma)) {
                           throw DomainError("gaussian sigma must be finite and >= 0");
                       }
                       check_period(g.period);
                   },
                   [&](const UniformNoise &u) {
                       if (!(u.width >= 0.0) || !std::isfinite(u.width)) {
                           throw DomainError("uniform width must be finite and >= 0");
                       }
                       check_period(u.period);
                   },
               },
               model);
}

bool is_deterministic(const NoiseModel &model) {
    return std::holds_alternative<ZeroNoise>(model) || std::holds_alternative<ConstantNoise>(model);
}

RandomStream::result_type RandomStream::operator()() {
    return mix64(key_ ^ mix64(kGolden * ++counter_));
}

RandomStream trial_stream(const SeedPolicy &policy, std::uint64_t point, std::uint64_t trial, NoiseField field) {
    std::uint64_t k = mix64(policy.master_seed + kGolden);
    k = mix64(k ^ mix64(point + 0x632be59bd9b4e019ULL));
    k = mix64(k ^ mix64(trial + 0x8cb92ba72f3d8dd7ULL));
    k = mix64(k ^ mix64(static_cast<std::uint64_t>(field) * kGolden));
    return RandomStream(k);
}

NoiseTrajectory::NoiseTrajectory(double offset, double period, std::vector<double> values, double duration)
    : offset_(offset), period_(period), values_(std::move(values)), duration_(duration) {
    if (!(period_ > 0.0)) {
        throw DomainError("trajectory period must be > 0");
    }
    if (!(duration_ >= 0.0) || !std::isfinite(duration_)) {
        throw DomainError("trajectory duration must be finite and >= 0");
    }
    if (values_.empty()) {
        throw DomainError("trajectory needs at least one value");
    }
    if (std::isinf(period_)) {
        if (offset_ != 0.0) {
            throw DomainError("trajectory with infinite period must have zero offset");
        }
        return;
    }
    if (!(offset_ >= 0.0 && offset_ < period_)) {
        throw DomainError("trajectory offset must lie in [0, period)");
    }
    if (duration_ >= offset_) {
        double needed = std::floor((duration_ - offset_) / period_) + 2.0;
        if (static_cast<double>(values_.size()) < needed) {
            throw RangeError("trajectory values do not cover its duration");
        }
    }
}

NoiseTrajectory NoiseTrajectory::constant(double value, double duration) {
    return NoiseTrajectory(0.0, std::numeric_limits<double>::infinity(), {value}, duration);
}

double NoiseTrajectory::value_at(double t) const {
    if (!(t >= 0.0 && t <= duration_)) {
        throw RangeError("value_at: t=" + std::to_string(t) + " outside [0, " + std::to_string(duration_) + "]");
    }
    if (std::isinf(period_) || t < offset_) {
        return values_.front();
    }
    auto k = static_cast<std::size_t>(std::floor((t - offset_) / period_)) + 1;
    if (k >= values_.size()) {
        throw RangeError("value_at: t beyond sampled values");
    }
    return values_[k];
}

std::vector<double> NoiseTrajectory::breakpoints_in(double t0, double t1) const {
    std::vector<double> out;
    if (std::isinf(period_) || !(t1 > t0)) {
        return out;
    }
    double first = std::max(0.0, std::floor((t0 - offset_) / period_));
    for (double k = first;; k += 1.0) {
        double b = offset_ + k * period_;
        if (b <= t0) {
            continue;
        }
        if (b >= t1) {
            break;
        }
        out.push_back(b);
    }
    return out;
}

NoiseTrajectory sample_trajectory(const NoiseModel &model, double duration, RandomStream &rng) {
    validate(model);
    if (!(duration >= 0.0) || !std::isfinite(duration)) {
        throw DomainError("sample_trajectory: duration must be finite and >= 0");
    }
    constexpr double kInf = std::numeric_limits<double>::infinity();

    auto piecewise = [&](double period, auto &&draw) {
        if (std::isinf(period)) {
            return NoiseTrajectory(0.0, kInf, {draw()}, duration);
        }
        double offset = unit_interval(rng) * period;
        auto count = static_cast<std::size_t>(std::ceil((duration + offset) / period)) + 1;
        std::vector<double> values;
        values.reserve(count);
        for (std::size_t i = 0; i < count; ++i) {
            values.push_back(draw());
        }
        return NoiseTrajectory(offset, period, std::move(values), duration);
    };

    return std::visit(overloaded{
                          [&](const ZeroNoise &) { return NoiseTrajectory::constant(0.0, duration); },
                          [&](const ConstantNoise &c) { return NoiseTrajectory::constant(c.value, duration); },
                          [&](const GaussianNoise &g) {
                              std::normal_distribution<double> normal(0.0, g.sigma);
                              return piecewise(g.period, [&] { return g.sigma == 0.0 ? 0.0 : normal(rng); });
                          },
                          [&](const UniformNoise &u) {
                              return piecewise(u.period, [&] { return u.width * unit_interval(rng); });
                          },
                      },
                      model);
}

NoiseModel NoiseSpec::resolve(double tau) const {
    double period = period_in_tau * tau;
    NoiseModel model;
    switch (kind) {
        case Kind::Zero:
            model = ZeroNoise{};
            break;
        case Kind::Constant:
            model = ConstantNoise{scale};
            break;
        case Kind::Gaussian:
            model = GaussianNoise{scale, period};
            break;
        case Kind::Uniform:
            model = UniformNoise{scale, period};
            break;
    }
    validate(model);
    return model;
}

std::string_view to_string(NoiseSpec::Kind kind) {
    switch (kind) {
        case NoiseSpec::Kind::Zero:
            return "zero";
        case NoiseSpec::Kind::Constant:
            return "constant";
        case NoiseSpec::Kind::Gaussian:
            return "gaussian";
        case NoiseSpec::Kind::Uniform:
            return "uniform";
    }
    return "unknown";
}

}  // namespace ptdd
