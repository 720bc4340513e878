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

#ifndef PTDD_ERRORS_H_
#define PTDD_ERRORS_H_

#include <stdexcept>
#include <string>

namespace ptdd {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Input outside the mathematical domain of an operation (e.g. a NOT gate
/// requested at or past the exceptional point, non-finite matrix entries).
class DomainError : public Error {
   public:
    using Error::Error;
};

/// Query outside the covered range of a trajectory or schedule.
class RangeError : public Error {
   public:
    using Error::Error;
};

/// The state lost (numerically) all of its population.
class DegenerateStateError : public Error {
   public:
    using Error::Error;
};

/// A pulse handed to the toggling-frame transform is not unitary.
class InvalidPulseError : public Error {
   public:
    using Error::Error;
};

/// Malformed experiment configuration. `line()` is 0 when the problem is not
/// tied to a particular line of the config document.
class ConfigError : public Error {
   public:
    explicit ConfigError(const std::string &message, int line = 0)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + message : message), line_(line) {
    }
    int line() const {
        return line_;
    }

   private:
    int line_;
};

}  // namespace ptdd

#endif  // PTDD_ERRORS_H_
