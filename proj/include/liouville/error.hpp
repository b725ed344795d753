/*
   Copyright 2026 The Liouville Lab Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace liouville {

enum class ErrorKind {
    Domain,          // argument outside the mathematical domain (e.g. t <= 0)
    Parameter,       // invalid model / distribution parameters
    Unsupported,     // operation not defined for this input
    NumericalBlowup, // non-finite state during integration
    SchemeFailure,   // negative densities in the FP solver
    Conservation,    // mass drift in the FP solver
    FitDegenerate,   // calibration data cannot identify the parameters
    OutOfRange,      // value has no preimage (e.g. T above the plateau)
    EmptyEnsemble,
    Config,          // malformed configuration
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Thrown by the characteristic and SDE integrators; carries the time at
/// which a non-finite state first appeared.
class NumericalBlowup : public Error {
public:
    NumericalBlowup(double time, const std::string& message)
        : Error(ErrorKind::NumericalBlowup, message), time_(time) {}

    double time() const noexcept { return time_; }

private:
    double time_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

inline void require(bool condition, ErrorKind kind, const std::string& message) {
    if (!condition) fail(kind, message);
}

}  // namespace liouville
