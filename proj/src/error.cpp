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

#include "liouville/error.hpp"

namespace liouville {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Domain: return "domain";
        case ErrorKind::Parameter: return "parameter";
        case ErrorKind::Unsupported: return "unsupported";
        case ErrorKind::NumericalBlowup: return "numerical_blowup";
        case ErrorKind::SchemeFailure: return "scheme_failure";
        case ErrorKind::Conservation: return "conservation";
        case ErrorKind::FitDegenerate: return "fit_degenerate";
        case ErrorKind::OutOfRange: return "out_of_range";
        case ErrorKind::EmptyEnsemble: return "empty_ensemble";
        case ErrorKind::Config: return "config";
    }
    return "unknown";
}

void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

}  // namespace liouville
