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

// Command-line front end: one JSON config per run plus a few overrides.

#include <iosfwd>
#include <string>
#include <vector>

namespace liouville {

/// Exit codes of run_cli.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

/// Runs `liouville CONFIG [--seed N] [--out-dir DIR] [--threads N]`.
/// `args` excludes the program name. Progress and the list of written files
/// go to `out` as JSON; failures go to `err` as {"error": kind, "message": ...}.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace liouville
