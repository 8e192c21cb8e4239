// Copyright 2026 The mzqfi Authors
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

/**
 * @file
 * Named invariant checks run by `mzqfi validate`.
 */

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mzqfi/analytic.hpp"
#include "mzqfi/types.hpp"

namespace mzqfi::validation {

enum class Level { Fast, Full };

Level parse_level(const std::string& s);

struct CheckResult {
    std::string name;
    bool passed = false;
    double measured = 0;   ///< worst deviation observed
    double tolerance = 0;
    std::string detail;
};

struct ValidationOptions {
    Level level = Level::Fast;
    analytic::AssemblyFault fault = analytic::AssemblyFault::None;
    int jobs = 1;
    Tolerances tol{};
};

/// Runs every check for the level. Each result is also written to `log` as it
/// completes when non-null.
std::vector<CheckResult> run_validation(const ValidationOptions& opts, std::ostream* log = nullptr);

void print_result(std::ostream& os, const CheckResult& r);

} // namespace mzqfi::validation
