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
 * The `mzqfi` command line: eval, scan, figure and validate subcommands.
 */

#pragma once

#include <iosfwd>
#include <optional>
#include <string>

namespace mzqfi::cli {

/// Stable process exit codes.
enum ExitCode : int {
    kOk = 0,
    kInternal = 1,
    kDomain = 2,
    kIo = 3,
    kValidation = 4,
};

struct CliConfig {
    std::string subcommand;
    double alpha = 0.3;
    double phi = 0.0;
    double omega = 0.0;
    double T = 1.0;
    std::optional<int> n_max;
    std::string method = "analytic";
    std::string out_path;  ///< empty: dataset goes to stdout
    std::string format = "csv";
    double tol_rank = 1e-12;
    double tol_tail = 1e-10;
    int jobs = 1;
    std::string figure;
    std::string level = "fast";
    std::string fault = "none";
};

/// Parses argv and runs the subcommand. Results go to `out`, summaries of
/// dataset commands and all diagnostics to `err` when the dataset itself is
/// written to `out`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace mzqfi::cli
