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
 * Parameter sweeps, phase-matching search, numeric-vs-analytic comparison and
 * the datasets behind the published figures.
 */

#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mzqfi/types.hpp"

namespace mzqfi::experiments {

enum class Method { Analytic, Numeric, Both };

const char* to_string(Method m);
Method parse_method(const std::string& s);

struct RunOptions {
    Tolerances tol{};
    std::optional<int> n_max;  ///< empty: default_n_max per (alpha, omega)
    int jobs = 1;
    /// Numeric evaluation is skipped for alpha above this in figure datasets.
    double numeric_alpha_limit = 1.5;
};

struct SweepGrid {
    std::vector<double> phi_grid;
    std::vector<double> omega_grid;
    std::vector<double> T_grid;
    std::vector<double> alpha_values;
    std::optional<int> n_max;
    Method method = Method::Analytic;

    /// Throws Error(Domain) naming the violated bound.
    void validate() const;
    std::size_t size() const {
        return phi_grid.size() * omega_grid.size() * T_grid.size() * alpha_values.size();
    }
};

struct SweepRecord {
    double alpha = 0;
    double phi = 0;
    double omega = 0;
    double T = 1;
    double F_analytic = 0;
    std::optional<double> F_numeric;
    std::optional<double> abs_err;
    std::optional<double> tail_mass;
    double N = 0;
    double N_sq = 0;

    bool operator==(const SweepRecord&) const = default;
};

/// 201 points -pi/2 + k pi/201 covering [-pi/2, pi/2).
std::vector<double> default_phi_grid(std::size_t points = 201);
/// 64 points k pi/64 covering [0, pi).
std::vector<double> default_omega_grid(std::size_t points = 64);
/// count evenly spaced values from lo to hi inclusive.
std::vector<double> linspace(double lo, double hi, std::size_t count);

/// Runs body(i) for i in [0, count) on up to `jobs` threads. Results must be
/// written to pre-sized, index-addressed storage.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& body);

/// One grid point: analytic always, numeric for Method::Numeric / Method::Both.
SweepRecord evaluate_point(double alpha, double phi, double omega, double T, Method method,
                           const RunOptions& opts);

/// Golden-section maximization on [lo, hi] to the given abscissa tolerance.
double golden_section_max(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-6);

struct PhiScan {
    std::vector<SweepRecord> curve;
    double phi_m = 0;
    double F_max = 0;
};

/// QFI along phi_grid; phi_m is the coarse argmax refined by golden-section
/// search on its bracketing neighbours. The objective is the numeric QFI for
/// Method::Numeric, otherwise the analytic one.
PhiScan scan_phi(double alpha, double omega, double T, const std::vector<double>& phi_grid, Method method,
                 const RunOptions& opts);

enum class FigureId { Fig1a, Fig1b, Fig1c, Fig2a, Fig2b, Fig2c };

const char* to_string(FigureId id);
FigureId parse_figure(const std::string& s);

struct DatasetMeta {
    std::string figure;
    std::vector<double> alpha_values;
    std::vector<double> phi_grid;
    std::vector<double> omega_grid;
    std::vector<double> T_grid;
    std::optional<int> n_max;
    bool numeric = false;
    Tolerances tol{};
    std::string version;
};

struct Dataset {
    DatasetMeta meta;
    std::vector<SweepRecord> records;
};

Dataset figure_dataset(FigureId id, const RunOptions& opts);

struct ComparisonReport {
    std::vector<SweepRecord> records;
    double max_abs_err = 0;
    std::optional<SweepRecord> worst;  ///< record achieving max_abs_err
};

/// Evaluates every grid point with both methods. Truncation errors surface as
/// Error(TailTooLarge) naming alpha and n_max.
ComparisonReport compare_numeric_analytic(const SweepGrid& grid, const RunOptions& opts);

struct LossSensitivityRow {
    double T = 1;
    double F_m = 0;
    double ratio_to_lossless = 1;
    double N = 0;
    double N_sq = 0;
    bool beats_sql = false;         ///< F_m > N
    bool beats_heisenberg = false;  ///< F_m > N^2
};

struct LossSensitivityReport {
    double alpha = 0;
    double omega = 0;
    std::vector<LossSensitivityRow> rows;  ///< T = 0.6, 0.7, 0.8, 0.9, 1.0
    double ratio_T09 = 0;                  ///< F_m(T=0.9) / F_m(T=1)
};

LossSensitivityReport loss_sensitivity_report(double alpha, double omega = 0.0);

// Serialization. CSV header:
// alpha,phi,omega,T,F_analytic,F_numeric,abs_err,tail_mass,N,N_sq
// with empty fields for absent values; numbers carry 17 significant digits.

std::string format_double(double v);
void write_csv(std::ostream& os, const std::vector<SweepRecord>& records);
std::vector<SweepRecord> read_csv(std::istream& is);
void write_json(std::ostream& os, const Dataset& ds);
Dataset read_json(std::istream& is);

/// Library version string embedded in dataset metadata.
const char* artifact_version();

} // namespace mzqfi::experiments
