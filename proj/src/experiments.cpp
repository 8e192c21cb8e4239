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

#include "mzqfi/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "mzqfi/analytic.hpp"
#include "mzqfi/simulate.hpp"

namespace mzqfi::experiments {

namespace {

constexpr double kPi = constants::pi<double>;

void check_sorted(const std::vector<double>& v, const char* name) {
    if (v.empty()) throw Error(ErrorCode::Domain, std::string(name) + " must not be empty");
    if (!std::is_sorted(v.begin(), v.end())) throw Error(ErrorCode::Domain, std::string(name) + " must be sorted");
}

/// {first/10, ..., last/10} without accumulated rounding.
std::vector<double> tenths(int first, int last) {
    std::vector<double> g;
    for (int k = first; k <= last; ++k) g.push_back(k / 10.0);
    return g;
}

int numeric_cutoff(double alpha, double omega, const RunOptions& opts) {
    return opts.n_max ? *opts.n_max : default_n_max(alpha, omega, opts.tol.tail);
}

} // namespace

const char* to_string(Method m) {
    switch (m) {
    case Method::Analytic: return "analytic";
    case Method::Numeric: return "numeric";
    case Method::Both: return "both";
    }
    return "analytic";
}

Method parse_method(const std::string& s) {
    if (s == "analytic") return Method::Analytic;
    if (s == "numeric") return Method::Numeric;
    if (s == "both") return Method::Both;
    throw Error(ErrorCode::Domain, "method must be one of analytic, numeric, both");
}

void SweepGrid::validate() const {
    check_sorted(phi_grid, "phi grid");
    check_sorted(omega_grid, "omega grid");
    check_sorted(T_grid, "T grid");
    check_sorted(alpha_values, "alpha values");
    if (phi_grid.front() < -kPi / 2 || phi_grid.back() >= kPi / 2) {
        throw Error(ErrorCode::Domain, "phi must lie in [-pi/2, pi/2)");
    }
    if (omega_grid.front() < 0 || omega_grid.back() >= kPi) throw Error(ErrorCode::Domain, "omega must lie in [0, pi)");
    if (T_grid.front() < 0 || T_grid.back() > 1) throw Error(ErrorCode::Domain, "T must lie in [0,1]");
    if (alpha_values.front() < 0) throw Error(ErrorCode::Domain, "alpha must be non-negative");
    if (n_max && *n_max < 0) throw Error(ErrorCode::Domain, "n_max must be non-negative");
}

std::vector<double> default_phi_grid(std::size_t points) {
    std::vector<double> g(points);
    for (std::size_t k = 0; k < points; ++k) g[k] = -kPi / 2 + kPi * static_cast<double>(k) / static_cast<double>(points);
    return g;
}

std::vector<double> default_omega_grid(std::size_t points) {
    std::vector<double> g(points);
    for (std::size_t k = 0; k < points; ++k) g[k] = kPi * static_cast<double>(k) / static_cast<double>(points);
    return g;
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
    std::vector<double> g(count);
    if (count == 1) {
        g[0] = lo;
        return g;
    }
    for (std::size_t k = 0; k < count; ++k) {
        g[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(count - 1);
    }
    g.back() = hi;
    return g;
}

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& body) {
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), count));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = count;
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

SweepRecord evaluate_point(double alpha, double phi, double omega, double T, Method method, const RunOptions& opts) {
    SweepRecord rec;
    rec.alpha = alpha;
    rec.phi = phi;
    rec.omega = omega;
    rec.T = T;
    rec.F_analytic = analytic::qfi_lossy(alpha, phi, omega, T, opts.tol.basis, opts.tol.cat);
    rec.N = analytic::total_photon_number(alpha, omega, opts.tol.cat);
    rec.N_sq = rec.N * rec.N;
    if (method == Method::Analytic) return rec;

    const int n_max = numeric_cutoff(alpha, omega, opts);
    try {
        const auto res = qfi_numeric(alpha, phi, omega, T, FockCutoff::checked(n_max), opts.tol);
        rec.F_numeric = res.value;
        rec.tail_mass = res.tail_mass;
        rec.abs_err = std::abs(rec.F_analytic - res.value);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::TailTooLarge) throw;
        throw Error(ErrorCode::TailTooLarge, "alpha=" + format_double(alpha) + " n_max=" + std::to_string(n_max) +
                                                 ": " + e.what());
    }
    return rec;
}

double golden_section_max(const std::function<double(double)>& f, double lo, double hi, double tol) {
    const double inv_phi = (std::sqrt(5.0) - 1) / 2;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > tol) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return (a + b) / 2;
}

PhiScan scan_phi(double alpha, double omega, double T, const std::vector<double>& phi_grid, Method method,
                 const RunOptions& opts) {
    SweepGrid grid{phi_grid, {omega}, {T}, {alpha}, opts.n_max, method};
    grid.validate();
    PhiScan scan;
    scan.curve.resize(phi_grid.size());
    parallel_for(phi_grid.size(), opts.jobs, [&](std::size_t i) {
        scan.curve[i] = evaluate_point(alpha, phi_grid[i], omega, T, method, opts);
    });
    const bool numeric_objective = method == Method::Numeric;
    auto value = [&](const SweepRecord& r) { return numeric_objective ? *r.F_numeric : r.F_analytic; };
    std::size_t best = 0;
    for (std::size_t i = 1; i < scan.curve.size(); ++i) {
        if (value(scan.curve[i]) > value(scan.curve[best])) best = i;
    }
    auto objective = [&](double phi) {
        if (!numeric_objective) return analytic::qfi_lossy(alpha, phi, omega, T, opts.tol.basis, opts.tol.cat);
        return *evaluate_point(alpha, phi, omega, T, Method::Numeric, opts).F_numeric;
    };
    if (phi_grid.size() < 2) {
        scan.phi_m = phi_grid[best];
        scan.F_max = value(scan.curve[best]);
        return scan;
    }
    const double lo = phi_grid[best == 0 ? 0 : best - 1];
    const double hi = phi_grid[std::min(best + 1, phi_grid.size() - 1)];
    scan.phi_m = golden_section_max(objective, lo, hi, 1e-6);
    scan.F_max = objective(scan.phi_m);
    if (scan.F_max < value(scan.curve[best])) {
        scan.phi_m = phi_grid[best];
        scan.F_max = value(scan.curve[best]);
    }
    return scan;
}

const char* to_string(FigureId id) {
    switch (id) {
    case FigureId::Fig1a: return "fig1a";
    case FigureId::Fig1b: return "fig1b";
    case FigureId::Fig1c: return "fig1c";
    case FigureId::Fig2a: return "fig2a";
    case FigureId::Fig2b: return "fig2b";
    case FigureId::Fig2c: return "fig2c";
    }
    return "fig1a";
}

FigureId parse_figure(const std::string& s) {
    for (auto id : {FigureId::Fig1a, FigureId::Fig1b, FigureId::Fig1c, FigureId::Fig2a, FigureId::Fig2b, FigureId::Fig2c}) {
        if (s == to_string(id)) return id;
    }
    throw Error(ErrorCode::Domain, "figure must be one of fig1a, fig1b, fig1c, fig2a, fig2b, fig2c");
}

Dataset figure_dataset(FigureId id, const RunOptions& opts) {
    Dataset ds;
    ds.meta.figure = to_string(id);
    ds.meta.n_max = opts.n_max;
    ds.meta.tol = opts.tol;
    ds.meta.version = artifact_version();

    switch (id) {
    case FigureId::Fig1a:
    case FigureId::Fig1b: {
        const double alpha = 0.3;
        const double omega = id == FigureId::Fig1a ? 0.0 : 6 * kPi / 7;
        ds.meta.alpha_values = {alpha};
        ds.meta.omega_grid = {omega};
        ds.meta.T_grid = tenths(1, 10);
        ds.meta.phi_grid = default_phi_grid();
        ds.meta.numeric = alpha <= opts.numeric_alpha_limit;
        const Method method = ds.meta.numeric ? Method::Both : Method::Analytic;
        const std::size_t nphi = ds.meta.phi_grid.size();
        ds.records.resize(ds.meta.T_grid.size() * nphi);
        parallel_for(ds.records.size(), opts.jobs, [&](std::size_t i) {
            ds.records[i] = evaluate_point(alpha, ds.meta.phi_grid[i % nphi], omega, ds.meta.T_grid[i / nphi], method, opts);
        });
        break;
    }
    case FigureId::Fig1c: {
        const double alpha = 0.3;
        const double T = 0.83;
        ds.meta.alpha_values = {alpha};
        ds.meta.T_grid = {T};
        ds.meta.omega_grid = default_omega_grid();
        ds.meta.phi_grid = default_phi_grid();
        ds.meta.numeric = alpha <= opts.numeric_alpha_limit;
        ds.records.resize(ds.meta.omega_grid.size());
        RunOptions serial = opts;
        serial.jobs = 1;
        parallel_for(ds.records.size(), opts.jobs, [&](std::size_t i) {
            const double omega = ds.meta.omega_grid[i];
            const auto scan = scan_phi(alpha, omega, T, ds.meta.phi_grid, Method::Analytic, serial);
            ds.records[i] = evaluate_point(alpha, scan.phi_m, omega, T, ds.meta.numeric ? Method::Both : Method::Analytic, serial);
        });
        break;
    }
    case FigureId::Fig2a:
    case FigureId::Fig2b:
    case FigureId::Fig2c: {
        const double alpha = id == FigureId::Fig2a ? 0.8 : (id == FigureId::Fig2b ? 3.0 : 10.0);
        ds.meta.alpha_values = {alpha};
        ds.meta.phi_grid = {0.0};
        ds.meta.T_grid = tenths(6, 10);
        ds.meta.omega_grid = default_omega_grid();
        ds.meta.numeric = alpha <= opts.numeric_alpha_limit;
        const Method method = ds.meta.numeric ? Method::Both : Method::Analytic;
        const std::size_t nomega = ds.meta.omega_grid.size();
        ds.records.resize(ds.meta.T_grid.size() * nomega);
        parallel_for(ds.records.size(), opts.jobs, [&](std::size_t i) {
            ds.records[i] = evaluate_point(alpha, 0.0, ds.meta.omega_grid[i % nomega], ds.meta.T_grid[i / nomega], method, opts);
        });
        break;
    }
    }
    return ds;
}

ComparisonReport compare_numeric_analytic(const SweepGrid& grid, const RunOptions& opts) {
    grid.validate();
    RunOptions run = opts;
    if (grid.n_max) run.n_max = grid.n_max;
    const std::size_t np = grid.phi_grid.size();
    const std::size_t nw = grid.omega_grid.size();
    const std::size_t nt = grid.T_grid.size();
    ComparisonReport report;
    report.records.resize(grid.size());
    // Enumeration order: alpha, T, omega, phi (phi fastest).
    parallel_for(report.records.size(), run.jobs, [&](std::size_t i) {
        const std::size_t ip = i % np;
        const std::size_t iw = (i / np) % nw;
        const std::size_t it = (i / (np * nw)) % nt;
        const std::size_t ia = i / (np * nw * nt);
        report.records[i] = evaluate_point(grid.alpha_values[ia], grid.phi_grid[ip], grid.omega_grid[iw], grid.T_grid[it],
                                           Method::Both, run);
    });
    for (const auto& r : report.records) {
        if (!report.worst || *r.abs_err > report.max_abs_err) {
            report.max_abs_err = *r.abs_err;
            report.worst = r;
        }
    }
    return report;
}

LossSensitivityReport loss_sensitivity_report(double alpha, double omega) {
    LossSensitivityReport rep;
    rep.alpha = alpha;
    rep.omega = omega;
    const double lossless = analytic::qfi_lossy_max(alpha, omega, 1.0);
    const double n = analytic::total_photon_number(alpha, omega);
    for (double T : tenths(6, 10)) {
        LossSensitivityRow row;
        row.T = T;
        row.F_m = analytic::qfi_lossy_max(alpha, omega, T);
        row.ratio_to_lossless = row.F_m / lossless;
        row.N = n;
        row.N_sq = n * n;
        row.beats_sql = row.F_m > row.N;
        row.beats_heisenberg = row.F_m > row.N_sq;
        rep.rows.push_back(row);
    }
    rep.ratio_T09 = analytic::qfi_lossy_max(alpha, omega, 0.9) / lossless;
    return rep;
}

} // namespace mzqfi::experiments
