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

#include "mzqfi/validate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <random>

#include "mzqfi/experiments.hpp"
#include "mzqfi/simulate.hpp"

namespace mzqfi::validation {

namespace {

using experiments::Method;
using experiments::RunOptions;

constexpr double kPi = constants::pi<double>;

/// Worst |a - b| over a sample, remembering where it happened.
struct Worst {
    double value = 0;
    std::string where;

    void update(double err, const std::string& at) {
        if (!(err <= value)) {
            value = err;
            where = at;
        }
    }
};

std::string point(double alpha, double phi, double omega, double T) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "alpha=%.6g phi=%.6g omega=%.6g T=%.6g", alpha, phi, omega, T);
    return buf;
}

CheckResult finish(std::string name, const Worst& w, double tol) {
    CheckResult r;
    r.name = std::move(name);
    r.measured = w.value;
    r.tolerance = tol;
    r.passed = w.value <= tol;
    r.detail = w.where;
    return r;
}

struct Sampler {
    std::mt19937_64 rng;
    explicit Sampler(std::uint64_t seed) : rng(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
    double phi() { return uniform(-kPi / 2, kPi / 2); }
    double omega() { return uniform(0, kPi); }
};

double operator_residual(const CMatrix<double>& m) { return m.cwiseAbs().maxCoeff(); }

CheckResult check_commutators() {
    const FockCutoff cut{8};
    const auto ops = schwinger_ops<double>(cut);
    const Complex<double> i(0, 1);
    Worst w;
    // Products are exact inside the truncated space because every J
    // conserves total photon number.
    w.update(operator_residual(ops.jx * ops.jy - ops.jy * ops.jx - i * ops.jz), "[Jx,Jy]");
    w.update(operator_residual(ops.jy * ops.jz - ops.jz * ops.jy - i * ops.jx), "[Jy,Jz]");
    w.update(operator_residual(ops.jz * ops.jx - ops.jx * ops.jz - i * ops.jy), "[Jz,Jx]");
    return finish("schwinger-commutators", w, 1e-12);
}

CheckResult check_unitarity() {
    const FockCutoff cut{10};
    const auto dim = FockBasis::two_mode_size(cut);
    const CMatrix<double> id = CMatrix<double>::Identity(dim, dim);
    Worst w;
    for (double T : {0.0, 0.37, 0.5, 1.0}) {
        const auto u = beam_splitter_unitary(BeamSplitterSpec<double>::make(T), cut);
        w.update(operator_residual(u.adjoint() * u - id), "beam splitter T=" + std::to_string(T));
    }
    for (double theta : {0.3, -1.1, 2.5}) {
        const auto u = mz_unitary(theta, cut);
        w.update(operator_residual(u.adjoint() * u - id), "mz theta=" + std::to_string(theta));
        w.update(operator_residual(u - mz_composite(theta, cut)), "mz composite theta=" + std::to_string(theta));
    }
    return finish("unitarity", w, 1e-12);
}

CheckResult check_lossless_closed_form(const Tolerances& tol) {
    Sampler s(11);
    Worst w;
    for (int k = 0; k < 10; ++k) {
        const double alpha = s.uniform(0.05, 1.0);
        const double phi = s.phi();
        const double omega = s.omega();
        const FockCutoff cut{default_n_max(alpha, omega, tol.tail)};
        const double closed = analytic::qfi_lossless(alpha, phi, omega);
        const double numeric = qfi_numeric_lossless(alpha, phi, omega, cut, 0.4, tol).value;
        w.update(std::abs(numeric - closed), point(alpha, phi, omega, 1));
    }
    return finish("lossless-numeric-vs-closed-form", w, 1e-8);
}

CheckResult check_max_in_n() {
    Worst w;
    for (double alpha : {0.1, 0.3, 0.8, 1.5, 3.0}) {
        for (double omega : experiments::default_omega_grid(16)) {
            const double a = analytic::qfi_lossless_max(alpha, omega);
            const double b = analytic::qfi_lossless_max_in_N(alpha, omega);
            w.update(std::abs(a - b) / std::max(1.0, std::abs(a)), point(alpha, 0, omega, 1));
        }
    }
    return finish("max-qfi-photon-number-identity", w, 1e-12);
}

CheckResult check_assembly(analytic::AssemblyFault fault) {
    Sampler s(23);
    Worst w;
    for (int k = 0; k < 200; ++k) {
        const double alpha = s.uniform(0.05, 2.0);
        const double phi = s.phi();
        const double omega = s.omega();
        const double T = s.uniform(0.05, 0.95);
        const double total = analytic::three_part_assembly(alpha, phi, omega, T, fault).total;
        const double direct = analytic::qfi_lossy(alpha, phi, omega, T);
        w.update(std::abs(total - direct) / std::max(1.0, std::abs(direct)), point(alpha, phi, omega, T));
    }
    return finish("three-part-assembly", w, 1e-12);
}

CheckResult check_support_algebra() {
    Sampler s(29);
    Worst w;
    for (int k = 0; k < 200; ++k) {
        const double alpha = s.uniform(0.05, 2.0);
        const double phi = s.phi();
        const double omega = s.omega();
        const double T = s.uniform(0.05, 0.95);
        const auto a = analytic::three_part_assembly(alpha, phi, omega, T);
        const auto b = analytic::support_algebra_parts(alpha, phi, omega, T);
        const double scale = std::max(1.0, std::abs(a.total));
        const double err = std::max({std::abs(a.part1 - b.part1), std::abs(a.part2 - b.part2),
                                     std::abs(a.part3 - b.part3)});
        w.update(err / scale, point(alpha, phi, omega, T));
    }
    return finish("support-algebra-parts", w, 1e-10);
}

CheckResult check_lossy_numeric(const Tolerances& tol) {
    Worst w;
    const FockCutoff cut{20};
    for (double omega : {0.0, 6 * kPi / 7}) {
        for (double T : {0.3, 0.83}) {
            for (double phi : {0.0, 0.7, -1.2}) {
                const double a = analytic::qfi_lossy(0.3, phi, omega, T);
                const double n = qfi_numeric(0.3, phi, omega, T, cut, tol).value;
                w.update(std::abs(a - n), point(0.3, phi, omega, T));
            }
        }
    }
    return finish("lossy-numeric-vs-closed-form", w, 1e-6);
}

CheckResult check_kraus_ancilla(const Tolerances& tol) {
    Worst w;
    const FockCutoff cut{8};
    for (double T : {0.2, 0.65, 0.9}) {
        for (double omega : {0.0, 1.9}) {
            const auto a = lossy_state(0.3, 0.4, omega, T, cut, tol, LossForm::Ancilla);
            const auto b = lossy_state(0.3, 0.4, omega, T, cut, tol, LossForm::Kraus);
            w.update(operator_residual(a.matrix - b.matrix), point(0.3, 0.4, omega, T));
        }
    }
    return finish("loss-kraus-vs-ancilla", w, 1e-10);
}

CheckResult check_pmc(const Tolerances& tol) {
    Worst w;
    RunOptions opts;
    opts.tol = tol;
    const auto phis = experiments::default_phi_grid();
    for (double omega : experiments::default_omega_grid(8)) {
        const auto scan = experiments::scan_phi(0.3, omega, 0.83, phis, Method::Analytic, opts);
        w.update(std::abs(scan.phi_m), point(0.3, scan.phi_m, omega, 0.83));
    }
    return finish("phase-matching-argmax", w, 1e-3);
}

CheckResult check_near_lossless() {
    Sampler s(31);
    Worst w;
    for (int k = 0; k < 20; ++k) {
        const double alpha = s.uniform(0.05, 1.5);
        const double phi = s.phi();
        const double omega = s.omega();
        const double T = 1 - 1e-8;
        w.update(std::abs(analytic::qfi_lossy(alpha, phi, omega, T) - analytic::qfi_lossless(alpha, phi, omega)),
                 point(alpha, phi, omega, T));
    }
    return finish("near-lossless-limit", w, 1e-6);
}

CheckResult check_even_reduction() {
    Worst w;
    for (double alpha : {0.2, 0.8, 2.0}) {
        for (double T : {0.1, 0.5, 0.9}) {
            for (double phi : {-1.0, 0.0, 0.6}) {
                const double a = analytic::qfi_lossy(alpha, phi, 0.0, T);
                const double b = analytic::qfi_lossy_even(alpha, phi, T);
                w.update(std::abs(a - b) / std::max(1.0, std::abs(a)), point(alpha, phi, 0, T));
            }
        }
    }
    return finish("even-cat-reduction", w, 1e-12);
}

CheckResult check_figure1_grids(const ValidationOptions& opts) {
    experiments::SweepGrid grid;
    grid.alpha_values = {0.3};
    grid.phi_grid = experiments::default_phi_grid();
    grid.omega_grid = {0.0, 6 * kPi / 7};
    for (int k = 1; k <= 10; ++k) grid.T_grid.push_back(k / 10.0);
    grid.n_max = 20;
    grid.method = Method::Both;
    RunOptions run;
    run.tol = opts.tol;
    run.n_max = 20;
    run.jobs = opts.jobs;
    const auto report = experiments::compare_numeric_analytic(grid, run);
    Worst w;
    if (report.worst) {
        const auto& r = *report.worst;
        w.update(report.max_abs_err, point(r.alpha, r.phi, r.omega, r.T));
    }
    return finish("figure1-numeric-vs-closed-form max_abs_err", w, 1e-6);
}

CheckResult check_figure1c(const ValidationOptions& opts) {
    RunOptions run;
    run.tol = opts.tol;
    run.jobs = opts.jobs;
    const auto ds = experiments::figure_dataset(experiments::FigureId::Fig1c, run);
    Worst w;
    for (const auto& r : ds.records) w.update(std::abs(r.phi), point(r.alpha, r.phi, r.omega, r.T));
    return finish("figure1c-phase-matching", w, 1e-3);
}

} // namespace

Level parse_level(const std::string& s) {
    if (s == "fast") return Level::Fast;
    if (s == "full") return Level::Full;
    throw Error(ErrorCode::Domain, "level must be one of {fast, full}");
}

void print_result(std::ostream& os, const CheckResult& r) {
    char buf[96];
    std::snprintf(buf, sizeof buf, " measured=%.6g tol=%.6g", r.measured, r.tolerance);
    os << (r.passed ? "PASS " : "FAIL ") << r.name << buf;
    if (!r.passed && !r.detail.empty()) os << " at " << r.detail;
    os << '\n';
}

std::vector<CheckResult> run_validation(const ValidationOptions& opts, std::ostream* log) {
    std::vector<std::function<CheckResult()>> checks = {
        check_commutators,
        check_unitarity,
        [&] { return check_lossless_closed_form(opts.tol); },
        check_max_in_n,
        [&] { return check_assembly(opts.fault); },
        check_support_algebra,
        [&] { return check_lossy_numeric(opts.tol); },
        [&] { return check_kraus_ancilla(opts.tol); },
        [&] { return check_pmc(opts.tol); },
        check_near_lossless,
        check_even_reduction,
    };
    if (opts.level == Level::Full) {
        checks.emplace_back([&] { return check_figure1_grids(opts); });
        checks.emplace_back([&] { return check_figure1c(opts); });
    }
    std::vector<CheckResult> out;
    for (const auto& check : checks) {
        CheckResult r;
        try {
            r = check();
        } catch (const std::exception& e) {
            r.passed = false;
            r.name = "check-" + std::to_string(out.size() + 1);
            r.detail = e.what();
        }
        if (log) print_result(*log, r);
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace mzqfi::validation
