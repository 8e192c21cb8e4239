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

#include "mzqfi/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <vector>

#include "mzqfi/experiments.hpp"
#include "mzqfi/simulate.hpp"
#include "mzqfi/validate.hpp"

namespace mzqfi::cli {

namespace {

namespace ex = mzqfi::experiments;

constexpr double kPi = constants::pi<double>;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string g6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void check_point(const CliConfig& c) {
    if (!(c.alpha >= 0) || !std::isfinite(c.alpha)) throw Error(ErrorCode::Domain, "alpha must be >= 0");
    if (!(c.phi >= -kPi / 2 && c.phi < kPi / 2)) throw Error(ErrorCode::Domain, "phi must lie in [-pi/2, pi/2)");
    if (!(c.omega >= 0 && c.omega < kPi)) throw Error(ErrorCode::Domain, "omega must lie in [0, pi)");
    if (!(c.T >= 0 && c.T <= 1)) throw Error(ErrorCode::Domain, "T must lie in [0,1]");
}

void check_common(const CliConfig& c) {
    if (c.n_max && *c.n_max < 1) throw Error(ErrorCode::Domain, "n-max must be >= 1");
    if (c.jobs < 1) throw Error(ErrorCode::Domain, "jobs must be >= 1");
    if (!(c.tol_rank > 0)) throw Error(ErrorCode::Domain, "tol-rank must be > 0");
    if (!(c.tol_tail > 0)) throw Error(ErrorCode::Domain, "tol-tail must be > 0");
}

ex::RunOptions run_options(const CliConfig& c) {
    ex::RunOptions o;
    o.tol.rank = c.tol_rank;
    o.tol.tail = c.tol_tail;
    o.n_max = c.n_max;
    o.jobs = c.jobs;
    return o;
}

/// Writes the dataset to --out, or to `out` when no path was given.
void emit(const CliConfig& c, const ex::Dataset& ds, std::ostream& out) {
    auto write = [&](std::ostream& os) {
        if (c.format == "json") {
            ex::write_json(os, ds);
        } else {
            ex::write_csv(os, ds.records);
        }
    };
    if (c.out_path.empty()) {
        write(out);
        return;
    }
    std::ofstream f(c.out_path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + c.out_path + "' for writing");
    write(f);
    f.close();
    if (!f) throw IoError("failed writing '" + c.out_path + "'");
}

std::string summary(const std::string& label, const ex::Dataset& ds) {
    std::string s = label + ": " + std::to_string(ds.records.size()) + " rows";
    double worst = -1;
    for (const auto& r : ds.records) {
        if (r.abs_err) worst = std::max(worst, *r.abs_err);
    }
    if (worst >= 0) s += ", max_abs_err=" + g6(worst);
    return s;
}

int cmd_eval(const CliConfig& c, std::ostream& out) {
    check_point(c);
    check_common(c);
    const auto method = ex::parse_method(c.method);
    const auto opts = run_options(c);
    const double N = analytic::total_photon_number(c.alpha, c.omega, opts.tol.cat);
    std::optional<double> fa;
    std::optional<QfiResult<double>> fn;
    int n_max = 0;
    if (method != ex::Method::Numeric) {
        fa = c.T == 1.0 ? analytic::qfi_lossless(c.alpha, c.phi, c.omega, opts.tol.cat)
                        : analytic::qfi_lossy(c.alpha, c.phi, c.omega, c.T, opts.tol.basis, opts.tol.cat);
    }
    if (method != ex::Method::Analytic) {
        n_max = c.n_max ? *c.n_max : default_n_max(c.alpha, c.omega, opts.tol.tail);
        fn = qfi_numeric(c.alpha, c.phi, c.omega, c.T, FockCutoff::checked(n_max), opts.tol);
    }
    const double F = fa ? *fa : fn->value;
    out << "F = " << g6(F) << "  method=" << ex::to_string(method) << '\n';
    out << "alpha " << ex::format_double(c.alpha) << "\nphi " << ex::format_double(c.phi) << "\nomega "
        << ex::format_double(c.omega) << "\nT " << ex::format_double(c.T) << '\n';
    if (fa) out << "F_analytic " << ex::format_double(*fa) << '\n';
    if (fn) {
        out << "F_numeric " << ex::format_double(fn->value) << "\nnumeric_method " << to_string(fn->method)
            << "\nn_max " << n_max << "\ntail_mass " << ex::format_double(fn->tail_mass) << "\nsupport_rank "
            << fn->support_rank << '\n';
    }
    if (fa && fn) out << "abs_err " << ex::format_double(std::abs(*fa - fn->value)) << '\n';
    out << "N " << ex::format_double(N) << "\nN_sq " << ex::format_double(N * N) << '\n';
    return kOk;
}

int cmd_scan(const CliConfig& c, std::ostream& out, std::ostream& err) {
    CliConfig probe = c;
    probe.phi = 0;
    check_point(probe);
    check_common(c);
    const auto method = ex::parse_method(c.method);
    const auto opts = run_options(c);
    ex::Dataset ds;
    ds.meta.figure = "scan";
    ds.meta.alpha_values = {c.alpha};
    ds.meta.omega_grid = {c.omega};
    ds.meta.T_grid = {c.T};
    ds.meta.phi_grid = ex::default_phi_grid();
    ds.meta.n_max = c.n_max;
    ds.meta.numeric = method != ex::Method::Analytic;
    ds.meta.tol = opts.tol;
    ds.meta.version = ex::artifact_version();
    const auto scan = ex::scan_phi(c.alpha, c.omega, c.T, ds.meta.phi_grid, method, opts);
    ds.records = scan.curve;
    emit(c, ds, out);
    auto& log = c.out_path.empty() ? err : out;
    log << summary("scan", ds) << ", phi_m=" << g6(scan.phi_m) << ", F_max=" << g6(scan.F_max) << '\n';
    return kOk;
}

int cmd_figure(const CliConfig& c, std::ostream& out, std::ostream& err) {
    check_common(c);
    const auto id = ex::parse_figure(c.figure);
    const auto ds = ex::figure_dataset(id, run_options(c));
    emit(c, ds, out);
    auto& log = c.out_path.empty() ? err : out;
    log << summary(ex::to_string(id), ds) << '\n';
    return kOk;
}

int cmd_validate(const CliConfig& c, std::ostream& out) {
    check_common(c);
    validation::ValidationOptions opts;
    opts.level = validation::parse_level(c.level);
    opts.jobs = c.jobs;
    opts.tol.rank = c.tol_rank;
    opts.tol.tail = c.tol_tail;
    if (c.fault == "sin2phi") {
        opts.fault = analytic::AssemblyFault::FlipPart2Sin2Phi;
    } else if (c.fault != "none") {
        throw Error(ErrorCode::Domain, "inject-fault must be one of {none, sin2phi}");
    }
    const auto results = validation::run_validation(opts, &out);
    int failed = 0;
    for (const auto& r : results) failed += r.passed ? 0 : 1;
    out << "validate " << c.level << ": " << results.size() - failed << "/" << results.size() << " checks passed\n";
    return failed == 0 ? kOk : kValidation;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

/// Splices `--key value` pairs from a flat key=value file into the argument
/// list right after the subcommand, skipping keys already given as flags.
std::vector<std::string> expand_config(std::vector<std::string> args) {
    std::string path;
    std::size_t at = 0;
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
            at = i;
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            at = i;
            break;
        }
    }
    if (path.empty()) return args;
    std::ifstream f(path);
    if (!f) throw IoError("cannot read config file '" + path + "'");
    args.erase(args.begin() + static_cast<std::ptrdiff_t>(at),
               args.begin() + static_cast<std::ptrdiff_t>(args[at] == "--config" ? at + 2 : at + 1));
    auto given = [&](const std::string& flag) {
        for (const auto& a : args)
            if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
        return false;
    };
    std::vector<std::string> extra;
    std::string line;
    while (std::getline(f, line)) {
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw Error(ErrorCode::Domain, "config line '" + line + "' is not key=value");
        const std::string flag = "--" + trim(line.substr(0, eq));
        if (given(flag)) continue;
        extra.push_back(flag);
        extra.push_back(trim(line.substr(eq + 1)));
    }
    args.insert(args.begin() + 2, extra.begin(), extra.end());
    return args;
}

void add_point_flags(CLI::App* sub, CliConfig& c, bool with_phi) {
    sub->add_option("--alpha", c.alpha, "coherent amplitude, >= 0")->capture_default_str();
    if (with_phi) sub->add_option("--phi", c.phi, "relative input phase, in [-pi/2, pi/2)")->capture_default_str();
    sub->add_option("--omega", c.omega, "superposition phase, in [0, pi)")->capture_default_str();
    sub->add_option("--T", c.T, "transmission on each arm, in [0,1]")->capture_default_str();
    sub->add_option("--method", c.method, "one of {analytic, numeric, both}")->capture_default_str();
}

void add_numeric_flags(CLI::App* sub, CliConfig& c) {
    sub->add_option("--n-max", c.n_max,
                    "Fock cutoff on total photon number, >= 1 (default: smallest cutoff meeting --tol-tail)");
    sub->add_option("--tol-rank", c.tol_rank, "eigenvalue-pair cutoff in the spectral QFI, > 0")->capture_default_str();
    sub->add_option("--tol-tail", c.tol_tail, "maximum discarded input probability, > 0")->capture_default_str();
    sub->add_option("--jobs", c.jobs, "worker threads, >= 1 (env MZQFI_JOBS)")
        ->envname("MZQFI_JOBS")
        ->capture_default_str();
    sub->add_option("--config", "flat key=value file using the long flag names; flags override it");
}

void add_output_flags(CLI::App* sub, CliConfig& c) {
    sub->add_option("--out", c.out_path, "output path (default: stdout)");
    sub->add_option("--format", c.format, "one of {csv, json}")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CliConfig c;
    CLI::App app{"Quantum Fisher information of a Mach-Zehnder interferometer fed by a coherent state and a cat state"};
    app.require_subcommand(1);
    app.set_version_flag("--version", ex::artifact_version());

    auto* eval = app.add_subcommand("eval", "QFI at one (alpha, phi, omega, T) point");
    add_point_flags(eval, c, true);
    add_numeric_flags(eval, c);

    auto* scan = app.add_subcommand("scan", "QFI over the default 201-point phi grid and the refined phase-matching phi_m");
    add_point_flags(scan, c, false);
    add_numeric_flags(scan, c);
    add_output_flags(scan, c);

    auto* figure = app.add_subcommand("figure", "dataset behind one figure");
    figure->add_option("id", c.figure, "one of {fig1a, fig1b, fig1c, fig2a, fig2b, fig2c}")->required();
    add_numeric_flags(figure, c);
    add_output_flags(figure, c);

    auto* validate = app.add_subcommand("validate", "run the named invariant checks");
    validate->add_option("level", c.level, "one of {fast, full}")->capture_default_str();
    validate->add_option("--inject-fault", c.fault, "corrupt a closed-form term: one of {none, sin2phi}")
        ->capture_default_str();
    add_numeric_flags(validate, c);

    std::vector<std::string> args(argv, argv + argc);
    try {
        args = expand_config(std::move(args));
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIo;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kDomain;
    }
    std::vector<const char*> expanded;
    for (const auto& a : args) expanded.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(expanded.size()), expanded.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kDomain;
    }

    try {
        if (eval->parsed()) return cmd_eval(c, out);
        if (scan->parsed()) return cmd_scan(c, out, err);
        if (figure->parsed()) return cmd_figure(c, out, err);
        return cmd_validate(c, out);
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIo;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kDomain;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kInternal;
    }
}

} // namespace mzqfi::cli
