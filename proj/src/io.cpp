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

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "mzqfi/experiments.hpp"

#ifndef MZQFI_VERSION
#define MZQFI_VERSION "0.0.0"
#endif

namespace mzqfi::experiments {

namespace {

constexpr const char* kHeader = "alpha,phi,omega,T,F_analytic,F_numeric,abs_err,tail_mass,N,N_sq";

std::string optional_field(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

double parse_number(const std::string& field, std::size_t line) {
    // strtod rather than stod: subnormal values are valid data.
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (field.empty() || end != field.c_str() + field.size()) {
        throw Error(ErrorCode::Domain, "CSV line " + std::to_string(line) + ": cannot parse number '" + field + "'");
    }
    return v;
}

std::optional<double> parse_optional(const std::string& field, std::size_t line) {
    if (field.empty()) return std::nullopt;
    return parse_number(field, line);
}

nlohmann::json optional_json(const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::optional<double> optional_from_json(const nlohmann::json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<double>();
}

} // namespace

const char* artifact_version() { return MZQFI_VERSION; }

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(std::ostream& os, const std::vector<SweepRecord>& records) {
    os << kHeader << '\n';
    for (const auto& r : records) {
        os << format_double(r.alpha) << ',' << format_double(r.phi) << ',' << format_double(r.omega) << ','
           << format_double(r.T) << ',' << format_double(r.F_analytic) << ',' << optional_field(r.F_numeric) << ','
           << optional_field(r.abs_err) << ',' << optional_field(r.tail_mass) << ',' << format_double(r.N) << ','
           << format_double(r.N_sq) << '\n';
    }
}

std::vector<SweepRecord> read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != kHeader) {
        throw Error(ErrorCode::Domain, "CSV header does not match the dataset schema");
    }
    std::vector<SweepRecord> out;
    std::size_t line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) f.push_back(field);
        if (!line.empty() && line.back() == ',') f.emplace_back();
        if (f.size() != 10) throw Error(ErrorCode::Domain, "CSV line " + std::to_string(line_no) + ": expected 10 fields");
        SweepRecord r;
        r.alpha = parse_number(f[0], line_no);
        r.phi = parse_number(f[1], line_no);
        r.omega = parse_number(f[2], line_no);
        r.T = parse_number(f[3], line_no);
        r.F_analytic = parse_number(f[4], line_no);
        r.F_numeric = parse_optional(f[5], line_no);
        r.abs_err = parse_optional(f[6], line_no);
        r.tail_mass = parse_optional(f[7], line_no);
        r.N = parse_number(f[8], line_no);
        r.N_sq = parse_number(f[9], line_no);
        out.push_back(r);
    }
    return out;
}

void write_json(std::ostream& os, const Dataset& ds) {
    nlohmann::json meta = {
        {"figure", ds.meta.figure},
        {"alpha_values", ds.meta.alpha_values},
        {"phi_grid", ds.meta.phi_grid},
        {"omega_grid", ds.meta.omega_grid},
        {"T_grid", ds.meta.T_grid},
        {"n_max", ds.meta.n_max ? nlohmann::json(*ds.meta.n_max) : nlohmann::json(nullptr)},
        {"numeric", ds.meta.numeric},
        {"tolerances",
         {{"tail", ds.meta.tol.tail}, {"cat", ds.meta.tol.cat}, {"rank", ds.meta.tol.rank}, {"basis", ds.meta.tol.basis}}},
        {"version", ds.meta.version},
    };
    nlohmann::json records = nlohmann::json::array();
    for (const auto& r : ds.records) {
        records.push_back({{"alpha", r.alpha},
                           {"phi", r.phi},
                           {"omega", r.omega},
                           {"T", r.T},
                           {"F_analytic", r.F_analytic},
                           {"F_numeric", optional_json(r.F_numeric)},
                           {"abs_err", optional_json(r.abs_err)},
                           {"tail_mass", optional_json(r.tail_mass)},
                           {"N", r.N},
                           {"N_sq", r.N_sq}});
    }
    nlohmann::json doc = {{"meta", meta}, {"records", records}};
    os << doc.dump(2) << '\n';
}

Dataset read_json(std::istream& is) {
    nlohmann::json doc;
    try {
        is >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Domain, std::string("malformed dataset JSON: ") + e.what());
    }
    Dataset ds;
    const auto& meta = doc.at("meta");
    ds.meta.figure = meta.at("figure").get<std::string>();
    ds.meta.alpha_values = meta.at("alpha_values").get<std::vector<double>>();
    ds.meta.phi_grid = meta.at("phi_grid").get<std::vector<double>>();
    ds.meta.omega_grid = meta.at("omega_grid").get<std::vector<double>>();
    ds.meta.T_grid = meta.at("T_grid").get<std::vector<double>>();
    if (!meta.at("n_max").is_null()) ds.meta.n_max = meta.at("n_max").get<int>();
    ds.meta.numeric = meta.at("numeric").get<bool>();
    const auto& tol = meta.at("tolerances");
    ds.meta.tol.tail = tol.at("tail").get<double>();
    ds.meta.tol.cat = tol.at("cat").get<double>();
    ds.meta.tol.rank = tol.at("rank").get<double>();
    ds.meta.tol.basis = tol.at("basis").get<double>();
    ds.meta.version = meta.at("version").get<std::string>();
    for (const auto& j : doc.at("records")) {
        SweepRecord r;
        r.alpha = j.at("alpha").get<double>();
        r.phi = j.at("phi").get<double>();
        r.omega = j.at("omega").get<double>();
        r.T = j.at("T").get<double>();
        r.F_analytic = j.at("F_analytic").get<double>();
        r.F_numeric = optional_from_json(j.at("F_numeric"));
        r.abs_err = optional_from_json(j.at("abs_err"));
        r.tail_mass = optional_from_json(j.at("tail_mass"));
        r.N = j.at("N").get<double>();
        r.N_sq = j.at("N_sq").get<double>();
        ds.records.push_back(r);
    }
    return ds;
}

} // namespace mzqfi::experiments
