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

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace mzqfi {

template <class Real>
using Complex = std::complex<Real>;

template <class Real, int Rows = Eigen::Dynamic>
using CVector = Eigen::Matrix<Complex<Real>, Rows, 1>;

template <class Real, int Rows = Eigen::Dynamic, int Cols = Eigen::Dynamic>
using CMatrix = Eigen::Matrix<Complex<Real>, Rows, Cols>;

template <class Real, int Rows = Eigen::Dynamic>
using RVector = Eigen::Matrix<Real, Rows, 1>;

template <class Real, int Rows = Eigen::Dynamic, int Cols = Eigen::Dynamic>
using RMatrix = Eigen::Matrix<Real, Rows, Cols>;

enum class ErrorCode {
    TailTooLarge,
    DegenerateCat,
    DimensionMismatch,
    NotDensityMatrix,
    BasisDegenerate,
    Domain,
};

inline const char* to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::TailTooLarge: return "TailTooLarge";
    case ErrorCode::DegenerateCat: return "DegenerateCat";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotDensityMatrix: return "NotDensityMatrix";
    case ErrorCode::BasisDegenerate: return "BasisDegenerate";
    case ErrorCode::Domain: return "Domain";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

namespace constants {
template <class Real>
inline constexpr Real pi = Real(3.141592653589793238462643383279502884L);
}

/// Default tolerances shared across modules.
struct Tolerances {
    double tail = 1e-10;  ///< max discarded probability of a truncated input
    double cat = 1e-12;   ///< min cat normalization denominator
    double rank = 1e-12;  ///< eigenvalue pairs with p_i + p_j <= rank are skipped
    double basis = 1e-12; ///< min 1 - p_t^2 for the two-dimensional support basis
};

} // namespace mzqfi
