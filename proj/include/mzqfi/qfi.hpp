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
 * Quantum Fisher information of a unitary phase family rho(theta) =
 * exp(-i theta G) rho exp(i theta G), for pure and mixed states.
 *
 * The mixed-state value uses the spectral form
 *
 *     F = sum_{p_i + p_j > eps} 2 (p_i - p_j)^2 / (p_i + p_j) |<psi_i|G|psi_j>|^2,
 *
 * which equals sum_i 4 p_i <psi_i|G^2|psi_i> - sum_{ij} 8 p_i p_j / (p_i + p_j)
 * |<psi_i|G|psi_j>|^2 after inserting a resolution of the identity (see
 * docs/formulas.md). Only eigenvectors in the support are needed on the left.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "mzqfi/fock.hpp"

namespace mzqfi {

enum class GeneratorAxis { Jy, Jz };

struct GeneratorChoice {
    GeneratorAxis which = GeneratorAxis::Jz;
    int sign = 1;
};

template <class Real>
CMatrix<Real> generator_matrix(const GeneratorChoice& gen, const SchwingerOps<Real>& ops) {
    const Real s = gen.sign < 0 ? Real(-1) : Real(1);
    return s * (gen.which == GeneratorAxis::Jy ? ops.jy : ops.jz);
}

enum class QfiMethod { Analytic, NumericSpectral, PureVariance };

inline const char* to_string(QfiMethod m) {
    switch (m) {
    case QfiMethod::Analytic: return "analytic";
    case QfiMethod::NumericSpectral: return "numeric-spectral";
    case QfiMethod::PureVariance: return "pure-variance";
    }
    return "unknown";
}

template <class Real>
struct QfiResult {
    Real value = 0;
    QfiMethod method = QfiMethod::Analytic;
    Real tail_mass = 0;      ///< truncation weight discarded at state preparation
    Real rank_cutoff = 0;    ///< eps_rank used by the spectral sum
    Eigen::Index support_rank = 0;
};

/// Eigen-decomposition of a density matrix, eigenvalues in descending order.
template <class Real>
struct SpectralDecomposition {
    RVector<Real> eigenvalues;
    CMatrix<Real> eigenvectors;
    Real eps_rank = Real(1e-12);
    /// Number of leading eigenvalues above eps_rank / 2; every pair that
    /// enters the spectral sum has at least one member here.
    Eigen::Index support = 0;
};

template <class Real>
struct DensityCheck {
    Real trace_tol = Real(1e-8);
    Real hermitian_tol = Real(1e-10);
    Real negative_floor = Real(-1e-8);
};

template <class Real>
SpectralDecomposition<Real> spectral_decomposition(const CMatrix<Real>& rho, Real eps_rank = Real(1e-12),
                                                   DensityCheck<Real> check = {}) {
    if (rho.rows() != rho.cols()) throw Error(ErrorCode::DimensionMismatch, "density matrix must be square");
    const Real trace_dev = std::abs(rho.trace() - Complex<Real>(1));
    if (!(trace_dev <= check.trace_tol)) {
        throw Error(ErrorCode::NotDensityMatrix, "trace deviates from 1 by " + std::to_string(static_cast<double>(trace_dev)));
    }
    const Real herm_dev = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    if (!(herm_dev <= check.hermitian_tol)) {
        throw Error(ErrorCode::NotDensityMatrix, "matrix is not Hermitian (deviation " + std::to_string(static_cast<double>(herm_dev)) + ")");
    }
    Eigen::SelfAdjointEigenSolver<CMatrix<Real>> es(rho);
    if (es.info() != Eigen::Success) throw Error(ErrorCode::NotDensityMatrix, "eigendecomposition failed");
    const Eigen::Index n = rho.rows();
    SpectralDecomposition<Real> out;
    out.eps_rank = eps_rank;
    out.eigenvalues.resize(n);
    out.eigenvectors.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        Real p = es.eigenvalues()(n - 1 - k);
        if (p < check.negative_floor) {
            throw Error(ErrorCode::NotDensityMatrix, "eigenvalue " + std::to_string(static_cast<double>(p)) + " is negative");
        }
        out.eigenvalues(k) = std::max(p, Real(0));
        out.eigenvectors.col(k) = es.eigenvectors().col(n - 1 - k);
    }
    while (out.support < n && out.eigenvalues(out.support) > eps_rank / 2) ++out.support;
    return out;
}

/// F = 4 (<G^2> - <G>^2) for a normalized pure state.
template <class Real, class Derived>
QfiResult<Real> qfi_pure(const FockState<Real>& psi, const Eigen::MatrixBase<Derived>& generator) {
    if (generator.rows() != psi.amplitudes.size()) throw Error(ErrorCode::DimensionMismatch, "generator and state dimensions differ");
    const CVector<Real> g_psi = generator * psi.amplitudes;
    const Real mean = std::real(psi.amplitudes.dot(g_psi));
    const Real second = g_psi.squaredNorm();
    QfiResult<Real> out;
    out.value = std::max(Real(0), 4 * (second - mean * mean));
    out.method = QfiMethod::PureVariance;
    out.tail_mass = psi.tail_mass;
    out.support_rank = 1;
    return out;
}

template <class Real>
QfiResult<Real> qfi_pure(const FockState<Real>& psi, const GeneratorChoice& gen) {
    return qfi_pure(psi, generator_matrix(gen, schwinger_ops<Real>(psi.cutoff)));
}

/// Spectral QFI from a precomputed decomposition.
template <class Real, class Derived>
QfiResult<Real> qfi_spectral(const SpectralDecomposition<Real>& spec, const Eigen::MatrixBase<Derived>& generator) {
    const Eigen::Index n = spec.eigenvalues.size();
    if (generator.rows() != n || generator.cols() != n) throw Error(ErrorCode::DimensionMismatch, "generator and state dimensions differ");
    const Eigen::Index s = spec.support;
    // h(i, j) = <psi_i| G |psi_j> for i in the support, all j.
    const CMatrix<Real> g_support = generator * spec.eigenvectors.leftCols(s);
    const CMatrix<Real> h = g_support.adjoint() * spec.eigenvectors;
    Real f = 0;
    for (Eigen::Index i = 0; i < s; ++i) {
        const Real pi = spec.eigenvalues(i);
        for (Eigen::Index j = 0; j < n; ++j) {
            const Real pj = spec.eigenvalues(j);
            const Real sum = pi + pj;
            if (!(sum > spec.eps_rank)) continue;
            const Real diff = pi - pj;
            // Pairs with j outside the support appear once here but twice in the full double sum.
            const Real multiplicity = j < s ? Real(1) : Real(2);
            f += multiplicity * 2 * diff * diff / sum * std::norm(h(i, j));
        }
    }
    QfiResult<Real> out;
    out.value = std::max(Real(0), f);
    out.method = QfiMethod::NumericSpectral;
    out.rank_cutoff = spec.eps_rank;
    out.support_rank = s;
    return out;
}

template <class Real, class Derived>
QfiResult<Real> qfi_mixed(const DensityMatrix<Real>& rho, const Eigen::MatrixBase<Derived>& generator,
                          Real eps_rank = Real(1e-12)) {
    return qfi_spectral(spectral_decomposition(rho.matrix, eps_rank), generator);
}

template <class Real>
QfiResult<Real> qfi_mixed(const DensityMatrix<Real>& rho, const GeneratorChoice& gen, Real eps_rank = Real(1e-12)) {
    if (rho.modes != 2) throw Error(ErrorCode::DimensionMismatch, "Schwinger generators need a two-mode state");
    return qfi_mixed(rho, generator_matrix(gen, schwinger_ops<Real>(rho.cutoff)), eps_rank);
}

/// |F(rho, G) - F(U rho U^dag, U G U^dag)| for a fixed, parameter-free U.
template <class Real>
Real qfi_unitary_invariance_check(const DensityMatrix<Real>& rho, const CMatrix<Real>& generator,
                                  const CMatrix<Real>& fixed_unitary, Real eps_rank = Real(1e-12)) {
    const Real before = qfi_mixed(rho, generator, eps_rank).value;
    DensityMatrix<Real> rotated{fixed_unitary * rho.matrix * fixed_unitary.adjoint(), rho.modes, rho.cutoff};
    rotated.matrix = ((rotated.matrix + rotated.matrix.adjoint()) / 2).eval();
    const CMatrix<Real> g = fixed_unitary * generator * fixed_unitary.adjoint();
    const Real after = qfi_mixed(rotated, g, eps_rank).value;
    return std::abs(before - after);
}

} // namespace mzqfi
