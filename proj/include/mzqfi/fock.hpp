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
 * Truncated Fock-space representation of bosonic modes.
 *
 * The basis keeps every occupation pattern whose total photon number is at
 * most n_max. States are ordered by total photon number, then by the
 * occupation of mode 0 (descending), then mode 1 (descending), and so on.
 * For two modes this gives |00>, |10>, |01>, |20>, |11>, |02>, ...
 * Number-conserving operators are block diagonal in this ordering.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "mzqfi/types.hpp"

namespace mzqfi {

struct FockCutoff {
    int n_max = 0;

    static FockCutoff checked(int n_max) {
        if (n_max < 0) {
            throw Error(ErrorCode::Domain, "n_max must be non-negative");
        }
        return FockCutoff{n_max};
    }
};

/// Index set of a total-photon-number truncated multimode Fock space.
class FockBasis {
public:
    FockBasis(int modes, FockCutoff cutoff) : modes_(modes), n_max_(cutoff.n_max) {
        if (modes < 1) throw Error(ErrorCode::Domain, "a Fock basis needs at least one mode");
        if (n_max_ < 0) throw Error(ErrorCode::Domain, "n_max must be non-negative");
        std::size_t table = 1;
        for (int m = 0; m < modes_; ++m) table *= static_cast<std::size_t>(n_max_ + 1);
        lookup_.assign(table, -1);

        std::vector<int> occ(static_cast<std::size_t>(modes_), 0);
        for (int total = 0; total <= n_max_; ++total) {
            enumerate(occ, 0, total);
        }
    }

    int modes() const noexcept { return modes_; }
    int n_max() const noexcept { return n_max_; }
    FockCutoff cutoff() const noexcept { return FockCutoff{n_max_}; }
    Eigen::Index size() const noexcept { return static_cast<Eigen::Index>(occupations_.size()) / modes_; }

    std::span<const int> occupation(Eigen::Index i) const {
        return {occupations_.data() + i * modes_, static_cast<std::size_t>(modes_)};
    }

    int total(Eigen::Index i) const {
        auto occ = occupation(i);
        int n = 0;
        for (int k : occ) n += k;
        return n;
    }

    /// Returns -1 when the pattern lies outside the truncated space.
    Eigen::Index index(std::span<const int> occ) const {
        if (static_cast<int>(occ.size()) != modes_) {
            throw Error(ErrorCode::DimensionMismatch, "occupation pattern has wrong number of modes");
        }
        int n = 0;
        std::size_t key = 0;
        for (int k : occ) {
            if (k < 0) return -1;
            n += k;
            if (n > n_max_) return -1;
            key = key * static_cast<std::size_t>(n_max_ + 1) + static_cast<std::size_t>(k);
        }
        return lookup_[key];
    }

    Eigen::Index index(std::initializer_list<int> occ) const {
        return index(std::span<const int>(occ.begin(), occ.size()));
    }

    /// Closed form of the two-mode ordering: block start plus n_B.
    static Eigen::Index two_mode_index(int n_a, int n_b) {
        const Eigen::Index n = n_a + n_b;
        return n * (n + 1) / 2 + n_b;
    }

    static Eigen::Index two_mode_size(FockCutoff cutoff) {
        const Eigen::Index n = cutoff.n_max + 1;
        return n * (n + 1) / 2;
    }

private:
    void enumerate(std::vector<int>& occ, int mode, int remaining) {
        if (mode == modes_ - 1) {
            occ[static_cast<std::size_t>(mode)] = remaining;
            std::size_t key = 0;
            for (int k : occ) key = key * static_cast<std::size_t>(n_max_ + 1) + static_cast<std::size_t>(k);
            lookup_[key] = size();
            occupations_.insert(occupations_.end(), occ.begin(), occ.end());
            return;
        }
        for (int k = remaining; k >= 0; --k) {
            occ[static_cast<std::size_t>(mode)] = k;
            enumerate(occ, mode + 1, remaining - k);
        }
    }

    int modes_;
    int n_max_;
    std::vector<int> occupations_;
    std::vector<Eigen::Index> lookup_;
};

/// Pure state on a truncated multimode Fock space.
template <class Real>
struct FockState {
    CVector<Real> amplitudes;
    int modes = 2;
    FockCutoff cutoff{};
    /// Probability discarded by the truncation when the state was prepared.
    Real tail_mass = 0;

    Real norm() const { return amplitudes.norm(); }

    void normalize() {
        const Real n = amplitudes.norm();
        if (n > 0) amplitudes /= n;
    }
};

template <class Real>
using TwoModeState = FockState<Real>;

/// Mixed state on a truncated multimode Fock space.
template <class Real>
struct DensityMatrix {
    CMatrix<Real> matrix;
    int modes = 2;
    FockCutoff cutoff{};

    Eigen::Index dim() const { return matrix.rows(); }

    static DensityMatrix from_pure(const FockState<Real>& psi) {
        return DensityMatrix{psi.amplitudes * psi.amplitudes.adjoint(), psi.modes, psi.cutoff};
    }
};

/// Single-mode amplitudes c_0..c_{n_max} together with the truncated weight.
template <class Real>
struct SingleModeAmplitudes {
    CVector<Real> amplitudes; ///< renormalized over the retained levels
    Real tail_mass = 0;       ///< sum_{n > n_max} |c_n|^2 of the untruncated state
};

namespace detail {

/// Exact (untruncated) amplitudes of a single-mode state for n <= n_max plus
/// tail_after[m] = sum_{n > m} |c_n|^2 for m = 0..n_max.
template <class Real>
struct ExactSingleMode {
    CVector<Real> amplitudes;
    std::vector<Real> tail_after;
};

template <class Real>
Real log_coherent_weight(Real abs_alpha, int n) {
    // log |<n|alpha>|
    if (abs_alpha == Real(0)) return n == 0 ? Real(0) : -std::numeric_limits<Real>::infinity();
    return -abs_alpha * abs_alpha / 2 + Real(n) * std::log(abs_alpha) - std::lgamma(Real(n) + 1) / 2;
}

/// Builds the exact distribution for amplitudes c_n = g(n) * <n|alpha>, where
/// g is a bounded complex weight (1 for a coherent state). Tail terms are
/// summed forward until they fall below machine relevance.
template <class Real, class Weight>
ExactSingleMode<Real> exact_from_coherent(Complex<Real> alpha, FockCutoff cutoff, Weight weight) {
    const int n_max = cutoff.n_max;
    const Real r = std::abs(alpha);
    const Real arg = std::arg(alpha);
    ExactSingleMode<Real> out;
    out.amplitudes.resize(n_max + 1);
    for (int n = 0; n <= n_max; ++n) {
        const Real mag = std::exp(log_coherent_weight(r, n));
        out.amplitudes(n) = weight(n) * std::polar(mag, Real(n) * arg);
    }
    // Forward tail beyond n_max.
    Real tail = 0;
    const Real lambda = r * r;
    for (int n = n_max + 1;; ++n) {
        const Real q = std::exp(2 * log_coherent_weight(r, n));
        tail += q * std::norm(weight(n));
        if (Real(n) > lambda && q <= std::numeric_limits<Real>::min() / std::numeric_limits<Real>::epsilon()) break;
        if (Real(n) > lambda && q <= Real(1e-40) * tail) break;
        if (n > n_max + 1000000) break;
    }
    out.tail_after.assign(static_cast<std::size_t>(n_max + 1), Real(0));
    Real acc = tail;
    for (int m = n_max; m >= 0; --m) {
        out.tail_after[static_cast<std::size_t>(m)] = acc;
        acc += std::norm(out.amplitudes(m));
    }
    return out;
}

template <class Real>
void check_tail(Real tail, Real eps_tail, const std::string& what) {
    if (!(tail <= eps_tail)) {
        throw Error(ErrorCode::TailTooLarge,
                    what + ": truncated tail mass " + std::to_string(static_cast<double>(tail)) +
                        " exceeds tolerance " + std::to_string(static_cast<double>(eps_tail)) +
                        "; increase n_max");
    }
}

} // namespace detail

/// Coherent state |alpha> on levels 0..n_max.
template <class Real>
SingleModeAmplitudes<Real> coherent_amplitudes(Complex<Real> alpha, FockCutoff cutoff,
                                               Real eps_tail = Real(1e-10)) {
    auto exact = detail::exact_from_coherent<Real>(alpha, cutoff, [](int) { return Complex<Real>(1); });
    const Real tail = exact.tail_after[static_cast<std::size_t>(cutoff.n_max)];
    detail::check_tail(tail, eps_tail, "coherent state");
    SingleModeAmplitudes<Real> out{std::move(exact.amplitudes), tail};
    out.amplitudes.normalize();
    return out;
}

/// Parameters of the superposition N_alpha (|alpha> + e^{i omega} |-alpha>).
template <class Real>
struct CatParams {
    Real alpha = 0;
    Real omega = 0;
    Real n_alpha_sq = Real(0.5);

    /// Denominator of the normalization, 2 + 2 e^{-2 alpha^2} cos(omega).
    static Real denominator(Real alpha, Real omega) {
        return 2 + 2 * std::exp(-2 * alpha * alpha) * std::cos(omega);
    }

    static CatParams make(Real alpha, Real omega, Real eps_cat = Real(1e-12)) {
        if (!(alpha >= 0) || !std::isfinite(alpha)) {
            throw Error(ErrorCode::Domain, "alpha must be a finite non-negative real");
        }
        if (!(omega >= 0 && omega < constants::pi<Real>)) {
            throw Error(ErrorCode::Domain, "omega must lie in [0, pi)");
        }
        const Real d = denominator(alpha, omega);
        if (!(d > eps_cat)) {
            throw Error(ErrorCode::DegenerateCat, "2 + 2 exp(-2 alpha^2) cos(omega) vanishes; the superposition is null");
        }
        return CatParams{alpha, omega, Real(1) / d};
    }
};

template <class Real>
SingleModeAmplitudes<Real> cat_state(const CatParams<Real>& params, FockCutoff cutoff,
                                     Real eps_tail = Real(1e-10)) {
    const Complex<Real> phase = std::polar(Real(1), params.omega);
    const Real n_alpha = std::sqrt(params.n_alpha_sq);
    // <n|-alpha> = (-1)^n <n|alpha>
    auto exact = detail::exact_from_coherent<Real>(Complex<Real>(params.alpha), cutoff, [&](int n) {
        return n_alpha * (Complex<Real>(1) + ((n % 2 == 0) ? phase : -phase));
    });
    const Real tail = exact.tail_after[static_cast<std::size_t>(cutoff.n_max)];
    detail::check_tail(tail, eps_tail, "superposition state");
    SingleModeAmplitudes<Real> out{std::move(exact.amplitudes), tail};
    out.amplitudes.normalize();
    return out;
}

/// |i alpha e^{i phi}>_A (x) N_alpha (|alpha> + e^{i omega} |-alpha>)_B, truncated
/// at n_A + n_B <= n_max and renormalized.
template <class Real>
TwoModeState<Real> input_state(Real alpha, Real phi, const CatParams<Real>& cat, FockCutoff cutoff,
                               Real eps_tail = Real(1e-10)) {
    if (!(alpha >= 0) || !std::isfinite(alpha)) {
        throw Error(ErrorCode::Domain, "alpha must be a finite non-negative real");
    }
    const int n_max = cutoff.n_max;
    const Complex<Real> alpha_a = Complex<Real>(0, 1) * alpha * std::polar(Real(1), phi);
    auto a = detail::exact_from_coherent<Real>(alpha_a, cutoff, [](int) { return Complex<Real>(1); });

    const Complex<Real> phase = std::polar(Real(1), cat.omega);
    const Real n_alpha = std::sqrt(cat.n_alpha_sq);
    auto b = detail::exact_from_coherent<Real>(Complex<Real>(cat.alpha), cutoff, [&](int n) {
        return n_alpha * (Complex<Real>(1) + ((n % 2 == 0) ? phase : -phase));
    });

    TwoModeState<Real> out;
    out.modes = 2;
    out.cutoff = cutoff;
    out.amplitudes = CVector<Real>::Zero(FockBasis::two_mode_size(cutoff));
    // Discarded weight: patterns with n_A + n_B > n_max.
    Real tail = a.tail_after[static_cast<std::size_t>(n_max)];
    for (int na = 0; na <= n_max; ++na) {
        tail += std::norm(a.amplitudes(na)) * b.tail_after[static_cast<std::size_t>(n_max - na)];
        for (int nb = 0; na + nb <= n_max; ++nb) {
            out.amplitudes(FockBasis::two_mode_index(na, nb)) = a.amplitudes(na) * b.amplitudes(nb);
        }
    }
    detail::check_tail(tail, eps_tail, "input state");
    out.tail_mass = tail;
    out.normalize();
    return out;
}

/// Schwinger operators J_x, J_y, J_z on the two-mode truncated basis.
template <class Real>
struct SchwingerOps {
    CMatrix<Real> jx;
    CMatrix<Real> jy;
    CMatrix<Real> jz;
    FockCutoff cutoff{};
};

template <class Real>
SchwingerOps<Real> schwinger_ops(FockCutoff cutoff) {
    const Eigen::Index dim = FockBasis::two_mode_size(cutoff);
    SchwingerOps<Real> ops{CMatrix<Real>::Zero(dim, dim), CMatrix<Real>::Zero(dim, dim),
                           CMatrix<Real>::Zero(dim, dim), cutoff};
    const Complex<Real> i(0, 1);
    for (int n = 0; n <= cutoff.n_max; ++n) {
        for (int na = 0; na <= n; ++na) {
            const int nb = n - na;
            const Eigen::Index col = FockBasis::two_mode_index(na, nb);
            ops.jz(col, col) = Real(na - nb) / 2;
            if (nb > 0) {
                // a^dag b |na, nb> = sqrt((na+1) nb) |na+1, nb-1>
                const Eigen::Index row = FockBasis::two_mode_index(na + 1, nb - 1);
                const Real c = std::sqrt(Real(na + 1) * Real(nb)) / 2;
                ops.jx(row, col) += c;
                ops.jy(row, col) += -i * c;
            }
            if (na > 0) {
                // b^dag a |na, nb> = sqrt(na (nb+1)) |na-1, nb+1>
                const Eigen::Index row = FockBasis::two_mode_index(na - 1, nb + 1);
                const Real c = std::sqrt(Real(na) * Real(nb + 1)) / 2;
                ops.jx(row, col) += c;
                ops.jy(row, col) += i * c;
            }
        }
    }
    return ops;
}

/// Annihilation operator of one mode on a truncated multimode basis. Exact:
/// lowering never leaves the retained space.
template <class Real>
CMatrix<Real> lowering_operator(const FockBasis& basis, int mode) {
    if (mode < 0 || mode >= basis.modes()) throw Error(ErrorCode::DimensionMismatch, "mode index out of range");
    CMatrix<Real> a = CMatrix<Real>::Zero(basis.size(), basis.size());
    std::vector<int> occ(static_cast<std::size_t>(basis.modes()));
    for (Eigen::Index col = 0; col < basis.size(); ++col) {
        auto src = basis.occupation(col);
        std::copy(src.begin(), src.end(), occ.begin());
        const int n = occ[static_cast<std::size_t>(mode)];
        if (n == 0) continue;
        occ[static_cast<std::size_t>(mode)] = n - 1;
        a(basis.index(occ), col) = std::sqrt(Real(n));
    }
    return a;
}

template <class Real>
CMatrix<Real> number_operator(const FockBasis& basis, int mode) {
    CMatrix<Real> n = CMatrix<Real>::Zero(basis.size(), basis.size());
    for (Eigen::Index i = 0; i < basis.size(); ++i) n(i, i) = Real(basis.occupation(i)[static_cast<std::size_t>(mode)]);
    return n;
}

/// <psi| O |psi>
template <class Real, class Derived>
Complex<Real> expectation(const FockState<Real>& psi, const Eigen::MatrixBase<Derived>& op) {
    if (op.rows() != psi.amplitudes.size() || op.cols() != psi.amplitudes.size()) {
        throw Error(ErrorCode::DimensionMismatch, "operator and state dimensions differ");
    }
    return psi.amplitudes.dot(op * psi.amplitudes);
}

/// Tr(rho O)
template <class Real, class Derived>
Complex<Real> expectation(const DensityMatrix<Real>& rho, const Eigen::MatrixBase<Derived>& op) {
    if (op.rows() != rho.dim() || op.cols() != rho.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "operator and density matrix dimensions differ");
    }
    return (rho.matrix * op).trace();
}

} // namespace mzqfi
