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
 * Optical elements acting on truncated two-mode (and ancilla-extended) Fock
 * spaces: beam splitters, phase shifts, the Mach-Zehnder composite and the
 * pure photon-loss channel.
 *
 * All unitaries conserve the total photon number and are built block by
 * block, so they are exactly unitary on the truncated space.
 */

#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "mzqfi/fock.hpp"

namespace mzqfi {

template <class Real>
struct BeamSplitterSpec {
    Real transmission = Real(0.5);

    static BeamSplitterSpec make(Real transmission) {
        if (!(transmission >= 0 && transmission <= 1)) {
            throw Error(ErrorCode::Domain, "T must lie in [0,1]");
        }
        return BeamSplitterSpec{transmission};
    }

    /// Mixing angle tau_bs = 2 arccos(sqrt(T)), so that T = cos^2(tau_bs / 2).
    Real angle() const { return 2 * std::acos(std::sqrt(transmission)); }
    Real reflection() const { return 1 - transmission; }
};

template <class Real>
struct LossSpec {
    Real transmission = 1;

    static LossSpec make(Real transmission) {
        if (!(transmission >= 0 && transmission <= 1)) {
            throw Error(ErrorCode::Domain, "T must lie in [0,1]");
        }
        return LossSpec{transmission};
    }

    Real reflection() const { return 1 - transmission; }
};

enum class SpinAxis { X, Y, Z };

/// Per-block unitaries of a two-mode SU(2) rotation. Block n acts on the
/// n+1 states |n,0>, |n-1,1>, ..., |0,n> (that order).
template <class Real>
using BlockUnitary = std::vector<CMatrix<Real>>;

/// exp(i * angle * J_axis), one block per total photon number 0..n_max.
template <class Real>
BlockUnitary<Real> spin_rotation_blocks(SpinAxis axis, Real angle, FockCutoff cutoff) {
    BlockUnitary<Real> blocks;
    blocks.reserve(static_cast<std::size_t>(cutoff.n_max + 1));
    const Complex<Real> i(0, 1);
    for (int n = 0; n <= cutoff.n_max; ++n) {
        const Eigen::Index d = n + 1;
        if (axis == SpinAxis::Z) {
            CMatrix<Real> u = CMatrix<Real>::Zero(d, d);
            for (int k = 0; k < d; ++k) {
                const int na = n - k;
                u(k, k) = std::exp(i * angle * (Real(na - k) / 2));
            }
            blocks.push_back(std::move(u));
            continue;
        }
        // Local index k carries n_A = n - k, n_B = k. The raising pair element
        // <k-1| a^dag b |k> = sqrt((n-k+1) k).
        CMatrix<Real> j = CMatrix<Real>::Zero(d, d);
        for (int k = 1; k < d; ++k) {
            const Real c = std::sqrt(Real(n - k + 1) * Real(k)) / 2;
            if (axis == SpinAxis::X) {
                j(k - 1, k) = c;
                j(k, k - 1) = c;
            } else {
                j(k - 1, k) = -i * c;
                j(k, k - 1) = i * c;
            }
        }
        Eigen::SelfAdjointEigenSolver<CMatrix<Real>> es(j);
        const CVector<Real> phases = (i * angle * es.eigenvalues().template cast<Complex<Real>>()).array().exp();
        blocks.push_back(es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint());
    }
    return blocks;
}

template <class Real>
CMatrix<Real> assemble_two_mode(const BlockUnitary<Real>& blocks) {
    const FockCutoff cutoff{static_cast<int>(blocks.size()) - 1};
    const Eigen::Index dim = FockBasis::two_mode_size(cutoff);
    CMatrix<Real> u = CMatrix<Real>::Zero(dim, dim);
    for (int n = 0; n <= cutoff.n_max; ++n) {
        const Eigen::Index start = FockBasis::two_mode_index(n, 0);
        u.block(start, start, n + 1, n + 1) = blocks[static_cast<std::size_t>(n)];
    }
    return u;
}

template <class Real>
BlockUnitary<Real> beam_splitter_blocks(const BeamSplitterSpec<Real>& spec, FockCutoff cutoff) {
    return spin_rotation_blocks<Real>(SpinAxis::X, spec.angle(), cutoff);
}

/// B^T = exp(i tau_bs J_x) on the two-mode truncated space.
template <class Real>
CMatrix<Real> beam_splitter_unitary(const BeamSplitterSpec<Real>& spec, FockCutoff cutoff) {
    return assemble_two_mode(beam_splitter_blocks(spec, cutoff));
}

/// P_z = exp(i theta J_z): diagonal with entries e^{i theta (n_A - n_B) / 2}.
template <class Real>
CMatrix<Real> phase_shift_unitary(Real theta, FockCutoff cutoff) {
    const Eigen::Index dim = FockBasis::two_mode_size(cutoff);
    CVector<Real> diag(dim);
    for (int n = 0; n <= cutoff.n_max; ++n) {
        for (int na = n; na >= 0; --na) {
            const int nb = n - na;
            diag(FockBasis::two_mode_index(na, nb)) = std::polar(Real(1), theta * Real(na - nb) / 2);
        }
    }
    return diag.asDiagonal();
}

/// U_MZ = exp(-i theta J_y).
template <class Real>
CMatrix<Real> mz_unitary(Real theta, FockCutoff cutoff) {
    return assemble_two_mode(spin_rotation_blocks<Real>(SpinAxis::Y, -theta, cutoff));
}

/// B_x P_z B_x^dag with B_x = exp(-i pi/2 J_x), assembled from the elements.
template <class Real>
CMatrix<Real> mz_composite(Real theta, FockCutoff cutoff) {
    const CMatrix<Real> bx = assemble_two_mode(spin_rotation_blocks<Real>(SpinAxis::X, -constants::pi<Real> / 2, cutoff));
    return bx * phase_shift_unitary(theta, cutoff) * bx.adjoint();
}

namespace detail {

/// Groups of multimode basis indices sharing every occupation except those of
/// modes p and q, with n_p + n_q = m; entry k of a group has n_p = m - k.
inline std::vector<std::vector<Eigen::Index>> pair_groups(const FockBasis& basis, int p, int q) {
    std::vector<std::vector<Eigen::Index>> groups;
    std::vector<int> occ(static_cast<std::size_t>(basis.modes()));
    for (Eigen::Index i = 0; i < basis.size(); ++i) {
        auto src = basis.occupation(i);
        if (src[static_cast<std::size_t>(q)] != 0) continue;
        std::copy(src.begin(), src.end(), occ.begin());
        const int m = occ[static_cast<std::size_t>(p)];
        std::vector<Eigen::Index> group(static_cast<std::size_t>(m + 1));
        for (int k = 0; k <= m; ++k) {
            occ[static_cast<std::size_t>(p)] = m - k;
            occ[static_cast<std::size_t>(q)] = k;
            group[static_cast<std::size_t>(k)] = basis.index(occ);
        }
        groups.push_back(std::move(group));
    }
    return groups;
}

} // namespace detail

/// Applies a two-mode block unitary to modes (p, q) of a multimode pure state.
/// Mode p plays the role of mode A of the two-mode convention.
template <class Real>
void apply_pair_unitary(CVector<Real>& amplitudes, const FockBasis& basis, const BlockUnitary<Real>& blocks,
                        int p, int q) {
    if (amplitudes.size() != basis.size()) throw Error(ErrorCode::DimensionMismatch, "state/basis size mismatch");
    if (static_cast<int>(blocks.size()) != basis.n_max() + 1) {
        throw Error(ErrorCode::DimensionMismatch, "unitary and basis cutoffs differ");
    }
    CVector<Real> buffer;
    for (const auto& group : detail::pair_groups(basis, p, q)) {
        const auto m = static_cast<Eigen::Index>(group.size()) - 1;
        buffer.resize(m + 1);
        for (Eigen::Index k = 0; k <= m; ++k) buffer(k) = amplitudes(group[static_cast<std::size_t>(k)]);
        buffer = (blocks[static_cast<std::size_t>(m)] * buffer).eval();
        for (Eigen::Index k = 0; k <= m; ++k) amplitudes(group[static_cast<std::size_t>(k)]) = buffer(k);
    }
}

/// Same as above on both sides of a multimode density matrix: U rho U^dag.
template <class Real>
void apply_pair_unitary(CMatrix<Real>& rho, const FockBasis& basis, const BlockUnitary<Real>& blocks, int p, int q) {
    if (rho.rows() != basis.size() || rho.cols() != basis.size()) {
        throw Error(ErrorCode::DimensionMismatch, "density/basis size mismatch");
    }
    const auto groups = detail::pair_groups(basis, p, q);
    CVector<Real> buffer;
    auto apply_columns = [&](CMatrix<Real>& m) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            for (const auto& group : groups) {
                const auto top = static_cast<Eigen::Index>(group.size()) - 1;
                buffer.resize(top + 1);
                for (Eigen::Index k = 0; k <= top; ++k) buffer(k) = m(group[static_cast<std::size_t>(k)], c);
                buffer = (blocks[static_cast<std::size_t>(top)] * buffer).eval();
                for (Eigen::Index k = 0; k <= top; ++k) m(group[static_cast<std::size_t>(k)], c) = buffer(k);
            }
        }
    };
    apply_columns(rho);            // U rho
    CMatrix<Real> t = rho.adjoint(); // (U rho)^dag = rho U^dag
    apply_columns(t);              // U rho U^dag (Hermitian adjoint of)
    rho = t.adjoint();
}

namespace detail {

struct TraceSplit {
    FockBasis kept;
    FockBasis env;
    std::vector<Eigen::Index> kept_index;
    std::vector<Eigen::Index> env_index;
};

inline TraceSplit split_modes(const FockBasis& joint, const std::vector<int>& keep_modes) {
    const int modes = joint.modes();
    std::vector<bool> keep(static_cast<std::size_t>(modes), false);
    for (int m : keep_modes) {
        if (m < 0 || m >= modes || keep[static_cast<std::size_t>(m)]) {
            throw Error(ErrorCode::DimensionMismatch, "invalid keep_modes list");
        }
        keep[static_cast<std::size_t>(m)] = true;
    }
    const int n_keep = static_cast<int>(keep_modes.size());
    if (n_keep == 0 || n_keep == modes) throw Error(ErrorCode::DimensionMismatch, "partial trace must keep a proper subset of modes");
    std::vector<int> env_modes;
    for (int m = 0; m < modes; ++m) if (!keep[static_cast<std::size_t>(m)]) env_modes.push_back(m);

    TraceSplit split{FockBasis(n_keep, joint.cutoff()), FockBasis(modes - n_keep, joint.cutoff()), {}, {}};
    split.kept_index.resize(static_cast<std::size_t>(joint.size()));
    split.env_index.resize(static_cast<std::size_t>(joint.size()));
    std::vector<int> ko(static_cast<std::size_t>(n_keep)), eo(env_modes.size());
    for (Eigen::Index i = 0; i < joint.size(); ++i) {
        auto occ = joint.occupation(i);
        for (std::size_t k = 0; k < ko.size(); ++k) ko[k] = occ[static_cast<std::size_t>(keep_modes[k])];
        for (std::size_t k = 0; k < eo.size(); ++k) eo[k] = occ[static_cast<std::size_t>(env_modes[k])];
        split.kept_index[static_cast<std::size_t>(i)] = split.kept.index(ko);
        split.env_index[static_cast<std::size_t>(i)] = split.env.index(eo);
    }
    return split;
}

} // namespace detail

/// Reduced state of a multimode density matrix on keep_modes (in the given order).
template <class Real>
DensityMatrix<Real> partial_trace(const DensityMatrix<Real>& joint, const std::vector<int>& keep_modes) {
    const FockBasis basis(joint.modes, joint.cutoff);
    if (joint.dim() != basis.size()) throw Error(ErrorCode::DimensionMismatch, "density matrix does not match its basis");
    const auto split = detail::split_modes(basis, keep_modes);
    // Bucket joint indices by environment pattern.
    std::vector<std::vector<Eigen::Index>> by_env(static_cast<std::size_t>(split.env.size()));
    for (Eigen::Index i = 0; i < basis.size(); ++i) by_env[static_cast<std::size_t>(split.env_index[static_cast<std::size_t>(i)])].push_back(i);

    CMatrix<Real> out = CMatrix<Real>::Zero(split.kept.size(), split.kept.size());
    for (const auto& members : by_env) {
        for (Eigen::Index r : members) {
            const Eigen::Index kr = split.kept_index[static_cast<std::size_t>(r)];
            for (Eigen::Index c : members) {
                out(kr, split.kept_index[static_cast<std::size_t>(c)]) += joint.matrix(r, c);
            }
        }
    }
    return DensityMatrix<Real>{std::move(out), static_cast<int>(keep_modes.size()), joint.cutoff};
}

/// Reduced state of a multimode pure state: rho = Psi Psi^dag with Psi the
/// (kept x environment) coefficient matrix.
template <class Real>
DensityMatrix<Real> partial_trace(const FockState<Real>& joint, const std::vector<int>& keep_modes) {
    const FockBasis basis(joint.modes, joint.cutoff);
    if (joint.amplitudes.size() != basis.size()) throw Error(ErrorCode::DimensionMismatch, "state does not match its basis");
    const auto split = detail::split_modes(basis, keep_modes);
    CMatrix<Real> psi = CMatrix<Real>::Zero(split.kept.size(), split.env.size());
    for (Eigen::Index i = 0; i < basis.size(); ++i) {
        psi(split.kept_index[static_cast<std::size_t>(i)], split.env_index[static_cast<std::size_t>(i)]) = joint.amplitudes(i);
    }
    CMatrix<Real> rho = CMatrix<Real>::Zero(psi.rows(), psi.rows());
    rho.template selfadjointView<Eigen::Lower>().rankUpdate(psi);
    rho = rho.template selfadjointView<Eigen::Lower>();
    return DensityMatrix<Real>{std::move(rho), static_cast<int>(keep_modes.size()), joint.cutoff};
}

enum class LossForm { Ancilla, Kraus };

namespace detail {

/// Embeds a two-mode pure state into modes (A, B, C, D) with C, D in vacuum.
template <class Real>
FockState<Real> adjoin_vacuum_ancillas(const FockState<Real>& psi, const FockBasis& joint) {
    FockState<Real> out{CVector<Real>::Zero(joint.size()), 4, psi.cutoff, psi.tail_mass};
    for (int n = 0; n <= psi.cutoff.n_max; ++n) {
        for (int na = n; na >= 0; --na) {
            out.amplitudes(joint.index({na, n - na, 0, 0})) = psi.amplitudes(FockBasis::two_mode_index(na, n - na));
        }
    }
    return out;
}

template <class Real>
Real kraus_coefficient(Real transmission, int n, int k) {
    // <n-k| K_k |n> with K_k = sqrt(R^k / k!) a^k T^{n/2}: sqrt(C(n,k) R^k T^{n-k})
    const Real r = 1 - transmission;
    if (k == 0) return std::pow(transmission, Real(n) / 2);
    if (r == Real(0)) return Real(0);
    if (transmission == Real(0)) return k == n ? Real(1) : Real(0);
    const Real log_binom = std::lgamma(Real(n) + 1) - std::lgamma(Real(k) + 1) - std::lgamma(Real(n - k) + 1);
    return std::exp((log_binom + Real(k) * std::log(r) + Real(n - k) * std::log(transmission)) / 2);
}

/// Pure loss on one mode of a two-mode density matrix, sum_k K_k rho K_k^dag.
/// Each K_k maps |n_A, n_B> onto a single basis vector, so the sum is an
/// index remapping.
template <class Real>
CMatrix<Real> kraus_on_mode(const CMatrix<Real>& rho, FockCutoff cutoff, Real transmission, int mode) {
    const FockBasis basis(2, cutoff);
    const Eigen::Index dim = basis.size();
    CMatrix<Real> out = CMatrix<Real>::Zero(dim, dim);
    for (int k = 0; k <= cutoff.n_max; ++k) {
        std::vector<Eigen::Index> target(static_cast<std::size_t>(dim), -1);
        std::vector<Real> coeff(static_cast<std::size_t>(dim), 0);
        for (Eigen::Index i = 0; i < dim; ++i) {
            auto occ = basis.occupation(i);
            const int n = occ[static_cast<std::size_t>(mode)];
            if (n < k) continue;
            const int lowered[2] = {mode == 0 ? occ[0] - k : occ[0], mode == 1 ? occ[1] - k : occ[1]};
            target[static_cast<std::size_t>(i)] = FockBasis::two_mode_index(lowered[0], lowered[1]);
            coeff[static_cast<std::size_t>(i)] = kraus_coefficient(transmission, n, k);
        }
        for (Eigen::Index c = 0; c < dim; ++c) {
            const Eigen::Index tc = target[static_cast<std::size_t>(c)];
            if (tc < 0 || coeff[static_cast<std::size_t>(c)] == Real(0)) continue;
            const Real wc = coeff[static_cast<std::size_t>(c)];
            for (Eigen::Index r = 0; r < dim; ++r) {
                const Eigen::Index tr = target[static_cast<std::size_t>(r)];
                if (tr < 0) continue;
                out(tr, tc) += coeff[static_cast<std::size_t>(r)] * wc * rho(r, c);
            }
        }
    }
    return out;
}

template <class Real>
void symmetrize(CMatrix<Real>& m) {
    m = ((m + m.adjoint()) / 2).eval();
}

} // namespace detail

/// Photon loss with transmission T on both modes of a pure two-mode state,
/// realized by beam splitters onto vacuum ancillas C (partner of A) and D
/// (partner of B). Returns the purified four-mode state.
template <class Real>
FockState<Real> lossy_purification(const FockState<Real>& psi, const LossSpec<Real>& spec) {
    if (psi.modes != 2 || psi.amplitudes.size() != FockBasis::two_mode_size(psi.cutoff)) {
        throw Error(ErrorCode::DimensionMismatch, "loss channel expects a two-mode state");
    }
    const FockBasis joint(4, psi.cutoff);
    auto out = detail::adjoin_vacuum_ancillas(psi, joint);
    const auto blocks = beam_splitter_blocks(BeamSplitterSpec<Real>{spec.transmission}, psi.cutoff);
    apply_pair_unitary(out.amplitudes, joint, blocks, 0, 2);
    apply_pair_unitary(out.amplitudes, joint, blocks, 1, 3);
    return out;
}

/// Loss applied to a pure two-mode state; the ancillas are traced out.
template <class Real>
DensityMatrix<Real> loss_channel(const FockState<Real>& psi, const LossSpec<Real>& spec) {
    auto rho = partial_trace(lossy_purification(psi, spec), {0, 1});
    detail::symmetrize(rho.matrix);
    return rho;
}

/// Loss with equal transmission on both modes of a two-mode density matrix.
template <class Real>
DensityMatrix<Real> loss_channel(const DensityMatrix<Real>& rho, const LossSpec<Real>& spec,
                                 LossForm form = LossForm::Kraus) {
    if (rho.modes != 2 || rho.dim() != FockBasis::two_mode_size(rho.cutoff)) {
        throw Error(ErrorCode::DimensionMismatch, "loss channel expects a two-mode density matrix");
    }
    DensityMatrix<Real> out{CMatrix<Real>(), 2, rho.cutoff};
    if (form == LossForm::Kraus) {
        out.matrix = detail::kraus_on_mode(rho.matrix, rho.cutoff, spec.transmission, 0);
        out.matrix = detail::kraus_on_mode(out.matrix, rho.cutoff, spec.transmission, 1);
    } else {
        // rho (x) |00><00| through B_AC B_BD, then trace over C, D.
        const FockBasis joint(4, rho.cutoff);
        DensityMatrix<Real> big{CMatrix<Real>::Zero(joint.size(), joint.size()), 4, rho.cutoff};
        const FockBasis two(2, rho.cutoff);
        std::vector<Eigen::Index> embed(static_cast<std::size_t>(two.size()));
        for (Eigen::Index i = 0; i < two.size(); ++i) {
            auto occ = two.occupation(i);
            embed[static_cast<std::size_t>(i)] = joint.index({occ[0], occ[1], 0, 0});
        }
        for (Eigen::Index c = 0; c < two.size(); ++c)
            for (Eigen::Index r = 0; r < two.size(); ++r)
                big.matrix(embed[static_cast<std::size_t>(r)], embed[static_cast<std::size_t>(c)]) = rho.matrix(r, c);
        const auto blocks = beam_splitter_blocks(BeamSplitterSpec<Real>{spec.transmission}, rho.cutoff);
        apply_pair_unitary(big.matrix, joint, blocks, 0, 2);
        apply_pair_unitary(big.matrix, joint, blocks, 1, 3);
        out.matrix = partial_trace(big, {0, 1}).matrix;
    }
    detail::symmetrize(out.matrix);
    return out;
}

} // namespace mzqfi
