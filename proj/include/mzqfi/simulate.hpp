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
 * Full Fock-space simulation of the interferometer: input preparation, the
 * first 50:50 beam splitter, equal loss on both arms, and the numerical QFI.
 */

#pragma once

#include <cmath>

#include "mzqfi/analytic.hpp"
#include "mzqfi/channels.hpp"
#include "mzqfi/qfi.hpp"

namespace mzqfi {

/// ceil(2 N + 10 sqrt(N) + 10) with N the mean input photon number, raised
/// until the truncated input discards at most eps_tail.
template <class Real>
int default_n_max(Real alpha, Real omega, Real eps_tail = Real(1e-10)) {
    const Real n = analytic::total_photon_number(alpha, omega);
    int n_max = static_cast<int>(std::ceil(2 * n + 10 * std::sqrt(n) + 10));
    const auto cat = CatParams<Real>::make(alpha, omega);
    for (;; ++n_max) {
        try {
            input_state(alpha, Real(0), cat, FockCutoff{n_max}, eps_tail);
            return n_max;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::TailTooLarge) throw;
        }
    }
}

template <class Real>
TwoModeState<Real> prepare_input(Real alpha, Real phi, Real omega, FockCutoff cutoff, const Tolerances& tol = {}) {
    const auto cat = CatParams<Real>::make(alpha, omega, Real(tol.cat));
    return input_state(alpha, phi, cat, cutoff, Real(tol.tail));
}

/// U_MZ(theta) |in>.
template <class Real>
TwoModeState<Real> lossless_output_state(Real alpha, Real phi, Real omega, Real theta, FockCutoff cutoff,
                                         const Tolerances& tol = {}) {
    auto psi = prepare_input(alpha, phi, omega, cutoff, tol);
    psi.amplitudes = mz_unitary(theta, cutoff) * psi.amplitudes;
    return psi;
}

/// B^{1/2} |in>, the state entering the lossy arms.
template <class Real>
TwoModeState<Real> after_first_splitter(Real alpha, Real phi, Real omega, FockCutoff cutoff, const Tolerances& tol = {}) {
    auto psi = prepare_input(alpha, phi, omega, cutoff, tol);
    const auto blocks = beam_splitter_blocks(BeamSplitterSpec<Real>{Real(0.5)}, cutoff);
    CVector<Real> out(psi.amplitudes.size());
    for (int n = 0; n <= cutoff.n_max; ++n) {
        const Eigen::Index start = FockBasis::two_mode_index(n, 0);
        out.segment(start, n + 1) = blocks[static_cast<std::size_t>(n)] * psi.amplitudes.segment(start, n + 1);
    }
    psi.amplitudes = std::move(out);
    return psi;
}

/// Reduced state of arms A, B after loss with transmission T on each.
template <class Real>
DensityMatrix<Real> lossy_state(Real alpha, Real phi, Real omega, Real transmission, FockCutoff cutoff,
                                const Tolerances& tol = {}, LossForm form = LossForm::Ancilla) {
    const auto spec = LossSpec<Real>::make(transmission);
    const auto psi = after_first_splitter(alpha, phi, omega, cutoff, tol);
    if (form == LossForm::Ancilla) return loss_channel(psi, spec);
    return loss_channel(DensityMatrix<Real>::from_pure(psi), spec, LossForm::Kraus);
}

/// Numerical QFI of the phase shift (generator J_z) applied after loss. The
/// second beam splitter is omitted; it is a fixed unitary. T = 1 uses the
/// pure-state variance.
template <class Real>
QfiResult<Real> qfi_numeric(Real alpha, Real phi, Real omega, Real transmission, FockCutoff cutoff,
                            const Tolerances& tol = {}) {
    const auto spec = LossSpec<Real>::make(transmission);
    const auto psi = after_first_splitter(alpha, phi, omega, cutoff, tol);
    const auto ops = schwinger_ops<Real>(cutoff);
    if (transmission == Real(1)) return qfi_pure(psi, ops.jz);
    const auto rho = loss_channel(psi, spec);
    auto res = qfi_mixed(rho, ops.jz, Real(tol.rank));
    res.tail_mass = psi.tail_mass;
    return res;
}

/// Numerical QFI of the lossless interferometer, 4 Var(J_y) on U_MZ(theta)|in>.
template <class Real>
QfiResult<Real> qfi_numeric_lossless(Real alpha, Real phi, Real omega, FockCutoff cutoff, Real theta = Real(0),
                                     const Tolerances& tol = {}) {
    const auto psi = lossless_output_state(alpha, phi, omega, theta, cutoff, tol);
    return qfi_pure(psi, schwinger_ops<Real>(cutoff).jy);
}

} // namespace mzqfi
