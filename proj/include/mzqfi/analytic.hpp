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
 * Closed-form QFI of the Mach-Zehnder interferometer fed by |i alpha e^{i phi}>
 * and N_alpha (|alpha> + e^{i omega} |-alpha>), without and with equal photon
 * loss on both arms.
 *
 * With loss the reduced state lives on span{|A>, |B>} where |A>, |B> are the
 * two coherent products after the first beam splitter and attenuation; all
 * lossy quantities are written in the orthonormal basis {|A>, |A_perp>}.
 * alpha is a non-negative real throughout.
 */

#pragma once

#include <cmath>
#include <complex>

#include "mzqfi/fock.hpp"

namespace mzqfi::analytic {

template <class Real>
struct LosslessMoments {
    Real n_a = 0;            ///< <a^dag a>
    Real n_b = 0;            ///< <b^dag b>
    Complex<Real> a_dag_sq;  ///< <a^dag^2>
    Complex<Real> b_sq;      ///< <b^2>
    Real jy = 0;             ///< <J_y>
};

namespace detail {

template <class Real>
void check_phi(Real phi) {
    if (!std::isfinite(phi)) throw Error(ErrorCode::Domain, "phi must be finite");
}

template <class Real>
void check_transmission(Real t) {
    if (!(t >= 0 && t <= 1)) throw Error(ErrorCode::Domain, "T must lie in [0,1]");
}

} // namespace detail

template <class Real>
LosslessMoments<Real> lossless_moments(Real alpha, Real phi, Real omega, Real eps_cat = Real(1e-12)) {
    detail::check_phi(phi);
    const auto cat = CatParams<Real>::make(alpha, omega, eps_cat);
    const Real a2 = alpha * alpha;
    const Real e = std::exp(-2 * a2);
    const Real c = e * std::cos(omega);
    LosslessMoments<Real> m;
    m.n_a = a2;
    m.n_b = a2 * (1 - c) / (1 + c);
    m.a_dag_sq = -a2 * std::polar(Real(1), -2 * phi);
    m.b_sq = Complex<Real>(a2);
    m.jy = 2 * a2 * cat.n_alpha_sq * e * std::sin(phi) * std::sin(omega);
    return m;
}

/// Lossless QFI for an arbitrary input phase phi.
template <class Real>
Real qfi_lossless(Real alpha, Real phi, Real omega, Real eps_cat = Real(1e-12)) {
    const auto m = lossless_moments(alpha, phi, omega, eps_cat);
    const auto cat = CatParams<Real>::make(alpha, omega, eps_cat);
    const Real a4 = alpha * alpha * alpha * alpha;
    const Real s = std::sin(omega) * std::sin(phi);
    return 2 * m.n_a * m.n_b + m.n_a + m.n_b + 2 * a4 * std::cos(2 * phi) -
           16 * a4 * cat.n_alpha_sq * cat.n_alpha_sq * std::exp(-4 * alpha * alpha) * s * s;
}

/// Lossless QFI at phi = 0 in terms of the port photon numbers.
template <class Real>
Real qfi_lossless_max(Real alpha, Real omega, Real eps_cat = Real(1e-12)) {
    const auto m = lossless_moments(alpha, Real(0), omega, eps_cat);
    return 2 * m.n_a * m.n_b + m.n_a + m.n_b + 2 * m.n_a * m.n_a;
}

/// N = n_A + n_B = 2 n_A / (1 + e^{-2 alpha^2} cos omega).
template <class Real>
Real total_photon_number(Real alpha, Real omega, Real eps_cat = Real(1e-12)) {
    CatParams<Real>::make(alpha, omega, eps_cat);
    return 2 * alpha * alpha / (1 + std::exp(-2 * alpha * alpha) * std::cos(omega));
}

/// F_m = N + (1 + e^{-2 alpha^2} cos omega) N^2.
template <class Real>
Real qfi_lossless_max_in_N(Real alpha, Real omega, Real eps_cat = Real(1e-12)) {
    const Real n = total_photon_number(alpha, omega, eps_cat);
    return n + (1 + std::exp(-2 * alpha * alpha) * std::cos(omega)) * n * n;
}

/// Reduced two-mode state after the first beam splitter and loss, written as
/// [[eta, xi e^{i tau}], [xi e^{-i tau}, 1 - eta]] in the {|A>, |A_perp>} basis.
template <class Real>
struct LossyRho2x2 {
    Real alpha = 0;
    Real transmission = 1;
    Real n_alpha_sq = Real(0.5);
    Real eta = 1;
    Real xi = 0;
    Real tau_phase = 0;
    Real p_t = 1;  ///< <A|B> = e^{-2 alpha^2 T}
    Real p_r = 1;  ///< e^{-2 alpha^2 R}, overlap of the ancilla states
    Real det_rho = 0;
    Real sigma_z_exp = 1;

    Real one_minus_pt_sq() const { return -std::expm1(-4 * alpha * alpha * transmission); }

    Eigen::Matrix<Complex<Real>, 2, 2> matrix() const {
        Eigen::Matrix<Complex<Real>, 2, 2> m;
        m << Complex<Real>(eta), xi * std::polar(Real(1), tau_phase),
             xi * std::polar(Real(1), -tau_phase), Complex<Real>(1 - eta);
        return m;
    }
};

template <class Real>
LossyRho2x2<Real> reduced_density(Real alpha, Real phi, Real omega, Real transmission,
                                  Real eps_basis = Real(1e-12), Real eps_cat = Real(1e-12)) {
    detail::check_phi(phi);
    detail::check_transmission(transmission);
    const auto cat = CatParams<Real>::make(alpha, omega, eps_cat);
    LossyRho2x2<Real> rho;
    rho.alpha = alpha;
    rho.transmission = transmission;
    rho.n_alpha_sq = cat.n_alpha_sq;
    const Real a2 = alpha * alpha;
    const Real r = 1 - transmission;
    rho.p_t = std::exp(-2 * a2 * transmission);
    rho.p_r = std::exp(-2 * a2 * r);
    const Real q = rho.one_minus_pt_sq();
    if (!(q >= eps_basis)) {
        throw Error(ErrorCode::BasisDegenerate,
                    "1 - p_t^2 is below tolerance: |A> and |B> coincide (alpha or T too small)");
    }
    const Real n2 = cat.n_alpha_sq;
    rho.eta = n2 * (1 + 2 * std::exp(-2 * a2) * std::cos(omega) + rho.p_t * rho.p_t);
    const Complex<Real> off = n2 * (rho.p_r * std::polar(Real(1), -omega) + rho.p_t) * std::sqrt(q);
    rho.xi = std::abs(off);
    rho.tau_phase = std::arg(off);
    rho.det_rho = n2 * n2 * q * (-std::expm1(-4 * a2 * r));
    rho.sigma_z_exp = 1 - 2 * n2 * q;
    return rho;
}

template <class Real>
struct Eigensystem2x2 {
    Real lambda_plus = 1;
    Real lambda_minus = 0;
    Real v_plus = 1;
    Real v_minus = 0;
    /// lambda_+ == lambda_-: eigenvectors are not unique.
    bool degenerate = false;

    /// |lambda_+-> = +-v_+- e^{i tau} |A> + v_-+ |A_perp> as columns.
    Eigen::Matrix<Complex<Real>, 2, 2> vectors(Real tau_phase) const {
        const Complex<Real> ph = std::polar(Real(1), tau_phase);
        Eigen::Matrix<Complex<Real>, 2, 2> v;
        v << v_plus * ph, -v_minus * ph,
             Complex<Real>(v_minus), Complex<Real>(v_plus);
        return v;
    }
};

template <class Real>
Eigensystem2x2<Real> eigensystem_2x2(const LossyRho2x2<Real>& rho) {
    Eigensystem2x2<Real> es;
    const Real disc = std::sqrt(std::max(Real(0), 1 - 4 * rho.det_rho));
    es.lambda_plus = (1 + disc) / 2;
    es.lambda_minus = (1 - disc) / 2;
    if (!(disc > 0)) {
        es.degenerate = true;
        es.v_plus = std::sqrt(Real(0.5));
        es.v_minus = std::sqrt(Real(0.5));
        return es;
    }
    const Real shift = rho.sigma_z_exp / (2 * disc);
    es.v_plus = std::sqrt(std::max(Real(0), Real(0.5) + shift));
    es.v_minus = std::sqrt(std::max(Real(0), Real(0.5) - shift));
    return es;
}

/// Auxiliary quantities of the lossy QFI.
template <class Real>
struct LossyQfiTerms {
    Real x = 0;
    Real mu = 0;
    Real z = 0;
    Real z1 = 0;
    Real z2 = 0;
    Real m_aux = 0;
    /// mu^2 / Z, equal to p_t^2 / (1 - p_t^2); finite even when Z underflows.
    Real mu_sq_over_z = 0;
};

template <class Real>
LossyQfiTerms<Real> lossy_terms(const LossyRho2x2<Real>& rho) {
    LossyQfiTerms<Real> t;
    const Real n2 = rho.n_alpha_sq;
    const Real pt2 = rho.p_t * rho.p_t;
    const Real pr2 = rho.p_r * rho.p_r;
    const Real q = rho.one_minus_pt_sq();
    t.m_aux = std::sqrt(std::max(Real(0), n2 * (1 - n2 * (2 - pt2 - pr2))));
    const Real ct = std::cos(rho.tau_phase);
    const Real st = std::sin(rho.tau_phase);
    const Real sz = rho.sigma_z_exp;
    t.x = 2 * rho.p_t * (n2 * rho.p_t - ct * t.m_aux);
    t.z = 1 - sz * sz - 4 * rho.det_rho;
    t.mu = std::sqrt(std::max(Real(0), t.z)) * rho.p_t / std::sqrt(q);
    t.z1 = (1 - sz * sz) * ct * ct + 4 * rho.det_rho * st * st;
    t.z2 = (1 - sz * sz) * st * st + 4 * rho.det_rho * ct * ct;
    t.mu_sq_over_z = pt2 / q;
    return t;
}

/// Lossy QFI for phase phi and transmission T on both arms.
template <class Real>
Real qfi_lossy(Real alpha, Real phi, Real omega, Real transmission, Real eps_basis = Real(1e-12),
               Real eps_cat = Real(1e-12)) {
    detail::check_phi(phi);
    detail::check_transmission(transmission);
    CatParams<Real>::make(alpha, omega, eps_cat);
    if (transmission == Real(0) || alpha == Real(0)) return Real(0);
    const auto rho = reduced_density(alpha, phi, omega, transmission, eps_basis, eps_cat);
    const auto t = lossy_terms(rho);
    const Real a2 = alpha * alpha;
    const Real ta2 = transmission * a2;
    const Real k = 4 * ta2 * ta2;
    const Real sz = rho.sigma_z_exp;
    const Real ct = std::cos(rho.tau_phase);
    const Real st = std::sin(rho.tau_phase);
    const Real c = std::cos(phi);
    const Real s = std::sin(phi);
    return 2 * ta2 * (t.x + 1) + k * t.x +
           k * c * c * (t.z + 2 * t.mu * sz * ct - t.mu_sq_over_z * t.z1) -
           k * s * s * t.mu_sq_over_z * t.z2 -
           k * std::sin(2 * phi) * (sz - t.mu * ct) * t.mu * st;
}

/// Lossy QFI at phi = 0.
template <class Real>
Real qfi_lossy_max(Real alpha, Real omega, Real transmission, Real eps_basis = Real(1e-12),
                   Real eps_cat = Real(1e-12)) {
    detail::check_transmission(transmission);
    CatParams<Real>::make(alpha, omega, eps_cat);
    if (transmission == Real(0) || alpha == Real(0)) return Real(0);
    const auto rho = reduced_density(alpha, Real(0), omega, transmission, eps_basis, eps_cat);
    const auto t = lossy_terms(rho);
    const Real ta2 = transmission * alpha * alpha;
    const Real k = 4 * ta2 * ta2;
    const Real sz = rho.sigma_z_exp;
    const Real ct = std::cos(rho.tau_phase);
    return 2 * ta2 * (t.x + 1) + k * t.z + k * (t.x + 2 * t.mu * sz * ct - t.mu_sq_over_z * t.z1);
}

/// Lossy QFI for the even superposition (omega = 0).
template <class Real>
Real qfi_lossy_even(Real alpha, Real phi, Real transmission, Real eps_basis = Real(1e-12)) {
    detail::check_phi(phi);
    detail::check_transmission(transmission);
    if (!(alpha >= 0) || !std::isfinite(alpha)) throw Error(ErrorCode::Domain, "alpha must be a finite non-negative real");
    if (transmission == Real(0) || alpha == Real(0)) return Real(0);
    const Real a2 = alpha * alpha;
    if (!(-std::expm1(-4 * a2 * transmission) >= eps_basis)) {
        throw Error(ErrorCode::BasisDegenerate, "1 - p_t^2 is below tolerance");
    }
    const Real np2 = 1 / (2 + 2 * std::exp(-2 * a2));
    const Real pt = std::exp(-2 * a2 * transmission);
    const Real one_minus_pr2 = -std::expm1(-4 * a2 * (1 - transmission));
    const Real ta2 = transmission * a2;
    const Real c = std::cos(phi);
    const Real s = std::sin(phi);
    return 4 * ta2 * (np2 + ta2 * (2 * np2 - 1)) +
           4 * ta2 * ta2 * c * c * (1 - 4 * np2 * np2 * one_minus_pr2) -
           16 * ta2 * ta2 * s * s * np2 * np2 * one_minus_pr2 * pt * pt;
}

/// Matrix elements of J_z and J_z^2 between the coherent products |A>, |B>.
template <class Real>
struct CoherentPairMoments {
    Real jz2_aa = 0;          ///< <A|J_z^2|A>
    Real jz2_bb = 0;          ///< <B|J_z^2|B>
    Real jz2_ab = 0;          ///< <A|J_z^2|B> = <B|J_z^2|A>
    Real jz_aa = 0;           ///< <A|J_z|A> = -<B|J_z|B>
    Complex<Real> jz_ab;      ///< <A|J_z|B> = -<B|J_z|A>
    Real overlap = 1;         ///< <A|B>
};

template <class Real>
CoherentPairMoments<Real> coherent_pair_moments(Real alpha, Real phi, Real transmission) {
    detail::check_phi(phi);
    detail::check_transmission(transmission);
    const Real ta2 = transmission * alpha * alpha;
    const Real c = std::cos(phi);
    const Real s = std::sin(phi);
    CoherentPairMoments<Real> m;
    m.overlap = std::exp(-2 * ta2);
    m.jz2_aa = ta2 / 2 + ta2 * ta2 * c * c;
    m.jz2_bb = m.jz2_aa;
    m.jz2_ab = -m.overlap * ta2 * ta2 * s * s;
    m.jz_aa = ta2 * c;
    m.jz_ab = Complex<Real>(0, m.overlap * ta2 * s);
    return m;
}

/// Mutations of the closed-form assembly, used to check that the validation
/// suite notices a corrupted term.
enum class AssemblyFault { None, FlipPart2Sin2Phi };

template <class Real>
struct ThreePartAssembly {
    Real part1 = 0; ///< 4 lambda_+ <J_z^2>_+ + 4 lambda_- <J_z^2>_-
    Real part2 = 0; ///< -4 lambda_+- |<lambda_+-|J_z|lambda_+->|^2
    Real part3 = 0; ///< -16 lambda_+ lambda_- |<lambda_+|J_z|lambda_->|^2
    Real total = 0;
};

/// The three parts of the lossy QFI in closed form.
template <class Real>
ThreePartAssembly<Real> three_part_assembly(Real alpha, Real phi, Real omega, Real transmission,
                                            AssemblyFault fault = AssemblyFault::None,
                                            Real eps_basis = Real(1e-12)) {
    const auto rho = reduced_density(alpha, phi, omega, transmission, eps_basis);
    const auto es = eigensystem_2x2(rho);
    const auto t = lossy_terms(rho);
    const Real n2 = rho.n_alpha_sq;
    const Real pt = rho.p_t;
    const Real q = rho.one_minus_pt_sq();
    const Real sq = std::sqrt(q);
    const Real ta2 = transmission * alpha * alpha;
    const Real k = 4 * ta2 * ta2;
    const Real ct = std::cos(rho.tau_phase);
    const Real st = std::sin(rho.tau_phase);
    const Real c2 = std::cos(phi) * std::cos(phi);
    const Real s2 = std::sin(phi) * std::sin(phi);
    const Real s2phi = std::sin(2 * phi);
    const Real vp = es.v_plus;
    const Real vm = es.v_minus;
    const Real d = vp * vp - vm * vm;
    const Real kk = pt * vp * vm / sq;  // p_t v_+ v_- / sqrt(1 - p_t^2)
    const Real r = pt * pt / q;
    const Real w = (vp * vp * vp * vm - vm * vm * vm * vp) * pt / sq;

    ThreePartAssembly<Real> out;
    out.part1 = 2 * ta2 * (1 + 2 * n2 * pt * pt - 2 * pt * t.m_aux * ct) +
                k * (2 * n2 * pt * pt - 2 * pt * t.m_aux * ct) + k * c2;

    const Real sin2phi_sign = fault == AssemblyFault::FlipPart2Sin2Phi ? Real(-1) : Real(1);
    out.part2 = -k * c2 * (d * d + 4 * kk * kk * ct * ct - 4 * d * kk * ct) -
                k * s2 * (4 * kk * kk * st * st) +
                sin2phi_sign * k * s2phi * (2 * kk * kk * std::sin(2 * rho.tau_phase) - 2 * d * kk * st);

    out.part3 = -4 * rho.det_rho * k *
                (c2 * (4 * vp * vp * vm * vm + r * st * st + 4 * w * ct + d * d * r * ct * ct) +
                 s2 * (d * d * r * st * st + r * ct * ct) +
                 s2phi * ((1 - d * d) * r * st * ct - 2 * w * st));
    out.total = out.part1 + out.part2 + out.part3;
    return out;
}

/// The same three parts by direct 2x2 algebra: eigenvectors expanded in the
/// non-orthogonal {|A>, |B>} basis and contracted with the coherent-pair moments.
template <class Real>
ThreePartAssembly<Real> support_algebra_parts(Real alpha, Real phi, Real omega, Real transmission,
                                              Real eps_basis = Real(1e-12)) {
    using M2 = Eigen::Matrix<Complex<Real>, 2, 2>;
    using V2 = Eigen::Matrix<Complex<Real>, 2, 1>;
    const auto rho = reduced_density(alpha, phi, omega, transmission, eps_basis);
    const auto es = eigensystem_2x2(rho);
    const auto mom = coherent_pair_moments(alpha, phi, transmission);
    const Real pt = rho.p_t;
    const Real sq = std::sqrt(rho.one_minus_pt_sq());
    // |A_perp> = (|B> - p_t |A>) / sqrt(1 - p_t^2): change of basis to {|A>, |B>}.
    M2 to_ab;
    to_ab << Complex<Real>(1), Complex<Real>(-pt / sq), Complex<Real>(0), Complex<Real>(1 / sq);
    const M2 coeff = to_ab * es.vectors(rho.tau_phase);

    M2 jz;
    jz << Complex<Real>(mom.jz_aa), mom.jz_ab, -mom.jz_ab, Complex<Real>(-mom.jz_aa);
    M2 jz2;
    jz2 << Complex<Real>(mom.jz2_aa), Complex<Real>(mom.jz2_ab), Complex<Real>(mom.jz2_ab), Complex<Real>(mom.jz2_bb);
    // Rows/columns index bra/ket in {A, B}; <B|J_z|A> = conj(<A|J_z|B>) = -<A|J_z|B>.

    auto elem = [](const V2& x, const M2& op, const V2& y) { return x.dot(op * y); };
    const V2 plus = coeff.col(0);
    const V2 minus = coeff.col(1);
    ThreePartAssembly<Real> out;
    out.part1 = 4 * es.lambda_plus * std::real(elem(plus, jz2, plus)) +
                4 * es.lambda_minus * std::real(elem(minus, jz2, minus));
    out.part2 = -4 * es.lambda_plus * std::norm(elem(plus, jz, plus)) -
                4 * es.lambda_minus * std::norm(elem(minus, jz, minus));
    out.part3 = -16 * es.lambda_plus * es.lambda_minus * std::norm(elem(plus, jz, minus));
    out.total = out.part1 + out.part2 + out.part3;
    return out;
}

} // namespace mzqfi::analytic
