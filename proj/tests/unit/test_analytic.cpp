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

#include <doctest.h>

#include <random>

#include "mzqfi/analytic.hpp"
#include "mzqfi/simulate.hpp"
#include "test_support.hpp"

using namespace mzqfi;
using namespace mzqfi::analytic;
using mzqfi::test::kPi;

namespace {

double phi_argmax(const std::function<double(double)>& f) {
    double best = -1, arg = 0;
    for (int k = 0; k < 2001; ++k) {
        const double phi = -kPi / 2 + kPi * k / 2001.0;
        const double v = f(phi);
        if (v > best) {
            best = v;
            arg = phi;
        }
    }
    return arg;
}

/// |A> and |B>: the two coherent products reaching the interferometer arms
/// after the first beam splitter and loss.
std::pair<FockState<double>, FockState<double>> coherent_pair_states(double a, double phi, double T, FockCutoff cut) {
    const Complex<double> e = std::polar(1.0, phi);
    const Complex<double> i(0, 1);
    const double s = std::sqrt(T / 2);
    const auto A = test::coherent_product(i * a * (1.0 + e) * s, a * (1.0 - e) * s, cut);
    const auto B = test::coherent_product(i * a * (e - 1.0) * s, -a * (1.0 + e) * s, cut);
    return {A, B};
}

} // namespace

TEST_SUITE("analytic") {

TEST_CASE("lossless moments") {
    SUBCASE("n_B at omega=0") {
        const auto m = lossless_moments(0.3, 0.0, 0.0);
        CHECK(m.n_b == doctest::Approx(0.09 * (1 - std::exp(-0.18)) / (1 + std::exp(-0.18))).epsilon(1e-14));
        CHECK(m.n_a == doctest::Approx(0.09).epsilon(1e-15));
    }
    SUBCASE("<J_y> vanishes at omega=0") {
        for (double phi : {-1.0, 0.3, 1.2}) CHECK(lossless_moments(0.8, phi, 0.0).jy == 0.0);
    }
    SUBCASE("moments agree with Fock expectations") {
        const double a = 0.3, phi = kPi / 4, w = 6 * kPi / 7;
        const FockCutoff cut{24};
        const auto psi = input_state(a, phi, CatParams<double>::make(a, w), cut);
        const FockBasis basis(2, cut);
        const auto la = lowering_operator<double>(basis, 0);
        const auto lb = lowering_operator<double>(basis, 1);
        const auto m = lossless_moments(a, phi, w);
        CHECK(std::abs(expectation(psi, la.adjoint() * la).real() - m.n_a) < 1e-10);
        CHECK(std::abs(expectation(psi, lb.adjoint() * lb).real() - m.n_b) < 1e-10);
        CHECK(std::abs(expectation(psi, la.adjoint() * la.adjoint()) - m.a_dag_sq) < 1e-10);
        CHECK(std::abs(expectation(psi, lb * lb) - m.b_sq) < 1e-10);
        CHECK(std::abs(expectation(psi, schwinger_ops<double>(cut).jy).real() - m.jy) < 1e-10);
    }
}

TEST_CASE("lossless QFI") {
    CHECK(qfi_lossless(0.0, 0.3, 0.0) == 0.0);
    const auto m = lossless_moments(0.3, 0.0, 0.0);
    const double fm = 2 * m.n_a * m.n_b + m.n_a + m.n_b + 2 * m.n_a * m.n_a;
    CHECK(qfi_lossless(0.3, 0.0, 0.0) == doctest::Approx(fm).epsilon(1e-14));
    CHECK(qfi_lossless(0.3, 0.0, 0.0) == doctest::Approx(0.1157).epsilon(1e-3));
    CHECK(qfi_lossless_max(0.3, 0.0) == doctest::Approx(fm).epsilon(1e-14));
    const auto psi = input_state(0.3, 0.0, CatParams<double>::make(0.3, 0), FockCutoff{20});
    CHECK(std::abs(qfi_pure(psi, schwinger_ops<double>(FockCutoff{20}).jy).value - fm) < 1e-12);
    CHECK(std::abs(phi_argmax([](double p) { return qfi_lossless(0.3, p, 6 * kPi / 7); })) < 1e-3);
}

TEST_CASE("total photon number") {
    CHECK(total_photon_number(0.3, 0.0) == doctest::Approx(0.18 / (1 + std::exp(-0.18))).epsilon(1e-14));
    CHECK(total_photon_number(6.0, 0.0) == doctest::Approx(72.0).epsilon(1e-14));
    for (double a : {0.3, 1.0, 3.0}) {
        for (double w : {0.0, 0.9, 2.5}) {
            const auto m = lossless_moments(a, 0.0, w);
            CHECK(total_photon_number(a, w) == doctest::Approx(m.n_a + m.n_b).epsilon(1e-14));
        }
    }
}

TEST_CASE("maximal lossless QFI in terms of N") {
    CHECK(std::abs(qfi_lossless_max_in_N(0.3, 0.0) - qfi_lossless_max(0.3, 0.0)) < 1e-12);
    for (double w : {0.0, 0.5, 1.5, 3.0}) {
        const double n = total_photon_number(10.0, w);
        const double f = qfi_lossless_max(10.0, w);
        CHECK(std::abs(f - (n + n * n)) / f < 1e-3);
    }
    for (double a : {0.2, 0.9, 2.0}) {
        const double n = total_photon_number(a, kPi / 2);
        CHECK(qfi_lossless_max_in_N(a, kPi / 2) == doctest::Approx(n + n * n).epsilon(1e-15));
    }
}

TEST_CASE("reduced density") {
    SUBCASE("T=1 is pure") {
        CHECK(std::abs(reduced_density(0.3, 0.0, 0.0, 1.0).det_rho) == 0.0);
    }
    SUBCASE("density matrix constraints") {
        const auto r = reduced_density(0.3, 0.0, 6 * kPi / 7, 0.83);
        CHECK(r.eta >= 0.0);
        CHECK(r.eta <= 1.0);
        CHECK(r.det_rho >= 0.0);
        CHECK(r.det_rho <= 0.25);
        CHECK(std::abs(r.matrix().trace() - 1.0) < 1e-15);
    }
    SUBCASE("real off-diagonal at omega=0") {
        CHECK(reduced_density(0.3, 0.0, 0.0, 0.5).tau_phase == 0.0);
    }
    SUBCASE("invariants") {
        std::mt19937_64 rng(41);
        std::uniform_real_distribution<double> ua(0.05, 2.5), uw(0.0, kPi), ut(0.05, 1.0);
        for (int k = 0; k < 200; ++k) {
            const double a = ua(rng), w = uw(rng), T = ut(rng);
            const auto r = reduced_density(a, 0.0, w, T);
            const double n2 = r.n_alpha_sq;
            CHECK(std::abs(r.det_rho - (r.eta * (1 - r.eta) - r.xi * r.xi)) < 1e-12);
            CHECK(std::abs(r.det_rho - n2 * n2 * (1 - r.p_t * r.p_t) * (1 - r.p_r * r.p_r)) < 1e-12);
            CHECK(std::abs(r.sigma_z_exp - (2 * r.eta - 1)) < 1e-12);
            CHECK(std::abs(r.sigma_z_exp - (1 - 2 * n2 * (1 - r.p_t * r.p_t))) < 1e-12);
            CHECK(r.p_t * r.p_r == doctest::Approx(std::exp(-2 * a * a)).epsilon(1e-14));
            const auto t = lossy_terms(r);
            CHECK(t.z >= -1e-12);
            CHECK(std::abs(t.z1 + t.z2 - ((1 - r.sigma_z_exp * r.sigma_z_exp) + 4 * r.det_rho)) < 1e-12);
            CHECK(t.m_aux >= 0.0);
            CHECK(std::abs(t.z - 4 * (1 - r.p_t * r.p_t) * t.m_aux * t.m_aux) < 1e-12);
            if (t.z > 1e-8) CHECK(t.mu * t.mu / t.z == doctest::Approx(t.mu_sq_over_z).epsilon(1e-8));
        }
    }
    SUBCASE("degenerate basis") {
        try {
            reduced_density(1e-7, 0.0, 0.0, 0.5);
            FAIL("expected BasisDegenerate");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::BasisDegenerate);
        }
    }
}

TEST_CASE("2x2 eigensystem") {
    SUBCASE("pure") {
        const auto es = eigensystem_2x2(reduced_density(0.3, 0.0, 0.0, 1.0));
        CHECK(es.lambda_plus == doctest::Approx(1.0));
        CHECK(std::abs(es.lambda_minus) < 1e-15);
    }
    SUBCASE("maximally mixed") {
        LossyRho2x2<double> r;
        r.det_rho = 0.25;
        r.sigma_z_exp = 0;
        r.eta = 0.5;
        const auto es = eigensystem_2x2(r);
        CHECK(es.lambda_plus == 0.5);
        CHECK(es.lambda_minus == 0.5);
        CHECK(es.degenerate);
    }
    SUBCASE("eigenpairs of the 2x2 matrix") {
        const auto r = reduced_density(0.7, 0.3, 2.1, 0.6);
        const auto es = eigensystem_2x2(r);
        const auto v = es.vectors(r.tau_phase);
        const auto m = r.matrix();
        CHECK((m * v.col(0) - es.lambda_plus * v.col(0)).norm() < 1e-14);
        CHECK((m * v.col(1) - es.lambda_minus * v.col(1)).norm() < 1e-14);
    }
    SUBCASE("eigenvalues of the simulated reduced state") {
        const auto es = eigensystem_2x2(reduced_density(0.3, 0.0, 6 * kPi / 7, 0.83));
        const auto spec = spectral_decomposition(lossy_state(0.3, 0.0, 6 * kPi / 7, 0.83, FockCutoff{20}).matrix);
        CHECK(std::abs(spec.eigenvalues(0) - es.lambda_plus) < 1e-10);
        CHECK(std::abs(spec.eigenvalues(1) - es.lambda_minus) < 1e-10);
        CHECK(spec.eigenvalues(2) < 1e-12);
    }
}

TEST_CASE("lossy QFI") {
    CHECK(std::abs(qfi_lossy(0.3, 0.2, 0.0, 1 - 1e-8) - qfi_lossless(0.3, 0.2, 0.0)) < 1e-6);
    CHECK(qfi_lossy(0.3, 0.2, 0.0, 0.0) == 0.0);
    CHECK(qfi_lossy(0.0, 0.2, 1.0, 0.5) == 0.0);
    CHECK_THROWS_WITH_AS(qfi_lossy(0.3, 0.0, 0.0, 1.5), "Domain: T must lie in [0,1]", Error);
    for (double a : {0.3, 1.1})
        for (double T : {0.1, 0.45, 0.83, 1.0})
            for (double phi : {-1.3, 0.0, 0.4}) {
                CHECK(std::abs(qfi_lossy(a, phi, 0.0, T) - qfi_lossy_even(a, phi, T)) < 1e-12);
            }
    for (int k = 1; k <= 10; ++k) {
        const double T = k / 10.0;
        CHECK(std::abs(phi_argmax([T](double p) { return qfi_lossy(0.3, p, 6 * kPi / 7, T); })) < 1e-3);
    }
    SUBCASE("T=1 agrees with the lossless formula") {
        for (double w : {0.0, 1.0, 2.9})
            for (double phi : {-0.8, 0.0, 0.5})
                CHECK(std::abs(qfi_lossy(0.6, phi, w, 1.0) - qfi_lossless(0.6, phi, w)) < 1e-12);
    }
}

TEST_CASE("lossy maximum") {
    CHECK(std::abs(qfi_lossy_max(10.0, 0.0, 0.6) - 2 * 0.6 * 100) / qfi_lossy_max(10.0, 0.0, 0.6) < 0.05);
    CHECK(std::abs(qfi_lossy_max(10.0, 0.0, 1.0) - 4e4) / qfi_lossy_max(10.0, 0.0, 1.0) < 0.05);
    double lo = 1e300, hi = 0;
    for (int k = 0; k < 64; ++k) {
        const double f = qfi_lossy_max(10.0, kPi * k / 64, 0.8);
        lo = std::min(lo, f);
        hi = std::max(hi, f);
    }
    CHECK((hi - lo) / hi < 1e-3);
    for (double w : {0.0, 1.2, 2.8})
        for (double T : {0.2, 0.7, 1.0})
            CHECK(std::abs(qfi_lossy_max(0.9, w, T) - qfi_lossy(0.9, 0.0, w, T)) < 1e-12);
}

TEST_CASE("even superposition") {
    for (double a : {0.3, 0.8, 2.0}) CHECK(std::abs(qfi_lossy_even(a, 0.0, 1.0) - qfi_lossless(a, 0.0, 0.0)) < 1e-10);
    const double a = 0.7, T = 0.4, phi = kPi / 2;
    const double a2 = a * a, ta2 = T * a2;
    const double np2 = 1 / (2 + 2 * std::exp(-2 * a2));
    const double pt = std::exp(-2 * ta2), pr2 = std::exp(-4 * a2 * (1 - T));
    const double expected = 4 * ta2 * (np2 + ta2 * (2 * np2 - 1)) - 16 * ta2 * ta2 * np2 * np2 * (1 - pr2) * pt * pt;
    CHECK(qfi_lossy_even(a, phi, T) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(std::abs(phi_argmax([](double p) { return qfi_lossy_even(0.3, p, 0.83); })) < 1e-3);
}

TEST_CASE("coherent-pair moments") {
    SUBCASE("phi=0") {
        const auto m = coherent_pair_moments(0.5, 0.0, 0.7);
        CHECK(m.jz2_ab == 0.0);
        CHECK(std::abs(m.jz_ab) == 0.0);
    }
    SUBCASE("agree with Fock numerics") {
        const double a = 0.3, phi = 0.7, T = 0.83;
        const FockCutoff cut{24};
        const auto [A, B] = coherent_pair_states(a, phi, T, cut);
        const auto jz = schwinger_ops<double>(cut).jz;
        const CMatrix<double> jz2 = jz * jz;
        const auto m = coherent_pair_moments(a, phi, T);
        CHECK(std::abs(A.amplitudes.dot(jz2 * A.amplitudes) - m.jz2_aa) < 1e-10);
        CHECK(std::abs(B.amplitudes.dot(jz2 * B.amplitudes) - m.jz2_bb) < 1e-10);
        CHECK(std::abs(A.amplitudes.dot(jz2 * B.amplitudes) - m.jz2_ab) < 1e-10);
        CHECK(std::abs(B.amplitudes.dot(jz2 * A.amplitudes) - m.jz2_ab) < 1e-10);
        CHECK(std::abs(A.amplitudes.dot(jz * A.amplitudes) - m.jz_aa) < 1e-10);
        CHECK(std::abs(B.amplitudes.dot(jz * B.amplitudes) + m.jz_aa) < 1e-10);
        CHECK(std::abs(A.amplitudes.dot(jz * B.amplitudes) - m.jz_ab) < 1e-10);
        CHECK(std::abs(A.amplitudes.dot(B.amplitudes) - m.overlap) < 1e-10);
        CHECK(m.overlap == doctest::Approx(std::exp(-2 * a * a * T)).epsilon(1e-15));
    }
    SUBCASE("the literal difference form of <A|J_z|A> is zero but the state value is not") {
        const double a = 0.3, phi = 0.7, T = 0.83;
        const double literal = T * a * a * std::cos(phi) - T * a * a * std::cos(phi);
        const auto [A, B] = coherent_pair_states(a, phi, T, FockCutoff{24});
        const double numeric = A.amplitudes.dot(schwinger_ops<double>(FockCutoff{24}).jz * A.amplitudes).real();
        CHECK(literal == 0.0);
        CHECK(numeric == doctest::Approx(T * a * a * std::cos(phi)).epsilon(1e-10));
        CHECK(std::abs(numeric - literal) > 0.05);
    }
}

TEST_CASE("three-part assembly") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> ua(0.05, 2.0), up(-kPi / 2, kPi / 2), uw(0.0, kPi), ut(0.05, 0.99);
    for (int k = 0; k < 300; ++k) {
        const double a = ua(rng), phi = up(rng), w = uw(rng), T = ut(rng);
        const auto p = three_part_assembly(a, phi, w, T);
        const double f = qfi_lossy(a, phi, w, T);
        CHECK(std::abs(p.part1 + p.part2 + p.part3 - f) < 1e-12 * std::max(1.0, f));
        const auto s = support_algebra_parts(a, phi, w, T);
        CHECK(std::abs(s.part1 - p.part1) < 1e-10 * std::max(1.0, f));
        CHECK(std::abs(s.part2 - p.part2) < 1e-10 * std::max(1.0, f));
        CHECK(std::abs(s.part3 - p.part3) < 1e-10 * std::max(1.0, f));
    }
    SUBCASE("parts are even in phi") {
        for (double w : {0.4, 1.6, 2.9}) {
            const auto p = three_part_assembly(0.7, 0.5, w, 0.6);
            const auto m = three_part_assembly(0.7, -0.5, w, 0.6);
            CHECK(std::abs(p.part2 - m.part2) < 1e-14);
            CHECK(std::abs(p.part3 - m.part3) < 1e-14);
        }
    }
    SUBCASE("the sin(2 phi) fault has no effect at phi=0") {
        const auto a = three_part_assembly(0.7, 0.0, 1.9, 0.6);
        const auto b = three_part_assembly(0.7, 0.0, 1.9, 0.6, AssemblyFault::FlipPart2Sin2Phi);
        CHECK(a.part2 == b.part2);
    }
    SUBCASE("the sin(2 phi) fault is invisible because the term vanishes identically") {
        for (double phi : {-1.0, 0.4, 1.3}) {
            const auto a = three_part_assembly(0.7, phi, 1.9, 0.6);
            const auto b = three_part_assembly(0.7, phi, 1.9, 0.6, AssemblyFault::FlipPart2Sin2Phi);
            CHECK(std::abs(a.part2 - b.part2) < 1e-15);
        }
    }
}

TEST_CASE("phase matching") {
    for (double a : {0.3, 0.8, 3.0})
        for (double w : {0.0, 0.7, 1.9, 3.0}) {
            CHECK(std::abs(phi_argmax([=](double p) { return qfi_lossless(a, p, w); })) < 1e-3);
            for (double T : {0.2, 0.83})
                CHECK(std::abs(phi_argmax([=](double p) { return qfi_lossy(a, p, w, T); })) < 1e-3);
        }
    for (double phi : {0.2, 0.9, 1.4}) {
        CHECK(std::abs(qfi_lossy(0.6, phi, 0.0, 0.5) - qfi_lossy(0.6, -phi, 0.0, 0.5)) < 1e-14);
        CHECK(std::abs(qfi_lossless(0.6, phi, 0.0) - qfi_lossless(0.6, -phi, 0.0)) < 1e-14);
    }
}

TEST_CASE("lossy QFI grows with transmission") {
    double prev = -1;
    for (int k = 1; k <= 10; ++k) {
        const double f = qfi_lossy(0.3, 0.0, 0.0, k / 10.0);
        CHECK(f >= prev);
        prev = f;
    }
}

} // TEST_SUITE
