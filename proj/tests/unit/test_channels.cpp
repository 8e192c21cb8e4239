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
#include "mzqfi/channels.hpp"
#include "mzqfi/simulate.hpp"
#include "test_support.hpp"

using namespace mzqfi;
using mzqfi::test::kPi;
using mzqfi::test::max_abs;

namespace {

CMatrix<double> identity(FockCutoff cut) {
    const auto d = FockBasis::two_mode_size(cut);
    return CMatrix<double>::Identity(d, d);
}

FockState<double> basis_state(int na, int nb, FockCutoff cut) {
    FockState<double> psi{CVector<double>::Zero(FockBasis::two_mode_size(cut)), 2, cut, 0};
    psi.amplitudes(FockBasis::two_mode_index(na, nb)) = 1;
    return psi;
}

DensityMatrix<double> kraus(const DensityMatrix<double>& rho, double T) {
    return loss_channel(rho, LossSpec<double>::make(T), LossForm::Kraus);
}

} // namespace

TEST_SUITE("channels") {

TEST_CASE("beam splitter spec") {
    for (double T : {0.0, 0.1, 0.5, 0.83, 1.0}) {
        const auto s = BeamSplitterSpec<double>::make(T);
        CHECK(std::cos(s.angle() / 2) * std::cos(s.angle() / 2) == doctest::Approx(T).epsilon(1e-14));
        CHECK(s.transmission + s.reflection() == 1.0);
    }
    CHECK(BeamSplitterSpec<double>::make(0.5).angle() == doctest::Approx(kPi / 2).epsilon(1e-15));
    CHECK_THROWS_WITH_AS(BeamSplitterSpec<double>::make(1.5), "Domain: T must lie in [0,1]", Error);
    CHECK_THROWS_AS(LossSpec<double>::make(-0.1), Error);
    CHECK(LossSpec<double>::make(0.3).transmission + LossSpec<double>::make(0.3).reflection() == 1.0);
}

TEST_CASE("beam splitter unitary") {
    const FockCutoff cut{12};
    SUBCASE("T=1 is the identity") {
        CHECK(max_abs(beam_splitter_unitary(BeamSplitterSpec<double>::make(1.0), cut) - identity(cut)) < 1e-14);
    }
    SUBCASE("unitarity") {
        for (double T : {0.0, 0.2, 0.5, 0.9}) {
            const auto u = beam_splitter_unitary(BeamSplitterSpec<double>::make(T), cut);
            CHECK(max_abs(u.adjoint() * u - identity(cut)) < 1e-12);
        }
    }
    SUBCASE("50:50 on one photon") {
        const auto u = beam_splitter_unitary(BeamSplitterSpec<double>::make(0.5), FockCutoff{1});
        const CVector<double> out = u * basis_state(1, 0, FockCutoff{1}).amplitudes;
        CHECK(std::abs(out(1) - 1 / std::sqrt(2.0)) < 1e-15);
        CHECK(std::abs(out(2) - Complex<double>(0, 1 / std::sqrt(2.0))) < 1e-15);
    }
    SUBCASE("coherent products map to coherent products") {
        const FockCutoff big{30};
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> u(-0.7, 0.7), t(0.0, 1.0);
        for (int k = 0; k < 12; ++k) {
            const double T = k == 0 ? 0.5 : t(rng);
            const double R = 1 - T;
            const Complex<double> a(u(rng), u(rng)), b(u(rng), u(rng));
            const auto in = test::coherent_product(a, b, big);
            const auto expected = test::coherent_product(a * std::sqrt(T) + Complex<double>(0, 1) * b * std::sqrt(R),
                                                         b * std::sqrt(T) + Complex<double>(0, 1) * a * std::sqrt(R), big);
            FockState<double> out = in;
            out.amplitudes = beam_splitter_unitary(BeamSplitterSpec<double>::make(T), big) * in.amplitudes;
            CHECK(1 - test::fidelity(out, expected) < 1e-10);
        }
    }
}

TEST_CASE("phase shift") {
    const FockCutoff cut{6};
    CHECK(max_abs(phase_shift_unitary(0.0, cut) - identity(cut)) == 0.0);
    const auto full = phase_shift_unitary(2 * kPi, cut);
    const FockBasis b(2, cut);
    for (Eigen::Index i = 0; i < b.size(); ++i) {
        if (b.total(i) % 2 == 0) CHECK(std::abs(full(i, i) - 1.0) < 1e-14);
    }
    const auto p = phase_shift_unitary(kPi / 3, FockCutoff{3});
    const auto i21 = FockBasis::two_mode_index(2, 1);
    CHECK(std::abs(p(i21, i21) - std::polar(1.0, kPi / 6)) < 1e-15);
}

TEST_CASE("mach-zehnder unitary") {
    CHECK(max_abs(mz_unitary(0.0, FockCutoff{6}) - identity(FockCutoff{6})) < 1e-14);
    CHECK(max_abs(mz_unitary(0.7, FockCutoff{10}) - mz_composite(0.7, FockCutoff{10})) < 1e-12);
    const auto u = mz_unitary(kPi, FockCutoff{1});
    const CVector<double> out = u * basis_state(1, 0, FockCutoff{1}).amplitudes;
    CHECK(std::abs(std::abs(out(2)) - 1.0) < 1e-15);
}

TEST_CASE("loss channel") {
    const FockCutoff cut{10};
    const auto psi = after_first_splitter(0.3, 0.4, 1.0, cut);
    const auto rho = DensityMatrix<double>::from_pure(psi);

    SUBCASE("T=1 leaves the state unchanged") {
        CHECK(max_abs(loss_channel(psi, LossSpec<double>::make(1.0)).matrix - rho.matrix) < 1e-15);
        CHECK(max_abs(kraus(rho, 1.0).matrix - rho.matrix) < 1e-15);
    }
    SUBCASE("T=0 gives the vacuum") {
        CMatrix<double> vac = CMatrix<double>::Zero(rho.dim(), rho.dim());
        vac(0, 0) = 1;
        CHECK(max_abs(loss_channel(psi, LossSpec<double>::make(0.0)).matrix - vac) < 1e-14);
        CHECK(max_abs(kraus(rho, 0.0).matrix - vac) < 1e-14);
    }
    SUBCASE("coherent input is attenuated") {
        const FockCutoff c{14};
        const auto in = test::coherent_product({0.3, 0}, {0, 0}, c);
        const auto out = loss_channel(in, LossSpec<double>::make(0.83));
        const auto expected = test::coherent_product({0.3 * std::sqrt(0.83), 0}, {0, 0}, c);
        const double fid = std::real(expected.amplitudes.dot(out.matrix * expected.amplitudes));
        CHECK(1 - fid < 1e-10);
    }
    SUBCASE("trace preserving, Hermitian and positive") {
        std::mt19937_64 rng(7);
        for (int k = 0; k < 5; ++k) {
            const auto r = test::random_mixed(rng, FockCutoff{5}, 3);
            for (double T : {0.15, 0.6}) {
                const auto out = kraus(r, T);
                CHECK(std::abs(out.matrix.trace() - 1.0) < 1e-12);
                CHECK(max_abs(out.matrix - out.matrix.adjoint()) == 0.0);
                Eigen::SelfAdjointEigenSolver<CMatrix<double>> es(out.matrix);
                CHECK(es.eigenvalues().minCoeff() > -1e-12);
            }
        }
        const auto out = loss_channel(psi, LossSpec<double>::make(0.4));
        CHECK(std::abs(out.matrix.trace() - 1.0) < 1e-12);
        CHECK(max_abs(out.matrix - out.matrix.adjoint()) == 0.0);
    }
    SUBCASE("Kraus coefficients resolve the identity") {
        for (double T : {0.0, 0.3, 0.77, 1.0}) {
            for (int n = 0; n <= 25; ++n) {
                double s = 0;
                for (int k = 0; k <= n; ++k) s += std::pow(detail::kraus_coefficient(T, n, k), 2);
                CHECK(s == doctest::Approx(1.0).epsilon(1e-13));
            }
        }
    }
    SUBCASE("semigroup") {
        std::mt19937_64 rng(9);
        for (int k = 0; k < 6; ++k) {
            const auto r = test::random_mixed(rng, FockCutoff{6}, 2);
            const double t1 = 0.3 + 0.1 * k, t2 = 0.9 - 0.05 * k;
            CHECK(max_abs(kraus(kraus(r, t1), t2).matrix - kraus(r, t1 * t2).matrix) < 1e-10);
        }
    }
    SUBCASE("Kraus form equals ancilla form") {
        std::mt19937_64 rng(13);
        std::uniform_real_distribution<double> t(0.0, 1.0);
        for (int k = 0; k < 20; ++k) {
            const auto r = test::random_mixed(rng, FockCutoff{4}, 1 + k % 3);
            const auto spec = LossSpec<double>::make(t(rng));
            const auto a = loss_channel(r, spec, LossForm::Ancilla);
            const auto b = loss_channel(r, spec, LossForm::Kraus);
            CHECK(max_abs(a.matrix - b.matrix) < 1e-10);
        }
        for (double T : {0.25, 0.8}) {
            const auto pure = loss_channel(psi, LossSpec<double>::make(T));
            CHECK(max_abs(pure.matrix - kraus(rho, T).matrix) < 1e-10);
        }
    }
    SUBCASE("dimension checks") {
        DensityMatrix<double> bad{CMatrix<double>::Identity(4, 4) / 4.0, 2, FockCutoff{2}};
        CHECK_THROWS_AS(kraus(bad, 0.5), Error);
    }
}

TEST_CASE("partial trace") {
    SUBCASE("product state") {
        std::mt19937_64 rng(17);
        const FockCutoff small{2}, joint_cut{4};
        const auto rab = test::random_mixed(rng, small, 2);
        const auto rcd = test::random_mixed(rng, small, 2);
        const FockBasis two(2, small), joint(4, joint_cut);
        DensityMatrix<double> big{CMatrix<double>::Zero(joint.size(), joint.size()), 4, joint_cut};
        for (Eigen::Index i = 0; i < two.size(); ++i)
            for (Eigen::Index j = 0; j < two.size(); ++j)
                for (Eigen::Index k = 0; k < two.size(); ++k)
                    for (Eigen::Index l = 0; l < two.size(); ++l) {
                        auto oi = two.occupation(i), oj = two.occupation(j), ok = two.occupation(k), ol = two.occupation(l);
                        big.matrix(joint.index({oi[0], oi[1], ok[0], ok[1]}), joint.index({oj[0], oj[1], ol[0], ol[1]})) =
                            rab.matrix(i, j) * rcd.matrix(k, l);
                    }
        const auto red = partial_trace(big, {0, 1});
        const FockBasis kept(2, joint_cut);
        for (Eigen::Index i = 0; i < two.size(); ++i)
            for (Eigen::Index j = 0; j < two.size(); ++j) {
                auto oi = two.occupation(i), oj = two.occupation(j);
                CHECK(std::abs(red.matrix(kept.index({oi[0], oi[1]}), kept.index({oj[0], oj[1]})) - rab.matrix(i, j)) < 1e-15);
            }
        CHECK(std::abs(red.matrix.trace() - 1.0) < 1e-14);
    }
    SUBCASE("entangled pair") {
        FockState<double> bell{CVector<double>::Zero(6), 2, FockCutoff{2}, 0};
        bell.amplitudes(FockBasis::two_mode_index(0, 0)) = 1 / std::sqrt(2.0);
        bell.amplitudes(FockBasis::two_mode_index(1, 1)) = 1 / std::sqrt(2.0);
        const auto red = partial_trace(bell, {0});
        CMatrix<double> expected = CMatrix<double>::Zero(3, 3);
        expected(0, 0) = expected(1, 1) = 0.5;
        CHECK(max_abs(red.matrix - expected) < 1e-15);
        CHECK(max_abs(partial_trace(DensityMatrix<double>::from_pure(bell), {0}).matrix - expected) < 1e-15);
    }
    SUBCASE("purity of the lossy state") {
        const auto rho = lossy_state(0.3, 0.5, 0.0, 0.5, FockCutoff{20});
        const auto r2 = analytic::reduced_density(0.3, 0.5, 0.0, 0.5);
        const auto es = analytic::eigensystem_2x2(r2);
        const double purity = (rho.matrix * rho.matrix).trace().real();
        CHECK(purity == doctest::Approx(es.lambda_plus * es.lambda_plus + es.lambda_minus * es.lambda_minus).epsilon(1e-12));
        const double n2 = r2.n_alpha_sq;
        CHECK(r2.det_rho == doctest::Approx(n2 * n2 * (1 - r2.p_t * r2.p_t) * (1 - r2.p_r * r2.p_r)).epsilon(1e-13));
    }
    SUBCASE("invalid mode lists") {
        const auto psi = basis_state(0, 0, FockCutoff{2});
        CHECK_THROWS_AS(partial_trace(psi, {0, 1}), Error);
        CHECK_THROWS_AS(partial_trace(psi, {2}), Error);
    }
}

} // TEST_SUITE
