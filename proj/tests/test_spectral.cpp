#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include <jcpol/jcpol.hpp>

using Catch::Matchers::WithinAbs;
using jcpol::HalfInt;
using jcpol::TransitionSpec;

namespace {

const std::vector<TransitionSpec> kSweep = {
    {HalfInt(0), HalfInt(1)},
    {HalfInt(1), HalfInt(1)},
    {HalfInt(2), HalfInt(1)},
    {HalfInt(3), HalfInt(4)},
    {HalfInt::from_twice(1), HalfInt::from_twice(1)},
    {HalfInt::from_twice(3), HalfInt::from_twice(3)},
    {HalfInt::from_twice(5), HalfInt::from_twice(3)},
    {HalfInt::from_twice(7), HalfInt::from_twice(9)},
};

std::vector<HalfInt> block_ls(const TransitionSpec& t, int n) {
    std::vector<HalfInt> out;
    const int span = std::max(t.j0.twice() + 2 * n, t.j1.twice() + 2 * (n - 1));
    for (int tl = -span; tl <= span; tl += 2) {
        const HalfInt l = HalfInt::from_twice(tl);
        if (jcpol::subspace_dims(t.j0, n, l).dim +
                (n >= 1 ? jcpol::subspace_dims(t.j1, n - 1, l).dim : 0) >
            0)
            out.push_back(l);
    }
    return out;
}

}  // namespace

TEST_CASE("coupling matrix structure") {
    TransitionSpec t(HalfInt(2), HalfInt(2));
    const auto M = jcpol::coupling_matrix(t, 3, HalfInt(1));
    REQUIRE(M.rows() == jcpol::subspace_dims(t.j1, 2, HalfInt(1)).dim);
    REQUIRE(M.cols() == jcpol::subspace_dims(t.j0, 3, HalfInt(1)).dim);
    // entries are i times a real coupling: the real part vanishes identically
    CHECK(M.real().cwiseAbs().maxCoeff() == 0.0);
    // at most the two circular channels feed any ground column
    for (int c = 0; c < M.cols(); ++c) {
        int nz = 0;
        for (int r = 0; r < M.rows(); ++r)
            if (M(r, c) != std::complex<double>(0, 0)) ++nz;
        CHECK(nz <= 2);
    }
}

TEST_CASE("one-dimensional blocks carry frozen singular values") {
    SECTION("0 -> 1, single excitation") {
        TransitionSpec t(HalfInt(0), HalfInt(1));
        const auto M = jcpol::coupling_matrix(t, 1, HalfInt(1));
        REQUIRE(M.rows() == 1);
        REQUIRE(M.cols() == 1);
        CHECK_THAT(std::abs(M(0, 0)), WithinAbs(1.0 / std::sqrt(3.0), 1e-15));
        CHECK_THAT(M(0, 0).imag(), WithinAbs(1.0 / std::sqrt(3.0), 1e-15));

        const auto es = jcpol::block_eigensystem(t, 1, HalfInt(1));
        REQUIRE(es.coupled() == 1);
        CHECK_THAT(es.xi(0), WithinAbs(1.0 / std::sqrt(3.0), 1e-15));
    }
    SECTION("stretched ladder of 3 -> 4") {
        TransitionSpec t(HalfInt(3), HalfInt(4));
        for (int n = 1; n <= 6; ++n) {
            const auto es = jcpol::block_eigensystem(t, n, HalfInt(3 + n));
            REQUIRE(es.coupled() == 1);
            REQUIRE(es.dark0() == 0);
            REQUIRE(es.dark1() == 0);
            REQUIRE_THAT(es.xi(0), WithinAbs(std::sqrt(n / 9.0), 1e-14));
        }
    }
    SECTION("1/2 -> 3/2 with three excitations at l = 1/2") {
        TransitionSpec t(HalfInt::from_twice(1), HalfInt::from_twice(3));
        const auto es = jcpol::block_eigensystem(t, 3, HalfInt::from_twice(1));
        REQUIRE(es.dim0 == 1);
        REQUIRE(es.dim1 == 2);
        REQUIRE(es.coupled() == 1);
        REQUIRE(es.dark1() == 1);
        CHECK_THAT(es.xi(0), WithinAbs(std::sqrt(5.0 / 12.0), 1e-15));
    }
}

TEST_CASE("singular pairs satisfy the coupling identity on every block") {
    for (const auto& t : kSweep) {
        for (int n = 1; n <= 6; ++n) {
            for (const HalfInt l : block_ls(t, n)) {
                const auto es = jcpol::block_eigensystem(t, n, l);
                if (es.dim0 == 0 || es.dim1 == 0) continue;
                const auto M = jcpol::coupling_matrix(t, n, l);
                for (int k = 0; k < es.coupled(); ++k) {
                    REQUIRE((M * es.v0.col(k) - es.xi(k) * es.v1.col(k)).norm() < 1e-12);
                    REQUIRE((M.adjoint() * es.v1.col(k) - es.xi(k) * es.v0.col(k)).norm() <
                            1e-12);
                }
                // dark vectors are annihilated from their respective side
                if (es.dark0() > 0) REQUIRE((M * es.d0).norm() < 1e-12);
                if (es.dark1() > 0) REQUIRE((M.adjoint() * es.d1).norm() < 1e-12);
            }
        }
    }
}

TEST_CASE("coupled plus dark columns form unitary bases") {
    for (const auto& t : kSweep) {
        for (int n = 1; n <= 5; ++n) {
            for (const HalfInt l : block_ls(t, n)) {
                const auto es = jcpol::block_eigensystem(t, n, l);
                REQUIRE(es.coupled() + es.dark0() == es.dim0);
                REQUIRE(es.coupled() + es.dark1() == es.dim1);
                if (es.dim0 > 0) {
                    Eigen::MatrixXcd B(es.dim0, es.dim0);
                    B << es.v0, es.d0;
                    REQUIRE((B.adjoint() * B -
                             Eigen::MatrixXcd::Identity(es.dim0, es.dim0))
                                .norm() < 1e-12);
                }
                if (es.dim1 > 0) {
                    Eigen::MatrixXcd B(es.dim1, es.dim1);
                    B << es.v1, es.d1;
                    REQUIRE((B.adjoint() * B -
                             Eigen::MatrixXcd::Identity(es.dim1, es.dim1))
                                .norm() < 1e-12);
                }
            }
        }
    }
}

TEST_CASE("squared singular values match a Hermitian eigensolver") {
    for (const auto& t : kSweep) {
        for (int n = 1; n <= 5; ++n) {
            for (const HalfInt l : block_ls(t, n)) {
                const auto es = jcpol::block_eigensystem(t, n, l);
                if (es.dim0 == 0 || es.dim1 == 0) continue;
                const auto M = jcpol::coupling_matrix(t, n, l);
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> sol(M.adjoint() * M);
                std::vector<double> want(sol.eigenvalues().data(),
                                         sol.eigenvalues().data() + es.dim0);
                std::vector<double> got(es.dim0, 0.0);
                for (int k = 0; k < es.coupled(); ++k)
                    got[k] = es.xi(k) * es.xi(k);
                std::sort(got.begin(), got.end());
                std::sort(want.begin(), want.end());
                for (int i = 0; i < es.dim0; ++i)
                    REQUIRE_THAT(got[i], WithinAbs(want[i], 1e-12));
            }
        }
    }
}

TEST_CASE("descending singular value order") {
    TransitionSpec t(HalfInt(3), HalfInt(3));
    const auto es = jcpol::block_eigensystem(t, 5, HalfInt(0));
    REQUIRE(es.coupled() >= 2);
    for (int k = 1; k < es.coupled(); ++k) CHECK(es.xi(k - 1) >= es.xi(k));
}

TEST_CASE("fully dark sectors") {
    TransitionSpec t(HalfInt(0), HalfInt(1));
    // one photon at l = 0 has no ground state (parity), one excited state
    const auto es = jcpol::block_eigensystem(t, 1, HalfInt(0));
    CHECK(es.dim0 == 0);
    CHECK(es.dim1 == 1);
    CHECK(es.coupled() == 0);
    CHECK(es.dark1() == 1);
    CHECK(es.d1(0, 0) == std::complex<double>(1, 0));
    // the zero-excitation block is pure ground
    const auto es0 = jcpol::block_eigensystem(t, 0, HalfInt(0));
    CHECK(es0.dim0 == 1);
    CHECK(es0.dim1 == 0);
    CHECK(es0.dark0() == 1);
}

TEST_CASE("dressed frequencies and mixing amplitudes") {
    TransitionSpec t(HalfInt(1), HalfInt(2));
    const auto es = jcpol::block_eigensystem(t, 2, HalfInt(0));
    REQUIRE(es.coupled() >= 1);

    SECTION("generic detuning") {
        const auto d = jcpol::dressed(es, 0.3, 1.7);
        for (int k = 0; k < es.coupled(); ++k) {
            CHECK_THAT(d.omega(k), WithinAbs(std::hypot(0.3, 1.7 * es.xi(k)), 1e-15));
            CHECK_THAT(d.c_plus(k) * d.c_plus(k) + d.c_minus(k) * d.c_minus(k),
                       WithinAbs(1.0, 1e-15));
            CHECK_THAT(d.c_plus(k) * d.c_plus(k) - d.c_minus(k) * d.c_minus(k),
                       WithinAbs(0.3 / d.omega(k), 1e-15));
        }
    }
    SECTION("resonance") {
        const auto d = jcpol::dressed(es, 0.0, 2.0);
        for (int k = 0; k < es.coupled(); ++k) {
            CHECK_THAT(d.omega(k), WithinAbs(2.0 * es.xi(k), 1e-15));
            CHECK_THAT(d.c_plus(k), WithinAbs(std::sqrt(0.5), 1e-15));
            CHECK_THAT(d.c_minus(k), WithinAbs(std::sqrt(0.5), 1e-15));
        }
    }
    SECTION("uncoupled limit") {
        const auto d = jcpol::dressed(es, -0.4, 0.0);
        for (int k = 0; k < es.coupled(); ++k) {
            CHECK_THAT(d.omega(k), WithinAbs(0.4, 1e-15));
            CHECK_THAT(d.c_plus(k), WithinAbs(0.0, 1e-15));
            CHECK_THAT(d.c_minus(k), WithinAbs(1.0, 1e-15));
        }
    }
}

TEST_CASE("spectral rejections") {
    TransitionSpec t(HalfInt(1), HalfInt(1));
    CHECK_THROWS_AS(jcpol::coupling_matrix(t, 0, HalfInt(0)), std::invalid_argument);
    CHECK_THROWS_AS(jcpol::block_eigensystem(t, -1, HalfInt(0)), std::invalid_argument);
    CHECK_THROWS_AS(jcpol::block_eigensystem(t, 1, HalfInt(9)), std::invalid_argument);
}
