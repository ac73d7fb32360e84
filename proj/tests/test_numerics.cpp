#include <catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include <rdmap/complex_matrix.hpp>
#include <rdmap/eig.hpp>
#include <rdmap/error.hpp>
#include <rdmap/rng.hpp>

using namespace rdmap;

namespace {
const cplx I{0.0, 1.0};
ComplexMatrix pauli_x() { return {{0.0, 1.0}, {1.0, 0.0}}; }
ComplexMatrix pauli_y() { return {{0.0, -I}, {I, 0.0}}; }
ComplexMatrix pauli_z() { return {{1.0, 0.0}, {0.0, -1.0}}; }
}  // namespace

TEST_CASE("matrix algebra basics") {
    const ComplexMatrix a{{1.0, cplx{2.0, 1.0}}, {0.0, cplx{0.0, -3.0}}};
    const ComplexMatrix b{{cplx{0.0, 1.0}, 1.0}, {2.0, 0.0}};

    SECTION("adjoint of a product reverses the factors") {
        const ComplexMatrix lhs = (a * b).adjoint();
        const ComplexMatrix rhs = b.adjoint() * a.adjoint();
        CHECK((lhs - rhs).max_abs() < 1e-14);
    }
    SECTION("trace is basis independent") {
        Rng rng(11);
        const ComplexMatrix u = random_unitary(2, rng);
        const cplx t1 = a.trace();
        const cplx t2 = (u * a * u.adjoint()).trace();
        CHECK(std::abs(t1 - t2) < 1e-13);
    }
    SECTION("identity and diag constructors") {
        CHECK((ComplexMatrix::identity(3) * ComplexMatrix::identity(3) -
               ComplexMatrix::identity(3))
                  .max_abs() == 0.0);
        const ComplexMatrix d = ComplexMatrix::diag_real({1.0, 2.0});
        CHECK(d(0, 0) == cplx{1.0, 0.0});
        CHECK(d(1, 1) == cplx{2.0, 0.0});
        CHECK(d(0, 1) == cplx{0.0, 0.0});
    }
    SECTION("shape mismatch throws") {
        CHECK_THROWS_AS(a + ComplexMatrix::identity(3), Error);
        CHECK_THROWS_AS(a * ComplexMatrix::identity(3), Error);
    }
}

TEST_CASE("kron and partial trace invert each other on product inputs") {
    const ComplexMatrix ra = ComplexMatrix::diag_real({0.25, 0.75});
    ComplexMatrix rb{{0.5, cplx{0.1, 0.2}}, {cplx{0.1, -0.2}, 0.5}};
    const ComplexMatrix joint = kron(ra, rb);
    REQUIRE(joint.rows() == 4);

    const ComplexMatrix back_a = partial_trace(joint, 2, 2, Subsystem::B);
    const ComplexMatrix back_b = partial_trace(joint, 2, 2, Subsystem::A);
    CHECK((back_a - ra).max_abs() < 1e-14);
    CHECK((back_b - rb).max_abs() < 1e-14);

    SECTION("kron entry layout: (i1 i2, j1 j2) = a(i1,j1) b(i2,j2)") {
        CHECK(std::abs(joint(1, 0) - ra(0, 0) * rb(1, 0)) < 1e-15);
        CHECK(std::abs(joint(2, 3) - ra(1, 1) * rb(0, 1)) < 1e-15);
    }
}

TEST_CASE("hermitian eigensolver reproduces hand-computed spectra") {
    SECTION("Pauli X") {
        const HermitianEigensystem e = eig_hermitian(pauli_x());
        REQUIRE(e.values.size() == 2);
        CHECK(e.values[0] == Catch::Approx(1.0).margin(1e-12));
        CHECK(e.values[1] == Catch::Approx(-1.0).margin(1e-12));
        // eigenvector of +1 is (1,1)/sqrt2 up to the fixed phase convention
        CHECK(std::abs(e.vectors(0, 0) - e.vectors(1, 0)) < 1e-12);
    }
    SECTION("Pauli Y has complex eigenvectors") {
        const HermitianEigensystem e = eig_hermitian(pauli_y());
        CHECK(e.values[0] == Catch::Approx(1.0).margin(1e-12));
        CHECK(e.values[1] == Catch::Approx(-1.0).margin(1e-12));
        const ComplexMatrix v = e.vectors;
        CHECK((pauli_y() * v - v * ComplexMatrix::diag_real(e.values)).max_abs() < 1e-12);
    }
    SECTION("2x2 symmetric oracle: [[2,1],[1,2]] -> {3,1}") {
        const ComplexMatrix m{{2.0, 1.0}, {1.0, 2.0}};
        const auto vals = hermitian_eigenvalues(m);
        CHECK(vals[0] == Catch::Approx(3.0).margin(1e-12));
        CHECK(vals[1] == Catch::Approx(1.0).margin(1e-12));
    }
    SECTION("already-diagonal input is only reordered") {
        const auto vals = hermitian_eigenvalues(ComplexMatrix::diag_real({-1.0, 5.0, 2.0}));
        CHECK(vals[0] == Catch::Approx(5.0));
        CHECK(vals[1] == Catch::Approx(2.0));
        CHECK(vals[2] == Catch::Approx(-1.0));
    }
    SECTION("random Hermitian: unitary basis, exact reconstruction") {
        Rng rng(42);
        for (int trial = 0; trial < 5; ++trial) {
            const ComplexMatrix g = ginibre(6, 6, rng);
            const ComplexMatrix h = g + g.adjoint();
            const HermitianEigensystem e = eig_hermitian(h);
            CHECK(unitarity_residual(e.vectors) < 1e-11);
            const ComplexMatrix rebuilt =
                e.vectors * ComplexMatrix::diag_real(e.values) * e.vectors.adjoint();
            CHECK((rebuilt - h).max_abs() < 1e-10);
            for (std::size_t i = 0; i + 1 < e.values.size(); ++i)
                CHECK(e.values[i] >= e.values[i + 1] - 1e-12);
        }
    }
    SECTION("degenerate spectrum still yields an orthonormal basis") {
        const HermitianEigensystem e = eig_hermitian(ComplexMatrix::identity(4));
        CHECK(unitarity_residual(e.vectors) < 1e-12);
    }
    SECTION("non-Hermitian input is rejected") {
        CHECK_THROWS_AS(eig_hermitian(ComplexMatrix{{0.0, 1.0}, {0.0, 0.0}}), Error);
    }
}

TEST_CASE("matrix log on support") {
    SECTION("diag(1/2,1/2) -> -I in bits") {
        const ComplexMatrix l = matrix_log2_on_support(ComplexMatrix::diag_real({0.5, 0.5}));
        CHECK((l + ComplexMatrix::identity(2)).max_abs() < 1e-12);
    }
    SECTION("rank-deficient input: log acts only on the support") {
        const ComplexMatrix l = matrix_log2_on_support(ComplexMatrix::diag_real({1.0, 0.0}));
        CHECK(l.max_abs() < 1e-12);  // log2(1) = 0; null space untouched
    }
    SECTION("negative eigenvalue rejected") {
        CHECK_THROWS_AS(matrix_log2_on_support(ComplexMatrix::diag_real({1.5, -0.5})), Error);
    }
}

TEST_CASE("trace norm distance oracles") {
    const ComplexMatrix p0 = matrix_unit(2, 0, 0);
    const ComplexMatrix p1 = matrix_unit(2, 1, 1);
    CHECK(trace_norm_distance(p0, p1) == Catch::Approx(1.0).margin(1e-12));
    CHECK(trace_norm_distance(p0, p0) == Catch::Approx(0.0).margin(1e-15));
    // |+><+| vs I/2: eigenvalues of the difference are +-1/2
    ComplexMatrix plus(2, 2);
    plus(0, 0) = plus(0, 1) = plus(1, 0) = plus(1, 1) = 0.5;
    CHECK(trace_norm_distance(plus, ComplexMatrix::identity(2) * cplx{0.5, 0.0}) ==
          Catch::Approx(0.5).margin(1e-12));
}

TEST_CASE("random unitaries are unitary and seed-deterministic") {
    Rng rng(7);
    for (std::size_t d : {2, 3, 5}) {
        const ComplexMatrix u = random_unitary(d, rng);
        CHECK(unitarity_residual(u) < 1e-12);
    }
    Rng r1(99), r2(99);
    const ComplexMatrix u1 = random_unitary(3, r1);
    const ComplexMatrix u2 = random_unitary(3, r2);
    CHECK((u1 - u2).max_abs() == 0.0);
    Rng forked = Rng(99).fork(1);
    const ComplexMatrix u3 = random_unitary(3, forked);
    CHECK((u1 - u3).max_abs() > 1e-3);
}

TEST_CASE("random unitary first-entry statistics match the invariant measure") {
    // For d=2, |u00|^2 is uniform on [0,1]: mean 1/2, and the mean of
    // |u00|^4 is 1/3.  Loose bounds at 500 draws.
    Rng rng(123);
    double m2 = 0.0, m4 = 0.0;
    const int n = 500;
    for (int i = 0; i < n; ++i) {
        const ComplexMatrix u = random_unitary(2, rng);
        const double p = std::norm(u(0, 0));
        m2 += p;
        m4 += p * p;
    }
    m2 /= n;
    m4 /= n;
    CHECK(std::abs(m2 - 0.5) < 0.05);
    CHECK(std::abs(m4 - 1.0 / 3.0) < 0.05);
}

TEST_CASE("random density matrices are valid states") {
    Rng rng(5);
    for (std::size_t d : {2, 4}) {
        const ComplexMatrix m = random_density_matrix(d, d, rng);
        CHECK(m.hermiticity_residual() < 1e-14);
        CHECK(std::abs(m.trace() - cplx{1.0, 0.0}) < 1e-13);
        const auto vals = hermitian_eigenvalues(m);
        CHECK(vals.back() > -1e-13);
    }
    const ComplexMatrix low = random_density_matrix(4, 1, rng);
    const auto vals = hermitian_eigenvalues(low);
    CHECK(vals[0] == Catch::Approx(1.0).margin(1e-12));  // rank 1 -> pure
    CHECK(std::abs(vals[1]) < 1e-12);
}

TEST_CASE("simultaneous diagonalization of a commuting family") {
    Rng rng(31);
    const ComplexMatrix u = random_unitary(4, rng);
    const ComplexMatrix a = u * ComplexMatrix::diag_real({1.0, 1.0, 2.0, 3.0}) * u.adjoint();
    const ComplexMatrix b = u * ComplexMatrix::diag_real({5.0, -1.0, -1.0, 2.0}) * u.adjoint();

    SECTION("common eigenbasis diagonalizes every member") {
        const ComplexMatrix v = simultaneous_diagonalize({a, b}, 1e-9);
        CHECK(unitarity_residual(v) < 1e-10);
        CHECK(detail::max_offdiag(v.adjoint() * a * v) < 1e-8);
        CHECK(detail::max_offdiag(v.adjoint() * b * v) < 1e-8);
    }
    SECTION("commutator certificate") {
        CHECK(max_commutator_entry({a, b}) < 1e-12);
        CHECK(max_commutator_entry({pauli_x(), pauli_z()}) > 1.0);
    }
    SECTION("non-commuting family is rejected") {
        CHECK_THROWS_AS(simultaneous_diagonalize({pauli_x(), pauli_z()}, 1e-9), Error);
    }
}

TEST_CASE("gram-schmidt column orthonormalization") {
    Rng rng(17);
    const ComplexMatrix q = orthonormalize_columns(ginibre(5, 3, rng));
    CHECK((q.adjoint() * q - ComplexMatrix::identity(3)).max_abs() < 1e-13);
    ComplexMatrix singular(2, 2);
    singular(0, 0) = 1.0;
    singular(0, 1) = 1.0;  // linearly dependent columns
    CHECK_THROWS_AS(orthonormalize_columns(singular), Error);
}
