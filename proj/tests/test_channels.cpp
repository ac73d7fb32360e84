#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include <rdmap/channel.hpp>
#include <rdmap/rng.hpp>

using namespace rdmap;

namespace {
const double S = std::sqrt(0.5);
}

TEST_CASE("kraus channel construction and validation") {
    SECTION("trace-preserving flag reflects the completeness sum") {
        const KrausChannel ok({matrix_unit(2, 0, 0), matrix_unit(2, 1, 1)}, "pick");
        CHECK(ok.trace_preserving());
        const KrausChannel leaky({matrix_unit(2, 0, 0) * cplx{0.5, 0.0}}, "leaky");
        CHECK_FALSE(leaky.trace_preserving());
        CHECK_THROWS_AS(leaky.apply(make_density(ComplexMatrix::diag_real({0.5, 0.5}))),
                        Error);
    }
    SECTION("trace-increasing arms are rejected outright") {
        CHECK_THROWS_AS(KrausChannel({ComplexMatrix::identity(2) * cplx{1.2, 0.0}}, "no"),
                        Error);
    }
    SECTION("inconsistent arm shapes are rejected") {
        CHECK_THROWS_AS(KrausChannel({matrix_unit(2, 0, 0), matrix_unit(3, 0, 0)}, "no"),
                        Error);
    }
}

TEST_CASE("complete dephasing channel kills off-diagonals") {
    Rng rng(4);
    const DensityMatrix rho = make_density(random_density_matrix(3, 3, rng));
    const DensityMatrix out = dephasing_channel(3).apply(rho);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            if (i == j)
                CHECK(std::abs(out.matrix()(i, i) - rho.matrix()(i, i)) < 1e-14);
            else
                CHECK(std::abs(out.matrix()(i, j)) < 1e-15);
        }
}

TEST_CASE("x-basis readout oracle values") {
    const KrausChannel ch = xbasis_readout();
    SECTION("plus and minus states map to the basis states") {
        const DensityMatrix plus = pure_state(ket({cplx{S, 0}, cplx{S, 0}}));
        const DensityMatrix minus = pure_state(ket({cplx{S, 0}, cplx{-S, 0}}));
        CHECK((ch.apply(plus).matrix() - matrix_unit(2, 0, 0)).max_abs() < 1e-14);
        CHECK((ch.apply(minus).matrix() - matrix_unit(2, 1, 1)).max_abs() < 1e-14);
    }
    SECTION("action on the off-diagonal unit is diag(1,-1)/2") {
        const ComplexMatrix out = ch.apply_raw(matrix_unit(2, 0, 1));
        const ComplexMatrix expect = ComplexMatrix::diag_real({0.5, -0.5});
        CHECK((out - expect).max_abs() < 1e-14);
    }
    SECTION("it is a valid channel") { CHECK(is_cptp(ch).pass); }
}

TEST_CASE("qutrit covariant channel") {
    const KrausChannel ch = qutrit_covariant_channel();
    CHECK(is_cptp(ch).pass);
    CHECK(ch.kraus_sum_residual() < 1e-12);
    SECTION("parameter constraints are enforced") {
        // breaking the norm constraint must throw
        CHECK_THROWS_AS(qutrit_covariant_channel(0.9, 0.5, 0.0), Error);
    }
}

TEST_CASE("shift and clock operators") {
    const std::size_t d = 3;
    const ComplexMatrix x = shift_operator(d);
    const ComplexMatrix z = clock_operator(d);
    CHECK((x * x * x - ComplexMatrix::identity(d)).max_abs() < 1e-14);
    CHECK((z * z * z - ComplexMatrix::identity(d)).max_abs() < 1e-13);
    // commutation phase: Z X = w X Z with w = exp(2 pi i / d)
    const cplx w = std::exp(cplx{0.0, 2.0 * std::numbers::pi / d});
    CHECK((z * x - w * (x * z)).max_abs() < 1e-13);
    CHECK(shift_clock_operators(d).size() == d * d);
}

TEST_CASE("unitary-isotropic channel matches its closed form") {
    Rng rng(12);
    const std::size_t d = 3;
    const ComplexMatrix u = random_unitary(d, rng);
    const DensityMatrix rho = make_density(random_density_matrix(d, d, rng));
    for (double gamma : {0.0, 0.3, 1.0}) {
        const KrausChannel ch = unitary_isotropic(u, gamma);
        const ComplexMatrix expect =
            (u * rho.matrix() * u.adjoint()) * cplx{1.0 - gamma, 0.0} +
            ComplexMatrix::identity(d) * cplx{gamma / d, 0.0};
        CHECK((ch.apply(rho).matrix() - expect).max_abs() < 1e-12);
        CHECK(is_cptp(ch).pass);
    }
    SECTION("gamma range: slightly super-unital mixing is allowed up to d^2/(d^2-1)") {
        const double top = static_cast<double>(d * d) / (d * d - 1);
        CHECK_NOTHROW(unitary_isotropic(u, top));
        CHECK_THROWS_AS(unitary_isotropic(u, top + 1e-6), Error);
        CHECK_THROWS_AS(unitary_isotropic(u, -0.1), Error);
    }
    SECTION("non-unitary head operator is rejected") {
        CHECK_THROWS_AS(unitary_isotropic(ComplexMatrix::diag_real({1.0, 0.5, 1.0}), 0.5),
                        Error);
    }
}

TEST_CASE("partial depolarizing closed form") {
    Rng rng(13);
    const DensityMatrix rho = make_density(random_density_matrix(2, 2, rng));
    const double tau = 0.5;
    const ComplexMatrix expect = rho.matrix() * cplx{tau, 0.0} +
                                 ComplexMatrix::identity(2) * cplx{(1 - tau) / 2, 0.0};
    CHECK((partial_depolarize(2, tau).apply(rho).matrix() - expect).max_abs() < 1e-13);
}

TEST_CASE("measurement channels") {
    Rng rng(14);
    SECTION("projective measurement probabilities follow the overlap rule") {
        const ComplexMatrix u = random_unitary(2, rng);
        const KrausChannel ch = projective_measurement_channel(u);
        const DensityMatrix rho = make_density(random_density_matrix(2, 2, rng));
        const auto outcomes = ch.arm_outcomes(rho);
        REQUIRE(outcomes.size() == 2);
        double total = 0.0;
        for (std::size_t i = 0; i < 2; ++i) {
            ComplexMatrix col(2, 1);
            col(0, 0) = u(0, i);
            col(1, 0) = u(1, i);
            const double born = (col.adjoint() * rho.matrix() * col)(0, 0).real();
            CHECK(outcomes[i].probability == Catch::Approx(born).margin(1e-12));
            total += outcomes[i].probability;
        }
        CHECK(total == Catch::Approx(1.0).margin(1e-12));
    }
    SECTION("measure-prepare emits the prepared states with measured weights") {
        const KrausChannel mp =
            measure_prepare_channel({ket({cplx{S, 0}, cplx{S, 0}}), basis_ket(2, 1)});
        const DensityMatrix rho = make_density(ComplexMatrix::diag_real({0.25, 0.75}));
        ComplexMatrix plus(2, 2);
        plus(0, 0) = plus(0, 1) = plus(1, 0) = plus(1, 1) = 0.5;
        const ComplexMatrix expect =
            plus * cplx{0.25, 0.0} + matrix_unit(2, 1, 1) * cplx{0.75, 0.0};
        CHECK((mp.apply(rho).matrix() - expect).max_abs() < 1e-13);
    }
}

TEST_CASE("channel combinators") {
    Rng rng(15);
    SECTION("composition applies inner then outer") {
        const ComplexMatrix u = random_unitary(2, rng);
        const KrausChannel rot({u}, "rotate");
        const KrausChannel chain = compose(dephasing_channel(2), rot);
        const DensityMatrix rho = make_density(random_density_matrix(2, 2, rng));
        const ComplexMatrix expect =
            dephasing_channel(2).apply(rot.apply(rho)).matrix();
        CHECK((chain.apply(rho).matrix() - expect).max_abs() < 1e-13);
    }
    SECTION("composition dimension mismatch throws") {
        CHECK_THROWS_AS(compose(dephasing_channel(2), dephasing_channel(3)), Error);
    }
    SECTION("convex combination averages the actions") {
        const KrausChannel mix =
            convex_combine({dephasing_channel(2), erase_to_basis_state(2, 0)}, {0.5, 0.5});
        const DensityMatrix rho = make_density(random_density_matrix(2, 2, rng));
        const ComplexMatrix expect =
            dephasing_channel(2).apply(rho).matrix() * cplx{0.5, 0.0} +
            erase_to_basis_state(2, 0).apply(rho).matrix() * cplx{0.5, 0.0};
        CHECK((mix.apply(rho).matrix() - expect).max_abs() < 1e-13);
        CHECK(is_cptp(mix).pass);
    }
    SECTION("convex combination validates weights") {
        CHECK_THROWS_AS(
            convex_combine({dephasing_channel(2), dephasing_channel(2)}, {0.7, 0.7}),
            Error);
    }
    SECTION("embedding acts locally") {
        const ComplexMatrix u = random_unitary(2, rng);
        const KrausChannel local = embed_local(KrausChannel({u}, "u"), Subsystem::A, 3);
        const ComplexMatrix ra = random_density_matrix(2, 2, rng);
        const ComplexMatrix rb = random_density_matrix(3, 3, rng);
        const DensityMatrix joint = make_density(kron(ra, rb), BipartiteDims{2, 3});
        const ComplexMatrix expect = kron(u * ra * u.adjoint(), rb);
        CHECK((local.apply(joint).matrix() - expect).max_abs() < 1e-13);
    }
}

TEST_CASE("erasure and diagonal-arm channels") {
    Rng rng(16);
    const DensityMatrix rho = make_density(random_density_matrix(2, 2, rng));
    SECTION("erasure always lands on the target basis state") {
        CHECK((erase_to_basis_state(2, 0).apply(rho).matrix() - matrix_unit(2, 0, 0))
                  .max_abs() < 1e-13);
    }
    SECTION("diagonal arms preserve populations' support structure") {
        const KrausChannel ch = diagonal_arm_channel(
            {{cplx{std::sqrt(0.5), 0}, cplx{std::sqrt(0.3), 0}},
             {cplx{std::sqrt(0.5), 0}, cplx{0, std::sqrt(0.7)}}});
        CHECK(ch.trace_preserving());
        const DensityMatrix out = ch.apply(rho);
        for (std::size_t i = 0; i < 2; ++i)
            CHECK(std::abs(out.matrix()(i, i) - rho.matrix()(i, i)) < 1e-13);
    }
    SECTION("non-trace-preserving diagonal arms are rejected at apply") {
        const KrausChannel bad = diagonal_arm_channel({{cplx{0.5, 0}, cplx{0.5, 0}}});
        CHECK_FALSE(bad.trace_preserving());
    }
}

TEST_CASE("qutrit shift mixture acts as a uniform shift average") {
    const KrausChannel mu = qutrit_shift_mixture();
    const DensityMatrix rho = pure_state(basis_ket(3, 0));
    const ComplexMatrix out = mu.apply(rho).matrix();
    const ComplexMatrix expect =
        (matrix_unit(3, 1, 1) + matrix_unit(3, 2, 2)) * cplx{0.5, 0.0};
    CHECK((out - expect).max_abs() < 1e-14);
}

TEST_CASE("eigenbasis measure-prepare map") {
    Rng rng(18);
    SECTION("CQ input with distinct weights: conditionals are preserved") {
        const std::vector<ComplexMatrix> basis{basis_ket(2, 0), basis_ket(2, 1)};
        const ComplexMatrix c0 = random_density_matrix(2, 2, rng);
        const ComplexMatrix c1 = random_density_matrix(2, 2, rng);
        const DensityMatrix cq =
            make_cq({0.7, 0.3}, basis, {make_density(c0), make_density(c1)});
        const StateMap xi =
            eigenbasis_measure_prepare({basis_ket(2, 0), ket({cplx{S, 0}, cplx{S, 0}})});
        const DensityMatrix out = xi(cq);
        ComplexMatrix plus(2, 2);
        plus(0, 0) = plus(0, 1) = plus(1, 0) = plus(1, 1) = 0.5;
        const ComplexMatrix expect = kron(matrix_unit(2, 0, 0), c0) * cplx{0.7, 0.0} +
                                     kron(plus, c1) * cplx{0.3, 0.0};
        CHECK((out.matrix() - expect).max_abs() < 1e-11);
    }
    SECTION("targets must be normalized") {
        CHECK_THROWS_AS(eigenbasis_measure_prepare({ket({2.0, 0.0}), basis_ket(2, 1)}),
                        Error);
    }
}

TEST_CASE("channel relabeling keeps the action") {
    const KrausChannel ch = dephasing_channel(2).relabeled("renamed");
    CHECK(ch.label() == "renamed");
    const DensityMatrix rho = pure_state(ket({cplx{S, 0}, cplx{S, 0}}));
    CHECK((ch.apply(rho).matrix() - ComplexMatrix::diag_real({0.5, 0.5})).max_abs() <
          1e-14);
}
