#include <catch_amalgamated.hpp>

#include <cmath>

#include <rdmap/conditions.hpp>
#include <rdmap/rng.hpp>

using namespace rdmap;

namespace {
const double S = std::sqrt(0.5);

RunConfig quick() {
    RunConfig cfg;
    cfg.samples = 40;
    cfg.remixes = 30;
    return cfg;
}
}  // namespace

TEST_CASE("exact checks on matrix units agree with sampled checks") {
    const Destroyer pi = dephasing_destroyer(2);
    const KrausChannel readout = xbasis_readout();
    const KrausChannel deph = dephasing_channel(2);

    for (Condition c : {Condition::nongenerating, Condition::nonactivating,
                        Condition::commuting}) {
        const ConditionResult exact = check_condition(readout, pi, c, quick());
        const ConditionResult sampled = check_condition_sampled(readout, pi, c, quick());
        INFO(condition_name(c));
        CHECK(exact.exact);
        CHECK_FALSE(sampled.exact);
        CHECK((exact.verdict == Verdict::pass) == (sampled.verdict == Verdict::pass));

        const ConditionResult exact2 = check_condition(deph, pi, c, quick());
        const ConditionResult sampled2 = check_condition_sampled(deph, pi, c, quick());
        CHECK(exact2.verdict == Verdict::pass);
        CHECK(sampled2.verdict == Verdict::pass);
        CHECK(sampled2.max_residual < 1e-12);
    }
}

TEST_CASE("x-basis readout fails the two-sided condition with the expected witness") {
    const ConditionResult r =
        check_commuting(xbasis_readout(), dephasing_destroyer(2), quick());
    REQUIRE(r.verdict == Verdict::fail);
    REQUIRE(r.witness.has_value());
    CHECK(r.witness_residual == Catch::Approx(0.5).margin(1e-10));
    ComplexMatrix plus(2, 2);
    plus(0, 0) = plus(0, 1) = plus(1, 0) = plus(1, 1) = 0.5;
    CHECK((r.witness->matrix() - plus).max_abs() < 1e-9);
    SECTION("witness re-verifies against the defining residual") {
        const Destroyer pi = dephasing_destroyer(2);
        const KrausChannel ch = xbasis_readout();
        const DensityMatrix w = *r.witness;
        const double direct = trace_norm_distance(
            pi(ch.apply(w)).matrix(), ch.apply(pi(w)).matrix());
        CHECK(direct == Catch::Approx(r.witness_residual).margin(1e-12));
    }
}

TEST_CASE("coherent repreparation generates but never activates") {
    const Destroyer pi = dephasing_destroyer(2);
    const KrausChannel mp =
        measure_prepare_channel({ket({cplx{S, 0}, cplx{S, 0}}), basis_ket(2, 1)});
    const ConditionResult gen = check_nongenerating(mp, pi, quick());
    REQUIRE(gen.verdict == Verdict::fail);
    REQUIRE(gen.witness.has_value());
    CHECK(pi.is_free(*gen.witness));  // witness is a free input that generates
    CHECK(pi.free_violation(mp.apply(*gen.witness)) > 0.4);

    const ConditionResult act = check_nonactivating(mp, pi, quick());
    CHECK(act.verdict == Verdict::pass);
}

TEST_CASE("the two-sided condition implies both one-sided conditions") {
    const Destroyer pi3 = dephasing_destroyer(3);
    for (const KrausChannel& ch :
         {qutrit_covariant_channel(), dephasing_channel(3), partial_depolarize(3, 0.5),
          erase_to_basis_state(3, 0)}) {
        INFO(ch.label());
        REQUIRE(check_commuting(ch, pi3, quick()).verdict == Verdict::pass);
        CHECK(check_nongenerating(ch, pi3, quick()).verdict == Verdict::pass);
        CHECK(check_nonactivating(ch, pi3, quick()).verdict == Verdict::pass);
    }
}

TEST_CASE("one-sided passes do not imply the two-sided condition") {
    // measure-prepare onto |0>: trivially nonactivating and nongenerating-
    // fails, while erase passes everything: contrast channel behaviors.
    const Destroyer pi = dephasing_destroyer(2);
    const KrausChannel mp =
        measure_prepare_channel({ket({cplx{S, 0}, cplx{S, 0}}), basis_ket(2, 1)});
    CHECK(check_nonactivating(mp, pi, quick()).verdict == Verdict::pass);
    CHECK(check_commuting(mp, pi, quick()).verdict == Verdict::fail);
}

TEST_CASE("selective checks search over arm remixes") {
    const Destroyer pi = dephasing_destroyer(2);
    SECTION("given arms can already witness") {
        const SelectiveResult r =
            check_selective(xbasis_readout(), pi, Condition::nongenerating, quick());
        CHECK(r.verdict == Verdict::witnessed);
        CHECK(r.given_passes);
        CHECK(r.witness_remix == -1);
    }
    SECTION("arms that fail as given stay failed with zero remixes requested") {
        RunConfig cfg = quick();
        cfg.remixes = 0;
        const SelectiveResult r =
            check_selective(xbasis_readout(), pi, Condition::commuting, cfg);
        CHECK(r.verdict == Verdict::fail_on_given);
        CHECK_FALSE(r.given_passes);
    }
    SECTION("qutrit covariant channel: no incoherent decomposition found") {
        const SelectiveResult r = check_selective(
            qutrit_covariant_channel(), dephasing_destroyer(3),
            Condition::nongenerating, quick());
        CHECK(r.verdict == Verdict::not_witnessed);
        CHECK(r.remixes_tried == quick().remixes);
        CHECK(r.best_remix_residual > 1e-8);
    }
    SECTION("unitary remixing preserves the overall channel") {
        // remixed arms M_i = sum_j W_ij K_j realize the same channel; the
        // search must therefore never change non-selective verdicts
        const KrausChannel ch = xbasis_readout();
        Rng rng(77);
        const ComplexMatrix w = random_unitary(2, rng);
        std::vector<ComplexMatrix> remixed(2, ComplexMatrix(2, 2));
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j)
                remixed[i] += w(i, j) * ch.arms()[j];
        const KrausChannel ch2(remixed, "remixed");
        const DensityMatrix rho = make_density(random_density_matrix(2, 2, rng));
        CHECK((ch.apply(rho).matrix() - ch2.apply(rho).matrix()).max_abs() < 1e-12);
    }
}

TEST_CASE("arm-shape classifiers") {
    SECTION("readout arms have single-row columns but not single-column rows") {
        const ArmTestResult io = io_arm_test(xbasis_readout());
        CHECK(io.pass);
        const ArmTestResult sio = sio_arm_test(xbasis_readout());
        CHECK_FALSE(sio.pass);
    }
    SECTION("pure dephasing arms pass both") {
        CHECK(io_arm_test(dephasing_channel(2)).pass);
        CHECK(sio_arm_test(dephasing_channel(2)).pass);
    }
    SECTION("erasure arms are strictly incoherent yet move populations") {
        CHECK(sio_arm_test(erase_to_basis_state(2, 0)).pass);
        const GioTestResult g = gio_test(erase_to_basis_state(2, 0));
        CHECK_FALSE(g.fixes_incoherent);
        REQUIRE(g.fix_witness.has_value());
        CHECK((g.fix_witness->matrix() - matrix_unit(2, 1, 1)).max_abs() < 1e-12);
    }
    SECTION("diagonal arms fix every incoherent state") {
        const KrausChannel ch = diagonal_arm_channel(
            {{cplx{std::sqrt(0.5), 0}, cplx{std::sqrt(0.3), 0}},
             {cplx{std::sqrt(0.5), 0}, cplx{0, std::sqrt(0.7)}}});
        const GioTestResult g = gio_test(ch);
        CHECK(g.arms_diagonal);
        CHECK(g.fixes_incoherent);
        CHECK(g.max_fix_residual < 1e-12);
    }
}

TEST_CASE("classification report bundles all six checks consistently") {
    const ClassificationReport rep =
        classify(xbasis_readout(), dephasing_destroyer(2), quick());
    CHECK(rep.conditions.size() == 3);
    CHECK(rep.selective.size() == 3);
    CHECK(rep.conditions.at("commuting").verdict == Verdict::fail);
    CHECK(rep.selective.at("selective-nongenerating").verdict == Verdict::witnessed);
    CHECK(rep.consistent());
}

TEST_CASE("sandwich constructions force the conditions by design") {
    Rng rng(55);
    const Destroyer pi = dephasing_destroyer(3);
    const KrausChannel arbitrary = unitary_isotropic(random_unitary(3, rng), 0.3);
    const ConstructionReport rep = construction_suite(pi, arbitrary, quick());
    CHECK(rep.all_pass);
}

TEST_CASE("composition and mixture closure for a linear destroyer") {
    const Destroyer pi = dephasing_destroyer(3);
    const std::vector<KrausChannel> pool{qutrit_covariant_channel(),
                                         dephasing_channel(3),
                                         erase_to_basis_state(3, 0)};
    const ClosureReport rep = closure_suite(pi, pool, quick());
    CHECK(rep.compositions_pass);
    CHECK(rep.mixtures_asserted);
    CHECK(rep.mixtures_pass);
    CHECK(rep.compositions.size() == pool.size() * pool.size());
}

TEST_CASE("nonlinear closure is searched, not asserted") {
    Rng rng(56);
    RunConfig cfg = quick();
    cfg.samples = 10;
    const Destroyer pa = discord_destroyer(BipartiteDims{2, 2});
    const std::vector<KrausChannel> pool{
        embed_local(unitary_isotropic(random_unitary(2, rng), 0.0), Subsystem::A, 2),
        embed_local(unitary_isotropic(random_unitary(2, rng), 0.5), Subsystem::A, 2)};
    const ClosureReport rep = closure_suite(pa, pool, cfg, BipartiteDims{2, 2});
    CHECK(rep.compositions_pass);
    CHECK_FALSE(rep.mixtures_asserted);
}

TEST_CASE("robustness demo shows the extreme destroyer is brittle") {
    const RobustnessReport rep = robustness_demo(quick());
    REQUIRE(rep.cases.size() == 3);
    CHECK(rep.expected_pattern);
    // identity and total depolarizing pass on both sides; the halfway
    // mixture moves the collapse target itself
    CHECK(rep.cases[0].vs_collapse == Verdict::pass);
    CHECK(rep.cases[1].vs_collapse == Verdict::fail);
    CHECK(rep.cases[2].vs_collapse == Verdict::pass);
    for (const auto& c : rep.cases) CHECK(c.vs_dephasing == Verdict::pass);
    CHECK(rep.cases[1].collapse_residual == Catch::Approx(0.25).margin(1e-9));
}

TEST_CASE("state-map front end matches the channel path") {
    const Destroyer pi = dephasing_destroyer(2);
    const StateMap wrapped(dephasing_channel(2));
    const ConditionResult via_map =
        check_condition(wrapped, pi, Condition::commuting, quick(), 2);
    CHECK(via_map.verdict == Verdict::pass);
    CHECK(via_map.max_residual < 1e-12);
}
