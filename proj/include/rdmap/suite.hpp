#pragma once

#include <chrono>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "rdmap/channel.hpp"
#include "rdmap/conditions.hpp"
#include "rdmap/defaults.hpp"
#include "rdmap/destroyer.hpp"
#include "rdmap/monotones.hpp"
#include "rdmap/rng.hpp"
#include "rdmap/state.hpp"

// The acceptance catalog: one row per check, each with its expected
// outcome, observed outcome, and deciding residual.  run_full_suite is the
// single source of truth for a green build.

namespace rdmap {

struct CriterionRow {
    std::string id;
    std::string what;
    std::string expected;
    std::string observed;
    double residual;
    bool pass;
};

struct SuiteReport {
    std::vector<CriterionRow> rows;
    bool all_pass = true;
    double seconds = 0.0;
    RunConfig cfg;
};

namespace detail {

inline std::string fmt(double v) {
    std::ostringstream o;
    o << std::setprecision(6) << v;
    return o.str();
}

}  // namespace detail

inline SuiteReport run_full_suite(const RunConfig& cfg = {}) {
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();

    SuiteReport rep;
    rep.cfg = cfg;
    auto add = [&](const std::string& id, const std::string& what,
                   const std::string& expected, const std::string& observed,
                   double residual, bool pass) {
        rep.rows.push_back({id, what, expected, observed, residual, pass});
        rep.all_pass = rep.all_pass && pass;
    };
    const int half_samples = std::max(1, cfg.samples / 2);

    // ---- 1: destroyer axioms ---------------------------------------------
    {
        double worst = 0.0;
        auto exercise = [&](const Destroyer& d, std::size_t dim,
                            std::optional<BipartiteDims> dims, std::uint64_t stream) {
            Rng rng = Rng(cfg.seed).fork(stream);
            for (int s = 0; s < half_samples; ++s) {
                const DensityMatrix rho =
                    make_density(random_density_matrix(dim, dim, rng), dims);
                const DensityMatrix img = d(rho);
                worst = std::max(worst, trace_norm_distance(d(img).matrix(), img.matrix()));
                worst = std::max(worst, d.free_violation(img));
                const DensityMatrix free_state =
                    d.has_free_sampler() ? d.sample_free(rng) : img;
                worst = std::max(
                    worst, trace_norm_distance(d(free_state).matrix(), free_state.matrix()));
            }
        };
        std::uint64_t stream = 0x100;
        for (std::size_t dim : {2, 3, 4}) exercise(dephasing_destroyer(dim), dim, {}, stream++);
        for (BipartiteDims dd : {BipartiteDims{2, 2}, BipartiteDims{2, 3}, BipartiteDims{3, 3}})
            exercise(discord_destroyer(dd), dd.a * dd.b, dd, stream++);
        {
            std::vector<ComplexMatrix> zgroup{ComplexMatrix::identity(2),
                                              ComplexMatrix::diag({cplx{1, 0}, cplx{-1, 0}})};
            exercise(twirl_destroyer(zgroup), 2, {}, stream++);
        }
        exercise(collapse_destroyer(make_density(matrix_unit(2, 0, 0))), 2, {}, stream++);
        add("1", "destroyer axioms (idempotence, destruction, fixed points)",
            "residuals <= 1e-9", "max residual " + detail::fmt(worst), worst,
            worst <= 1e-9);
    }

    // ---- 2: nonlinearity gap ---------------------------------------------
    {
        const DensityMatrix rho1 =
            pure_state(kron(basis_ket(2, 0), basis_ket(2, 0)), BipartiteDims{2, 2});
        const double s = std::sqrt(0.5);
        const DensityMatrix rho2 = pure_state(
            kron(ket({cplx{s, 0}, cplx{s, 0}}), basis_ket(2, 1)), BipartiteDims{2, 2});
        const NonlinearityReport nl =
            nonlinearity_witness(discord_destroyer(), rho1, rho2, 0.5);
        add("2a", "marginal-eigenbasis dephasing is nonlinear on a CQ pair",
            "gap > 0.05", "gap " + detail::fmt(nl.gap), nl.gap, nl.gap > 0.05);

        const DensityMatrix d1 = make_density(ComplexMatrix::diag_real({1.0, 0.0}));
        const DensityMatrix d2 = make_density(ComplexMatrix::diag_real({0.3, 0.7}));
        const NonlinearityReport lin =
            nonlinearity_witness(dephasing_destroyer(2), d1, d2, 0.5);
        add("2b", "complete dephasing is linear", "gap <= 1e-12",
            "gap " + detail::fmt(lin.gap), lin.gap, lin.gap <= 1e-12);
    }

    // ---- 3: coherence catalog --------------------------------------------
    {
        const Destroyer pi2 = dephasing_destroyer(2);
        const Destroyer pi3 = dephasing_destroyer(3);
        const KrausChannel e1 = xbasis_readout();
        const KrausChannel e2 = qutrit_covariant_channel();

        const SelectiveResult io1 =
            check_selective(e1, pi2, Condition::nongenerating, cfg);
        add("3a", "xbasis-readout: column-incoherent decomposition (IO)",
            "witnessed on given arms", verdict_name(io1.verdict), io1.given_max_residual,
            io1.verdict == Verdict::witnessed && io1.given_passes);

        const ConditionResult dio1 = check_commuting(e1, pi2, cfg);
        double witness_err = 1.0;
        if (dio1.witness) {
            ComplexMatrix plus(2, 2);
            plus(0, 0) = plus(0, 1) = plus(1, 0) = plus(1, 1) = 0.5;
            witness_err = (dio1.witness->matrix() - plus).max_abs();
        }
        const bool res_ok = std::abs(dio1.witness_residual - 0.5) <= 1e-10;
        add("3b", "xbasis-readout: dephasing-covariance fails on the +/- state",
            "fail, witness (|0>+|1>)/sqrt2, residual 0.5 +- 1e-10",
            std::string(verdict_name(dio1.verdict)) + ", witness residual " +
                detail::fmt(dio1.witness_residual),
            std::abs(dio1.witness_residual - 0.5),
            dio1.verdict == Verdict::fail && witness_err <= 1e-9 && res_ok);

        const CptpReport cp = is_cptp(e2);
        add("3c", "qutrit-covariant: valid channel (CPTP)", "pass",
            cp.pass ? "pass" : "fail",
            std::max(cp.kraus_sum_residual, std::max(0.0, -cp.choi_min_eigenvalue)),
            cp.pass);

        const ConditionResult dio2 = check_commuting(e2, pi3, cfg);
        add("3d", "qutrit-covariant: commutes with dephasing (DIO)", "pass",
            verdict_name(dio2.verdict), dio2.max_residual,
            dio2.verdict == Verdict::pass);

        const SelectiveResult io2 =
            check_selective(e2, pi3, Condition::nongenerating, cfg);
        add("3e", "qutrit-covariant: incoherent decomposition search (IO)",
            "not-witnessed after " + std::to_string(cfg.remixes) + " remixes",
            std::string(verdict_name(io2.verdict)) + " after " +
                std::to_string(io2.remixes_tried) + " remixes",
            io2.best_remix_residual,
            io2.verdict == Verdict::not_witnessed && io2.remixes_tried == cfg.remixes);

        const double s = std::sqrt(0.5);
        const KrausChannel mp = measure_prepare_channel(
            {ket({cplx{s, 0}, cplx{s, 0}}), basis_ket(2, 1)});
        const SelectiveResult mp_act =
            check_selective(mp, pi2, Condition::nonactivating, cfg);
        const ConditionResult mp_gen = check_nongenerating(mp, pi2, cfg);
        add("3f", "measure-prepare (coherent target): arm-wise nonactivating, "
                  "nongenerating fails",
            "witnessed / fail",
            std::string(verdict_name(mp_act.verdict)) + " / " +
                verdict_name(mp_gen.verdict),
            mp_gen.max_residual,
            mp_act.verdict == Verdict::witnessed && mp_gen.verdict == Verdict::fail &&
                mp_gen.witness.has_value());

        const KrausChannel gio = diagonal_arm_channel(
            {{cplx{std::sqrt(0.5), 0}, cplx{std::sqrt(0.3), 0}},
             {cplx{std::sqrt(0.5), 0}, cplx{0, std::sqrt(0.7)}}});
        const SelectiveResult sio_g =
            check_selective(gio, pi2, Condition::commuting, cfg);
        const GioTestResult gio_r = gio_test(gio);
        add("3g", "diagonal-arm channel: strictly incoherent (SIO) and "
                  "fixes incoherent states (GIO)",
            "witnessed / gio pass",
            std::string(verdict_name(sio_g.verdict)) + " / " +
                (gio_r.arms_diagonal && gio_r.fixes_incoherent ? "gio pass" : "gio fail"),
            std::max(sio_g.given_max_residual, gio_r.max_fix_residual),
            sio_g.verdict == Verdict::witnessed && gio_r.arms_diagonal &&
                gio_r.fixes_incoherent);

        const KrausChannel er = erase_to_basis_state(2, 0);
        const SelectiveResult sio_e =
            check_selective(er, pi2, Condition::commuting, cfg);
        const GioTestResult gio_e = gio_test(er);
        bool erase_witness_ok = false;
        if (gio_e.fix_witness) {
            const ComplexMatrix e11 = matrix_unit(2, 1, 1);
            erase_witness_ok = (gio_e.fix_witness->matrix() - e11).max_abs() <= 1e-12;
        }
        add("3h", "erase-to-|0>: strictly incoherent but moves |1><1|",
            "SIO witnessed / gio fixedness fail with witness |1><1|",
            std::string(verdict_name(sio_e.verdict)) + " / " +
                (gio_e.fixes_incoherent ? "fixes" : "moves"),
            gio_e.max_fix_residual,
            sio_e.verdict == Verdict::witnessed && !gio_e.fixes_incoherent &&
                erase_witness_ok);
    }

    // ---- 4: discord catalog ----------------------------------------------
    {
        const Destroyer pa22 = discord_destroyer(BipartiteDims{2, 2});
        Rng urng = Rng(cfg.seed).fork(0x400);

        double worst_comm = 0.0;
        bool all_pass = true;
        for (int u = 0; u < 5; ++u) {
            const ComplexMatrix uu = random_unitary(2, urng);
            for (double gamma : {0.0, 0.5, 1.0}) {
                const KrausChannel local =
                    embed_local(unitary_isotropic(uu, gamma), Subsystem::A, 2);
                const ConditionResult r =
                    check_commuting(local, pa22, cfg, BipartiteDims{2, 2});
                worst_comm = std::max(worst_comm, r.max_residual);
                all_pass = all_pass && r.verdict == Verdict::pass;
            }
        }
        add("4a", "local unitary-isotropic channels commute with marginal dephasing",
            "pass x15, residual <= 1e-8", all_pass ? "pass" : "fail", worst_comm,
            all_pass && worst_comm <= 1e-8);

        const ComplexMatrix uu = random_unitary(2, urng);
        const KrausChannel twirl_arms =
            embed_local(shift_clock_twirl_arms(uu, 0.5), Subsystem::A, 2);
        const SelectiveResult sel_tw =
            check_selective(twirl_arms, pa22, Condition::commuting, cfg,
                            BipartiteDims{2, 2});
        add("4b", "shift/clock twirl arms commute arm-wise with marginal dephasing",
            "witnessed on given arms", verdict_name(sel_tw.verdict),
            sel_tw.given_max_residual,
            sel_tw.verdict == Verdict::witnessed && sel_tw.given_passes);

        const double th = std::numbers::pi / 5.0;
        ComplexMatrix rot{{cplx{std::cos(th), 0}, cplx{-std::sin(th), 0}},
                          {cplx{std::sin(th), 0}, cplx{std::cos(th), 0}}};
        const KrausChannel meas =
            embed_local(projective_measurement_channel(rot), Subsystem::A, 2);
        const SelectiveResult meas_gen =
            check_selective(meas, pa22, Condition::nongenerating, cfg,
                            BipartiteDims{2, 2});
        RunConfig cfg_half = cfg;
        cfg_half.samples = half_samples;
        const ConditionResult meas_com =
            check_commuting(meas, pa22, cfg_half, BipartiteDims{2, 2});
        add("4c", "rotated projective measurement: arm-wise nongenerating, "
                  "commuting fails",
            "witnessed / fail with sampled witness",
            std::string(verdict_name(meas_gen.verdict)) + " / " +
                verdict_name(meas_com.verdict),
            meas_com.max_residual,
            meas_gen.verdict == Verdict::witnessed &&
                meas_com.verdict == Verdict::fail && meas_com.witness.has_value());

        const Destroyer pa33 = discord_destroyer(BipartiteDims{3, 3});
        const KrausChannel mu =
            embed_local(qutrit_shift_mixture(), Subsystem::A, 3);
        RunConfig cfg_mu = cfg;
        cfg_mu.samples = half_samples;
        const ConditionResult mu_gen =
            check_nongenerating(mu, pa33, cfg_mu, BipartiteDims{3, 3});
        const bool mu_witness_cq =
            mu_gen.witness.has_value() && is_cq(*mu_gen.witness).cq;
        const SelectiveResult mu_sel =
            check_selective(mu, pa33, Condition::commuting, cfg, BipartiteDims{3, 3});
        add("4d", "qutrit shift mixture: creates discord from CQ inputs, "
                  "yet every arm commutes",
            "fail with CQ witness / witnessed",
            std::string(verdict_name(mu_gen.verdict)) + " / " +
                verdict_name(mu_sel.verdict),
            mu_gen.max_residual,
            mu_gen.verdict == Verdict::fail && mu_witness_cq &&
                mu_sel.verdict == Verdict::witnessed);

        const double s = std::sqrt(0.5);
        const StateMap xi = eigenbasis_measure_prepare(
            {basis_ket(2, 0), ket({cplx{s, 0}, cplx{s, 0}})});
        const ConditionResult xi_act = check_condition(
            xi, pa22, Condition::nonactivating, cfg, 4, BipartiteDims{2, 2});
        const ConditionResult xi_gen = check_condition(
            xi, pa22, Condition::nongenerating, cfg, 4, BipartiteDims{2, 2});
        add("4e", "eigenbasis measure-prepare (overlapping targets): "
                  "nonactivating passes, nongenerating fails",
            "pass (residual <= 1e-8) / fail",
            std::string(verdict_name(xi_act.verdict)) + " / " +
                verdict_name(xi_gen.verdict),
            xi_act.max_residual,
            xi_act.verdict == Verdict::pass && xi_act.max_residual <= 1e-8 &&
                xi_gen.verdict == Verdict::fail);
    }

    // ---- 5: monotonicity -------------------------------------------------
    {
        double worst = 0.0;
        int violations = 0;
        auto run = [&](const KrausChannel& ch, const Destroyer& d,
                       std::optional<BipartiteDims> dims) {
            for (const DistanceMeasure& m :
                 {relative_entropy_measure(), trace_distance_measure()}) {
                const MonotonicityReport r = monotonicity_suite(ch, d, m, cfg, dims);
                worst = std::max(worst, r.max_violation);
                violations += r.violations;
            }
        };
        run(qutrit_covariant_channel(), dephasing_destroyer(3), {});
        run(dephasing_channel(2), dephasing_destroyer(2), {});
        Rng urng = Rng(cfg.seed).fork(0x500);
        run(embed_local(unitary_isotropic(random_unitary(2, urng), 0.5), Subsystem::A, 2),
            discord_destroyer(BipartiteDims{2, 2}), BipartiteDims{2, 2});
        run(embed_local(unitary_isotropic(random_unitary(2, urng), 1.0), Subsystem::A, 2),
            discord_destroyer(BipartiteDims{2, 2}), BipartiteDims{2, 2});
        add("5", "monotone never increases under commuting channels "
                 "(both measures)",
            "0 violations above 1e-9", std::to_string(violations) + " violations",
            worst, violations == 0);
    }

    // ---- 6: selective monotonicity ---------------------------------------
    {
        const MonotonicityReport sio = selective_monotonicity_suite(
            dephasing_channel(2), dephasing_destroyer(2), cfg);
        Rng urng = Rng(cfg.seed).fork(0x600);
        const MonotonicityReport tw = selective_monotonicity_suite(
            embed_local(shift_clock_twirl_arms(random_unitary(2, urng), 0.5),
                        Subsystem::A, 2),
            discord_destroyer(BipartiteDims{2, 2}), cfg, BipartiteDims{2, 2});
        const double worst = std::max(sio.max_violation, tw.max_violation);
        add("6", "average arm-wise monotone holds (relative entropy)",
            "0 violations above 1e-9",
            std::to_string(sio.violations + tw.violations) + " violations", worst,
            sio.pass && tw.pass && sio.commuting_verified && tw.commuting_verified);
    }

    // ---- 7: pinching identity + Bell value -------------------------------
    {
        double worst = 0.0;
        Rng rng = Rng(cfg.seed).fork(0x700);
        const Destroyer pi3 = dephasing_destroyer(3);
        for (int s = 0; s < cfg.samples; ++s) {
            const DensityMatrix rho = make_density(random_density_matrix(3, 3, rng));
            const DensityMatrix pin = pi3(rho);
            const double direct = relative_entropy(rho, pin);
            const double gain = von_neumann_entropy(pin) - von_neumann_entropy(rho);
            worst = std::max(worst, std::abs(direct - gain));
        }
        for (int s = 0; s < cfg.samples; ++s) {
            const DensityMatrix rho =
                make_density(random_density_matrix(4, 4, rng), BipartiteDims{2, 2});
            const DensityMatrix pin = marginal_dephase(rho);
            const double direct = relative_entropy(rho, pin);
            const double gain = von_neumann_entropy(pin) - von_neumann_entropy(rho);
            worst = std::max(worst, std::abs(direct - gain));
        }
        const double s2 = std::sqrt(0.5);
        const DensityMatrix bell = pure_state(
            ket({cplx{s2, 0}, 0, 0, cplx{s2, 0}}), BipartiteDims{2, 2});
        const double bell_value = diagonal_discord(bell);
        const bool bell_ok = std::abs(bell_value - 1.0) <= 1e-9;
        add("7", "pinching identity and maximally-entangled discord",
            "identity residual <= 1e-9; Bell value 1.000 +- 1e-9",
            "residual " + detail::fmt(worst) + "; Bell " + detail::fmt(bell_value),
            std::max(worst, std::abs(bell_value - 1.0)),
            worst <= 1e-9 && bell_ok);
    }

    // ---- 8: robustness of the nongenerating verdict ----------------------
    {
        const RobustnessReport rr = robustness_demo(cfg);
        std::string obs;
        for (const auto& c : rr.cases)
            obs += "tau=" + detail::fmt(c.tau) + ":" + verdict_name(c.vs_collapse) + " ";
        add("8a", "partial depolarizing: nonactivating vs dephasing everywhere, "
                  "vs collapse only at the extremes",
            "pass/fail/pass for tau=1,0.5,0 (collapse side)", obs,
            rr.cases.size() == 3 ? rr.cases[1].collapse_residual : 0.0,
            rr.expected_pattern);

        bool agree = true;
        std::string detail_s;
        auto compare = [&](const KrausChannel& ch, std::size_t d) {
            const ConditionResult a =
                check_nongenerating(ch, dephasing_destroyer(d), cfg);
            const ConditionResult b = check_nongenerating(
                ch, collapse_destroyer(make_density(matrix_unit(d, 0, 0))), cfg);
            const bool same = (a.verdict == Verdict::pass) == (b.verdict == Verdict::pass);
            agree = agree && same;
            detail_s += ch.label() + (same ? ":agree " : ":DISAGREE ");
        };
        const double s = std::sqrt(0.5);
        compare(xbasis_readout(), 2);
        compare(dephasing_channel(2), 2);
        compare(measure_prepare_channel({ket({cplx{s, 0}, cplx{s, 0}}), basis_ket(2, 1)}), 2);
        compare(erase_to_basis_state(2, 0), 2);
        compare(qutrit_covariant_channel(), 3);
        compare(qutrit_shift_mixture(), 3);
        add("8b", "nongenerating verdicts agree between dephasing and collapse "
                  "destroyers",
            "agree on all catalog channels", detail_s, 0.0, agree);
    }

    // ---- 9: closure ------------------------------------------------------
    {
        const Destroyer pi3 = dephasing_destroyer(3);
        const std::vector<KrausChannel> pool3{
            qutrit_covariant_channel(), dephasing_channel(3),
            partial_depolarize(3, 0.5), erase_to_basis_state(3, 0)};
        const ClosureReport cl3 = closure_suite(pi3, pool3, cfg);
        add("9a", "composition and convex closure of dephasing-commuting channels",
            "all compositions and mixtures pass",
            std::string(cl3.compositions_pass ? "compositions pass" : "composition FAIL") +
                ", " + (cl3.mixtures_pass ? "mixtures pass" : "mixture FAIL"),
            0.0, cl3.compositions_pass && cl3.mixtures_asserted && cl3.mixtures_pass);

        Rng urng = Rng(cfg.seed).fork(0x900);
        const Destroyer pa = discord_destroyer(BipartiteDims{2, 2});
        RunConfig cfg_q = cfg;
        cfg_q.samples = std::max(1, cfg.samples / 4);
        const std::vector<KrausChannel> pool_local{
            embed_local(unitary_isotropic(random_unitary(2, urng), 0.0), Subsystem::A, 2),
            embed_local(unitary_isotropic(random_unitary(2, urng), 0.5), Subsystem::A, 2)};
        const ClosureReport cl_pa =
            closure_suite(pa, pool_local, cfg_q, BipartiteDims{2, 2});
        add("9b", "marginal-dephasing closure: compositions pass; convex mixtures "
                  "only searched",
            "compositions pass; findings reported, not asserted",
            std::string(cl_pa.compositions_pass ? "compositions pass" : "composition FAIL") +
                "; " + std::to_string(cl_pa.mixture_findings.size()) +
                " mixture finding(s)",
            0.0, cl_pa.compositions_pass && !cl_pa.mixtures_asserted);
    }

    // ---- 10: degeneracy scan + runtime -----------------------------------
    {
        const std::vector<double> grid = uniform_grid(-0.01, 0.01, 0.002);
        const std::vector<ScanRow> rows = degeneracy_scan(
            [](double e) { return eigenbasis_swap_family(e); }, grid);
        int jumps = 0;
        double jump_size = 0.0;
        bool jump_at_crossing = false;
        for (std::size_t i = 1; i < rows.size(); ++i) {
            if (!rows[i].jump) continue;
            ++jumps;
            jump_size = std::abs(rows[i].value_bits - rows[i - 1].value_bits);
            // the crossing pair straddles eps = 0
            jump_at_crossing = rows[i - 1].epsilon < 1e-12 && rows[i].epsilon > -1e-3 &&
                               rows[i].epsilon < 1e-3 + 1e-12;
        }
        const std::vector<ScanRow> control = degeneracy_scan(
            [](double e) { return nondegenerate_control_family(e); }, grid);
        int control_jumps = 0;
        for (const auto& r : control) control_jumps += r.jump ? 1 : 0;
        add("10a", "eigenbasis-swap family: one flagged jump at the degeneracy, "
                   "none for the control family",
            "1 jump >= 0.1 bits at crossing; control 0",
            std::to_string(jumps) + " jump(s) of " + detail::fmt(jump_size) +
                " bits; control " + std::to_string(control_jumps),
            jump_size,
            jumps == 1 && jump_at_crossing && jump_size >= 0.1 && control_jumps == 0);
    }

    rep.seconds = std::chrono::duration<double>(clock::now() - t0).count();
    add("10b", "full suite runtime", "< 60 s single-threaded",
        detail::fmt(rep.seconds) + " s", rep.seconds, rep.seconds < 60.0);
    return rep;
}

inline void print_suite(const SuiteReport& rep, std::ostream& out) {
    for (const auto& r : rep.rows) {
        out << (r.pass ? "[PASS] " : "[FAIL] ") << std::left << std::setw(4) << r.id
            << r.what << "\n       expected: " << r.expected
            << "\n       observed: " << r.observed
            << "  (residual " << detail::fmt(r.residual) << ")\n";
    }
    out << (rep.all_pass ? "ALL CHECKS PASSED" : "CHECKS FAILED") << " in "
        << detail::fmt(rep.seconds) << " s  (seed " << rep.cfg.seed << ", tol "
        << rep.cfg.tol << ", samples " << rep.cfg.samples << ", remixes "
        << rep.cfg.remixes << ")\n";
}

}  // namespace rdmap
