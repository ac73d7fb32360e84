#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rdmap/channel.hpp"
#include "rdmap/defaults.hpp"
#include "rdmap/destroyer.hpp"
#include "rdmap/rng.hpp"
#include "rdmap/state.hpp"

// Deciders for the three resource-free conditions of a channel E against a
// destroyer lambda:
//   nongenerating   E . lambda = lambda . E . lambda   (free inputs stay free)
//   nonactivating   lambda . E = lambda . E . lambda   (resource never helps)
//   commuting       lambda . E = E . lambda            (both at once)
// Linear destroyers are decided exactly on the matrix-unit basis; nonlinear
// ones by seeded sampling.  Selective variants test arms of a Kraus
// decomposition, with a randomized remix search over decompositions.

namespace rdmap {

enum class Condition { nongenerating, nonactivating, commuting };

inline const char* condition_name(Condition c) {
    switch (c) {
        case Condition::nongenerating: return "nongenerating";
        case Condition::nonactivating: return "nonactivating";
        case Condition::commuting:     return "commuting";
    }
    return "?";
}

enum class Verdict { pass, fail, witnessed, not_witnessed, fail_on_given };

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::pass:          return "pass";
        case Verdict::fail:          return "fail";
        case Verdict::witnessed:     return "witnessed";
        case Verdict::not_witnessed: return "not-witnessed";
        case Verdict::fail_on_given: return "fail-on-given";
    }
    return "?";
}

struct ConditionResult {
    Condition condition;
    Verdict verdict;
    bool exact = false;       // matrix-unit path (vs seeded sampling)
    double max_residual = 0.0;
    double tol = kCheckTol;
    int samples_used = 0;
    std::optional<DensityMatrix> witness;  // on fail: a state showing the violation
    double witness_residual = 0.0;
    std::string note;
};

struct SelectiveResult {
    Condition condition;
    Verdict verdict;
    bool given_passes = false;
    double given_max_residual = 0.0;
    std::optional<int> worst_arm;      // arm with the largest given residual
    int remixes_tried = 0;
    int witness_remix = -1;            // -1: given arms; >=0: successful remix index
    double best_remix_residual = 0.0;  // closest any remix came
    double tol = kCheckTol;
    std::string note;
};

namespace detail {

inline DensityMatrix random_probe(std::size_t d, std::optional<BipartiteDims> dims,
                                  Rng& rng) {
    return make_density(random_density_matrix(d, d, rng), dims);
}

inline DensityMatrix free_probe(const Destroyer& dest, std::size_t d,
                                std::optional<BipartiteDims> dims, Rng& rng,
                                bool prefer_sampler) {
    if (prefer_sampler && dest.has_free_sampler()) return dest.sample_free(rng);
    return dest(random_probe(d, dims, rng));
}

// States reachable by linearity from matrix unit (i, j): used to convert a
// failing unit into a state-level witness.
inline std::vector<DensityMatrix> unit_witness_candidates(
    std::size_t d, std::size_t i, std::size_t j, std::optional<BipartiteDims> dims) {
    std::vector<DensityMatrix> out;
    if (i == j) {
        out.push_back(make_density(matrix_unit(d, i, i), dims));
        return out;
    }
    const double s = std::sqrt(0.5);
    const cplx im{0.0, 1.0};
    std::vector<std::vector<cplx>> amps = {
        {cplx{s, 0.0}, cplx{s, 0.0}}, {cplx{s, 0.0}, cplx{-s, 0.0}},
        {cplx{s, 0.0}, im * s},       {cplx{s, 0.0}, -im * s}};
    for (const auto& a : amps) {
        ComplexMatrix k(d, 1);
        k(i, 0) = a[0];
        k(j, 0) = a[1];
        out.push_back(pure_state(k, dims));
    }
    return out;
}

template <class ApplyState>
inline double state_residual(Condition c, ApplyState&& ch, const Destroyer& dest,
                             const DensityMatrix& rho) {
    switch (c) {
        case Condition::nongenerating: {
            const DensityMatrix out = ch(dest(rho));
            return dest.free_violation(out);
        }
        case Condition::nonactivating: {
            const DensityMatrix lhs = dest(ch(rho));
            const DensityMatrix rhs = dest(ch(dest(rho)));
            return trace_norm_distance(lhs.matrix(), rhs.matrix());
        }
        case Condition::commuting: {
            const DensityMatrix lhs = dest(ch(rho));
            const DensityMatrix rhs = ch(dest(rho));
            return trace_norm_distance(lhs.matrix(), rhs.matrix());
        }
    }
    return 0.0;
}

// Exact decision on the matrix-unit basis; requires a linear destroyer.
inline ConditionResult check_exact(const KrausChannel& ch, const Destroyer& dest,
                                   Condition c, const RunConfig& cfg,
                                   std::optional<BipartiteDims> dims) {
    const std::size_t n = ch.dim_in();
    ConditionResult res;
    res.condition = c;
    res.exact = true;
    res.tol = cfg.tol;
    std::size_t wi = 0, wj = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const ComplexMatrix e = matrix_unit(n, i, j);
            ComplexMatrix lhs, rhs;
            switch (c) {
                case Condition::nongenerating:
                    lhs = ch.apply_raw(dest.apply_matrix(e));
                    rhs = dest.apply_matrix(lhs);
                    break;
                case Condition::nonactivating:
                    lhs = dest.apply_matrix(ch.apply_raw(e));
                    rhs = dest.apply_matrix(ch.apply_raw(dest.apply_matrix(e)));
                    break;
                case Condition::commuting:
                    lhs = dest.apply_matrix(ch.apply_raw(e));
                    rhs = ch.apply_raw(dest.apply_matrix(e));
                    break;
            }
            const double r = (lhs - rhs).max_abs();
            if (r > res.max_residual) {
                res.max_residual = r;
                wi = i;
                wj = j;
            }
        }
    if (res.max_residual <= cfg.tol) {
        res.verdict = Verdict::pass;
        return res;
    }
    res.verdict = Verdict::fail;
    auto apply = [&ch](const DensityMatrix& rho) { return ch.apply(rho); };
    for (const auto& cand : unit_witness_candidates(n, wi, wj, dims)) {
        const double r = state_residual(c, apply, dest, cand);
        if (!res.witness || r > res.witness_residual) {
            res.witness = cand;
            res.witness_residual = r;
        }
    }
    res.note = "witness derived from matrix unit (" + std::to_string(wi) + "," +
               std::to_string(wj) + ")";
    return res;
}

template <class ApplyState>
inline ConditionResult check_sampled(ApplyState&& ch, std::size_t din,
                                     const Destroyer& dest, Condition c,
                                     const RunConfig& cfg,
                                     std::optional<BipartiteDims> dims) {
    ConditionResult res;
    res.condition = c;
    res.exact = false;
    res.tol = cfg.tol;
    Rng rng = Rng(cfg.seed).fork(static_cast<std::uint64_t>(c));
    std::optional<DensityMatrix> worst_input;
    for (int s = 0; s < cfg.samples; ++s) {
        DensityMatrix input = (c == Condition::nongenerating)
                                  ? free_probe(dest, din, dims, rng, s % 2 == 0)
                                  : random_probe(din, dims, rng);
        const double r = state_residual(c, ch, dest, input);
        if (r > res.max_residual) {
            res.max_residual = r;
            worst_input = std::move(input);
        }
    }
    res.samples_used = cfg.samples;
    if (res.max_residual <= cfg.tol) {
        res.verdict = Verdict::pass;
    } else {
        res.verdict = Verdict::fail;
        res.witness = worst_input;
        res.witness_residual = res.max_residual;
    }
    return res;
}

}  // namespace detail

inline ConditionResult check_condition(const KrausChannel& ch, const Destroyer& dest,
                                       Condition c, const RunConfig& cfg = {},
                                       std::optional<BipartiteDims> dims = std::nullopt) {
    if (dest.linear() && dest.has_matrix_form())
        return detail::check_exact(ch, dest, c, cfg, dims);
    return detail::check_sampled([&ch](const DensityMatrix& rho) { return ch.apply(rho); },
                                 ch.dim_in(), dest, c, cfg, dims);
}

// Forced sampling path, also for linear destroyers (consistency testing).
inline ConditionResult check_condition_sampled(const KrausChannel& ch,
                                               const Destroyer& dest, Condition c,
                                               const RunConfig& cfg = {},
                                               std::optional<BipartiteDims> dims =
                                                   std::nullopt) {
    return detail::check_sampled([&ch](const DensityMatrix& rho) { return ch.apply(rho); },
                                 ch.dim_in(), dest, c, cfg, dims);
}

// Generic (possibly nonlinear) maps are decided by sampling only.
inline ConditionResult check_condition(const StateMap& map, const Destroyer& dest,
                                       Condition c, const RunConfig& cfg,
                                       std::size_t dim,
                                       std::optional<BipartiteDims> dims = std::nullopt) {
    return detail::check_sampled([&map](const DensityMatrix& rho) { return map(rho); },
                                 dim, dest, c, cfg, dims);
}

inline ConditionResult check_nongenerating(const KrausChannel& ch, const Destroyer& dest,
                                           const RunConfig& cfg = {},
                                           std::optional<BipartiteDims> dims = std::nullopt) {
    return check_condition(ch, dest, Condition::nongenerating, cfg, dims);
}

inline ConditionResult check_nonactivating(const KrausChannel& ch, const Destroyer& dest,
                                           const RunConfig& cfg = {},
                                           std::optional<BipartiteDims> dims = std::nullopt) {
    return check_condition(ch, dest, Condition::nonactivating, cfg, dims);
}

inline ConditionResult check_commuting(const KrausChannel& ch, const Destroyer& dest,
                                       const RunConfig& cfg = {},
                                       std::optional<BipartiteDims> dims = std::nullopt) {
    return check_condition(ch, dest, Condition::commuting, cfg, dims);
}

namespace detail {

struct ArmsOutcome {
    bool pass = true;
    double max_residual = 0.0;
    int worst_arm = -1;
};

// One arm K acts as X -> K X K^dag (not trace preserving); linear
// destroyers are tested exactly on units, nonlinear ones on samples with
// the trace-scaling extension.
inline ArmsOutcome test_arms(const std::vector<ComplexMatrix>& arms,
                             const Destroyer& dest, Condition c, const RunConfig& cfg,
                             std::optional<BipartiteDims> dims, int samples, Rng& rng) {
    ArmsOutcome out;
    const std::size_t n = arms.front().cols();
    for (std::size_t m = 0; m < arms.size(); ++m) {
        const ComplexMatrix& k = arms[m];
        const ComplexMatrix kd = k.adjoint();
        double worst = 0.0;
        if (dest.linear() && dest.has_matrix_form()) {
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    const ComplexMatrix e = matrix_unit(n, i, j);
                    ComplexMatrix lhs, rhs;
                    switch (c) {
                        case Condition::nongenerating:
                            lhs = k * dest.apply_matrix(e) * kd;
                            rhs = dest.apply_matrix(lhs);
                            break;
                        case Condition::nonactivating:
                            lhs = dest.apply_matrix(k * e * kd);
                            rhs = dest.apply_matrix(k * dest.apply_matrix(e) * kd);
                            break;
                        case Condition::commuting:
                            lhs = dest.apply_matrix(k * e * kd);
                            rhs = k * dest.apply_matrix(e) * kd;
                            break;
                    }
                    worst = std::max(worst, (lhs - rhs).max_abs());
                }
        } else {
            for (int s = 0; s < samples; ++s) {
                double r = 0.0;
                if (c == Condition::nongenerating) {
                    const DensityMatrix sigma = free_probe(dest, n, dims, rng, s % 2 == 0);
                    const ComplexMatrix y = k * sigma.matrix() * kd;
                    const double t = y.trace().real();
                    if (t < kArmWeightFloor) continue;
                    r = dest.free_violation(make_density(y * cplx{1.0 / t, 0.0}, dims));
                } else {
                    const DensityMatrix rho = random_probe(n, dims, rng);
                    if (c == Condition::nonactivating) {
                        const ComplexMatrix lhs = apply_scaled(dest, k * rho.matrix() * kd, dims);
                        const ComplexMatrix rhs =
                            apply_scaled(dest, k * dest(rho).matrix() * kd, dims);
                        r = trace_norm_distance(lhs, rhs);
                    } else {
                        const ComplexMatrix lhs = apply_scaled(dest, k * rho.matrix() * kd, dims);
                        const ComplexMatrix rhs = k * dest(rho).matrix() * kd;
                        r = trace_norm_distance(lhs, rhs);
                    }
                }
                worst = std::max(worst, r);
            }
        }
        if (worst > out.max_residual) {
            out.max_residual = worst;
            out.worst_arm = static_cast<int>(m);
        }
    }
    out.pass = out.max_residual <= cfg.tol;
    return out;
}

}  // namespace detail

// Arm-wise condition with a randomized search over Kraus decompositions.
// "witnessed" is a certificate; "not-witnessed" only says the search
// failed, not that no decomposition exists.
inline SelectiveResult check_selective(const KrausChannel& ch, const Destroyer& dest,
                                       Condition c, const RunConfig& cfg = {},
                                       std::optional<BipartiteDims> dims = std::nullopt) {
    SelectiveResult res;
    res.condition = c;
    res.tol = cfg.tol;
    Rng rng = Rng(cfg.seed).fork(0xa1 + static_cast<std::uint64_t>(c));
    const detail::ArmsOutcome given =
        detail::test_arms(ch.arms(), dest, c, cfg, dims, cfg.samples, rng);
    res.given_passes = given.pass;
    res.given_max_residual = given.max_residual;
    if (given.worst_arm >= 0 && !given.pass) res.worst_arm = given.worst_arm;
    if (given.pass) {
        res.verdict = Verdict::witnessed;
        res.note = "given decomposition passes arm-wise";
        return res;
    }
    if (cfg.remixes <= 0) {
        res.verdict = Verdict::fail_on_given;
        res.note = "given arms fail; remix search disabled";
        return res;
    }
    // Remix search: arms M_i = sum_j W_ij K_j realize the same channel for
    // any unitary W on the arm index space.
    const std::size_t m = ch.arms().size();
    const int remix_samples = std::min(cfg.samples, 24);  // per-remix sampling budget
    double best = given.max_residual;
    for (int t = 0; t < cfg.remixes; ++t) {
        const ComplexMatrix w = random_unitary(m, rng);
        std::vector<ComplexMatrix> remixed(m, ComplexMatrix(ch.dim_out(), ch.dim_in()));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) remixed[i] += w(i, j) * ch.arms()[j];
        const detail::ArmsOutcome trial =
            detail::test_arms(remixed, dest, c, cfg, dims, remix_samples, rng);
        best = std::min(best, trial.max_residual);
        res.remixes_tried = t + 1;
        if (trial.pass) {
            res.verdict = Verdict::witnessed;
            res.witness_remix = t;
            res.best_remix_residual = trial.max_residual;
            res.note = "witnessing decomposition found by remix";
            return res;
        }
    }
    res.verdict = Verdict::not_witnessed;
    res.best_remix_residual = best;
    res.note = "no witnessing decomposition found; existence undecided";
    return res;
}

// ---- Kraus-entry class tests --------------------------------------------

struct ArmTestResult {
    bool pass;
    double max_violation;  // largest |K_ki * conj(K_li)| across offending pairs
};

// At most one nonzero entry per column (phase-insensitive).
inline ArmTestResult io_arm_test(const ComplexMatrix& k, double tol = kCheckTol) {
    double worst = 0.0;
    for (std::size_t i = 0; i < k.cols(); ++i)
        for (std::size_t r1 = 0; r1 + 1 < k.rows(); ++r1)
            for (std::size_t r2 = r1 + 1; r2 < k.rows(); ++r2)
                worst = std::max(worst, std::abs(k(r1, i)) * std::abs(k(r2, i)));
    return {worst <= tol, worst};
}

// At most one nonzero entry per column and per row.
inline ArmTestResult sio_arm_test(const ComplexMatrix& k, double tol = kCheckTol) {
    ArmTestResult io = io_arm_test(k, tol);
    double worst = io.max_violation;
    for (std::size_t r = 0; r < k.rows(); ++r)
        for (std::size_t c1 = 0; c1 + 1 < k.cols(); ++c1)
            for (std::size_t c2 = c1 + 1; c2 < k.cols(); ++c2)
                worst = std::max(worst, std::abs(k(r, c1)) * std::abs(k(r, c2)));
    return {worst <= tol, worst};
}

inline ArmTestResult io_arm_test(const KrausChannel& ch, double tol = kCheckTol) {
    ArmTestResult res{true, 0.0};
    for (const auto& k : ch.arms()) {
        const ArmTestResult r = io_arm_test(k, tol);
        res.pass = res.pass && r.pass;
        res.max_violation = std::max(res.max_violation, r.max_violation);
    }
    return res;
}

inline ArmTestResult sio_arm_test(const KrausChannel& ch, double tol = kCheckTol) {
    ArmTestResult res{true, 0.0};
    for (const auto& k : ch.arms()) {
        const ArmTestResult r = sio_arm_test(k, tol);
        res.pass = res.pass && r.pass;
        res.max_violation = std::max(res.max_violation, r.max_violation);
    }
    return res;
}

struct GioTestResult {
    bool arms_diagonal;
    double max_offdiagonal;
    bool fixes_incoherent;             // E(|i><i|) = |i><i| for every i
    double max_fix_residual;
    std::optional<DensityMatrix> fix_witness;
};

inline GioTestResult gio_test(const KrausChannel& ch, double tol = kCheckTol) {
    GioTestResult res{};
    for (const auto& k : ch.arms())
        for (std::size_t i = 0; i < k.rows(); ++i)
            for (std::size_t j = 0; j < k.cols(); ++j)
                if (i != j) res.max_offdiagonal = std::max(res.max_offdiagonal,
                                                           std::abs(k(i, j)));
    res.arms_diagonal = res.max_offdiagonal <= tol;
    res.fixes_incoherent = true;
    for (std::size_t i = 0; i < ch.dim_in(); ++i) {
        const DensityMatrix basis_state =
            make_density(matrix_unit(ch.dim_in(), i, i));
        const double r =
            trace_norm_distance(ch.apply(basis_state).matrix(), basis_state.matrix());
        if (r > res.max_fix_residual) {
            res.max_fix_residual = r;
            if (r > tol) res.fix_witness = basis_state;
        }
    }
    res.fixes_incoherent = res.max_fix_residual <= tol;
    return res;
}

// ---- aggregate reports ---------------------------------------------------

struct ClassificationReport {
    std::string channel;
    std::string destroyer;
    std::map<std::string, ConditionResult> conditions;
    std::map<std::string, SelectiveResult> selective;
    RunConfig cfg;
    std::optional<BipartiteDims> dims;

    // commuting pass must imply both one-sided passes
    bool consistent() const {
        auto get = [&](const char* k) -> const ConditionResult* {
            auto it = conditions.find(k);
            return it == conditions.end() ? nullptr : &it->second;
        };
        const ConditionResult* com = get("commuting");
        const ConditionResult* gen = get("nongenerating");
        const ConditionResult* act = get("nonactivating");
        if (!com || !gen || !act) return true;
        if (com->verdict != Verdict::pass) return true;
        return gen->verdict == Verdict::pass && act->verdict == Verdict::pass;
    }
};

inline ClassificationReport classify(const KrausChannel& ch, const Destroyer& dest,
                                     const RunConfig& cfg = {},
                                     std::optional<BipartiteDims> dims = std::nullopt) {
    ClassificationReport rep;
    rep.channel = ch.label();
    rep.destroyer = dest.label();
    rep.cfg = cfg;
    rep.dims = dims;
    for (Condition c : {Condition::nongenerating, Condition::nonactivating,
                        Condition::commuting}) {
        rep.conditions.emplace(condition_name(c), check_condition(ch, dest, c, cfg, dims));
        rep.selective.emplace(std::string("selective-") + condition_name(c),
                              check_selective(ch, dest, c, cfg, dims));
    }
    return rep;
}

// ---- closure / construction / robustness harnesses -----------------------

struct ClosureEntry {
    std::string label;
    Verdict verdict;
    double residual;
};

struct ClosureReport {
    std::vector<ClosureEntry> compositions;
    std::vector<ClosureEntry> mixtures;
    bool compositions_pass = true;
    bool mixtures_asserted = false;  // only for linear destroyers
    bool mixtures_pass = true;
    std::vector<ClosureEntry> mixture_findings;  // nonlinear: counterexamples found
    std::string note;
};

// Composition closure for channels that individually satisfy the
// commuting condition; convex-combination closure is asserted only for
// linear destroyers and searched for counterexamples otherwise.
inline ClosureReport closure_suite(const Destroyer& dest,
                                   const std::vector<KrausChannel>& pool,
                                   const RunConfig& cfg = {},
                                   std::optional<BipartiteDims> dims = std::nullopt) {
    ClosureReport rep;
    for (std::size_t x = 0; x < pool.size(); ++x)
        for (std::size_t y = 0; y < pool.size(); ++y) {
            const KrausChannel comp = compose(pool[x], pool[y]);
            const ConditionResult r =
                check_condition(comp, dest, Condition::commuting, cfg, dims);
            rep.compositions.push_back({comp.label(), r.verdict, r.max_residual});
            if (r.verdict != Verdict::pass) rep.compositions_pass = false;
        }
    if (dest.linear()) {
        rep.mixtures_asserted = true;
        for (std::size_t x = 0; x < pool.size(); ++x)
            for (std::size_t y = x + 1; y < pool.size(); ++y) {
                const KrausChannel mix =
                    convex_combine({pool[x], pool[y]}, {0.5, 0.5});
                const ConditionResult r =
                    check_condition(mix, dest, Condition::commuting, cfg, dims);
                rep.mixtures.push_back({mix.label(), r.verdict, r.max_residual});
                if (r.verdict != Verdict::pass) rep.mixtures_pass = false;
            }
        rep.note = "composition and convex closure asserted (linear destroyer)";
    } else {
        for (std::size_t x = 0; x < pool.size(); ++x)
            for (std::size_t y = x + 1; y < pool.size(); ++y)
                for (double p : {0.25, 0.5, 0.75}) {
                    const KrausChannel mix =
                        convex_combine({pool[x], pool[y]}, {p, 1.0 - p});
                    const ConditionResult r =
                        check_condition(mix, dest, Condition::commuting, cfg, dims);
                    rep.mixtures.push_back({mix.label(), r.verdict, r.max_residual});
                    if (r.verdict != Verdict::pass)
                        rep.mixture_findings.push_back(
                            {mix.label(), r.verdict, r.max_residual});
                }
        rep.note = rep.mixture_findings.empty()
                       ? "no convex counterexample found (not a proof of closure)"
                       : "convex closure fails for a nonlinear destroyer; "
                         "counterexamples recorded";
    }
    return rep;
}

struct ConstructionReport {
    ConditionResult nongenerating;   // destroy-after: Lambda . Omega
    ConditionResult nonactivating;   // destroy-before: Omega . Lambda
    ConditionResult commuting;       // sandwich: Lambda . Omega . Lambda
    SelectiveResult sel_nongenerating;
    SelectiveResult sel_nonactivating;
    SelectiveResult sel_commuting;
    bool all_pass = false;
};

// Sandwiching any channel with a linear destroyer's Kraus realization
// lands in the respective condition classes by construction.
inline ConstructionReport construction_suite(const Destroyer& dest,
                                             const KrausChannel& omega,
                                             const RunConfig& cfg = {}) {
    if (!dest.has_channel())
        throw Error(Errc::not_linear_destroyer,
                    "construction_suite: destroyer has no Kraus realization");
    const KrausChannel lam = dest.channel();
    const KrausChannel after = compose(lam, omega);
    const KrausChannel before = compose(omega, lam);
    const KrausChannel sandwich = compose(lam, compose(omega, lam));
    ConstructionReport rep{
        check_condition(after, dest, Condition::nongenerating, cfg),
        check_condition(before, dest, Condition::nonactivating, cfg),
        check_condition(sandwich, dest, Condition::commuting, cfg),
        check_selective(after, dest, Condition::nongenerating, cfg),
        check_selective(before, dest, Condition::nonactivating, cfg),
        check_selective(sandwich, dest, Condition::commuting, cfg)};
    rep.all_pass = rep.nongenerating.verdict == Verdict::pass &&
                   rep.nonactivating.verdict == Verdict::pass &&
                   rep.commuting.verdict == Verdict::pass &&
                   rep.sel_nongenerating.verdict == Verdict::witnessed &&
                   rep.sel_nonactivating.verdict == Verdict::witnessed &&
                   rep.sel_commuting.verdict == Verdict::witnessed;
    return rep;
}

struct RobustnessCase {
    double tau;
    Verdict vs_dephasing;
    double dephasing_residual;
    Verdict vs_collapse;
    double collapse_residual;
};

struct RobustnessReport {
    std::vector<RobustnessCase> cases;
    bool expected_pattern = false;  // collapse fails only at intermediate tau
};

// Partial depolarizing rho -> tau rho + (1-tau) I/d never activates
// coherence relative to complete dephasing, but does relative to the
// collapse destroyer: the collapse target itself is moved off its image.
inline RobustnessReport robustness_demo(const RunConfig& cfg = {}) {
    const std::size_t d = 2;
    const Destroyer pi = dephasing_destroyer(d);
    const Destroyer collapse =
        collapse_destroyer(make_density(matrix_unit(d, 0, 0)));
    RobustnessReport rep;
    for (double tau : {1.0, 0.5, 0.0}) {
        const KrausChannel ch = partial_depolarize(d, tau);
        const ConditionResult a =
            check_condition(ch, pi, Condition::nonactivating, cfg);
        const ConditionResult b =
            check_condition(ch, collapse, Condition::nonactivating, cfg);
        rep.cases.push_back(
            {tau, a.verdict, a.max_residual, b.verdict, b.max_residual});
    }
    rep.expected_pattern = rep.cases.size() == 3 &&
                           rep.cases[0].vs_dephasing == Verdict::pass &&
                           rep.cases[0].vs_collapse == Verdict::pass &&
                           rep.cases[1].vs_dephasing == Verdict::pass &&
                           rep.cases[1].vs_collapse == Verdict::fail &&
                           rep.cases[2].vs_dephasing == Verdict::pass &&
                           rep.cases[2].vs_collapse == Verdict::pass;
    return rep;
}

}  // namespace rdmap
