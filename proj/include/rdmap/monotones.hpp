#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "rdmap/channel.hpp"
#include "rdmap/conditions.hpp"
#include "rdmap/defaults.hpp"
#include "rdmap/destroyer.hpp"
#include "rdmap/eig.hpp"
#include "rdmap/state.hpp"

// Distance measures, the optimization-free monotone D(rho, lambda(rho)),
// diagonal discord, and the monotonicity / degeneracy-scan harnesses.
// Entropic quantities are in bits (log base 2).

namespace rdmap {

inline double von_neumann_entropy(const DensityMatrix& rho) {
    double s = 0.0;
    for (double w : hermitian_eigenvalues(rho.matrix()))
        if (w > kSupportCutoff) s -= w * std::log2(w);
    return s;
}

// tr rho (log2 rho - log2 sigma) on the support of sigma; +inf when rho
// leaks outside that support.
inline double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.dim() != sigma.dim())
        throw Error(Errc::dimension_mismatch, "relative_entropy: dims differ");
    const HermitianEigensystem es = eig_hermitian(sigma.matrix());
    const std::size_t n = rho.dim();
    double cross = 0.0;   // -tr rho log2 sigma restricted to the support
    double leak = 0.0;    // weight of rho outside supp(sigma)
    for (std::size_t j = 0; j < n; ++j) {
        ComplexMatrix v(n, 1);
        for (std::size_t r = 0; r < n; ++r) v(r, 0) = es.vectors(r, j);
        const double overlap = (v.adjoint() * rho.matrix() * v)(0, 0).real();
        if (es.values[j] > kSupportCutoff)
            cross -= overlap * std::log2(es.values[j]);
        else
            leak += std::max(0.0, overlap);
    }
    if (leak > 1e-9) return std::numeric_limits<double>::infinity();
    double neg_entropy = 0.0;  // tr rho log2 rho
    for (double w : hermitian_eigenvalues(rho.matrix()))
        if (w > kSupportCutoff) neg_entropy += w * std::log2(w);
    return std::max(0.0, neg_entropy + cross);
}

enum class MeasureId { relative_entropy, trace_distance };

struct DistanceMeasure {
    MeasureId id;
    std::string name;
    std::function<double(const DensityMatrix&, const DensityMatrix&)> eval;
};

inline DistanceMeasure relative_entropy_measure() {
    return {MeasureId::relative_entropy, "relative-entropy",
            [](const DensityMatrix& a, const DensityMatrix& b) {
                return relative_entropy(a, b);
            }};
}

inline DistanceMeasure trace_distance_measure() {
    return {MeasureId::trace_distance, "trace-distance",
            [](const DensityMatrix& a, const DensityMatrix& b) {
                return trace_norm_distance(a.matrix(), b.matrix());
            }};
}

inline DistanceMeasure measure_by_name(const std::string& name) {
    if (name == "relative-entropy") return relative_entropy_measure();
    if (name == "trace-distance") return trace_distance_measure();
    throw Error(Errc::bad_argument, "unknown measure '" + name + "'");
}

// The optimization-free monotone: distance from rho to its own destroyed
// image.  Zero exactly on free states.
inline double dtilde(const DensityMatrix& rho, const Destroyer& dest,
                     const DistanceMeasure& d) {
    return d.eval(rho, dest(rho));
}

// S(rho || pi_A(rho)), cross-checked against the entropy-gain form
// S(pi_A(rho)) - S(rho) (they agree because pi_A is a pinching in the
// canonical basis).
inline double diagonal_discord(const DensityMatrix& rho) {
    const DensityMatrix pinched = marginal_dephase(rho);
    const double direct = relative_entropy(rho, pinched);
    const double gain = von_neumann_entropy(pinched) - von_neumann_entropy(rho);
    if (std::isfinite(direct) && std::abs(direct - gain) > 1e-9)
        throw Error(Errc::no_convergence,
                    "diagonal_discord: pinching identity violated by " +
                        std::to_string(std::abs(direct - gain)));
    return direct;
}

struct DiagonalDiscordDetail {
    double canonical;                  // value under the canonical basis policy
    bool degenerate_marginal;
    std::optional<double> min_sampled; // min over random bases of the degenerate blocks
};

// At exact degeneracy the dephasing basis is not unique; report the
// canonical value and optionally the minimum over random basis choices
// within the degenerate blocks.
inline DiagonalDiscordDetail diagonal_discord_detail(const DensityMatrix& rho,
                                                     int basis_samples, Rng& rng) {
    DiagonalDiscordDetail out{diagonal_discord(rho), false, std::nullopt};
    const MarginalBasis mb = marginal_eigenbasis(rho);
    out.degenerate_marginal = mb.degenerate;
    if (!mb.degenerate || basis_samples <= 0) return out;

    const BipartiteDims d = *rho.dims();
    const ComplexMatrix rho_a = partial_trace(rho.matrix(), d.a, d.b, Subsystem::B);
    const HermitianEigensystem es = eig_hermitian(rho_a);
    double best = out.canonical;
    for (int s = 0; s < basis_samples; ++s) {
        // rotate each degenerate block by a random unitary
        ComplexMatrix basis = es.vectors;
        std::size_t lo = 0;
        while (lo < d.a) {
            std::size_t hi = lo + 1;
            while (hi < d.a && es.values[hi - 1] - es.values[hi] <= kDegeneracyGap) ++hi;
            const std::size_t bs = hi - lo;
            if (bs > 1) {
                const ComplexMatrix u = random_unitary(bs, rng);
                ComplexMatrix vb(d.a, bs);
                for (std::size_t i = 0; i < d.a; ++i)
                    for (std::size_t j = 0; j < bs; ++j) vb(i, j) = es.vectors(i, lo + j);
                const ComplexMatrix rotated = vb * u;
                for (std::size_t i = 0; i < d.a; ++i)
                    for (std::size_t j = 0; j < bs; ++j) basis(i, lo + j) = rotated(i, j);
            }
            lo = hi;
        }
        const DensityMatrix pinched = dephase_in_basis(rho, basis);
        const double v = von_neumann_entropy(pinched) - von_neumann_entropy(rho);
        best = std::min(best, v);
    }
    out.min_sampled = best;
    return out;
}

struct MonotonicityReport {
    std::string channel;
    std::string destroyer;
    std::string measure;
    int samples = 0;
    int violations = 0;        // count of decreases violated beyond tol
    double max_violation = 0.0;
    bool commuting_verified = false;  // precondition; else falsification probe
    bool pass = false;
};

// D(rho, lambda rho) must not increase under a channel satisfying the
// commuting condition.
inline MonotonicityReport monotonicity_suite(const KrausChannel& ch, const Destroyer& dest,
                                             const DistanceMeasure& d,
                                             const RunConfig& cfg = {},
                                             std::optional<BipartiteDims> dims = std::nullopt) {
    MonotonicityReport rep;
    rep.channel = ch.label();
    rep.destroyer = dest.label();
    rep.measure = d.name;
    rep.commuting_verified =
        check_condition(ch, dest, Condition::commuting, cfg, dims).verdict == Verdict::pass;
    Rng rng = Rng(cfg.seed).fork(0x30);
    for (int s = 0; s < cfg.samples; ++s) {
        const DensityMatrix rho =
            make_density(random_density_matrix(ch.dim_in(), ch.dim_in(), rng), dims);
        const double before = dtilde(rho, dest, d);
        const double after = dtilde(ch.apply(rho), dest, d);
        if (!std::isfinite(before) && !std::isfinite(after)) continue;
        const double v = after - before;  // positive = violation
        if (v > rep.max_violation) rep.max_violation = v;
        if (v > 1e-9) ++rep.violations;
    }
    rep.samples = cfg.samples;
    rep.pass = rep.violations == 0;
    return rep;
}

// Average arm-wise monotone with relative entropy: sum_mu p_mu
// D~(arm output) must not exceed D~(rho).
inline MonotonicityReport selective_monotonicity_suite(const KrausChannel& ch,
                                                       const Destroyer& dest,
                                                       const RunConfig& cfg = {},
                                                       std::optional<BipartiteDims> dims =
                                                           std::nullopt) {
    MonotonicityReport rep;
    rep.channel = ch.label();
    rep.destroyer = dest.label();
    rep.measure = "relative-entropy";
    rep.commuting_verified =
        check_selective(ch, dest, Condition::commuting, cfg, dims).verdict ==
        Verdict::witnessed;
    const DistanceMeasure d = relative_entropy_measure();
    Rng rng = Rng(cfg.seed).fork(0x31);
    for (int s = 0; s < cfg.samples; ++s) {
        const DensityMatrix rho =
            make_density(random_density_matrix(ch.dim_in(), ch.dim_in(), rng), dims);
        const double before = dtilde(rho, dest, d);
        double after = 0.0;
        bool finite = true;
        for (const auto& arm : ch.arm_outcomes(rho)) {
            if (arm.probability < kArmWeightFloor) continue;
            const DensityMatrix out = make_density(
                arm.state * cplx{1.0 / arm.probability, 0.0}, dims);
            const double v = dtilde(out, dest, d);
            if (!std::isfinite(v)) { finite = false; break; }
            after += arm.probability * v;
        }
        if (!finite || !std::isfinite(before)) continue;
        const double v = after - before;
        if (v > rep.max_violation) rep.max_violation = v;
        if (v > 1e-9) ++rep.violations;
    }
    rep.samples = cfg.samples;
    rep.pass = rep.violations == 0;
    return rep;
}

// ---- degeneracy scan -----------------------------------------------------

struct ScanRow {
    double epsilon;
    double value_bits;
    bool jump;  // large value change while the state barely moved
};

struct ScanConfig {
    double jump_threshold = 0.1;   // bits
    double move_threshold = 1e-3;  // trace distance between adjacent states
};

inline std::vector<ScanRow> degeneracy_scan(
    const std::function<DensityMatrix(double)>& family, const std::vector<double>& grid,
    const ScanConfig& sc = {}) {
    std::vector<ScanRow> rows;
    rows.reserve(grid.size());
    std::optional<DensityMatrix> prev;
    for (double eps : grid) {
        const DensityMatrix rho = family(eps);
        ScanRow row{eps, diagonal_discord(rho), false};
        if (prev && !rows.empty()) {
            const double dv = std::abs(row.value_bits - rows.back().value_bits);
            const double move = trace_norm_distance(rho.matrix(), prev->matrix());
            row.jump = dv > sc.jump_threshold && move <= sc.move_threshold;
        }
        rows.push_back(row);
        prev = rho;
    }
    return rows;
}

inline std::vector<double> uniform_grid(double lo, double hi, double step) {
    if (step <= 0.0) throw Error(Errc::bad_argument, "uniform_grid: step must be positive");
    std::vector<double> g;
    for (int k = 0; lo + k * step <= hi + 0.5 * step; ++k) g.push_back(lo + k * step);
    return g;
}

// Two-qubit family whose A-marginal eigenbasis swaps between Z (eps >= 0)
// and X (eps < 0) across the degeneracy at eps = 0.  The state path is
// continuous but diagonal discord drops to zero on the eps > 0 side, so
// the scan shows an O(1)-bit jump with O(eps) state movement.
inline DensityMatrix eigenbasis_swap_family(double eps, double mix_weight = 0.1,
                                            double tilt = 0.5) {
    const std::size_t d = 4;
    ComplexMatrix classical(d, d);
    classical(0, 0) = 0.5;  // |00><00|
    classical(3, 3) = 0.5;  // |11><11|
    ComplexMatrix h = ComplexMatrix::identity(2) * cplx{0.5, 0.0};
    if (eps >= 0.0) {
        h(0, 0) += 0.5 * tilt * eps;
        h(1, 1) -= 0.5 * tilt * eps;
    } else {
        h(0, 1) += 0.5 * tilt * (-eps);
        h(1, 0) += 0.5 * tilt * (-eps);
    }
    const ComplexMatrix m =
        cplx{1.0 - mix_weight, 0.0} * classical +
        cplx{mix_weight, 0.0} * kron(h, ComplexMatrix::identity(2) * cplx{0.5, 0.0});
    return make_density(m, BipartiteDims{2, 2});
}

// Control family: constant nondegenerate marginal, discord identically 0.
inline DensityMatrix nondegenerate_control_family(double eps) {
    const double p = 0.5 + 0.2 * std::tanh(eps);
    ComplexMatrix m(4, 4);
    m(0, 0) = p;        // |0><0| (x) |0><0|
    m(3, 3) = 1.0 - p;  // |1><1| (x) |1><1|
    return make_density(m, BipartiteDims{2, 2});
}

}  // namespace rdmap
