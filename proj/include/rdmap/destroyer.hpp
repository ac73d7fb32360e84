#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rdmap/channel.hpp"
#include "rdmap/complex_matrix.hpp"
#include "rdmap/defaults.hpp"
#include "rdmap/rng.hpp"
#include "rdmap/state.hpp"

// A destroyer is an idempotent map onto a distinguished "free" set of
// states: it fixes free states and sends everything else into the set.
// Linear destroyers also expose a trace-scaling extension to arbitrary
// operators and, where one exists, a Kraus realization.

namespace rdmap {

class Destroyer {
public:
    using StateFn = std::function<DensityMatrix(const DensityMatrix&)>;
    using MatrixFn = std::function<ComplexMatrix(const ComplexMatrix&)>;
    using ViolationFn = std::function<double(const DensityMatrix&)>;
    using SampleFn = std::function<DensityMatrix(Rng&)>;

    Destroyer(std::string label, bool linear, StateFn apply, ViolationFn violation)
        : label_(std::move(label)), linear_(linear), apply_(std::move(apply)),
          violation_(std::move(violation)) {}

    const std::string& label() const { return label_; }
    bool linear() const { return linear_; }

    DensityMatrix operator()(const DensityMatrix& rho) const { return apply_(rho); }

    // Residual distance of rho from the free set (0 means free).
    double free_violation(const DensityMatrix& rho) const { return violation_(rho); }
    bool is_free(const DensityMatrix& rho, double tol = kCheckTol) const {
        return free_violation(rho) <= tol;
    }

    // Linear extension to arbitrary operators.
    ComplexMatrix apply_matrix(const ComplexMatrix& x) const {
        if (!matrix_fn_)
            throw Error(Errc::not_linear_destroyer,
                        "'" + label_ + "' has no linear extension");
        return matrix_fn_(x);
    }
    bool has_matrix_form() const { return static_cast<bool>(matrix_fn_); }

    bool has_channel() const { return channel_.has_value(); }
    const KrausChannel& channel() const {
        if (!channel_)
            throw Error(Errc::not_linear_destroyer,
                        "'" + label_ + "' has no Kraus realization");
        return *channel_;
    }

    bool has_free_sampler() const { return static_cast<bool>(sample_); }
    DensityMatrix sample_free(Rng& rng) const {
        if (!sample_)
            throw Error(Errc::bad_argument, "'" + label_ + "' has no free-state sampler");
        return sample_(rng);
    }

    Destroyer& set_matrix_form(MatrixFn fn) { matrix_fn_ = std::move(fn); return *this; }
    Destroyer& set_channel(KrausChannel ch) { channel_ = std::move(ch); return *this; }
    Destroyer& set_free_sampler(SampleFn fn) { sample_ = std::move(fn); return *this; }

private:
    std::string label_;
    bool linear_;
    StateFn apply_;
    ViolationFn violation_;
    MatrixFn matrix_fn_;
    std::optional<KrausChannel> channel_;
    SampleFn sample_;
};

// Trace-scaling extension of a destroyer to unnormalized positive
// operators: t * lambda(X / t) with t = tr X; zero below the weight floor.
inline ComplexMatrix apply_scaled(const Destroyer& dest, const ComplexMatrix& x,
                                  std::optional<BipartiteDims> dims = std::nullopt) {
    const double t = x.trace().real();
    if (t < kArmWeightFloor) return ComplexMatrix(x.rows(), x.cols());
    const DensityMatrix rho = make_density(x * cplx{1.0 / t, 0.0}, dims);
    return dest(rho).matrix() * cplx{t, 0.0};
}

// Complete dephasing: free set = states diagonal in the computational
// basis.
inline Destroyer dephasing_destroyer(std::size_t d) {
    Destroyer dest(
        "dephasing", /*linear=*/true,
        [d](const DensityMatrix& rho) {
            if (rho.dim() != d)
                throw Error(Errc::dimension_mismatch, "dephasing destroyer: state dim");
            ComplexMatrix m(d, d);
            for (std::size_t i = 0; i < d; ++i) m(i, i) = rho.matrix()(i, i);
            return make_density(m, rho.dims());
        },
        [](const DensityMatrix& rho) { return coherence_violation(rho.matrix()); });
    dest.set_matrix_form([d](const ComplexMatrix& x) {
        if (!x.is_square() || x.rows() != d)
            throw Error(Errc::dimension_mismatch, "dephasing destroyer: operator dim");
        ComplexMatrix m(d, d);
        for (std::size_t i = 0; i < d; ++i) m(i, i) = x(i, i);
        return m;
    });
    dest.set_channel(dephasing_channel(d));
    dest.set_free_sampler([d](Rng& rng) {
        return make_density(ComplexMatrix::diag_real(random_diagonal_density(d, rng)));
    });
    return dest;
}

// Random CQ state with a Haar-random orthonormal basis on A.
inline DensityMatrix random_cq_state(BipartiteDims dims, Rng& rng) {
    const ComplexMatrix u = random_unitary(dims.a, rng);
    const std::vector<double> w = random_diagonal_density(dims.a, rng);
    std::vector<ComplexMatrix> kets;
    std::vector<DensityMatrix> conds;
    for (std::size_t i = 0; i < dims.a; ++i) {
        ComplexMatrix col(dims.a, 1);
        for (std::size_t r = 0; r < dims.a; ++r) col(r, 0) = u(r, i);
        kets.push_back(col);
        conds.push_back(make_density(random_density_matrix(dims.b, dims.b, rng)));
    }
    return make_cq(w, kets, conds);
}

// Dephasing of A in the eigenbasis of its own marginal: free set = CQ
// states.  Nonlinear, so no matrix form and no Kraus realization.  When
// dims are supplied the destroyer can also sample random CQ states.
inline Destroyer discord_destroyer(std::optional<BipartiteDims> dims = std::nullopt) {
    Destroyer dest(
        "discord", /*linear=*/false,
        [](const DensityMatrix& rho) { return marginal_dephase(rho); },
        [](const DensityMatrix& rho) { return is_cq(rho).violation; });
    if (dims)
        dest.set_free_sampler([d = *dims](Rng& rng) { return random_cq_state(d, rng); });
    return dest;
}

inline double group_closure_residual(const std::vector<ComplexMatrix>& unitaries) {
    const std::size_t d = unitaries.front().rows();
    auto nearest = [&](const ComplexMatrix& g) {
        double best = 1.0;
        for (const auto& m : unitaries) {
            // phase-insensitive distance: 0 iff g = phase * m
            const double overlap = std::abs((m.adjoint() * g).trace()) / static_cast<double>(d);
            best = std::min(best, 1.0 - overlap);
        }
        return best;
    };
    double worst = nearest(ComplexMatrix::identity(d));
    for (const auto& g : unitaries)
        for (const auto& h : unitaries) worst = std::max(worst, nearest(g * h));
    return worst;
}

// Group twirl: average over a finite unitary group (closed modulo global
// phases).  Free set = the commutant of the group.
inline Destroyer twirl_destroyer(const std::vector<ComplexMatrix>& unitaries) {
    if (unitaries.empty()) throw Error(Errc::bad_argument, "twirl_destroyer: no unitaries");
    const std::size_t d = unitaries.front().rows();
    for (const auto& u : unitaries) {
        u.require_square("twirl_destroyer");
        if (u.rows() != d)
            throw Error(Errc::dimension_mismatch, "twirl_destroyer: mixed dims");
        if (unitarity_residual(u) > kStructTol)
            throw Error(Errc::not_unitary, "twirl_destroyer: member not unitary");
    }
    const double closure = group_closure_residual(unitaries);
    if (closure > 1e-9)
        throw Error(Errc::not_a_group,
                    "twirl_destroyer: closure residual " + std::to_string(closure));

    auto members = std::make_shared<std::vector<ComplexMatrix>>(unitaries);
    auto twirl_raw = [members, d](const ComplexMatrix& x) {
        if (!x.is_square() || x.rows() != d)
            throw Error(Errc::dimension_mismatch, "twirl destroyer: operator dim");
        ComplexMatrix acc(d, d);
        for (const auto& u : *members) acc += u * x * u.adjoint();
        return acc * cplx{1.0 / static_cast<double>(members->size()), 0.0};
    };

    Destroyer dest(
        "twirl", /*linear=*/true,
        [twirl_raw](const DensityMatrix& rho) {
            return make_density(twirl_raw(rho.matrix()), rho.dims());
        },
        // free set = commutant of the group
        [members](const DensityMatrix& rho) {
            double worst = 0.0;
            for (const auto& u : *members)
                worst = std::max(worst,
                                 (u * rho.matrix() - rho.matrix() * u).max_abs());
            return worst;
        });
    dest.set_matrix_form(twirl_raw);
    const cplx w{1.0 / std::sqrt(static_cast<double>(members->size())), 0.0};
    std::vector<ComplexMatrix> arms;
    for (const auto& u : *members) arms.push_back(w * u);
    dest.set_channel(KrausChannel(std::move(arms), "twirl"));
    return dest;
}

// Collapse map: fixes incoherent states, sends everything else to one
// designated incoherent state.  Idempotent but not linear.
inline Destroyer collapse_destroyer(const DensityMatrix& pit, double tol = kStructTol) {
    if (!is_incoherent(pit, kStructTol))
        throw Error(Errc::not_incoherent, "collapse_destroyer: target must be incoherent");
    const std::size_t d = pit.dim();
    Destroyer dest(
        "collapse", /*linear=*/false,
        [pit, tol, d](const DensityMatrix& rho) {
            if (rho.dim() != d)
                throw Error(Errc::dimension_mismatch, "collapse destroyer: state dim");
            return is_incoherent(rho, tol) ? rho : pit;
        },
        [](const DensityMatrix& rho) { return coherence_violation(rho.matrix()); });
    dest.set_free_sampler([d](Rng& rng) {
        return make_density(ComplexMatrix::diag_real(random_diagonal_density(d, rng)));
    });
    return dest;
}

struct NonlinearityReport {
    double gap;        // ||lambda(mix) - mix of lambda images||, trace norm
    double p;
    bool mixture_free;
};

// Certifies nonlinearity: both inputs are free (hence fixed), so a linear
// destroyer must also fix their mixture.  A positive gap shows it does not.
inline NonlinearityReport nonlinearity_witness(const Destroyer& dest,
                                               const DensityMatrix& rho1,
                                               const DensityMatrix& rho2, double p) {
    if (p < 0.0 || p > 1.0)
        throw Error(Errc::bad_argument, "nonlinearity_witness: p outside [0, 1]");
    if (!dest.is_free(rho1) || !dest.is_free(rho2))
        throw Error(Errc::input_not_free, "nonlinearity_witness: inputs must be free");
    const ComplexMatrix mix =
        cplx{p, 0.0} * rho1.matrix() + cplx{1.0 - p, 0.0} * rho2.matrix();
    const DensityMatrix mixture = make_density(mix, rho1.dims());
    const ComplexMatrix image_mix =
        cplx{p, 0.0} * dest(rho1).matrix() + cplx{1.0 - p, 0.0} * dest(rho2).matrix();
    NonlinearityReport r;
    r.p = p;
    r.gap = trace_norm_distance(dest(mixture).matrix(), image_mix);
    r.mixture_free = dest.is_free(mixture);
    return r;
}

}  // namespace rdmap
