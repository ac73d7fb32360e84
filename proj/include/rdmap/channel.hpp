#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rdmap/complex_matrix.hpp"
#include "rdmap/defaults.hpp"
#include "rdmap/eig.hpp"
#include "rdmap/state.hpp"

// Kraus-form operations and a catalog of channels used throughout the
// condition checks.  A StateMap wraps maps that are not linear (and so
// have no Kraus form), e.g. measurement in the input's own eigenbasis.

namespace rdmap {

struct ArmOutcome {
    ComplexMatrix state;   // K rho K^dag, unnormalized
    double probability;
};

class KrausChannel {
public:
    KrausChannel(std::vector<ComplexMatrix> arms, std::string label)
        : arms_(std::move(arms)), label_(std::move(label)) {
        if (arms_.empty())
            throw Error(Errc::bad_argument, "KrausChannel: no arms");
        dout_ = arms_.front().rows();
        din_ = arms_.front().cols();
        if (din_ == 0 || dout_ == 0)
            throw Error(Errc::bad_argument, "KrausChannel: empty arm");
        ComplexMatrix s(din_, din_);
        for (const auto& k : arms_) {
            if (k.rows() != dout_ || k.cols() != din_)
                throw Error(Errc::dimension_mismatch, "KrausChannel: arm shapes differ");
            if (!k.all_finite())
                throw Error(Errc::bad_argument, "KrausChannel: non-finite arm");
            s += k.adjoint() * k;
        }
        kraus_sum_residual_ = (s - ComplexMatrix::identity(din_)).max_abs();
        trace_preserving_ = kraus_sum_residual_ <= kStructTol;
        if (!trace_preserving_) {
            const std::vector<double> ev = hermitian_eigenvalues(s);
            if (ev.front() > 1.0 + kStructTol)
                throw Error(Errc::trace_increasing,
                            "KrausChannel: sum K^dag K has eigenvalue " +
                                std::to_string(ev.front()));
        }
    }

    const std::vector<ComplexMatrix>& arms() const { return arms_; }
    const std::string& label() const { return label_; }
    std::size_t dim_in() const { return din_; }
    std::size_t dim_out() const { return dout_; }
    bool trace_preserving() const { return trace_preserving_; }
    double kraus_sum_residual() const { return kraus_sum_residual_; }

    // Linear extension sum_mu K X K^dag on arbitrary operators.
    ComplexMatrix apply_raw(const ComplexMatrix& x) const {
        if (x.rows() != din_ || x.cols() != din_)
            throw Error(Errc::dimension_mismatch, "apply_raw: operator vs dim_in");
        ComplexMatrix out(dout_, dout_);
        for (const auto& k : arms_) out += k * x * k.adjoint();
        return out;
    }

    DensityMatrix apply(const DensityMatrix& rho) const {
        if (!trace_preserving_)
            throw Error(Errc::not_trace_preserving,
                        "apply: '" + label_ + "' is not trace preserving");
        std::optional<BipartiteDims> dims;
        if (din_ == dout_) dims = rho.dims();
        return make_density(apply_raw(rho.matrix()), dims);
    }

    std::vector<ArmOutcome> arm_outcomes(const DensityMatrix& rho) const {
        std::vector<ArmOutcome> out;
        out.reserve(arms_.size());
        for (const auto& k : arms_) {
            ComplexMatrix s = k * rho.matrix() * k.adjoint();
            const double p = s.trace().real();
            out.push_back({std::move(s), p});
        }
        return out;
    }

    KrausChannel relabeled(std::string label) const {
        KrausChannel c = *this;
        c.label_ = std::move(label);
        return c;
    }

private:
    std::vector<ComplexMatrix> arms_;
    std::string label_;
    std::size_t din_, dout_;
    bool trace_preserving_;
    double kraus_sum_residual_;
};

struct CptpReport {
    double kraus_sum_residual;
    double choi_min_eigenvalue;
    bool trace_preserving;
    bool completely_positive;
    bool pass;
};

inline CptpReport is_cptp(const KrausChannel& ch, double tol = kStructTol) {
    const std::size_t din = ch.dim_in();
    ComplexMatrix choi(din * ch.dim_out(), din * ch.dim_out());
    for (std::size_t i = 0; i < din; ++i)
        for (std::size_t j = 0; j < din; ++j)
            choi += kron(matrix_unit(din, i, j), ch.apply_raw(matrix_unit(din, i, j)));
    choi = (choi + choi.adjoint()) * cplx{0.5, 0.0};
    const double cmin = hermitian_eigenvalues(choi).back();
    CptpReport r;
    r.kraus_sum_residual = ch.kraus_sum_residual();
    r.choi_min_eigenvalue = cmin;
    r.trace_preserving = r.kraus_sum_residual <= tol;
    r.completely_positive = cmin >= -tol;
    r.pass = r.trace_preserving && r.completely_positive;
    return r;
}

// ---- catalog -------------------------------------------------------------

inline KrausChannel dephasing_channel(std::size_t d) {
    std::vector<ComplexMatrix> arms;
    for (std::size_t i = 0; i < d; ++i) arms.push_back(matrix_unit(d, i, i));
    return KrausChannel(std::move(arms), "dephasing");
}

// Measure the computational basis, prepare |targets[i]> on outcome i.
inline KrausChannel measure_prepare_channel(const std::vector<ComplexMatrix>& targets,
                                            std::string label = "measure-prepare") {
    if (targets.empty())
        throw Error(Errc::bad_argument, "measure_prepare_channel: no targets");
    const std::size_t d = targets.size();
    std::vector<ComplexMatrix> arms;
    for (std::size_t i = 0; i < d; ++i) {
        const ComplexMatrix& f = targets[i];
        if (f.cols() != 1)
            throw Error(Errc::bad_ket, "measure_prepare_channel: target is not a ket");
        double n2 = 0.0;
        for (std::size_t r = 0; r < f.rows(); ++r) n2 += std::norm(f(r, 0));
        if (std::abs(n2 - 1.0) > kStructTol)
            throw Error(Errc::bad_ket, "measure_prepare_channel: target not normalized");
        arms.push_back(f * basis_ket(d, i).adjoint());
    }
    return KrausChannel(std::move(arms), std::move(label));
}

// Projective measurement onto the columns of an orthonormal basis.
inline KrausChannel projective_measurement_channel(const ComplexMatrix& basis) {
    basis.require_square("projective_measurement_channel");
    if (unitarity_residual(basis) > kStructTol)
        throw Error(Errc::not_unitary, "projective_measurement_channel: basis");
    std::vector<ComplexMatrix> arms;
    for (std::size_t i = 0; i < basis.cols(); ++i) {
        ComplexMatrix col(basis.rows(), 1);
        for (std::size_t r = 0; r < basis.rows(); ++r) col(r, 0) = basis(r, i);
        arms.push_back(projector(col));
    }
    return KrausChannel(std::move(arms), "projective-measurement");
}

// Qubit channel that reads the +/- basis into the computational one:
// arms |0><+| and |1><-|.  Each arm is column-incoherent but the pair
// does not commute with dephasing.
inline KrausChannel xbasis_readout() {
    const double s = std::sqrt(0.5);
    const ComplexMatrix plus = ket({s, s});
    const ComplexMatrix minus = ket({s, -s});
    std::vector<ComplexMatrix> arms{basis_ket(2, 0) * plus.adjoint(),
                                    basis_ket(2, 1) * minus.adjoint()};
    return KrausChannel(std::move(arms), "xbasis-readout");
}

// Qutrit channel commuting with complete dephasing whose given arms are
// not column-incoherent.  Parameters obey
//   |x1|^2 + |c|^2 + |a|^2 = 1,
//   2|a|^2 + 2|b|^2 + |c|^2 = 1,
//   |x2|^2 + |x3|^2 = 1.
inline KrausChannel qutrit_covariant_channel(cplx a = {0.5, 0.0}, cplx b = {0.5, 0.0},
                                             cplx c = {0.0, 0.0},
                                             cplx x1 = {std::numbers::sqrt3 / 2.0, 0.0},
                                             cplx x2 = {std::numbers::sqrt2 / 2.0, 0.0},
                                             cplx x3 = {std::numbers::sqrt2 / 2.0, 0.0}) {
    const double c1 = std::norm(x1) + std::norm(c) + std::norm(a);
    const double c2 = 2.0 * std::norm(a) + 2.0 * std::norm(b) + std::norm(c);
    const double c3 = std::norm(x2) + std::norm(x3);
    for (double v : {c1, c2, c3})
        if (std::abs(v - 1.0) > kStructTol)
            throw Error(Errc::constraint_violated,
                        "qutrit_covariant_channel: normalization " + std::to_string(v));
    ComplexMatrix k1{{x1, 0.0, 0.0}, {0.0, a, 0.0}, {0.0, -b, 0.0}};
    ComplexMatrix k2{{0.0, 0.0, x2},
                     {0.0, std::conj(b), 0.0},
                     {std::conj(c), std::conj(a), 0.0}};
    ComplexMatrix k3{{0.0, 0.0, 0.0}, {0.0, 0.0, x3}, {a, -c, 0.0}};
    return KrausChannel({k1, k2, k3}, "qutrit-covariant");
}

// Cyclic shift on d levels: X|j> = |j+1 mod d>.
inline ComplexMatrix shift_operator(std::size_t d) {
    ComplexMatrix x(d, d);
    for (std::size_t j = 0; j < d; ++j) x((j + 1) % d, j) = 1.0;
    return x;
}

// Clock operator: Z|j> = exp(i 2 pi j / d)|j>.
inline ComplexMatrix clock_operator(std::size_t d) {
    ComplexMatrix z(d, d);
    for (std::size_t j = 0; j < d; ++j) {
        const double th = 2.0 * std::numbers::pi * static_cast<double>(j) / d;
        z(j, j) = cplx{std::cos(th), std::sin(th)};
    }
    return z;
}

// The d^2 shift-and-clock unitaries X^i Z^j.
inline std::vector<ComplexMatrix> shift_clock_operators(std::size_t d) {
    if (d < 2) throw Error(Errc::bad_argument, "shift_clock_operators: d >= 2");
    const ComplexMatrix x = shift_operator(d), z = clock_operator(d);
    std::vector<ComplexMatrix> ops;
    ops.reserve(d * d);
    ComplexMatrix xi = ComplexMatrix::identity(d);
    for (std::size_t i = 0; i < d; ++i) {
        ComplexMatrix xizj = xi;
        for (std::size_t j = 0; j < d; ++j) {
            ops.push_back(xizj);
            xizj = xizj * z;
        }
        xi = x * xi;
    }
    return ops;
}

// Kraus form of rho -> (1-gamma) U rho U^dag + gamma I/d via the
// shift-and-clock twirl.  gamma may exceed 1 up to d^2/(d^2-1).
inline KrausChannel shift_clock_twirl_arms(const ComplexMatrix& u, double gamma,
                                           std::string label = "unitary-isotropic") {
    u.require_square("shift_clock_twirl_arms");
    const std::size_t d = u.rows();
    if (d < 2) throw Error(Errc::bad_argument, "shift_clock_twirl_arms: d >= 2");
    const double dd = static_cast<double>(d) * static_cast<double>(d);
    const double gmax = dd / (dd - 1.0);
    if (gamma < -1e-12 || gamma > gmax + 1e-12)
        throw Error(Errc::gamma_out_of_range,
                    "gamma " + std::to_string(gamma) + " outside [0, " +
                        std::to_string(gmax) + "]");
    const double head2 = 1.0 - gamma * (dd - 1.0) / dd;
    if (head2 < -1e-12)
        throw Error(Errc::gamma_out_of_range, "gamma leaves negative head weight");
    std::vector<ComplexMatrix> arms;
    arms.push_back(cplx{std::sqrt(std::max(0.0, head2)), 0.0} * u);
    const double w = std::sqrt(gamma) / static_cast<double>(d);
    const std::vector<ComplexMatrix> ops = shift_clock_operators(d);
    for (std::size_t idx = 1; idx < ops.size(); ++idx)
        arms.push_back(cplx{w, 0.0} * (u * ops[idx]));
    return KrausChannel(std::move(arms), std::move(label));
}

inline KrausChannel unitary_isotropic(const ComplexMatrix& u, double gamma) {
    if (unitarity_residual(u) > kStructTol)
        throw Error(Errc::not_unitary, "unitary_isotropic: u");
    return shift_clock_twirl_arms(u, gamma);
}

// rho -> tau rho + (1-tau) I/d.
inline KrausChannel partial_depolarize(std::size_t d, double tau) {
    return shift_clock_twirl_arms(ComplexMatrix::identity(d), 1.0 - tau,
                                  "partial-depolarize");
}

// Qutrit mix of the two nontrivial cyclic shifts.  Fixes the uniform
// superposition; maps |0><0| to (|1><1| + |2><2|)/2.
inline KrausChannel qutrit_shift_mixture() {
    const ComplexMatrix x = shift_operator(3);
    const cplx w{std::sqrt(0.5), 0.0};
    return KrausChannel({w * x, w * (x * x)}, "qutrit-shift-mix");
}

// Arms diagonal in the computational basis; fixes every incoherent state.
inline KrausChannel diagonal_arm_channel(const std::vector<std::vector<cplx>>& arm_diags) {
    if (arm_diags.empty())
        throw Error(Errc::bad_argument, "diagonal_arm_channel: no arms");
    std::vector<ComplexMatrix> arms;
    for (const auto& v : arm_diags) arms.push_back(ComplexMatrix::diag(v));
    return KrausChannel(std::move(arms), "diagonal-arms");
}

// Discard the input and prepare |target>: arms |target><i|.
inline KrausChannel erase_to_basis_state(std::size_t d, std::size_t target = 0) {
    std::vector<ComplexMatrix> arms;
    for (std::size_t i = 0; i < d; ++i)
        arms.push_back(basis_ket(d, target) * basis_ket(d, i).adjoint());
    return KrausChannel(std::move(arms), "erase");
}

// ---- combinators ---------------------------------------------------------

inline KrausChannel compose(const KrausChannel& outer, const KrausChannel& inner) {
    if (inner.dim_out() != outer.dim_in())
        throw Error(Errc::dimension_mismatch, "compose: " + outer.label() + " after " +
                                                  inner.label());
    std::vector<ComplexMatrix> arms;
    arms.reserve(outer.arms().size() * inner.arms().size());
    for (const auto& ko : outer.arms())
        for (const auto& ki : inner.arms()) arms.push_back(ko * ki);
    return KrausChannel(std::move(arms), "(" + outer.label() + " after " + inner.label() + ")");
}

inline KrausChannel convex_combine(const std::vector<KrausChannel>& channels,
                                   const std::vector<double>& weights) {
    if (channels.empty() || channels.size() != weights.size())
        throw Error(Errc::bad_argument, "convex_combine: sizes");
    double sum = 0.0;
    for (double w : weights) {
        if (w < -1e-12) throw Error(Errc::bad_weights, "convex_combine: negative weight");
        sum += w;
    }
    if (std::abs(sum - 1.0) > kStructTol)
        throw Error(Errc::bad_weights, "convex_combine: weights sum to " + std::to_string(sum));
    std::vector<ComplexMatrix> arms;
    std::string label = "mix(";
    for (std::size_t m = 0; m < channels.size(); ++m) {
        if (channels[m].dim_in() != channels.front().dim_in() ||
            channels[m].dim_out() != channels.front().dim_out())
            throw Error(Errc::dimension_mismatch, "convex_combine: channel dims differ");
        const cplx r{std::sqrt(std::max(0.0, weights[m])), 0.0};
        for (const auto& k : channels[m].arms()) arms.push_back(r * k);
        label += (m ? ", " : "") + channels[m].label();
    }
    label += ")";
    return KrausChannel(std::move(arms), std::move(label));
}

// Act with ch on one factor of an (a x b) bipartite system.
inline KrausChannel embed_local(const KrausChannel& ch, Subsystem where,
                                std::size_t other_dim) {
    if (ch.dim_in() != ch.dim_out())
        throw Error(Errc::dimension_mismatch, "embed_local: square channels only");
    const ComplexMatrix id = ComplexMatrix::identity(other_dim);
    std::vector<ComplexMatrix> arms;
    for (const auto& k : ch.arms())
        arms.push_back(where == Subsystem::A ? kron(k, id) : kron(id, k));
    const char* side = (where == Subsystem::A) ? "A" : "B";
    return KrausChannel(std::move(arms), "local-" + std::string(side) + "(" + ch.label() + ")");
}

// ---- possibly-nonlinear maps --------------------------------------------

class StateMap {
public:
    StateMap(std::string label, std::function<DensityMatrix(const DensityMatrix&)> fn)
        : label_(std::move(label)), fn_(std::move(fn)) {}

    explicit StateMap(const KrausChannel& ch) : label_(ch.label()), channel_(ch) {
        fn_ = [c = *channel_](const DensityMatrix& rho) { return c.apply(rho); };
    }

    DensityMatrix operator()(const DensityMatrix& rho) const { return fn_(rho); }
    const std::string& label() const { return label_; }
    bool has_channel() const { return channel_.has_value(); }
    const KrausChannel& channel() const {
        if (!channel_) throw Error(Errc::bad_argument, "StateMap '" + label_ + "' has no Kraus form");
        return *channel_;
    }

private:
    std::string label_;
    std::function<DensityMatrix(const DensityMatrix&)> fn_;
    std::optional<KrausChannel> channel_;
};

struct EigenbasisMpOutcome {
    DensityMatrix state;
    bool degenerate_marginal;
};

// Measure subsystem A in the eigenbasis of its own marginal and prepare
// |targets[i]> on outcome i.  Depends on the input through the measured
// basis, so it has no Kraus form.
inline EigenbasisMpOutcome eigenbasis_measure_prepare_detail(
    const DensityMatrix& rho, const std::vector<ComplexMatrix>& targets) {
    const BipartiteDims d = require_dims(rho, "eigenbasis_measure_prepare");
    if (targets.size() != d.a)
        throw Error(Errc::dimension_mismatch, "eigenbasis_measure_prepare: targets vs dim A");
    const MarginalBasis mb = marginal_eigenbasis(rho);
    ComplexMatrix out(rho.dim(), rho.dim());
    const ComplexMatrix id_b = ComplexMatrix::identity(d.b);
    for (std::size_t i = 0; i < d.a; ++i) {
        ComplexMatrix ui(d.a, 1);
        for (std::size_t r = 0; r < d.a; ++r) ui(r, 0) = mb.basis(r, i);
        const ComplexMatrix arm = kron(targets[i] * ui.adjoint(), id_b);
        out += arm * rho.matrix() * arm.adjoint();
    }
    return {make_density(out, rho.dims()), mb.degenerate};
}

inline StateMap eigenbasis_measure_prepare(std::vector<ComplexMatrix> targets) {
    for (const auto& t : targets) {
        if (t.cols() != 1) throw Error(Errc::bad_ket, "eigenbasis_measure_prepare: target");
        double n2 = 0.0;
        for (std::size_t r = 0; r < t.rows(); ++r) n2 += std::norm(t(r, 0));
        if (std::abs(n2 - 1.0) > kStructTol)
            throw Error(Errc::bad_ket, "eigenbasis_measure_prepare: target not normalized");
    }
    return StateMap("eigenbasis-mp", [targets = std::move(targets)](const DensityMatrix& rho) {
        return eigenbasis_measure_prepare_detail(rho, targets).state;
    });
}

}  // namespace rdmap
