#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "rdmap/complex_matrix.hpp"
#include "rdmap/defaults.hpp"
#include "rdmap/eig.hpp"

// Density matrices with optional bipartite structure, plus the basis
// machinery for classical-quantum (CQ) states: correlation operators,
// CQ membership, and the canonical marginal eigenbasis.

namespace rdmap {

struct BipartiteDims {
    std::size_t a = 0;
    std::size_t b = 0;
    bool operator==(const BipartiteDims&) const = default;
};

class DensityMatrix {
public:
    DensityMatrix() = default;

    const ComplexMatrix& matrix() const { return mat_; }
    std::size_t dim() const { return mat_.rows(); }
    const std::optional<BipartiteDims>& dims() const { return dims_; }

    friend DensityMatrix make_density(const ComplexMatrix&, std::optional<BipartiteDims>);

private:
    ComplexMatrix mat_;
    std::optional<BipartiteDims> dims_;
};

// The only constructor: validates hermiticity, positivity, unit trace and
// the dims product.  Everything downstream may assume a valid state.
inline DensityMatrix make_density(const ComplexMatrix& m,
                                  std::optional<BipartiteDims> dims = std::nullopt) {
    m.require_square("make_density");
    if (!m.all_finite())
        throw Error(Errc::bad_argument, "make_density: non-finite entry");
    if (m.hermiticity_residual() > kStructTol)
        throw Error(Errc::not_hermitian,
                    "make_density: residual " + std::to_string(m.hermiticity_residual()));
    const double tr = m.trace().real();
    if (std::abs(tr - 1.0) > kStructTol)
        throw Error(Errc::trace_not_one, "make_density: trace " + std::to_string(tr));
    const std::vector<double> evs = hermitian_eigenvalues(m);
    if (evs.back() < -kStructTol)
        throw Error(Errc::not_psd,
                    "make_density: min eigenvalue " + std::to_string(evs.back()));
    if (dims && dims->a * dims->b != m.rows())
        throw Error(Errc::dimension_mismatch, "make_density: dims do not factor the matrix");
    DensityMatrix rho;
    rho.mat_ = (m + m.adjoint()) * cplx{0.5, 0.0};
    rho.dims_ = dims;
    return rho;
}

inline DensityMatrix with_dims(const DensityMatrix& rho, BipartiteDims dims) {
    return make_density(rho.matrix(), dims);
}

inline DensityMatrix pure_state(const ComplexMatrix& k,
                                std::optional<BipartiteDims> dims = std::nullopt) {
    if (k.cols() != 1) throw Error(Errc::bad_ket, "pure_state: expected a column vector");
    std::vector<cplx> amps(k.rows());
    for (std::size_t i = 0; i < k.rows(); ++i) amps[i] = k(i, 0);
    return make_density(projector(normalized_ket(amps)), dims);
}

inline BipartiteDims require_dims(const DensityMatrix& rho, const char* who) {
    if (!rho.dims())
        throw Error(Errc::dimension_mismatch,
                    std::string(who) + ": state carries no bipartite split");
    return *rho.dims();
}

// Marginal on the kept subsystem.
inline DensityMatrix reduced(const DensityMatrix& rho, Subsystem keep) {
    const BipartiteDims d = require_dims(rho, "reduced");
    const Subsystem traced = (keep == Subsystem::A) ? Subsystem::B : Subsystem::A;
    return make_density(partial_trace(rho.matrix(), d.a, d.b, traced));
}

inline double coherence_violation(const ComplexMatrix& m) {
    double v = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (i != j) v = std::max(v, std::abs(m(i, j)));
    return v;
}

inline bool is_incoherent(const DensityMatrix& rho, double tol = kCheckTol) {
    return coherence_violation(rho.matrix()) <= tol;
}

// sum_i p_i |u_i><u_i| (x) sigma_i with orthonormal {|u_i>}.
inline DensityMatrix make_cq(const std::vector<double>& weights,
                             const std::vector<ComplexMatrix>& kets,
                             const std::vector<DensityMatrix>& conditionals) {
    if (weights.empty() || weights.size() != kets.size() ||
        weights.size() != conditionals.size())
        throw Error(Errc::dimension_mismatch, "make_cq: component counts differ");
    double sum = 0.0;
    for (double w : weights) {
        if (w < -1e-12) throw Error(Errc::bad_weights, "make_cq: negative weight");
        sum += w;
    }
    if (std::abs(sum - 1.0) > kStructTol)
        throw Error(Errc::bad_weights, "make_cq: weights sum to " + std::to_string(sum));

    const std::size_t da = kets.front().rows();
    const std::size_t db = conditionals.front().dim();
    for (const auto& k : kets)
        if (k.cols() != 1 || k.rows() != da)
            throw Error(Errc::bad_ket, "make_cq: ket shape");
    for (std::size_t i = 0; i < kets.size(); ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            cplx ip{};
            for (std::size_t r = 0; r < da; ++r)
                ip += std::conj(kets[i](r, 0)) * kets[j](r, 0);
            const double want = (i == j) ? 1.0 : 0.0;
            if (std::abs(ip - cplx{want, 0.0}) > kStructTol)
                throw Error(Errc::bad_ket, "make_cq: kets not orthonormal");
        }
    for (const auto& c : conditionals)
        if (c.dim() != db)
            throw Error(Errc::dimension_mismatch, "make_cq: conditional dims differ");

    ComplexMatrix m(da * db, da * db);
    for (std::size_t i = 0; i < weights.size(); ++i)
        m += cplx{weights[i], 0.0} * kron(projector(kets[i]), conditionals[i].matrix());
    return make_density(m, BipartiteDims{da, db});
}

// tr_B[(I (x) G) rho] for a Hermitian operator basis {G} of B.  A state is
// CQ exactly when this family commutes and rho is invariant under
// dephasing A in its common eigenbasis.
inline std::vector<ComplexMatrix> correlation_operators(const DensityMatrix& rho) {
    const BipartiteDims d = require_dims(rho, "correlation_operators");
    const ComplexMatrix& m = rho.matrix();
    auto block = [&](std::size_t k, std::size_t l) {
        // transfer operator for G = |k><l|
        ComplexMatrix f(d.a, d.a);
        for (std::size_t a = 0; a < d.a; ++a)
            for (std::size_t ap = 0; ap < d.a; ++ap)
                f(a, ap) = m(a * d.b + l, ap * d.b + k);
        return f;
    };
    std::vector<ComplexMatrix> fam;
    fam.reserve(d.b * d.b);
    for (std::size_t k = 0; k < d.b; ++k) {
        ComplexMatrix f = block(k, k);
        fam.push_back((f + f.adjoint()) * cplx{0.5, 0.0});
    }
    for (std::size_t k = 0; k < d.b; ++k)
        for (std::size_t l = k + 1; l < d.b; ++l) {
            const ComplexMatrix bkl = block(k, l), blk = block(l, k);
            ComplexMatrix re = bkl + blk;
            ComplexMatrix im = cplx{0.0, 1.0} * (bkl - blk);
            fam.push_back((re + re.adjoint()) * cplx{0.5, 0.0});
            fam.push_back((im + im.adjoint()) * cplx{0.5, 0.0});
        }
    return fam;
}

// Dephase subsystem A in the given orthonormal basis (columns of u).
inline DensityMatrix dephase_in_basis(const DensityMatrix& rho, const ComplexMatrix& u) {
    const BipartiteDims d = rho.dims() ? *rho.dims() : BipartiteDims{rho.dim(), 1};
    if (!u.is_square() || u.rows() != d.a)
        throw Error(Errc::dimension_mismatch, "dephase_in_basis: basis vs subsystem A");
    if (unitarity_residual(u) > kStructTol)
        throw Error(Errc::not_unitary, "dephase_in_basis: basis not orthonormal");
    const ComplexMatrix w = kron(u, ComplexMatrix::identity(d.b));
    ComplexMatrix r = w.adjoint() * rho.matrix() * w;
    for (std::size_t a = 0; a < d.a; ++a)
        for (std::size_t ap = 0; ap < d.a; ++ap) {
            if (a == ap) continue;
            for (std::size_t b = 0; b < d.b; ++b)
                for (std::size_t bp = 0; bp < d.b; ++bp)
                    r(a * d.b + b, ap * d.b + bp) = 0.0;
        }
    return make_density(w * r * w.adjoint(), rho.dims());
}

struct CqResult {
    bool cq = false;
    double violation = 0.0;               // deciding residual
    std::optional<ComplexMatrix> basis;   // present when the test reached one
};

inline CqResult is_cq(const DensityMatrix& rho, double tol = kCheckTol) {
    const std::vector<ComplexMatrix> fam = correlation_operators(rho);
    const double comm = max_commutator_entry(fam);
    if (comm > tol) return {false, comm, std::nullopt};
    ComplexMatrix u;
    try {
        u = simultaneous_diagonalize(fam, std::max(tol, comm));
    } catch (const Error& e) {
        // borderline family: commutators inside tol but no joint basis to
        // the required residual -- not CQ at this tolerance
        if (e.code() == Errc::no_convergence) return {false, std::max(comm, tol), std::nullopt};
        throw;
    }
    const DensityMatrix dephased = dephase_in_basis(rho, u);
    const double dist = trace_norm_distance(rho.matrix(), dephased.matrix());
    return {dist <= tol, dist, u};
}

struct MarginalBasis {
    ComplexMatrix basis;      // orthonormal columns, dimension of A
    bool degenerate = false;  // marginal had an eigenvalue gap below threshold
};

namespace detail {

// Deterministic orthonormal basis of the column span of p (a projector):
// Gram-Schmidt over the projected computational vectors.
inline ComplexMatrix canonical_span_basis(const ComplexMatrix& block_cols) {
    const std::size_t n = block_cols.rows();
    const std::size_t want = block_cols.cols();
    const ComplexMatrix p = block_cols * block_cols.adjoint();
    ComplexMatrix out(n, want);
    std::size_t got = 0;
    for (std::size_t e = 0; e < n && got < want; ++e) {
        std::vector<cplx> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = p(i, e);
        for (std::size_t c = 0; c < got; ++c) {
            cplx proj{};
            for (std::size_t i = 0; i < n; ++i) proj += std::conj(out(i, c)) * v[i];
            for (std::size_t i = 0; i < n; ++i) v[i] -= proj * out(i, c);
        }
        double norm2 = 0.0;
        for (const auto& x : v) norm2 += std::norm(x);
        if (norm2 < 1e-12) continue;
        const double inv = 1.0 / std::sqrt(norm2);
        for (std::size_t i = 0; i < n; ++i) out(i, got) = v[i] * inv;
        ++got;
    }
    if (got != want)
        throw Error(Errc::no_convergence, "canonical_span_basis: span not recovered");
    return out;
}

}  // namespace detail

// Eigenbasis of the A marginal with a canonical policy for degenerate
// blocks: group eigenvalues closer than kDegeneracyGap, take the
// deterministic computational-projection basis of each block, then refine
// by the correlation operators when their restrictions commute.  The
// result depends only on rho, never on solver internals.
inline MarginalBasis marginal_eigenbasis(const DensityMatrix& rho) {
    const BipartiteDims d = require_dims(rho, "marginal_eigenbasis");
    const ComplexMatrix rho_a = partial_trace(rho.matrix(), d.a, d.b, Subsystem::B);
    const HermitianEigensystem es = eig_hermitian(rho_a);
    const std::size_t n = d.a;

    MarginalBasis out;
    out.basis = es.vectors;
    std::size_t lo = 0;
    while (lo < n) {
        std::size_t hi = lo + 1;
        while (hi < n && es.values[hi - 1] - es.values[hi] <= kDegeneracyGap) ++hi;
        const std::size_t bs = hi - lo;
        if (bs > 1) {
            out.degenerate = true;
            ComplexMatrix vb(n, bs);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < bs; ++j) vb(i, j) = es.vectors(i, lo + j);
            ComplexMatrix w = detail::canonical_span_basis(vb);

            std::vector<ComplexMatrix> restricted;
            for (const auto& f : correlation_operators(rho)) {
                ComplexMatrix r = w.adjoint() * f * w;
                restricted.push_back((r + r.adjoint()) * cplx{0.5, 0.0});
            }
            if (max_commutator_entry(restricted) <= 1e-10) {
                try {
                    w = w * simultaneous_diagonalize(restricted, kCheckTol);
                } catch (const Error& e) {
                    // keep canonical completion if refinement is ill-posed
                    if (e.code() != Errc::no_convergence) throw;
                }
            }
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < bs; ++j) out.basis(i, lo + j) = w(i, j);
        }
        lo = hi;
    }
    return out;
}

// Dephasing of A in the eigenbasis of its own marginal.  Nonlinear in rho;
// fixes exactly the CQ states.
inline DensityMatrix marginal_dephase(const DensityMatrix& rho) {
    return dephase_in_basis(rho, marginal_eigenbasis(rho).basis);
}

}  // namespace rdmap
