#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "rdmap/complex_matrix.hpp"
#include "rdmap/defaults.hpp"
#include "rdmap/rng.hpp"

// Hermitian eigenproblems via cyclic Jacobi rotations.  Deterministic:
// fixed sweep order, eigenvalues sorted nonincreasing, each eigenvector's
// largest-modulus entry made real positive.

namespace rdmap {

struct HermitianEigensystem {
    std::vector<double> values;   // nonincreasing
    ComplexMatrix vectors;        // column k belongs to values[k]
};

namespace detail {

inline double max_offdiag(const ComplexMatrix& a) {
    double m = 0.0;
    for (std::size_t p = 0; p + 1 < a.rows(); ++p)
        for (std::size_t q = p + 1; q < a.cols(); ++q)
            m = std::max(m, std::abs(a(p, q)));
    return m;
}

}  // namespace detail

inline HermitianEigensystem eig_hermitian(const ComplexMatrix& m) {
    m.require_square("eig_hermitian");
    if (m.hermiticity_residual() > kStructTol)
        throw Error(Errc::not_hermitian, "eig_hermitian: residual " +
                                             std::to_string(m.hermiticity_residual()));
    const std::size_t n = m.rows();

    // Symmetrize so the iteration preserves hermiticity exactly.
    ComplexMatrix a = (m + m.adjoint()) * cplx{0.5, 0.0};
    ComplexMatrix v = ComplexMatrix::identity(n);

    const double stop = kJacobiTol * std::max(1.0, a.max_abs());
    int sweep = 0;
    for (; sweep < kJacobiMaxSweeps; ++sweep) {
        if (detail::max_offdiag(a) <= stop) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx apq = a(p, q);
                const double r = std::abs(apq);
                if (r <= 0.1 * stop) continue;
                const cplx phase = apq / r;  // apq = r * phase
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * r);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // Plane rotation J: J(p,p)=c, J(p,q)=s, J(q,p)=-s*conj(phase),
                // J(q,q)=c*conj(phase); update A <- J^dag A J, V <- V J.
                const cplx jqp = -s * std::conj(phase);
                const cplx jqq = c * std::conj(phase);
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp + jqp * akq;
                    a(k, q) = s * akp + jqq * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk + std::conj(jqp) * aqk;
                    a(q, k) = s * apk + std::conj(jqq) * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp + jqp * vkq;
                    v(k, q) = s * vkp + jqq * vkq;
                }
            }
        }
    }
    if (detail::max_offdiag(a) > stop)
        throw Error(Errc::no_convergence,
                    "eig_hermitian: off-diagonal " + std::to_string(detail::max_offdiag(a)) +
                        " after " + std::to_string(sweep) + " sweeps");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return a(i, i).real() > a(j, j).real();
    });

    HermitianEigensystem es;
    es.values.resize(n);
    es.vectors = ComplexMatrix(n, n);
    for (std::size_t col = 0; col < n; ++col) {
        const std::size_t src = order[col];
        es.values[col] = a(src, src).real();
        // Phase convention: largest-modulus entry (lowest index on ties)
        // becomes real positive.
        std::size_t kmax = 0;
        double best = -1.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double mod = std::abs(v(k, src));
            if (mod > best + 1e-15) { best = mod; kmax = k; }
        }
        cplx ph{1.0, 0.0};
        if (best > 0.0) ph = std::conj(v(kmax, src)) / best;
        for (std::size_t k = 0; k < n; ++k) es.vectors(k, col) = ph * v(k, src);
    }
    return es;
}

// log2 taken on the eigenvalues above cutoff; directions outside the
// support map to zero (not -inf).
inline ComplexMatrix matrix_log2_on_support(const ComplexMatrix& m,
                                            double cutoff = kSupportCutoff) {
    const HermitianEigensystem es = eig_hermitian(m);
    const std::size_t n = es.values.size();
    for (double w : es.values)
        if (w < -1e-9)
            throw Error(Errc::negative_eigenvalue,
                        "matrix_log2_on_support: eigenvalue " + std::to_string(w));
    std::vector<double> f(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        if (es.values[i] > cutoff) f[i] = std::log2(es.values[i]);
    return es.vectors * ComplexMatrix::diag_real(f) * es.vectors.adjoint();
}

inline std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m) {
    return eig_hermitian(m).values;
}

// (1/2) * trace norm of (a - b), both Hermitian.  Equals 1 for orthogonal
// pure states, 0 for equal operators.
inline double trace_norm_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw Error(Errc::dimension_mismatch, "trace_norm_distance: shapes differ");
    if (a.hermiticity_residual() > kStructTol || b.hermiticity_residual() > kStructTol)
        throw Error(Errc::not_hermitian, "trace_norm_distance expects Hermitian inputs");
    const ComplexMatrix d = a - b;
    double s = 0.0;
    for (double w : hermitian_eigenvalues(d)) s += std::abs(w);
    return 0.5 * s;
}

namespace detail {

inline ComplexMatrix simdiag_recurse(const std::vector<ComplexMatrix>& fam, Rng& rng,
                                     int depth) {
    const std::size_t n = fam.front().rows();
    if (n == 1) return ComplexMatrix::identity(1);
    if (depth > 20)
        throw Error(Errc::no_convergence, "simultaneous_diagonalize: recursion depth");

    ComplexMatrix comb(n, n);
    for (const auto& f : fam) comb += cplx{rng.gaussian(), 0.0} * f;
    comb = (comb + comb.adjoint()) * cplx{0.5, 0.0};
    const HermitianEigensystem es = eig_hermitian(comb);

    double scale = 1.0;
    for (double w : es.values) scale = std::max(scale, std::abs(w));
    const double cluster_gap = 1e-7 * scale;

    ComplexMatrix v = es.vectors;
    std::size_t lo = 0;
    while (lo < n) {
        std::size_t hi = lo + 1;
        while (hi < n && es.values[hi - 1] - es.values[hi] <= cluster_gap) ++hi;
        const std::size_t bs = hi - lo;
        if (bs > 1) {
            ComplexMatrix vb(n, bs);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < bs; ++j) vb(i, j) = v(i, lo + j);
            std::vector<ComplexMatrix> restricted;
            restricted.reserve(fam.size());
            double off = 0.0;
            for (const auto& f : fam) {
                ComplexMatrix r = vb.adjoint() * f * vb;
                r = (r + r.adjoint()) * cplx{0.5, 0.0};
                off = std::max(off, max_offdiag(r));
                restricted.push_back(std::move(r));
            }
            if (off > 1e-11) {
                const ComplexMatrix w = simdiag_recurse(restricted, rng, depth + 1);
                const ComplexMatrix refined = vb * w;
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < bs; ++j) v(i, lo + j) = refined(i, j);
            }
        }
        lo = hi;
    }
    return v;
}

}  // namespace detail

inline double max_commutator_entry(const std::vector<ComplexMatrix>& family) {
    double m = 0.0;
    for (std::size_t i = 0; i < family.size(); ++i)
        for (std::size_t j = i + 1; j < family.size(); ++j)
            m = std::max(m, (family[i] * family[j] - family[j] * family[i]).max_abs());
    return m;
}

// Common eigenbasis of a pairwise-commuting Hermitian family.  Random real
// combinations split the spectrum; degenerate blocks recurse on the
// restricted family.  Deterministic for a given rng state.
inline ComplexMatrix simultaneous_diagonalize(const std::vector<ComplexMatrix>& family,
                                              double tol, Rng& rng) {
    if (family.empty())
        throw Error(Errc::bad_argument, "simultaneous_diagonalize: empty family");
    const std::size_t n = family.front().rows();
    for (const auto& f : family) {
        f.require_square("simultaneous_diagonalize");
        if (f.rows() != n)
            throw Error(Errc::dimension_mismatch, "simultaneous_diagonalize: mixed dims");
        if (f.hermiticity_residual() > kStructTol)
            throw Error(Errc::not_hermitian, "simultaneous_diagonalize: member not Hermitian");
    }
    const double comm = max_commutator_entry(family);
    if (comm > tol)
        throw Error(Errc::not_commuting_family,
                    "simultaneous_diagonalize: commutator " + std::to_string(comm));

    const ComplexMatrix v = detail::simdiag_recurse(family, rng, 0);

    double off = 0.0;
    for (const auto& f : family)
        off = std::max(off, detail::max_offdiag(v.adjoint() * f * v));
    if (off > 10.0 * std::max(tol, 1e-11))
        throw Error(Errc::no_convergence,
                    "simultaneous_diagonalize: residual off-diagonal " + std::to_string(off));
    return v;
}

inline ComplexMatrix simultaneous_diagonalize(const std::vector<ComplexMatrix>& family,
                                              double tol = kCheckTol) {
    Rng rng(0x5eedba11u);  // fixed: canonical basis choice must be reproducible
    return simultaneous_diagonalize(family, tol, rng);
}

}  // namespace rdmap
