#pragma once

#include <cstdint>
#include <random>

#include "rdmap/complex_matrix.hpp"

// Deterministic randomness: one seed fixes every sampled verdict.  Forked
// streams keep per-criterion sampling independent of evaluation order.

namespace rdmap {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const { return seed_; }

    // Independent stream derived from this seed; stable under call order.
    Rng fork(std::uint64_t stream) const {
        return Rng(mix(seed_, 0x9e3779b97f4a7c15ull * (stream + 1)));
    }

    double gaussian() { return normal_(engine_); }

    double uniform() { return uniform_(engine_); }  // [0, 1)

    std::uint64_t next_u64() { return engine_(); }

    std::size_t index(std::size_t n) {
        return static_cast<std::size_t>(engine_() % n);
    }

    cplx gaussian_cplx() {
        const double re = gaussian(), im = gaussian();
        return cplx{re, im} * std::sqrt(0.5);
    }

private:
    static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
        std::uint64_t z = a ^ (b + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2));
        z ^= z >> 30; z *= 0xbf58476d1ce4e5b9ull;
        z ^= z >> 27; z *= 0x94d049bb133111ebull;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t seed_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

inline ComplexMatrix ginibre(std::size_t rows, std::size_t cols, Rng& rng) {
    ComplexMatrix g(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) g(i, j) = rng.gaussian_cplx();
    return g;
}

// Modified Gram-Schmidt on columns.  The implicit R has a positive real
// diagonal, which is exactly the phase convention that makes a Ginibre
// input come out Haar distributed.
inline ComplexMatrix orthonormalize_columns(const ComplexMatrix& m) {
    ComplexMatrix q = m;
    const std::size_t n = q.cols();
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < j; ++k) {
            cplx proj{};
            for (std::size_t i = 0; i < q.rows(); ++i)
                proj += std::conj(q(i, k)) * q(i, j);
            for (std::size_t i = 0; i < q.rows(); ++i) q(i, j) -= proj * q(i, k);
        }
        double norm2 = 0.0;
        for (std::size_t i = 0; i < q.rows(); ++i) norm2 += std::norm(q(i, j));
        if (norm2 < 1e-24)
            throw Error(Errc::bad_argument, "orthonormalize_columns: rank-deficient input");
        const double inv = 1.0 / std::sqrt(norm2);
        for (std::size_t i = 0; i < q.rows(); ++i) q(i, j) *= inv;
    }
    return q;
}

// Haar-distributed d x d unitary (Ginibre + Gram-Schmidt).  d = 1 gives a
// uniform phase.
inline ComplexMatrix random_unitary(std::size_t d, Rng& rng) {
    if (d == 0) throw Error(Errc::bad_argument, "random_unitary: d must be positive");
    return orthonormalize_columns(ginibre(d, d, rng));
}

// Random density matrix G G^dag / tr, rank controlled by the Ginibre width.
// rank = d samples full-rank states (Hilbert-Schmidt measure).
inline ComplexMatrix random_density_matrix(std::size_t d, std::size_t rank, Rng& rng) {
    if (d == 0) throw Error(Errc::bad_argument, "random_density_matrix: d must be positive");
    if (rank == 0 || rank > d)
        throw Error(Errc::bad_argument, "random_density_matrix: rank must be in [1, d]");
    const ComplexMatrix g = ginibre(d, rank, rng);
    ComplexMatrix m = g * g.adjoint();
    const double t = m.trace().real();
    return m * cplx{1.0 / t, 0.0};
}

// Random probability vector, full support.
inline std::vector<double> random_diagonal_density(std::size_t d, Rng& rng) {
    std::vector<double> p(d);
    double s = 0.0;
    for (auto& v : p) {
        const cplx g = rng.gaussian_cplx();
        v = std::norm(g) + 1e-6;  // keep full rank
        s += v;
    }
    for (auto& v : p) v /= s;
    return p;
}

}  // namespace rdmap
