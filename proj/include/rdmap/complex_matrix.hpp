#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "rdmap/error.hpp"

// Dense row-major complex matrices sized for few-qudit work (d <= ~16).
// Kets are d x 1 matrices so outer products and channel algebra need no
// second vector type.

namespace rdmap {

using cplx = std::complex<double>;

class ComplexMatrix {
public:
    ComplexMatrix() : rows_(0), cols_(0) {}

    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, cplx{0.0, 0.0}) {}

    ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
        rows_ = rows.size();
        cols_ = rows_ ? rows.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_)
                throw Error(Errc::dimension_mismatch, "ragged initializer");
            data_.insert(data_.end(), r.begin(), r.end());
        }
    }

    static ComplexMatrix zero(std::size_t rows, std::size_t cols) {
        return ComplexMatrix(rows, cols);
    }

    static ComplexMatrix identity(std::size_t d) {
        ComplexMatrix m(d, d);
        for (std::size_t i = 0; i < d; ++i) m(i, i) = 1.0;
        return m;
    }

    static ComplexMatrix diag(const std::vector<cplx>& entries) {
        ComplexMatrix m(entries.size(), entries.size());
        for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
        return m;
    }

    static ComplexMatrix diag_real(const std::vector<double>& entries) {
        ComplexMatrix m(entries.size(), entries.size());
        for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<cplx>& data() const { return data_; }

    ComplexMatrix& operator+=(const ComplexMatrix& o) {
        require_same_shape(o, "operator+=");
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
        return *this;
    }

    ComplexMatrix& operator-=(const ComplexMatrix& o) {
        require_same_shape(o, "operator-=");
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
        return *this;
    }

    ComplexMatrix& operator*=(cplx s) {
        for (auto& v : data_) v *= s;
        return *this;
    }

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(cplx s, ComplexMatrix m) { return m *= s; }
    friend ComplexMatrix operator*(ComplexMatrix m, cplx s) { return m *= s; }

    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
        if (a.cols_ != b.rows_)
            throw Error(Errc::dimension_mismatch,
                        "matmul " + shape_str(a) + " x " + shape_str(b));
        ComplexMatrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const cplx aik = a(i, k);
                if (aik == cplx{}) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
            }
        return c;
    }

    ComplexMatrix adjoint() const {
        ComplexMatrix m(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
        return m;
    }

    ComplexMatrix transpose() const {
        ComplexMatrix m(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
        return m;
    }

    ComplexMatrix conjugate() const {
        ComplexMatrix m(rows_, cols_);
        for (std::size_t k = 0; k < data_.size(); ++k) m.data_[k] = std::conj(data_[k]);
        return m;
    }

    cplx trace() const {
        require_square("trace");
        cplx t{};
        for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
        return t;
    }

    // Largest entry modulus; the cheap norm used for structural residuals.
    double max_abs() const {
        double m = 0.0;
        for (const auto& v : data_) m = std::max(m, std::abs(v));
        return m;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const auto& v : data_) s += std::norm(v);
        return std::sqrt(s);
    }

    double hermiticity_residual() const {
        require_square("hermiticity_residual");
        double m = 0.0;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = i; j < cols_; ++j)
                m = std::max(m, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
        return m;
    }

    bool all_finite() const {
        for (const auto& v : data_)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
        return true;
    }

    void require_square(const char* who) const {
        if (!is_square())
            throw Error(Errc::dimension_mismatch, std::string(who) + " needs a square matrix");
    }

private:
    static std::string shape_str(const ComplexMatrix& m) {
        return std::to_string(m.rows_) + "x" + std::to_string(m.cols_);
    }

    void require_same_shape(const ComplexMatrix& o, const char* who) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw Error(Errc::dimension_mismatch,
                        std::string(who) + " " + shape_str(*this) + " vs " + shape_str(o));
    }

    std::size_t rows_, cols_;
    std::vector<cplx> data_;
};

// |i> in dimension d, as a d x 1 column.
inline ComplexMatrix basis_ket(std::size_t d, std::size_t i) {
    if (i >= d) throw Error(Errc::bad_ket, "basis index out of range");
    ComplexMatrix k(d, 1);
    k(i, 0) = 1.0;
    return k;
}

inline ComplexMatrix ket(const std::vector<cplx>& amplitudes) {
    ComplexMatrix k(amplitudes.size(), 1);
    for (std::size_t i = 0; i < amplitudes.size(); ++i) k(i, 0) = amplitudes[i];
    return k;
}

inline ComplexMatrix normalized_ket(const std::vector<cplx>& amplitudes) {
    double n2 = 0.0;
    for (const auto& a : amplitudes) n2 += std::norm(a);
    if (n2 <= 0.0) throw Error(Errc::bad_ket, "zero vector");
    ComplexMatrix k = ket(amplitudes);
    return k * cplx{1.0 / std::sqrt(n2), 0.0};
}

// |a><b|
inline ComplexMatrix outer(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != 1 || b.cols() != 1)
        throw Error(Errc::bad_ket, "outer expects column vectors");
    return a * b.adjoint();
}

inline ComplexMatrix projector(const ComplexMatrix& k) { return outer(k, k); }

// Matrix unit |i><j|.
inline ComplexMatrix matrix_unit(std::size_t d, std::size_t i, std::size_t j) {
    ComplexMatrix m(d, d);
    m(i, j) = 1.0;
    return m;
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix m(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const cplx aij = a(i, j);
            if (aij == cplx{}) continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    m(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
    return m;
}

enum class Subsystem { A, B };

// Trace out one factor of a (dim_a * dim_b)-dimensional bipartite operator.
// Joint index convention: row (a, b) lives at a * dim_b + b.
inline ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t dim_a,
                                   std::size_t dim_b, Subsystem traced_out) {
    if (!m.is_square() || m.rows() != dim_a * dim_b)
        throw Error(Errc::dimension_mismatch, "partial_trace: operator is not dim_a*dim_b square");
    if (traced_out == Subsystem::B) {
        ComplexMatrix r(dim_a, dim_a);
        for (std::size_t a = 0; a < dim_a; ++a)
            for (std::size_t ap = 0; ap < dim_a; ++ap) {
                cplx s{};
                for (std::size_t b = 0; b < dim_b; ++b)
                    s += m(a * dim_b + b, ap * dim_b + b);
                r(a, ap) = s;
            }
        return r;
    }
    ComplexMatrix r(dim_b, dim_b);
    for (std::size_t b = 0; b < dim_b; ++b)
        for (std::size_t bp = 0; bp < dim_b; ++bp) {
            cplx s{};
            for (std::size_t a = 0; a < dim_a; ++a)
                s += m(a * dim_b + b, a * dim_b + bp);
            r(b, bp) = s;
        }
    return r;
}

inline double unitarity_residual(const ComplexMatrix& u) {
    u.require_square("unitarity_residual");
    return (u.adjoint() * u - ComplexMatrix::identity(u.rows())).max_abs();
}

}  // namespace rdmap
