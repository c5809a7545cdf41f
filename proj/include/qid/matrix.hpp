#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include "qid/errors.hpp"

namespace qid {

using cplx = std::complex<double>;

/// Dense complex matrix, row-major. The workhorse type for operators,
/// unitaries and density matrices alike. Dimensions stay small (<= ~64),
/// so everything is plain O(n^3) with no blocking.
class ComplexMatrix {
public:
    ComplexMatrix() = default;

    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols) {}

    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
        : rows_(rows), cols_(cols), entries_(std::move(entries)) {
        if (entries_.size() != rows_ * cols_)
            throw ValidationError("entry count does not match rows x cols");
        for (const cplx& z : entries_)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
                throw ValidationError("matrix entries must be finite");
    }

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    cplx& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

    const std::vector<cplx>& entries() const { return entries_; }

    cplx trace() const {
        cplx t = 0.0;
        for (std::size_t i = 0; i < rows_ && i < cols_; ++i) t += (*this)(i, i);
        return t;
    }

    ComplexMatrix adjoint() const {
        ComplexMatrix a(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) a(j, i) = std::conj((*this)(i, j));
        return a;
    }

    ComplexMatrix transpose() const {
        ComplexMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    ComplexMatrix conjugate() const {
        ComplexMatrix c(rows_, cols_);
        for (std::size_t k = 0; k < entries_.size(); ++k) c.entries_[k] = std::conj(entries_[k]);
        return c;
    }

    /// (A + A^dag)/2. Requires a square matrix.
    ComplexMatrix hermitian_part() const {
        ComplexMatrix h(rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                h(i, j) = 0.5 * ((*this)(i, j) + std::conj((*this)(j, i)));
        return h;
    }

    /// max_ij |A_ij - conj(A_ji)|, the Hermiticity defect.
    double herm_defect() const {
        double d = 0.0;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                d = std::max(d, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
        return d;
    }

    double max_abs() const {
        double m = 0.0;
        for (const cplx& z : entries_) m = std::max(m, std::abs(z));
        return m;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const cplx& z : entries_) s += std::norm(z);
        return std::sqrt(s);
    }

    std::vector<cplx> column(std::size_t j) const {
        std::vector<cplx> c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
        return c;
    }

    void set_column(std::size_t j, const std::vector<cplx>& c) {
        for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = c[i];
    }

    ComplexMatrix& operator+=(const ComplexMatrix& o) {
        for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += o.entries_[k];
        return *this;
    }
    ComplexMatrix& operator-=(const ComplexMatrix& o) {
        for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= o.entries_[k];
        return *this;
    }
    ComplexMatrix& operator*=(cplx s) {
        for (cplx& z : entries_) z *= s;
        return *this;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> entries_;
};

inline ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
inline ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
inline ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
inline ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
inline ComplexMatrix operator*(ComplexMatrix a, double s) { return a *= cplx(s); }
inline ComplexMatrix operator*(double s, ComplexMatrix a) { return a *= cplx(s); }

inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) throw DimensionMismatch("matrix product shape mismatch");
    ComplexMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx(0.0)) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) d = std::max(d, std::abs(a(i, j) - b(i, j)));
    return d;
}

/// Kronecker product. Index convention: (A (x) B)(i1*rB+i2, j1*cB+j2) = A(i1,j1) B(i2,j2),
/// i.e. the first factor owns the major index. All tensor-product code in the
/// library uses this ordering with the system as the first factor.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix k(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i1 = 0; i1 < a.rows(); ++i1)
        for (std::size_t j1 = 0; j1 < a.cols(); ++j1) {
            const cplx aij = a(i1, j1);
            if (aij == cplx(0.0)) continue;
            for (std::size_t i2 = 0; i2 < b.rows(); ++i2)
                for (std::size_t j2 = 0; j2 < b.cols(); ++j2)
                    k(i1 * b.rows() + i2, j1 * b.cols() + j2) = aij * b(i2, j2);
        }
    return k;
}

enum class Subsystem { system, ancilla };

/// Partial trace of a (dim_sys * dim_anc)^2 matrix over one tensor factor.
/// Joint index = sys * dim_anc + anc, matching kron(system, ancilla).
inline ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t dim_sys,
                                   std::size_t dim_anc, Subsystem keep) {
    if (!m.is_square() || m.rows() != dim_sys * dim_anc)
        throw DimensionMismatch("partial_trace: matrix is not (dim_sys*dim_anc) square");
    if (keep == Subsystem::system) {
        ComplexMatrix r(dim_sys, dim_sys);
        for (std::size_t i = 0; i < dim_sys; ++i)
            for (std::size_t j = 0; j < dim_sys; ++j) {
                cplx s = 0.0;
                for (std::size_t a = 0; a < dim_anc; ++a) s += m(i * dim_anc + a, j * dim_anc + a);
                r(i, j) = s;
            }
        return r;
    }
    ComplexMatrix r(dim_anc, dim_anc);
    for (std::size_t a = 0; a < dim_anc; ++a)
        for (std::size_t b = 0; b < dim_anc; ++b) {
            cplx s = 0.0;
            for (std::size_t i = 0; i < dim_sys; ++i) s += m(i * dim_anc + a, i * dim_anc + b);
            r(a, b) = s;
        }
    return r;
}

/// Column-stacking vectorization: vec(X)[col*rows + row] = X(row, col).
/// With this convention vec(A X B) = kron(B^T, A) vec(X).
inline ComplexMatrix vec(const ComplexMatrix& x) {
    ComplexMatrix v(x.rows() * x.cols(), 1);
    for (std::size_t j = 0; j < x.cols(); ++j)
        for (std::size_t i = 0; i < x.rows(); ++i) v(j * x.rows() + i, 0) = x(i, j);
    return v;
}

inline ComplexMatrix unvec(const ComplexMatrix& v, std::size_t rows, std::size_t cols) {
    if (v.rows() != rows * cols || v.cols() != 1)
        throw DimensionMismatch("unvec: vector length does not match target shape");
    ComplexMatrix x(rows, cols);
    for (std::size_t j = 0; j < cols; ++j)
        for (std::size_t i = 0; i < rows; ++i) x(i, j) = v(j * rows + i, 0);
    return x;
}

} // namespace qid
