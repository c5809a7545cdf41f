#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "qid/matrix.hpp"

namespace qid {

/// Full eigensystem of a Hermitian matrix. Eigenvalues ascending, the k-th
/// column of `eigenvectors` belongs to eigenvalues[k].
struct HermitianEigen {
    std::vector<double> eigenvalues;
    ComplexMatrix eigenvectors;
};

namespace detail {

// One cyclic-Jacobi rotation zeroing m(p,q). `m` is kept Hermitian, `v`
// accumulates the product of rotations (v <- v * U).
inline void jacobi_rotate(ComplexMatrix& m, ComplexMatrix& v, std::size_t p, std::size_t q) {
    const cplx g = m(p, q);
    const double ag = std::abs(g);
    if (ag == 0.0) return;
    const cplx phase = g / ag;

    const double app = m(p, p).real();
    const double aqq = m(q, q).real();
    const double tau = (aqq - app) / (2.0 * ag);
    const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                  : -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;

    const std::size_t n = m.rows();
    // m <- m * U with U(p,p)=c, U(p,q)=s*phase, U(q,p)=-s*conj(phase), U(q,q)=c
    for (std::size_t r = 0; r < n; ++r) {
        const cplx mp = m(r, p), mq = m(r, q);
        m(r, p) = c * mp - s * std::conj(phase) * mq;
        m(r, q) = s * phase * mp + c * mq;
    }
    // m <- U^dag * m
    for (std::size_t col = 0; col < n; ++col) {
        const cplx mp = m(p, col), mq = m(q, col);
        m(p, col) = c * mp - s * phase * mq;
        m(q, col) = s * std::conj(phase) * mp + c * mq;
    }
    m(p, q) = 0.0;
    m(q, p) = 0.0;
    m(p, p) = cplx(m(p, p).real(), 0.0);
    m(q, q) = cplx(m(q, q).real(), 0.0);
    // accumulate eigenvectors
    for (std::size_t r = 0; r < n; ++r) {
        const cplx vp = v(r, p), vq = v(r, q);
        v(r, p) = c * vp - s * std::conj(phase) * vq;
        v(r, q) = s * phase * vp + c * vq;
    }
}

inline double max_offdiag(const ComplexMatrix& m) {
    double off = 0.0;
    for (std::size_t p = 0; p + 1 < m.rows(); ++p)
        for (std::size_t q = p + 1; q < m.rows(); ++q) off = std::max(off, std::abs(m(p, q)));
    return off;
}

} // namespace detail

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
/// Converges when every off-diagonal magnitude drops below 1e-12; plenty for
/// the dimensions this library works at.
inline HermitianEigen herm_eig(const ComplexMatrix& a, double herm_tol = 1e-9) {
    if (!a.is_square()) throw NotSquare("herm_eig requires a square matrix");
    const double defect = a.herm_defect();
    if (defect > herm_tol) throw NotHermitian(defect);

    const std::size_t n = a.rows();
    ComplexMatrix m = a.hermitian_part();
    ComplexMatrix v = ComplexMatrix::identity(n);

    // converge to machine precision relative to the matrix scale (well below
    // the 1e-12 bound the callers rely on); sqrt-of-eigenvalue consumers need
    // true zeros to come out at roundoff level, not at the sweep threshold
    const double off_tol = std::max(m.max_abs(), 1e-300) * 1e-15;
    constexpr int max_sweeps = 100;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (detail::max_offdiag(m) < off_tol) break;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q)
                if (std::abs(m(p, q)) >= off_tol) detail::jacobi_rotate(m, v, p, q);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return m(i, i).real() < m(j, j).real(); });

    HermitianEigen out;
    out.eigenvalues.resize(n);
    out.eigenvectors = ComplexMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = m(order[k], order[k]).real();
        for (std::size_t r = 0; r < n; ++r) out.eigenvectors(r, k) = v(r, order[k]);
    }
    return out;
}

/// Square root of a PSD Hermitian matrix. Eigenvalues in [-clamp_tol, 0) are
/// clamped to zero; anything more negative is an error.
inline ComplexMatrix mat_sqrt_psd(const ComplexMatrix& a, double clamp_tol = 1e-9) {
    HermitianEigen es = herm_eig(a);
    for (double lam : es.eigenvalues)
        if (lam < -clamp_tol) throw NegativeEigenvalue(lam);
    const std::size_t n = a.rows();
    ComplexMatrix r(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const double s = std::sqrt(std::max(es.eigenvalues[k], 0.0));
        if (s == 0.0) continue;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                r(i, j) += s * es.eigenvectors(i, k) * std::conj(es.eigenvectors(j, k));
    }
    return r;
}

/// Trace norm Tr|A| of a Hermitian matrix: sum of absolute eigenvalues.
inline double trace_norm(const ComplexMatrix& a) {
    HermitianEigen es = herm_eig(a);
    double s = 0.0;
    for (double lam : es.eigenvalues) s += std::abs(lam);
    return s;
}

/// Extend a matrix with orthonormal columns to a full unitary. The input
/// columns are copied bit-exactly into the leading columns; the rest are
/// filled from standard basis vectors by Gram-Schmidt (two passes), skipping
/// candidates whose residual norm falls below 1e-8. Deterministic.
inline ComplexMatrix complete_isometry(const ComplexMatrix& v) {
    const std::size_t n = v.rows();
    const std::size_t m = v.cols();
    if (m > n) throw ColumnsNotOrthonormal("isometry has more columns than rows");

    ComplexMatrix gram = v.adjoint() * v;
    if (max_abs_diff(gram, ComplexMatrix::identity(m)) > 1e-9)
        throw ColumnsNotOrthonormal("columns are not orthonormal within 1e-9");

    ComplexMatrix u(n, n);
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t i = 0; i < n; ++i) u(i, j) = v(i, j);

    std::size_t filled = m;
    for (std::size_t cand = 0; cand < n && filled < n; ++cand) {
        std::vector<cplx> w(n, 0.0);
        w[cand] = 1.0;
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t k = 0; k < filled; ++k) {
                cplx proj = 0.0;
                for (std::size_t i = 0; i < n; ++i) proj += std::conj(u(i, k)) * w[i];
                for (std::size_t i = 0; i < n; ++i) w[i] -= proj * u(i, k);
            }
        }
        double norm = 0.0;
        for (const cplx& z : w) norm += std::norm(z);
        norm = std::sqrt(norm);
        if (norm < 1e-8) continue;
        for (std::size_t i = 0; i < n; ++i) u(i, filled) = w[i] / norm;
        ++filled;
    }
    if (filled < n) throw Error("isometry completion ran out of basis candidates");
    return u;
}

} // namespace qid
