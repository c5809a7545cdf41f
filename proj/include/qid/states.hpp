#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "qid/linalg.hpp"
#include "qid/matrix.hpp"
#include "qid/rng.hpp"

namespace qid {

class DensityMatrix;

/// Normalized state vector |psi>.
class PureState {
public:
    /// Validates the norm (within 1e-12). Use normalized() to rescale instead.
    explicit PureState(std::vector<cplx> amplitudes) : amps_(std::move(amplitudes)) {
        if (amps_.empty()) throw ValidationError("pure state needs dimension >= 1");
        if (std::abs(norm() - 1.0) > 1e-12)
            throw ValidationError("pure state is not normalized");
    }

    static PureState normalized(std::vector<cplx> amplitudes) {
        double n = 0.0;
        for (const cplx& a : amplitudes) n += std::norm(a);
        n = std::sqrt(n);
        if (n == 0.0) throw ValidationError("cannot normalize the zero vector");
        for (cplx& a : amplitudes) a /= n;
        return PureState(Unchecked{}, std::move(amplitudes));
    }

    static PureState basis(std::size_t dim, std::size_t k) {
        std::vector<cplx> a(dim, 0.0);
        a.at(k) = 1.0;
        return PureState(Unchecked{}, std::move(a));
    }

    std::size_t dim() const { return amps_.size(); }
    const std::vector<cplx>& amplitudes() const { return amps_; }
    const cplx& operator[](std::size_t i) const { return amps_[i]; }

    double norm() const {
        double n = 0.0;
        for (const cplx& a : amps_) n += std::norm(a);
        return std::sqrt(n);
    }

    ComplexMatrix projector_matrix() const {
        const std::size_t d = dim();
        ComplexMatrix p(d, d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) p(i, j) = amps_[i] * std::conj(amps_[j]);
        return p;
    }

    DensityMatrix projector() const;

    /// Rotate the global phase so the largest-magnitude amplitude is real
    /// positive. Handy for deterministic printing and comparisons.
    PureState phase_canonical() const {
        std::size_t imax = 0;
        double best = 0.0;
        for (std::size_t i = 0; i < amps_.size(); ++i)
            if (std::abs(amps_[i]) > best + 1e-15) {
                best = std::abs(amps_[i]);
                imax = i;
            }
        std::vector<cplx> a = amps_;
        const cplx z = amps_[imax];
        if (std::abs(z) > 0.0) {
            const cplx ph = std::conj(z) / std::abs(z);
            for (cplx& x : a) x *= ph;
        }
        return PureState(Unchecked{}, std::move(a));
    }

private:
    struct Unchecked {};
    PureState(Unchecked, std::vector<cplx> amplitudes) : amps_(std::move(amplitudes)) {}
    std::vector<cplx> amps_;
};

inline cplx inner_product(const PureState& a, const PureState& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("inner product of states of unequal dimension");
    cplx s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

/// |<a|b>|.
inline double pure_overlap(const PureState& a, const PureState& b) {
    return std::abs(inner_product(a, b));
}

/// Density operator: Hermitian, PSD, unit trace. The validating constructor
/// is for API boundaries (parsed input, user-built matrices); internal code
/// that produces states valid by construction uses unchecked().
class DensityMatrix {
public:
    explicit DensityMatrix(ComplexMatrix mat, double tol = 1e-9) {
        if (!mat.is_square()) throw ValidationError("density matrix must be square");
        const double defect = mat.herm_defect();
        if (defect > tol)
            throw ValidationError("density matrix is not Hermitian (defect " +
                                  std::to_string(defect) + ")");
        mat_ = mat.hermitian_part();
        const double tr = mat_.trace().real();
        if (std::abs(tr - 1.0) > tol)
            throw ValidationError("density matrix trace is " + std::to_string(tr) + ", not 1");
        HermitianEigen es = herm_eig(mat_);
        if (!es.eigenvalues.empty() && es.eigenvalues.front() < -tol)
            throw ValidationError("density matrix has negative eigenvalue " +
                                  std::to_string(es.eigenvalues.front()));
    }

    /// Wrap a matrix that is a valid state by construction. No checks.
    static DensityMatrix unchecked(ComplexMatrix mat) {
        DensityMatrix r;
        r.mat_ = std::move(mat);
        return r;
    }

    static DensityMatrix maximally_mixed(std::size_t dim) {
        return unchecked(ComplexMatrix::identity(dim) * (1.0 / static_cast<double>(dim)));
    }

    std::size_t dim() const { return mat_.rows(); }
    const ComplexMatrix& mat() const { return mat_; }

    double purity() const { return (mat_ * mat_).trace().real(); }

private:
    DensityMatrix() = default;
    ComplexMatrix mat_;
};

inline DensityMatrix PureState::projector() const {
    return DensityMatrix::unchecked(projector_matrix());
}

namespace detail {

// Eigenvalues below 1e-13 of the largest are roundoff images of true zeros;
// sqrt would amplify them from ~1e-16 to ~1e-8, so they are snapped to zero
// before the root. Gross negatives still surface as errors.
inline double sqrt_trace_floor(const std::vector<double>& eigenvalues, double clamp_tol) {
    double lmax = 0.0;
    for (double lam : eigenvalues) lmax = std::max(lmax, std::abs(lam));
    const double floor = lmax * 1e-13;
    double t = 0.0;
    for (double lam : eigenvalues) {
        if (lam < -clamp_tol) throw NegativeEigenvalue(lam);
        if (lam > floor) t += std::sqrt(lam);
    }
    return t;
}

inline ComplexMatrix sqrt_psd_snapped(const ComplexMatrix& a, double clamp_tol) {
    HermitianEigen es = herm_eig(a);
    double lmax = 0.0;
    for (double lam : es.eigenvalues) lmax = std::max(lmax, std::abs(lam));
    const double floor = lmax * 1e-13;
    const std::size_t n = a.rows();
    ComplexMatrix r(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const double lam = es.eigenvalues[k];
        if (lam < -clamp_tol) throw NegativeEigenvalue(lam);
        if (lam <= floor) continue;
        const double s = std::sqrt(lam);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                r(i, j) += s * es.eigenvectors(i, k) * std::conj(es.eigenvectors(j, k));
    }
    return r;
}

} // namespace detail

/// Uhlmann fidelity F(r1, r2) = (Tr sqrt(sqrt(r1) r2 sqrt(r1)))^2.
/// The inner product is re-Hermitized before the outer eigen step to stop
/// roundoff from breaking the Hermiticity precondition.
inline double fidelity(const DensityMatrix& r1, const DensityMatrix& r2) {
    if (r1.dim() != r2.dim()) throw DimensionMismatch("fidelity of states of unequal dimension");
    const ComplexMatrix s = detail::sqrt_psd_snapped(r1.mat(), 1e-9);
    const ComplexMatrix m = (s * r2.mat() * s).hermitian_part();
    HermitianEigen es = herm_eig(m);
    const double t = detail::sqrt_trace_floor(es.eigenvalues, 1e-9);
    double f = t * t;
    // absorb eps-level overshoot; anything larger is a genuine bug and stays visible
    if (f > 1.0 && f < 1.0 + 1e-9) f = 1.0;
    if (f < 0.0) f = 0.0;
    return f;
}

/// Trace distance (1/2) Tr |r1 - r2|.
inline double trace_distance(const DensityMatrix& r1, const DensityMatrix& r2) {
    if (r1.dim() != r2.dim())
        throw DimensionMismatch("trace distance of states of unequal dimension");
    return 0.5 * trace_norm(r1.mat() - r2.mat());
}

/// Haar-random pure state: normalized vector of iid complex normals.
inline PureState random_pure(std::size_t dim, Rng& rng) {
    if (dim < 1) throw OutOfRange("random_pure needs dim >= 1");
    std::vector<cplx> a(dim);
    for (cplx& z : a) z = rng.complex_normal();
    return PureState::normalized(std::move(a));
}

inline PureState random_pure(std::size_t dim, std::uint64_t seed) {
    Rng rng(seed);
    return random_pure(dim, rng);
}

/// Random density matrix from the Ginibre construction G G^dag / Tr[G G^dag]
/// with G of shape dim x rank.
inline DensityMatrix random_density(std::size_t dim, std::size_t rank, Rng& rng) {
    if (rank < 1 || rank > dim) throw BadRank("random_density needs 1 <= rank <= dim");
    ComplexMatrix g(dim, rank);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < rank; ++j) g(i, j) = rng.complex_normal();
    ComplexMatrix w = (g * g.adjoint()).hermitian_part();
    const double tr = w.trace().real();
    return DensityMatrix::unchecked(w * (1.0 / tr));
}

inline DensityMatrix random_density(std::size_t dim, std::size_t rank, std::uint64_t seed) {
    Rng rng(seed);
    return random_density(dim, rank, rng);
}

/// Haar-random unitary: Gram-Schmidt orthonormalization (two passes) of a
/// complex Ginibre matrix. With positive-diagonal R this QR factor is Haar
/// distributed as-is.
inline ComplexMatrix random_unitary(std::size_t dim, Rng& rng) {
    ComplexMatrix u(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) u(i, j) = rng.complex_normal();
    for (std::size_t j = 0; j < dim; ++j) {
        std::vector<cplx> w = u.column(j);
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t k = 0; k < j; ++k) {
                cplx proj = 0.0;
                for (std::size_t i = 0; i < dim; ++i) proj += std::conj(u(i, k)) * w[i];
                for (std::size_t i = 0; i < dim; ++i) w[i] -= proj * u(i, k);
            }
        }
        double norm = 0.0;
        for (const cplx& z : w) norm += std::norm(z);
        norm = std::sqrt(norm);
        for (std::size_t i = 0; i < dim; ++i) u(i, j) = w[i] / norm;
    }
    return u;
}

inline ComplexMatrix random_unitary(std::size_t dim, std::uint64_t seed) {
    Rng rng(seed);
    return random_unitary(dim, rng);
}

} // namespace qid
