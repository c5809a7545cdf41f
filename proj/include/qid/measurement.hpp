#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "qid/linalg.hpp"
#include "qid/matrix.hpp"
#include "qid/rng.hpp"
#include "qid/states.hpp"

namespace qid {

/// Outcomes with probability at or below this floor are refused rather than
/// renormalized; dividing by ~0 only amplifies roundoff into an invalid state.
inline constexpr double prob_floor = 1e-12;

/// Positive operator-valued measure: effects Pi_k >= 0 with sum_k Pi_k = I.
class POVM {
public:
    POVM(std::size_t dim, std::vector<ComplexMatrix> effects, double tol = 1e-9)
        : dim_(dim), effects_(std::move(effects)) {
        if (effects_.empty()) throw ValidationError("POVM needs at least one effect");
        ComplexMatrix sum(dim_, dim_);
        for (std::size_t k = 0; k < effects_.size(); ++k) {
            const ComplexMatrix& e = effects_[k];
            if (!e.is_square() || e.rows() != dim_)
                throw ValidationError("effect " + std::to_string(k) + " has wrong dimension");
            const double defect = e.herm_defect();
            if (defect > tol)
                throw ValidationError("effect " + std::to_string(k) + " is not Hermitian");
            HermitianEigen es = herm_eig(e.hermitian_part());
            if (es.eigenvalues.front() < -tol)
                throw ValidationError("effect " + std::to_string(k) +
                                      " has negative eigenvalue " +
                                      std::to_string(es.eigenvalues.front()));
            sum += e;
        }
        const double defect = max_abs_diff(sum, ComplexMatrix::identity(dim_));
        if (defect > tol)
            throw ValidationError("POVM effects do not sum to identity (defect " +
                                  std::to_string(defect) + ")");
    }

    std::size_t dim() const { return dim_; }
    std::size_t n_outcomes() const { return effects_.size(); }
    const std::vector<ComplexMatrix>& effects() const { return effects_; }
    const ComplexMatrix& effect(std::size_t k) const { return effects_.at(k); }

private:
    std::size_t dim_;
    std::vector<ComplexMatrix> effects_;
};

/// A quantum instrument: Kraus operators {K_j} with sum_j K_j^dag K_j = I,
/// grouped into outcomes by an index partition {I_k}.
class KrausInstrument {
public:
    KrausInstrument(std::size_t dim, std::vector<ComplexMatrix> kraus,
                    std::vector<std::vector<std::size_t>> partition, double tol = 1e-9)
        : dim_(dim), kraus_(std::move(kraus)), partition_(std::move(partition)) {
        if (kraus_.empty()) throw ValidationError("instrument needs at least one Kraus operator");
        ComplexMatrix sum(dim_, dim_);
        for (std::size_t j = 0; j < kraus_.size(); ++j) {
            if (!kraus_[j].is_square() || kraus_[j].rows() != dim_)
                throw ValidationError("Kraus operator " + std::to_string(j) +
                                      " has wrong dimension");
            sum += kraus_[j].adjoint() * kraus_[j];
        }
        const double defect = max_abs_diff(sum, ComplexMatrix::identity(dim_));
        if (defect > tol)
            throw ValidationError("Kraus completeness defect " + std::to_string(defect) +
                                  " exceeds tolerance");
        std::vector<int> seen(kraus_.size(), 0);
        for (const auto& cell : partition_)
            for (std::size_t j : cell) {
                if (j >= kraus_.size())
                    throw ValidationError("partition refers to Kraus index " + std::to_string(j) +
                                          " out of range");
                if (seen[j]++)
                    throw ValidationError("partition cells are not disjoint at index " +
                                          std::to_string(j));
            }
        for (std::size_t j = 0; j < kraus_.size(); ++j)
            if (!seen[j])
                throw ValidationError("partition does not cover Kraus index " + std::to_string(j));
    }

    /// One outcome per Kraus operator.
    static KrausInstrument fine_grained(std::size_t dim, std::vector<ComplexMatrix> kraus,
                                        double tol = 1e-9) {
        std::vector<std::vector<std::size_t>> part(kraus.size());
        for (std::size_t j = 0; j < kraus.size(); ++j) part[j] = {j};
        return KrausInstrument(dim, std::move(kraus), std::move(part), tol);
    }

    std::size_t dim() const { return dim_; }
    std::size_t n_kraus() const { return kraus_.size(); }
    std::size_t n_outcomes() const { return partition_.size(); }
    const std::vector<ComplexMatrix>& kraus() const { return kraus_; }
    const std::vector<std::vector<std::size_t>>& partition() const { return partition_; }

private:
    std::size_t dim_;
    std::vector<ComplexMatrix> kraus_;
    std::vector<std::vector<std::size_t>> partition_;
};

/// The induced POVM: Pi_k = sum_{j in I_k} K_j^dag K_j.
inline POVM effects_of(const KrausInstrument& instr) {
    std::vector<ComplexMatrix> effects;
    effects.reserve(instr.n_outcomes());
    for (const auto& cell : instr.partition()) {
        ComplexMatrix e(instr.dim(), instr.dim());
        for (std::size_t j : cell) e += instr.kraus()[j].adjoint() * instr.kraus()[j];
        effects.push_back(e.hermitian_part());
    }
    return POVM(instr.dim(), std::move(effects));
}

/// Born rule p_k = Tr[rho Pi_k].
inline double outcome_probability(const KrausInstrument& instr, const DensityMatrix& rho,
                                  std::size_t k) {
    if (k >= instr.n_outcomes()) throw BadOutcomeIndex(k);
    if (rho.dim() != instr.dim())
        throw DimensionMismatch("state and instrument dimensions differ");
    cplx p = 0.0;
    for (std::size_t j : instr.partition()[k])
        p += (instr.kraus()[j] * rho.mat() * instr.kraus()[j].adjoint()).trace();
    return p.real();
}

/// State-reduction rule: rho' = sum_{j in I_k} K_j rho K_j^dag / p_k given
/// outcome k. Refuses outcomes with p_k <= prob_floor.
inline DensityMatrix conditional_output(const KrausInstrument& instr, const DensityMatrix& rho,
                                        std::size_t k) {
    if (k >= instr.n_outcomes()) throw BadOutcomeIndex(k);
    if (rho.dim() != instr.dim())
        throw DimensionMismatch("state and instrument dimensions differ");
    ComplexMatrix num(instr.dim(), instr.dim());
    for (std::size_t j : instr.partition()[k])
        num += instr.kraus()[j] * rho.mat() * instr.kraus()[j].adjoint();
    num = num.hermitian_part();
    const double p = num.trace().real();
    if (p <= prob_floor) throw OutcomeProbabilityTooSmall(k, p);
    return DensityMatrix::unchecked(num * (1.0 / p));
}

/// Non-selective channel: rho' = sum_j K_j rho K_j^dag.
inline DensityMatrix unconditional_output(const KrausInstrument& instr, const DensityMatrix& rho) {
    if (rho.dim() != instr.dim())
        throw DimensionMismatch("state and instrument dimensions differ");
    ComplexMatrix out(instr.dim(), instr.dim());
    for (const ComplexMatrix& k : instr.kraus()) out += k * rho.mat() * k.adjoint();
    return DensityMatrix::unchecked(out.hermitian_part());
}

/// A measurement is informative iff the outcome statistics depend on the
/// input state, i.e. some effect deviates from (Tr Pi_k / d) * I.
inline bool is_informative(const POVM& povm, double tol = 1e-9) {
    const double d = static_cast<double>(povm.dim());
    for (const ComplexMatrix& e : povm.effects()) {
        const double scale = e.trace().real() / d;
        ComplexMatrix flat = ComplexMatrix::identity(povm.dim()) * scale;
        if (max_abs_diff(e, flat) > tol) return true;
    }
    return false;
}

/// The map L_k(rho) = sum_{j in I_k} K_j rho K_j^dag as a d^2 x d^2 matrix on
/// column-stacked operators. Under that stacking the matrix is
/// sum_j kron(conj(K_j), K_j); the agreement with the direct Kraus route is a
/// tested property, not an assumption.
class Superoperator {
public:
    Superoperator(std::size_t dim, ComplexMatrix mat) : dim_(dim), mat_(std::move(mat)) {
        if (mat_.rows() != dim * dim || mat_.cols() != dim * dim)
            throw DimensionMismatch("superoperator matrix must be d^2 x d^2");
    }

    std::size_t dim() const { return dim_; }
    const ComplexMatrix& mat() const { return mat_; }

    ComplexMatrix apply(const ComplexMatrix& x) const {
        return unvec(mat_ * vec(x), dim_, dim_);
    }

private:
    std::size_t dim_;
    ComplexMatrix mat_;
};

inline Superoperator superoperator_matrix(const KrausInstrument& instr, std::size_t k) {
    if (k >= instr.n_outcomes()) throw BadOutcomeIndex(k);
    const std::size_t d = instr.dim();
    ComplexMatrix m(d * d, d * d);
    for (std::size_t j : instr.partition()[k])
        m += kron(instr.kraus()[j].conjugate(), instr.kraus()[j]);
    return Superoperator(d, m);
}

namespace detail {

// Top eigenvector (largest |eigenvalue|) of a Hermitian matrix.
inline std::vector<cplx> dominant_eigenvector(const ComplexMatrix& h) {
    HermitianEigen es = herm_eig(h);
    const std::size_t lo = 0, hi = es.eigenvalues.size() - 1;
    const std::size_t pick = std::abs(es.eigenvalues[lo]) > std::abs(es.eigenvalues[hi]) ? lo : hi;
    return es.eigenvectors.column(pick);
}

// Turn one vectorized operator into a pure-state candidate: reshape, take the
// Hermitian part (or the anti-Hermitian part if that vanishes), then the top
// eigenvector.
inline void push_candidate_from_opvec(const ComplexMatrix& w, std::size_t d,
                                      std::vector<PureState>& out) {
    ComplexMatrix x = unvec(w, d, d);
    ComplexMatrix h = x.hermitian_part();
    if (h.max_abs() < 1e-12) h = (x * cplx(0.0, 1.0)).hermitian_part();
    if (h.max_abs() < 1e-12) return;
    std::vector<cplx> v = dominant_eigenvector(h);
    double n = 0.0;
    for (const cplx& z : v) n += std::norm(z);
    if (n < 1e-12) return;
    out.push_back(PureState::normalized(std::move(v)));
}

} // namespace detail

/// Pure states left unchanged by the outcome-k branch of the instrument:
/// |psi> with L_k(|psi><psi|) proportional to |psi><psi| (and p_k > 0).
///
/// Candidates are harvested from Hermitian surrogates of the (generally
/// non-Hermitian) superoperator -- its Hermitian/anti-Hermitian parts, M^dag M,
/// M M^dag, a power iteration, the effect's eigenvectors and the basis states --
/// and only candidates passing the direct fixed-point test are returned.
/// The verification step carries the correctness; the candidate list makes the
/// search best-effort rather than exhaustive.
inline std::vector<PureState> unmodified_pure_states(const KrausInstrument& instr, std::size_t k,
                                                     double tol) {
    if (k >= instr.n_outcomes()) throw BadOutcomeIndex(k);
    const std::size_t d = instr.dim();
    const Superoperator sop = superoperator_matrix(instr, k);
    const ComplexMatrix& m = sop.mat();
    const ComplexMatrix mh = m.adjoint();

    std::vector<PureState> candidates;
    for (std::size_t i = 0; i < d; ++i) candidates.push_back(PureState::basis(d, i));

    const ComplexMatrix effect = effects_of(instr).effect(k);
    {
        HermitianEigen es = herm_eig(effect);
        for (std::size_t c = 0; c < d; ++c)
            candidates.push_back(PureState::normalized(es.eigenvectors.column(c)));
    }

    const ComplexMatrix surrogates[] = {
        (m + mh) * 0.5,
        ((m - mh) * cplx(0.0, -0.5)).hermitian_part(),
        mh * m,
        m * mh,
    };
    for (const ComplexMatrix& h : surrogates) {
        HermitianEigen es = herm_eig(h.hermitian_part());
        for (std::size_t c = 0; c < d * d; ++c) {
            ComplexMatrix w(d * d, 1);
            w.set_column(0, es.eigenvectors.column(c));
            detail::push_candidate_from_opvec(w, d, candidates);
        }
    }

    // power iteration from the maximally mixed operator
    {
        ComplexMatrix w = vec(ComplexMatrix::identity(d) * (1.0 / static_cast<double>(d)));
        bool alive = true;
        for (int it = 0; it < 200 && alive; ++it) {
            w = m * w;
            const double n = w.frobenius_norm();
            if (n < 1e-300) alive = false;
            else w *= cplx(1.0 / n);
        }
        if (alive) detail::push_candidate_from_opvec(w, d, candidates);
    }

    std::vector<PureState> accepted;
    for (const PureState& psi : candidates) {
        bool dup = false;
        for (const PureState& a : accepted)
            if (pure_overlap(a, psi) > 1.0 - 1e-9) {
                dup = true;
                break;
            }
        if (dup) continue;
        const DensityMatrix proj = psi.projector();
        const double p = outcome_probability(instr, proj, k);
        if (p <= prob_floor) continue;
        const DensityMatrix out = conditional_output(instr, proj, k);
        if (trace_distance(out, proj) < tol) accepted.push_back(psi.phase_canonical());
    }
    return accepted;
}

/// Random instrument: Kraus operators read off the first block-column of a
/// Haar unitary on dim * (n_outcomes * kraus_per_outcome) dimensions, so
/// completeness holds by construction. Outcome k owns the consecutive block
/// of kraus_per_outcome operators.
inline KrausInstrument random_instrument(std::size_t dim, std::size_t n_outcomes,
                                         std::size_t kraus_per_outcome, Rng& rng) {
    if (dim < 1 || n_outcomes < 1 || kraus_per_outcome < 1)
        throw OutOfRange("random_instrument needs all counts >= 1");
    const std::size_t n = n_outcomes * kraus_per_outcome;
    const ComplexMatrix u = random_unitary(dim * n, rng);
    std::vector<ComplexMatrix> kraus(n, ComplexMatrix(dim, dim));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t r = 0; r < dim; ++r)
            for (std::size_t c = 0; c < dim; ++c) kraus[j](r, c) = u(r * n + j, c * n);
    std::vector<std::vector<std::size_t>> partition(n_outcomes);
    for (std::size_t k = 0; k < n_outcomes; ++k)
        for (std::size_t i = 0; i < kraus_per_outcome; ++i)
            partition[k].push_back(k * kraus_per_outcome + i);
    return KrausInstrument(dim, std::move(kraus), std::move(partition));
}

inline KrausInstrument random_instrument(std::size_t dim, std::size_t n_outcomes,
                                         std::size_t kraus_per_outcome, std::uint64_t seed) {
    Rng rng(seed);
    return random_instrument(dim, n_outcomes, kraus_per_outcome, rng);
}

} // namespace qid
