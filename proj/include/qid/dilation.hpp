#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "qid/linalg.hpp"
#include "qid/matrix.hpp"
#include "qid/measurement.hpp"
#include "qid/states.hpp"

namespace qid {

/// Indirect measurement model: the system (first tensor factor) interacts
/// with an ancilla through a joint unitary, then a projective readout on the
/// ancilla basis -- grouped into outcomes by readout_partition -- produces the
/// classical result.
class IndirectModel {
public:
    IndirectModel(std::size_t dim_sys, std::size_t dim_anc, ComplexMatrix unitary,
                  PureState ancilla_init, std::vector<std::vector<std::size_t>> readout_partition,
                  double tol = 1e-9)
        : dim_sys_(dim_sys), dim_anc_(dim_anc), unitary_(std::move(unitary)),
          ancilla_init_(std::move(ancilla_init)), readout_(std::move(readout_partition)) {
        const std::size_t n = dim_sys_ * dim_anc_;
        if (!unitary_.is_square() || unitary_.rows() != n)
            throw DimensionMismatch("model unitary must act on dim_sys * dim_anc");
        const double defect =
            max_abs_diff(unitary_.adjoint() * unitary_, ComplexMatrix::identity(n));
        if (defect > tol)
            throw ValidationError("model unitary defect " + std::to_string(defect) +
                                  " exceeds tolerance");
        if (ancilla_init_.dim() != dim_anc_)
            throw DimensionMismatch("ancilla state dimension mismatch");
        std::vector<int> seen(dim_anc_, 0);
        for (const auto& cell : readout_)
            for (std::size_t a : cell) {
                if (a >= dim_anc_)
                    throw ValidationError("readout partition index out of range");
                if (seen[a]++) throw ValidationError("readout partition cells overlap");
            }
        for (std::size_t a = 0; a < dim_anc_; ++a)
            if (!seen[a]) throw ValidationError("readout partition does not cover the ancilla");
    }

    std::size_t dim_sys() const { return dim_sys_; }
    std::size_t dim_anc() const { return dim_anc_; }
    std::size_t n_outcomes() const { return readout_.size(); }
    const ComplexMatrix& unitary() const { return unitary_; }
    const PureState& ancilla_init() const { return ancilla_init_; }
    const std::vector<std::vector<std::size_t>>& readout_partition() const { return readout_; }

    /// Projector onto the ancilla indices of outcome k.
    ComplexMatrix readout_projector(std::size_t k) const {
        if (k >= readout_.size()) throw BadOutcomeIndex(k);
        ComplexMatrix p(dim_anc_, dim_anc_);
        for (std::size_t a : readout_[k]) p(a, a) = 1.0;
        return p;
    }

private:
    std::size_t dim_sys_;
    std::size_t dim_anc_;
    ComplexMatrix unitary_;
    PureState ancilla_init_;
    std::vector<std::vector<std::size_t>> readout_;
};

/// Build the indirect model of an instrument: ancilla dimension = number of
/// Kraus operators, ancilla starts in basis state 0, and the joint unitary
/// extends the isometry |psi>|0> -> sum_j (K_j|psi>) |j>. The completion is
/// deterministic, so equal instruments dilate to equal models.
inline IndirectModel dilate(const KrausInstrument& instr) {
    const std::size_t d = instr.dim();
    const std::size_t n = instr.n_kraus();
    const std::size_t dn = d * n;

    // Stinespring isometry columns: input |s'>|0| maps to sum_j K_j|s'> (x) |j>
    ComplexMatrix v(dn, d);
    for (std::size_t in = 0; in < d; ++in)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t s = 0; s < d; ++s) v(s * n + j, in) = instr.kraus()[j](s, in);

    const ComplexMatrix u0 = complete_isometry(v);

    // Route the isometry columns to joint inputs |s'>|0> (index s'*n) and the
    // fill columns to the remaining inputs, in order.
    ComplexMatrix u(dn, dn);
    std::size_t next_fill = d;
    for (std::size_t input = 0; input < dn; ++input) {
        const std::size_t src = (input % n == 0) ? input / n : next_fill++;
        for (std::size_t r = 0; r < dn; ++r) u(r, input) = u0(r, src);
    }

    return IndirectModel(d, n, std::move(u), PureState::basis(n, 0), instr.partition());
}

namespace detail {
inline ComplexMatrix joint_output(const IndirectModel& model, const DensityMatrix& rho) {
    if (rho.dim() != model.dim_sys())
        throw DimensionMismatch("state and model system dimensions differ");
    const ComplexMatrix joint_in = kron(rho.mat(), model.ancilla_init().projector_matrix());
    return model.unitary() * joint_in * model.unitary().adjoint();
}
} // namespace detail

/// Probability of outcome k in the model: Tr[(I (x) P_k) U (rho (x) sigma) U^dag].
inline double outcome_probability(const IndirectModel& model, const DensityMatrix& rho,
                                  std::size_t k) {
    if (k >= model.n_outcomes()) throw BadOutcomeIndex(k);
    const ComplexMatrix out = detail::joint_output(model, rho);
    cplx p = 0.0;
    for (std::size_t a : model.readout_partition()[k])
        for (std::size_t s = 0; s < model.dim_sys(); ++s)
            p += out(s * model.dim_anc() + a, s * model.dim_anc() + a);
    return p.real();
}

/// Conditional system state after reading outcome k on the ancilla:
/// Tr_A[(I (x) P_k) U (rho (x) sigma) U^dag (I (x) P_k)], normalized.
inline DensityMatrix conditional_from_model(const IndirectModel& model, const DensityMatrix& rho,
                                            std::size_t k) {
    if (k >= model.n_outcomes()) throw BadOutcomeIndex(k);
    const ComplexMatrix out = detail::joint_output(model, rho);
    const ComplexMatrix pk = kron(ComplexMatrix::identity(model.dim_sys()),
                                  model.readout_projector(k));
    const ComplexMatrix clipped = pk * out * pk;
    ComplexMatrix num =
        partial_trace(clipped, model.dim_sys(), model.dim_anc(), Subsystem::system)
            .hermitian_part();
    const double p = num.trace().real();
    if (p <= prob_floor) throw OutcomeProbabilityTooSmall(k, p);
    return DensityMatrix::unchecked(num * (1.0 / p));
}

/// Reduced ancilla state after the interaction, before any readout.
inline DensityMatrix ancilla_output(const IndirectModel& model, const DensityMatrix& rho) {
    const ComplexMatrix out = detail::joint_output(model, rho);
    return DensityMatrix::unchecked(
        partial_trace(out, model.dim_sys(), model.dim_anc(), Subsystem::ancilla)
            .hermitian_part());
}

/// Operator-Schmidt test: the model unitary factorizes as U_S (x) U_A iff the
/// realigned matrix has a single singular value carrying all the weight.
inline bool is_factorized(const IndirectModel& model, double tol) {
    const std::size_t ds = model.dim_sys();
    const std::size_t da = model.dim_anc();
    const ComplexMatrix& u = model.unitary();
    ComplexMatrix r(ds * ds, da * da);
    for (std::size_t s = 0; s < ds; ++s)
        for (std::size_t sp = 0; sp < ds; ++sp)
            for (std::size_t a = 0; a < da; ++a)
                for (std::size_t ap = 0; ap < da; ++ap)
                    r(s * ds + sp, a * da + ap) = u(s * da + a, sp * da + ap);
    // squared singular values from the smaller Gram matrix
    const ComplexMatrix gram = (ds <= da) ? ComplexMatrix(r * r.adjoint())
                                          : ComplexMatrix(r.adjoint() * r);
    HermitianEigen es = herm_eig(gram.hermitian_part());
    double total = 0.0;
    for (double lam : es.eigenvalues) total += std::max(lam, 0.0);
    if (total <= 0.0) return false;
    return es.eigenvalues.back() / total >= 1.0 - tol;
}

struct SignalingWitness {
    PureState state_a;
    PureState state_b;
    double fidelity;
};

/// Search for a pair of system inputs whose ancilla outputs differ. The
/// deterministic pool (basis states plus pairwise superpositions) spans the
/// Hermitian operators, so a non-constant system->ancilla map must separate
/// two of its members; `trials` extra random pairs sharpen the minimum.
inline SignalingWitness signaling_witness(const IndirectModel& model, std::size_t trials,
                                          std::uint64_t seed) {
    const std::size_t d = model.dim_sys();
    std::vector<PureState> pool;
    for (std::size_t i = 0; i < d; ++i) pool.push_back(PureState::basis(d, i));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j) {
            std::vector<cplx> p(d, 0.0), q(d, 0.0);
            p[i] = inv_sqrt2;
            p[j] = inv_sqrt2;
            q[i] = inv_sqrt2;
            q[j] = cplx(0.0, inv_sqrt2);
            pool.push_back(PureState::normalized(std::move(p)));
            pool.push_back(PureState::normalized(std::move(q)));
        }

    std::vector<DensityMatrix> outs;
    outs.reserve(pool.size());
    for (const PureState& s : pool) outs.push_back(ancilla_output(model, s.projector()));

    PureState best_a = pool[0];
    PureState best_b = pool.size() > 1 ? pool[1] : pool[0];
    double best_f = 2.0;
    for (std::size_t a = 0; a < pool.size(); ++a)
        for (std::size_t b = a + 1; b < pool.size(); ++b) {
            const double f = fidelity(outs[a], outs[b]);
            if (f < best_f) {
                best_f = f;
                best_a = pool[a];
                best_b = pool[b];
            }
        }

    Rng rng(seed);
    for (std::size_t t = 0; t < trials; ++t) {
        const PureState a = random_pure(d, rng);
        const PureState b = random_pure(d, rng);
        const double f =
            fidelity(ancilla_output(model, a.projector()), ancilla_output(model, b.projector()));
        if (f < best_f) {
            best_f = f;
            best_a = a;
            best_b = b;
        }
    }
    return {best_a, best_b, best_f};
}

} // namespace qid
