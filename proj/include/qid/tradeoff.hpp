#pragma once

#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "qid/dilation.hpp"
#include "qid/discrimination.hpp"
#include "qid/measurement.hpp"
#include "qid/states.hpp"

namespace qid {

/// Slack below which the bound counts as violated. Fidelity noise at these
/// dimensions sits near 1e-11, so -1e-9 leaves two orders of margin.
inline constexpr double bound_slack_tol = -1e-9;

/// One evaluated instance of the information-disturbance bound
/// 1 - F(rho, rho') >= 1 - H2(p_e), stored as slack = H2(p_e) - F.
struct TradeoffRecord {
    std::string instrument_label;
    std::string input_label;
    double fid_in_out = 0.0;
    double disturbance = 0.0;
    double p_e_opt = 0.0;
    double entropy = 0.0;
    double info = 0.0;
    double slack = 0.0;
    bool holds = false;
};

namespace detail {
inline TradeoffRecord make_record(double fid, double p_e) {
    TradeoffRecord r;
    r.fid_in_out = fid;
    r.disturbance = 1.0 - fid;
    r.p_e_opt = p_e;
    r.entropy = binary_entropy(p_e);
    r.info = 1.0 - r.entropy;
    r.slack = r.entropy - fid;
    r.holds = r.slack >= bound_slack_tol;
    return r;
}
} // namespace detail

struct FamilyPoint {
    double param;
    TradeoffRecord record;
};

/// F(r1, r2) <= H2(p_e) with p_e the optimal (Helstrom) error between the two
/// states. This is the inequality the tradeoff reduces to.
inline TradeoffRecord fidelity_entropy_bound(const DensityMatrix& r1, const DensityMatrix& r2) {
    if (r1.dim() != r2.dim())
        throw DimensionMismatch("fidelity_entropy_bound needs equal dimensions");
    return detail::make_record(fidelity(r1, r2), helstrom_error(r1, r2).p_error);
}

/// The tradeoff for an instrument acting on rho: rho' is the non-selective
/// output and p_e the optimal error in telling rho from rho'.
inline TradeoffRecord infodist_check(const KrausInstrument& instr, const DensityMatrix& rho) {
    const DensityMatrix out = unconditional_output(instr, rho);
    return fidelity_entropy_bound(rho, out);
}

/// Pure-state version of the tradeoff through the indirect model, valid when
/// the joint evolution keeps system and apparatus in a product state. Fails
/// with EntanglingEvolution otherwise (use infodist_check in that case).
inline TradeoffRecord pure_tradeoff_check(const IndirectModel& model, const PureState& psi) {
    if (psi.dim() != model.dim_sys())
        throw DimensionMismatch("pure_tradeoff_check: state dimension mismatch");
    const std::size_t ds = model.dim_sys();
    const std::size_t da = model.dim_anc();

    auto evolve_product = [&](const PureState& in) -> std::pair<PureState, PureState> {
        // joint vector U (in (x) ancilla_init), reshaped to ds x da
        ComplexMatrix joint(ds * da, 1);
        for (std::size_t s = 0; s < ds; ++s)
            for (std::size_t a = 0; a < da; ++a)
                joint(s * da + a, 0) = in[s] * model.ancilla_init()[a];
        joint = model.unitary() * joint;
        ComplexMatrix psi_mat(ds, da);
        for (std::size_t s = 0; s < ds; ++s)
            for (std::size_t a = 0; a < da; ++a) psi_mat(s, a) = joint(s * da + a, 0);

        HermitianEigen es = herm_eig((psi_mat * psi_mat.adjoint()).hermitian_part());
        const double second = es.eigenvalues.size() > 1
                                  ? std::sqrt(std::max(es.eigenvalues[es.eigenvalues.size() - 2], 0.0))
                                  : 0.0;
        if (second > 1e-8)
            throw EntanglingEvolution(
                "joint evolution entangles system and apparatus (second Schmidt coefficient " +
                std::to_string(second) + ")");

        const PureState sys_out = PureState::normalized(es.eigenvectors.column(ds - 1));
        std::vector<cplx> app(da, 0.0);
        for (std::size_t a = 0; a < da; ++a) {
            cplx s = 0.0;
            for (std::size_t r = 0; r < ds; ++r) s += std::conj(sys_out[r]) * psi_mat(r, a);
            app[a] = s;
        }
        return {sys_out, PureState::normalized(std::move(app))};
    };

    const auto [psi_out, app_a] = evolve_product(psi);
    const auto [psi_out2, app_b] = evolve_product(psi_out);
    (void)psi_out2;

    const double fid = std::norm(inner_product(psi, psi_out));
    const double p_e = pure_error_from_overlap(pure_overlap(app_a, app_b));
    return detail::make_record(fid, p_e);
}

/// Fidelity before vs after conditioning both states on the same outcome k.
/// Returns (F_in, F_out). Channel monotonicity guarantees that SOME outcome
/// satisfies F_out >= F_in for every pair (sum_k sqrt(p1k p2k F_k) bounds
/// sqrt(F_in) from above with sum_k sqrt(p1k p2k) <= 1); a single fixed
/// branch can lower the normalized fidelity, e.g. a filter diag(eps, 1) on a
/// nearly parallel pure pair. For a one-outcome (trace-preserving) instrument
/// the branch is the whole channel and F_out >= F_in holds outright.
inline std::pair<double, double> monotonicity_check(const KrausInstrument& instr,
                                                    const DensityMatrix& r1,
                                                    const DensityMatrix& r2, std::size_t k) {
    const double p1 = outcome_probability(instr, r1, k);
    const double p2 = outcome_probability(instr, r2, k);
    if (p1 <= prob_floor) throw OutcomeProbabilityTooSmall(k, p1);
    if (p2 <= prob_floor) throw OutcomeProbabilityTooSmall(k, p2);
    const double f_in = fidelity(r1, r2);
    const double f_out =
        fidelity(conditional_output(instr, r1, k), conditional_output(instr, r2, k));
    return {f_in, f_out};
}

struct FidelityIncreaseWitness {
    DensityMatrix state_a;
    DensityMatrix state_b;
    std::size_t outcome;
    double fid_in;
    double fid_out;
    double increase;
};

namespace detail {
inline std::vector<PureState> witness_pool(std::size_t d) {
    std::vector<PureState> pool;
    for (std::size_t i = 0; i < d; ++i) pool.push_back(PureState::basis(d, i));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const cplx units[] = {cplx(1.0, 0.0), cplx(-1.0, 0.0), cplx(0.0, 1.0), cplx(0.0, -1.0)};
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j)
            for (const cplx& u : units) {
                std::vector<cplx> a(d, 0.0);
                a[i] = inv_sqrt2;
                a[j] = u * inv_sqrt2;
                pool.push_back(PureState::normalized(std::move(a)));
            }
    return pool;
}
} // namespace detail

/// Look for a pair of states whose fidelity strictly increases under some
/// outcome branch -- the effect every informative measurement must have on at
/// least one pair. Deterministic pairs (basis states first, then the
/// unbiased superpositions) are scanned before `trials` random pure pairs;
/// the witness with the largest increase wins.
inline FidelityIncreaseWitness fidelity_increase_search(const KrausInstrument& instr,
                                                        std::size_t trials, std::uint64_t seed) {
    if (!is_informative(effects_of(instr)))
        throw UninformativeInstrument("the fidelity-increase claim needs an informative POVM");

    const std::size_t d = instr.dim();
    FidelityIncreaseWitness best{DensityMatrix::maximally_mixed(d),
                                 DensityMatrix::maximally_mixed(d), 0, 0.0, 0.0, -1.0};

    auto consider = [&](const DensityMatrix& a, const DensityMatrix& b) {
        const double f_in = fidelity(a, b);
        for (std::size_t k = 0; k < instr.n_outcomes(); ++k) {
            if (outcome_probability(instr, a, k) <= prob_floor) continue;
            if (outcome_probability(instr, b, k) <= prob_floor) continue;
            const double f_out =
                fidelity(conditional_output(instr, a, k), conditional_output(instr, b, k));
            if (f_out - f_in > best.increase)
                best = {a, b, k, f_in, f_out, f_out - f_in};
        }
    };

    const std::vector<PureState> pool = detail::witness_pool(d);
    std::vector<DensityMatrix> projs;
    projs.reserve(pool.size());
    for (const PureState& s : pool) projs.push_back(s.projector());
    for (std::size_t a = 0; a < projs.size(); ++a)
        for (std::size_t b = a + 1; b < projs.size(); ++b) consider(projs[a], projs[b]);

    Rng rng(seed);
    for (std::size_t t = 0; t < trials; ++t) {
        const DensityMatrix a = random_pure(d, rng).projector();
        const DensityMatrix b = random_pure(d, rng).projector();
        consider(a, b);
    }
    return best;
}

/// One-parameter qubit family sweeping measurement strength:
///   K0 = sqrt((1+eta)/2)|0><0| + sqrt((1-eta)/2)|1><1|
///   K1 = sqrt((1-eta)/2)|0><0| + sqrt((1+eta)/2)|1><1|
/// eta = 0 is uninformative, eta = 1 the sharp basis measurement.
/// Completeness is exact by construction.
inline KrausInstrument weak_family(double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) throw OutOfRange("weak_family needs eta in [0, 1]");
    const double hi = std::sqrt((1.0 + eta) / 2.0);
    const double lo = std::sqrt((1.0 - eta) / 2.0);
    ComplexMatrix k0(2, 2), k1(2, 2);
    k0(0, 0) = hi;
    k0(1, 1) = lo;
    k1(0, 0) = lo;
    k1(1, 1) = hi;
    return KrausInstrument::fine_grained(2, {k0, k1});
}

/// Evaluate the tradeoff along the weak_family grid (eta uniform on [0, 1])
/// for a fixed qubit input.
inline std::vector<FamilyPoint> saturation_scan(std::size_t n_points, const DensityMatrix& input) {
    if (input.dim() != 2) throw DimensionMismatch("saturation_scan expects a qubit input");
    if (n_points < 3) throw OutOfRange("saturation_scan needs at least 3 grid points");
    std::vector<FamilyPoint> points;
    points.reserve(n_points);
    for (std::size_t i = 0; i < n_points; ++i) {
        const double eta = static_cast<double>(i) / static_cast<double>(n_points - 1);
        TradeoffRecord rec = infodist_check(weak_family(eta), input);
        rec.instrument_label = "weak_family";
        points.push_back({eta, std::move(rec)});
    }
    return points;
}

namespace detail {
inline std::string fmt12(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}
} // namespace detail

/// CSV emitter for scans: 12 significant digits, '.' decimal separator, LF
/// line endings, header row included.
inline void write_scan_csv(std::ostream& os, const std::vector<FamilyPoint>& points) {
    os << "param,fidelity,p_e,entropy,info,disturbance,slack,holds\n";
    for (const FamilyPoint& fp : points) {
        const TradeoffRecord& r = fp.record;
        os << detail::fmt12(fp.param) << ',' << detail::fmt12(r.fid_in_out) << ','
           << detail::fmt12(r.p_e_opt) << ',' << detail::fmt12(r.entropy) << ','
           << detail::fmt12(r.info) << ',' << detail::fmt12(r.disturbance) << ','
           << detail::fmt12(r.slack) << ',' << (r.holds ? "true" : "false") << '\n';
    }
}

} // namespace qid
