#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "qid/measurement.hpp"
#include "qid/states.hpp"

namespace qid {

enum class DiscriminationMethod { helstrom_optimal, classical_outcomes, pure_overlap };

inline std::string_view to_string(DiscriminationMethod m) {
    switch (m) {
        case DiscriminationMethod::helstrom_optimal: return "helstrom-optimal";
        case DiscriminationMethod::classical_outcomes: return "classical-outcomes";
        case DiscriminationMethod::pure_overlap: return "pure-overlap";
    }
    return "?";
}

struct DiscriminationResult {
    double p_error;
    DiscriminationMethod method;
};

/// Minimum-error probability for two equally likely states:
/// p_e = 1/2 - Tr|r1 - r2| / 4. Equal priors are hard-wired.
inline DiscriminationResult helstrom_error(const DensityMatrix& r1, const DensityMatrix& r2) {
    if (r1.dim() != r2.dim())
        throw DimensionMismatch("helstrom_error needs states of equal dimension");
    const double p = 0.5 - trace_norm(r1.mat() - r2.mat()) / 4.0;
    return {std::max(p, 0.0), DiscriminationMethod::helstrom_optimal};
}

/// Error probability for two equally likely pure states with overlap c:
/// (1 - sqrt(1 - c^2)) / 2.
inline double pure_error_from_overlap(double c) {
    if (!(c >= 0.0 && c <= 1.0)) throw OutOfRange("overlap must lie in [0, 1]");
    return (1.0 - std::sqrt(1.0 - c * c)) / 2.0;
}

/// Binary entropy H2(p) = -p log2 p - (1-p) log2(1-p), in bits.
/// Computed through the symmetric two-term form; the 0*log(0) branches keep
/// the endpoints exactly 0 and the symmetry H2(p) = H2(1-p) exact whenever
/// both p and 1-p are exact complements.
inline double binary_entropy(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw OutOfRange("binary_entropy needs p in [0, 1]");
    const double q = 1.0 - p;
    double h = 0.0;
    if (p >= 1e-300) h -= p * std::log2(p);
    if (q >= 1e-15) h -= q * std::log2(q);
    return h;
}

/// I = 1 - H2(p_e): bits of information gained about which of two equally
/// likely states is present, given guessing error p_e.
inline double mutual_information(double p_e) {
    if (!(p_e >= 0.0 && p_e <= 1.0)) throw OutOfRange("mutual_information needs p_e in [0, 1]");
    return 1.0 - binary_entropy(p_e);
}

/// Error achieved by maximum-likelihood guessing on the instrument's outcome
/// distribution: 1/2 - (1/4) sum_k |p_k(r1) - p_k(r2)|. Never beats the
/// Helstrom optimum.
inline DiscriminationResult classical_outcome_error(const KrausInstrument& instr,
                                                    const DensityMatrix& r1,
                                                    const DensityMatrix& r2) {
    if (r1.dim() != r2.dim() || r1.dim() != instr.dim())
        throw DimensionMismatch("classical_outcome_error needs matching dimensions");
    double var = 0.0;
    for (std::size_t k = 0; k < instr.n_outcomes(); ++k)
        var += std::abs(outcome_probability(instr, r1, k) - outcome_probability(instr, r2, k));
    return {0.5 - var / 4.0, DiscriminationMethod::classical_outcomes};
}

struct InequalityCheck {
    std::string name;
    double max_violation;
    double location;
};

struct EntropyInequalityReport {
    std::vector<InequalityCheck> checks;

    double max_violation() const {
        double v = 0.0;
        for (const auto& c : checks) v = std::max(v, c.max_violation);
        return v;
    }
};

/// Grid checks of the entropy inequalities behind the tradeoff bound:
///   (a) 4p(1-p) <= H2(p)                       on p in [0,1]
///   (b) x <= H2(1/2 - sqrt(1-x)/2)             on x in [0,1]
///   (c) x <= H2(1/2 + sqrt(1-x)/2)             on x in [0,1]
///   (d) H2 monotonically increasing            on [0, 1/2]
/// Closed grids including both endpoints; returns the worst violation and
/// where it happened.
inline EntropyInequalityReport entropy_inequality_suite(std::size_t grid_points) {
    if (grid_points < 2) throw OutOfRange("entropy_inequality_suite needs >= 2 grid points");
    const std::size_t n = grid_points;
    auto grid_at = [n](std::size_t i) {
        return static_cast<double>(i) / static_cast<double>(n - 1);
    };

    EntropyInequalityReport rep;
    rep.checks = {{"4p(1-p) <= H2(p)", 0.0, 0.0},
                  {"x <= H2(1/2 - sqrt(1-x)/2)", 0.0, 0.0},
                  {"x <= H2(1/2 + sqrt(1-x)/2)", 0.0, 0.0},
                  {"H2 monotone on [0, 1/2]", 0.0, 0.0}};

    auto track = [&rep](std::size_t which, double violation, double where) {
        if (violation > rep.checks[which].max_violation) {
            rep.checks[which].max_violation = violation;
            rep.checks[which].location = where;
        }
    };

    double prev_h = 0.0;
    double prev_p = 0.0;
    bool have_prev = false;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = grid_at(i);
        const double h = binary_entropy(x);
        track(0, 4.0 * x * (1.0 - x) - h, x);
        const double s = std::sqrt(std::max(1.0 - x, 0.0));
        track(1, x - binary_entropy(0.5 - 0.5 * s), x);
        track(2, x - binary_entropy(0.5 + 0.5 * s), x);
        if (x <= 0.5) {
            if (have_prev) track(3, prev_h - h, prev_p);
            prev_h = h;
            prev_p = x;
            have_prev = true;
        }
    }
    return rep;
}

} // namespace qid
