#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qid {

/// Base class of every error thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotSquare : Error {
    using Error::Error;
};

struct NotHermitian : Error {
    double max_asymmetry;
    explicit NotHermitian(double asym)
        : Error("matrix is not Hermitian: max |A - A^dag| entry = " + std::to_string(asym)),
          max_asymmetry(asym) {}
};

struct NegativeEigenvalue : Error {
    double value;
    explicit NegativeEigenvalue(double lambda)
        : Error("matrix has negative eigenvalue " + std::to_string(lambda)), value(lambda) {}
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct ColumnsNotOrthonormal : Error {
    using Error::Error;
};

struct BadRank : Error {
    using Error::Error;
};

struct BadOutcomeIndex : Error {
    std::size_t outcome;
    explicit BadOutcomeIndex(std::size_t k)
        : Error("outcome index " + std::to_string(k) + " out of range"), outcome(k) {}
};

struct OutcomeProbabilityTooSmall : Error {
    std::size_t outcome;
    double probability;
    OutcomeProbabilityTooSmall(std::size_t k, double p)
        : Error("outcome " + std::to_string(k) + " has probability " + std::to_string(p) +
                " below the conditioning floor"),
          outcome(k), probability(p) {}
};

struct OutOfRange : Error {
    using Error::Error;
};

/// A joint evolution produced system-apparatus entanglement where a product
/// state was required.
struct EntanglingEvolution : Error {
    using Error::Error;
};

struct UninformativeInstrument : Error {
    using Error::Error;
};

/// A value-type invariant was violated at construction (state not PSD,
/// Kraus set not complete, partition broken, ...).
struct ValidationError : Error {
    using Error::Error;
};

/// Malformed JSON input (missing field, wrong shape, ...).
struct ParseError : Error {
    using Error::Error;
};

} // namespace qid
