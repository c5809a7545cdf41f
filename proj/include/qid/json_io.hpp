#pragma once

#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qid/matrix.hpp"
#include "qid/measurement.hpp"
#include "qid/states.hpp"

namespace qid {

namespace detail {

inline cplx parse_entry(const nlohmann::json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ParseError(where + " must be a [re, im] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline const nlohmann::json& require_field(const nlohmann::json& j, const char* name) {
    auto it = j.find(name);
    if (it == j.end()) throw ParseError(std::string("missing field \"") + name + "\"");
    return *it;
}

inline std::size_t parse_positive_int(const nlohmann::json& j, const char* name) {
    if (!j.is_number_integer() || j.get<long long>() < 1)
        throw ParseError(std::string("field \"") + name + "\" must be a positive integer");
    return static_cast<std::size_t>(j.get<long long>());
}

} // namespace detail

/// Instrument schema:
///   {"dim": d, "kraus": [[ [re,im], ... dim*dim entries row-major ], ...],
///    "partition": [[j, ...], ...]}
inline KrausInstrument load_instrument_json(const nlohmann::json& j, double tol = 1e-9) {
    if (!j.is_object()) throw ParseError("instrument JSON must be an object");
    const std::size_t dim = detail::parse_positive_int(detail::require_field(j, "dim"), "dim");

    const nlohmann::json& jk = detail::require_field(j, "kraus");
    if (!jk.is_array() || jk.empty()) throw ParseError("field \"kraus\" must be a non-empty array");
    std::vector<ComplexMatrix> kraus;
    for (std::size_t op = 0; op < jk.size(); ++op) {
        const nlohmann::json& jop = jk[op];
        const std::string where = "kraus[" + std::to_string(op) + "]";
        if (!jop.is_array() || jop.size() != dim * dim)
            throw ParseError(where + " must hold dim*dim [re, im] pairs (row-major)");
        std::vector<cplx> entries(dim * dim);
        for (std::size_t e = 0; e < entries.size(); ++e)
            entries[e] = detail::parse_entry(jop[e], where + "[" + std::to_string(e) + "]");
        kraus.emplace_back(dim, dim, std::move(entries));
    }

    const nlohmann::json& jp = detail::require_field(j, "partition");
    if (!jp.is_array() || jp.empty())
        throw ParseError("field \"partition\" must be a non-empty array of index lists");
    std::vector<std::vector<std::size_t>> partition;
    for (std::size_t c = 0; c < jp.size(); ++c) {
        if (!jp[c].is_array())
            throw ParseError("partition[" + std::to_string(c) + "] must be an array of indices");
        std::vector<std::size_t> cell;
        for (const auto& idx : jp[c]) {
            if (!idx.is_number_integer() || idx.get<long long>() < 0)
                throw ParseError("partition[" + std::to_string(c) +
                                 "] must hold non-negative integers");
            cell.push_back(static_cast<std::size_t>(idx.get<long long>()));
        }
        partition.push_back(std::move(cell));
    }

    return KrausInstrument(dim, std::move(kraus), std::move(partition), tol);
}

/// Density-matrix schema: {"dim": d, "matrix": [[[re,im], ...], ...]} with one
/// inner array per row.
inline DensityMatrix load_density_json(const nlohmann::json& j, double tol = 1e-9) {
    if (!j.is_object()) throw ParseError("density-matrix JSON must be an object");
    const std::size_t dim = detail::parse_positive_int(detail::require_field(j, "dim"), "dim");

    const nlohmann::json& jm = detail::require_field(j, "matrix");
    if (!jm.is_array() || jm.size() != dim)
        throw ParseError("field \"matrix\" must be an array of dim rows");
    ComplexMatrix m(dim, dim);
    for (std::size_t r = 0; r < dim; ++r) {
        if (!jm[r].is_array() || jm[r].size() != dim)
            throw ParseError("matrix[" + std::to_string(r) + "] must hold dim [re, im] pairs");
        for (std::size_t c = 0; c < dim; ++c)
            m(r, c) = detail::parse_entry(jm[r][c],
                                          "matrix[" + std::to_string(r) + "][" +
                                              std::to_string(c) + "]");
    }
    try {
        return DensityMatrix(std::move(m), tol);
    } catch (const ValidationError& e) {
        throw ParseError(std::string("field \"matrix\": ") + e.what());
    }
}

inline nlohmann::json instrument_to_json(const KrausInstrument& instr) {
    nlohmann::json j;
    j["dim"] = instr.dim();
    nlohmann::json ops = nlohmann::json::array();
    for (const ComplexMatrix& k : instr.kraus()) {
        nlohmann::json op = nlohmann::json::array();
        for (std::size_t r = 0; r < k.rows(); ++r)
            for (std::size_t c = 0; c < k.cols(); ++c)
                op.push_back({k(r, c).real(), k(r, c).imag()});
        ops.push_back(std::move(op));
    }
    j["kraus"] = std::move(ops);
    j["partition"] = instr.partition();
    return j;
}

inline nlohmann::json density_to_json(const DensityMatrix& rho) {
    nlohmann::json j;
    j["dim"] = rho.dim();
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t r = 0; r < rho.dim(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t c = 0; c < rho.dim(); ++c)
            row.push_back({rho.mat()(r, c).real(), rho.mat()(r, c).imag()});
        rows.push_back(std::move(row));
    }
    j["matrix"] = std::move(rows);
    return j;
}

inline nlohmann::json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("invalid JSON in " + path + ": " + e.what());
    }
    return j;
}

inline KrausInstrument load_instrument_file(const std::string& path, double tol = 1e-9) {
    return load_instrument_json(load_json_file(path), tol);
}

inline DensityMatrix load_density_file(const std::string& path, double tol = 1e-9) {
    return load_density_json(load_json_file(path), tol);
}

} // namespace qid
