#pragma once

/*
 * File formats.
 *
 * Measurement set:  {"d", "M", "t", "kappa", "operators": [[matrix]]}
 * Density matrix:   {"dims": [..], "matrix": matrix}
 * where matrix is a row-major array of [re, im] pairs.
 *
 * Criterion report: {"theorem", "J", "bound", ("bound2",) "margin",
 *   "detected", "strategy", "selection", "dims", "M", "kappas",
 *   "tolerances", "fallback_used", ("truncated")}
 * with selection either the string "full diagonal" or 1-based index lists
 * [measurement][party][slot].
 *
 * Real numbers are emitted as decimal floats with 17 significant digits, so
 * files round-trip bit-exactly and identical runs produce identical bytes.
 * CSV output uses 12 significant digits. Parsing goes through nlohmann/json;
 * emission is hand-rolled to keep the digit and key-order guarantees.
 */

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mumsep/criteria.hpp"
#include "mumsep/errors.hpp"
#include "mumsep/mum.hpp"
#include "mumsep/opalg.hpp"
#include "mumsep/states.hpp"

namespace mumsep {

inline std::string fmt_g17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline std::string fmt_g12(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

namespace detail {

inline void append_matrix_json(std::string& out, const ComplexMatrix& m) {
    out += '[';
    const auto& e = m.entries();
    for (std::size_t k = 0; k < e.size(); ++k) {
        if (k) out += ',';
        out += '[';
        out += fmt_g17(e[k].real());
        out += ',';
        out += fmt_g17(e[k].imag());
        out += ']';
    }
    out += ']';
}

inline ComplexMatrix matrix_from_json(const nlohmann::json& j, int dim, const char* what) {
    if (!j.is_array() || static_cast<int>(j.size()) != dim * dim)
        throw config_error(std::string(what) + ": matrix must be an array of dim^2 [re, im] pairs");
    std::vector<cplx> entries;
    entries.reserve(j.size());
    for (const auto& pair : j) {
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number())
            throw config_error(std::string(what) + ": matrix entries must be [re, im] pairs");
        entries.emplace_back(pair[0].get<double>(), pair[1].get<double>());
    }
    return ComplexMatrix(dim, std::move(entries));
}

inline nlohmann::json parse_file(const std::string& path, const char* what) {
    std::ifstream in(path);
    if (!in) throw config_error(std::string(what) + ": cannot open '" + path + "'");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw config_error(std::string(what) + ": malformed JSON in '" + path + "': " + e.what());
    }
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("cannot write '" + path + "'");
    out << content;
}

}  // namespace detail

inline std::string mum_set_to_json(const MumSet& s) {
    std::string out;
    out += "{\n";
    out += "  \"d\": " + std::to_string(s.d) + ",\n";
    out += "  \"M\": " + std::to_string(s.M) + ",\n";
    out += "  \"t\": " + fmt_g17(s.t) + ",\n";
    out += "  \"kappa\": " + fmt_g17(s.kappa) + ",\n";
    out += "  \"operators\": [\n";
    for (int b = 0; b < s.M; ++b) {
        out += "    [";
        for (int n = 0; n < s.d; ++n) {
            if (n) out += ',';
            out += "\n      ";
            detail::append_matrix_json(out, s.operators[b][n]);
        }
        out += "\n    ]";
        if (b + 1 < s.M) out += ',';
        out += '\n';
    }
    out += "  ]\n}\n";
    return out;
}

inline MumSet mum_set_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw config_error("measurement set: top level must be an object");
    for (const char* key : {"d", "M", "t", "kappa", "operators"})
        if (!j.contains(key))
            throw config_error(std::string("measurement set: missing key '") + key + "'");
    MumSet s;
    s.d = j["d"].get<int>();
    s.M = j["M"].get<int>();
    s.t = j["t"].get<double>();
    s.kappa = j["kappa"].get<double>();
    if (s.d < 2) throw config_error("measurement set: d must be >= 2");
    if (s.M < 1) throw config_error("measurement set: M must be >= 1");
    if (!(s.t > 0.0)) throw config_error("measurement set: t must be positive");
    const auto& ops = j["operators"];
    if (!ops.is_array() || static_cast<int>(ops.size()) != s.M)
        throw config_error("measurement set: operators must hold M measurements");
    s.operators.resize(s.M);
    for (int b = 0; b < s.M; ++b) {
        if (!ops[b].is_array() || static_cast<int>(ops[b].size()) != s.d)
            throw config_error("measurement set: measurement " + std::to_string(b + 1) +
                               " must hold d operators");
        s.operators[b].reserve(s.d);
        for (int n = 0; n < s.d; ++n)
            s.operators[b].push_back(detail::matrix_from_json(ops[b][n], s.d, "measurement set"));
    }
    // The construction is affine in its traceless part, so the underlying
    // operators are recoverable from the elements.
    const ComplexMatrix eye_over_d = (1.0 / s.d) * identity(s.d);
    s.f_ops.resize(s.M);
    for (int b = 0; b < s.M; ++b) {
        s.f_ops[b].reserve(s.d);
        for (int n = 0; n < s.d; ++n)
            s.f_ops[b].push_back((1.0 / s.t) * (s.operators[b][n] - eye_over_d));
    }
    return s;
}

inline MumSet load_mum_set(const std::string& path) {
    return mum_set_from_json(detail::parse_file(path, "measurement set"));
}

inline void save_mum_set(const std::string& path, const MumSet& s) {
    detail::write_file(path, mum_set_to_json(s));
}

inline std::string density_to_json(const DensityMatrix& rho) {
    std::string out;
    out += "{\n  \"dims\": [";
    for (std::size_t i = 0; i < rho.dims.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(rho.dims[i]);
    }
    out += "],\n  \"matrix\": ";
    detail::append_matrix_json(out, rho.matrix);
    out += "\n}\n";
    return out;
}

// Loads and validates; a state failing any invariant is rejected with the
// list of failed checks.
inline DensityMatrix load_density(const std::string& path) {
    const nlohmann::json j = detail::parse_file(path, "density matrix");
    if (!j.is_object() || !j.contains("dims") || !j.contains("matrix"))
        throw config_error("density matrix: need keys 'dims' and 'matrix'");
    std::vector<int> dims;
    for (const auto& v : j["dims"]) {
        if (!v.is_number_integer()) throw config_error("density matrix: dims must be integers");
        dims.push_back(v.get<int>());
    }
    if (dims.empty()) throw config_error("density matrix: dims must be nonempty");
    int total = 1;
    for (int d : dims) {
        if (d < 1) throw config_error("density matrix: dims must be >= 1");
        total *= d;
    }
    DensityMatrix rho{std::move(dims), detail::matrix_from_json(j["matrix"], total, "density matrix")};
    require_valid(rho);
    return rho;
}

inline void save_density(const std::string& path, const DensityMatrix& rho) {
    detail::write_file(path, density_to_json(rho));
}

inline std::string report_to_json(const CriterionReport& r) {
    std::string out;
    out += "{\"theorem\":\"";
    out += to_string(r.theorem);
    out += "\",\"J\":" + fmt_g17(r.J);
    out += ",\"bound\":" + fmt_g17(r.bound);
    if (r.bound2) out += ",\"bound2\":" + fmt_g17(*r.bound2);
    out += ",\"margin\":" + fmt_g17(r.margin);
    out += ",\"detected\":";
    out += r.detected ? "true" : "false";
    out += ",\"strategy\":\"";
    out += to_string(r.strategy);
    out += "\",\"selection\":";
    if (!r.selection) {
        out += "\"full diagonal\"";
    } else {
        out += '[';
        for (std::size_t b = 0; b < r.selection->per_measurement.size(); ++b) {
            if (b) out += ',';
            out += '[';
            const auto& parties = r.selection->per_measurement[b];
            for (std::size_t p = 0; p < parties.size(); ++p) {
                if (p) out += ',';
                out += '[';
                for (std::size_t k = 0; k < parties[p].size(); ++k) {
                    if (k) out += ',';
                    out += std::to_string(parties[p][k] + 1);  // 1-based in reports
                }
                out += ']';
            }
            out += ']';
        }
        out += ']';
    }
    out += ",\"dims\":[";
    for (std::size_t i = 0; i < r.dims.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(r.dims[i]);
    }
    out += "],\"M\":" + std::to_string(r.M);
    out += ",\"kappas\":[";
    for (std::size_t i = 0; i < r.kappas.size(); ++i) {
        if (i) out += ',';
        out += fmt_g17(r.kappas[i]);
    }
    out += "],\"tolerances\":{\"detect\":" + fmt_g17(r.tol_detect) +
           ",\"trace_imag\":" + fmt_g17(kTraceImagTol) + "}";
    out += ",\"fallback_used\":";
    out += r.fallback_used ? "true" : "false";
    if (r.truncated) out += ",\"truncated\":true";
    out += "}";
    return out;
}

}  // namespace mumsep
