#pragma once

// JSON and CSV serialization of partitions, lattice functions, matrices and
// polynomial tables. Rationals are written as "p/q" strings.

#include "rsmorse/dualop.hpp"
#include "rsmorse/latticeop.hpp"
#include "rsmorse/polynomials.hpp"
#include "rsmorse/qcore.hpp"

#include "json.hpp"

#include <complex>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace rsmorse {

using json = nlohmann::ordered_json;

inline json to_json(const Partition& lambda) { return json(lambda.parts()); }

inline Partition partition_from_json(const json& j) {
    if (!j.is_array()) throw std::invalid_argument("partition must be a JSON integer array");
    return Partition(j.get<std::vector<int>>());
}

inline json to_json(const ParamSet& p) {
    return json{{"q", to_string(p.q())},
                {"t", to_string(p.t())},
                {"that", {to_string(p.that(0)), to_string(p.that(1)), to_string(p.that(2))}},
                {"t0", to_string(p.t0())},
                {"t1", to_string(p.t1())},
                {"t2", to_string(p.t2())}};
}

inline json to_json(const LatticeFunction<Rational>& f) {
    json arr = json::array();
    for (const auto& [lambda, v] : f.values) arr.push_back({{"lambda", to_json(lambda)}, {"value", to_string(v)}});
    return arr;
}

inline LatticeFunction<Rational> lattice_function_from_json(const json& j, int n) {
    LatticeFunction<Rational> f(n);
    for (const auto& entry : j) {
        auto lambda = partition_from_json(entry.at("lambda"));
        f.add(lambda, parse_rational(entry.at("value").get<std::string>()));
    }
    return f;
}

inline json to_json(const TriangularMatrix& M) {
    json arr = json::array();
    for (std::size_t r = 0; r < M.basis.size(); ++r)
        for (std::size_t c = 0; c < M.basis.size(); ++c)
            if (sgn(M.entries(r, c)) != 0)
                arr.push_back({{"mu", to_json(M.basis[r])}, {"nu", to_json(M.basis[c])}, {"value", to_string(M.entries(r, c))}});
    return arr;
}

inline json to_json(const QHahnPolynomial& P, const ParamSet& p) {
    json coeffs = json::array();
    for (const auto& [mu, c] : P.coeffs()) coeffs.push_back({{"mu", to_json(mu)}, {"value", to_string(c)}});
    return json{{"n", P.label.size()}, {"params", to_json(p)}, {"lambda", to_json(P.label)}, {"coeffs", coeffs}};
}

inline std::string format_double(double x) {
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

inline std::string partition_csv(const Partition& lambda) {
    std::string s;
    for (int j = 0; j < lambda.size(); ++j) s += (j ? " " : "") + std::to_string(lambda[j]);
    return s;
}

/// Writes one CSV row, quoting fields that contain separators.
inline void write_csv_row(std::ostream& os, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) os << ',';
        const auto& f = fields[i];
        if (f.find_first_of(",\"\n") != std::string::npos) {
            os << '"';
            for (char c : f) os << (c == '"' ? "\"\"" : std::string(1, c));
            os << '"';
        } else {
            os << f;
        }
    }
    os << '\n';
}

}  // namespace rsmorse
