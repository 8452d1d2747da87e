#ifndef PSATZ_JSON_IO_HPP
#define PSATZ_JSON_IO_HPP

#include <json.hpp>

#include "psatz/polynomial.hpp"

namespace psatz {

using Json = nlohmann::ordered_json;

/// Canonical polynomial encoding:
/// {"nvars": n, "terms": [{"exp": [a1,...,an], "coef": "p/q"}]}
/// Terms are emitted in graded-lex order, so the encoding is byte-stable.
inline Json poly_to_json(const Polynomial& p) {
    Json j;
    j["nvars"] = p.nvars();
    Json terms = Json::array();
    for (const auto& [m, c] : p.terms()) {
        Json t;
        t["exp"] = m.exp;
        t["coef"] = to_string(c);
        terms.push_back(std::move(t));
    }
    j["terms"] = std::move(terms);
    return j;
}

inline Polynomial poly_from_json(const Json& j) {
    if (!j.contains("nvars") || !j.contains("terms"))
        throw std::invalid_argument("polynomial JSON: missing nvars/terms");
    Polynomial p(j.at("nvars").get<int>());
    for (const auto& t : j.at("terms")) {
        Monomial m(t.at("exp").get<std::vector<int>>());
        for (int e : m.exp)
            if (e < 0) throw std::invalid_argument("polynomial JSON: negative exponent");
        p.add_term(m, parse_rational(t.at("coef").get<std::string>()));
    }
    return p;
}

}  // namespace psatz

#endif
