#pragma once

#include <json.hpp>

#include "starweyl/quadrature.hpp"

namespace starweyl {

using json = nlohmann::json;

// {"n": n, "terms": [{"exp": [...], "coeff": {"hbar_pow": k, "re": "p/q", "im": "p/q"}}, ...]}.
// An exact coefficient with several powers of hbar is written as one term per power.
json to_json(const ExactPoly& p);
// Float mode: numeric re and im, no hbar_pow.
json to_json(const CPoly& p);
ExactPoly exact_poly_from_json(const json& j);
// Accepts both forms; exact coefficients are evaluated at hbar.
CPoly float_poly_from_json(const json& j, cplx hbar);

// {"n": n, "K": [["re", "im"], ...], "J": [...]} row-major, entries as rational strings.
json to_json(const OrderingKey& k);
OrderingKey ordering_from_json(const json& j);

json to_json(cplx z);
cplx complex_from_json(const json& j);  // [re, im] or a number

// prefactor, amp, alpha, beta, gamma, ordering and hbar; "lin" and "limit" only when present.
json to_json(const ExpElement& e);
json to_json(const ContourSpec& c);

// {"point": [u, v], "z": z, "value": v, "err_est": e}.
json record(cplx u, cplx v, cplx z, const Estimate& e);

// "a", "a+bi", "a-bi", "bi", "i" with decimal or p/q parts.
cplx parse_complex(const std::string& s);
GaussQ parse_gauss(const std::string& s);

}  // namespace starweyl
