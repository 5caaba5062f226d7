#pragma once

#include <string>

#include <json.hpp>

#include "polyhankel/hankel.hpp"
#include "polyhankel/polynomial.hpp"

namespace polyhankel {

// Polynomial wire format:
//   {"d": <int>, "terms": [{"n": <id>, "re": <float>, "im": <float>}, ...]}
// Terms may instead carry {"exponents": [..], "re": .., "im": ..}; exponent
// entries must be nonnegative for analytic polynomials and are normalized to
// monomial ids on load.  Trigonometric polynomials use the exponent form
// only, with signed entries.

nlohmann::ordered_json to_json(const Polynomial& f);
Polynomial polynomial_from_json(const nlohmann::json& j);
TrigPolynomial trig_polynomial_from_json(const nlohmann::json& j);

// True when any term uses the exponent form with a negative entry (the file
// describes a trigonometric polynomial, not an analytic one).
bool has_negative_exponents(const nlohmann::json& j);

// Matrix export for external inspection: the index set comes first, entries
// follow row-major.  Real matrices write plain numbers; complex entries
// become {"re","im"} objects in JSON and re{+,-}im*i cells in CSV.
nlohmann::ordered_json matrix_to_json(const HankelMatrix& m);
std::string matrix_to_csv(const HankelMatrix& m);

// Deterministic serialization: keys keep insertion order (use ordered_json)
// and floating-point numbers are written with 17 significant digits, so equal
// inputs produce byte-identical output.
std::string dump_json(const nlohmann::ordered_json& j, int indent = 2);

}  // namespace polyhankel
