#pragma once

// JSON encodings of verdicts, decompositions, generator specs and reports.

#include <string>
#include <vector>

#include "json.hpp"
#include "opclass/decomposition.hpp"
#include "opclass/generators.hpp"
#include "opclass/harness.hpp"
#include "opclass/membership.hpp"

namespace opclass {

using Json = nlohmann::ordered_json;

/// "0x" followed by 16 lowercase hex digits.
std::string hash_to_hex(std::uint64_t hash);

Json matrix_to_json(const Matrix& t);
Matrix matrix_from_json(const Json& j);

Json to_json(const Tolerances& tol);
Json to_json(const OperatorClass& cls, const MembershipVerdict& v);
Json to_json(const MembershipVerdict& v);   // no class fields
Json to_json(const Classification& c);
Json to_json(const Decomposition& d);
Json to_json(const Nilpotent2Form& f);
Json to_json(const GenSpec& spec);
Json to_json(const Certification& c);
Json to_json(const TheoremReport& r);
Json to_json(const std::vector<TheoremReport>& reports);
Json to_json(const SearchReport& r);

/// {"kind", "dim", "seed", "params": {...}, "eigenvalues": [[re, im]...], "lambda": [re, im]}
GenSpec gen_spec_from_json(const Json& j);

}  // namespace opclass
