#pragma once

// Document formats for scripting: maps and spectrum symbols as JSON, and the
// inline vector grammar `[re,im;re,im;...]` used on the command line.
//
// Complex scalars are `{"re":..,"im":..}` (a bare number is accepted as a
// real). Unimodular constants are rotation numbers: a string "p/q" for an
// exact fraction of a turn, or `{"irrational": t, "label": "..."}`.
// Permutations are 1-based image lists, as in the spectrum module.

#include <string>

#include "json.hpp"

#include "blochlab/maps.hpp"
#include "blochlab/spectrum.hpp"

namespace blochlab {

using Json = nlohmann::ordered_json;

cx complex_from_json(const Json& j);
Point point_from_json(const Json& j);
CMatrix matrix_from_json(const Json& j);
RotationNumber rotation_from_json(const Json& j);

// `{"kind": "...", ...params}`; products and compositions nest. The built
// map's domain must equal `domain` (factors of products are matched against
// the corresponding factor domains).
HoloMap map_from_json(const Json& doc, const DomainSpec& domain);

// `{"lambdas": [...], "tau": [...], "class": "automorphism" | "non-auto-onto"
//  | "unknown"}`; tau defaults to the identity, class to unknown.
PolydiskSymbol symbol_from_json(const Json& doc);

Point parse_inline_vector(const std::string& text);
Json point_to_json(const Point& z);  // [[re,im], ...]

} // namespace blochlab
