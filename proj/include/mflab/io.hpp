#pragma once

#include <string>

#include <json.hpp>

#include "mflab/experiments.hpp"
#include "mflab/matfac.hpp"
#include "mflab/rings.hpp"

namespace mflab {

using Json = nlohmann::ordered_json;

// Loads a descriptor file: .toml files go through the built-in TOML subset
// reader (key = value pairs, integers, strings, arrays, inline tables,
// # comments), anything else is parsed as JSON.
Json load_descriptor_file(const std::string& path);
Json parse_toml_subset(const std::string& text);

// {"field": {"Fp": 101} | "Q", "vars": ["x","y"], "f": "x^7 - y^3",
//  "trunc": 12}; trunc may be overridden.
HypersurfaceRing ring_from_json(const Json& j, int trunc_override = 0);
// {"field": ..., "semigroup": [3,7], "trunc": 30}
MonomialCurveRing curve_from_json(const Json& j, int trunc_override = 0);
Field field_from_json(const Json& j);

// {"ring": <ring descriptor>, "phi": [["x","y"],...], "psi": [...]}
MatrixFactorization mf_from_json(const Json& j, int trunc_override = 0);
Json mf_to_json(const MatrixFactorization& mf);
Json ring_to_json(const HypersurfaceRing& R);

// {"ring": ..., "mfs": [{"phi":..., "psi":...}, ...],
//  "maps": [[["entry",...],...], ...]}
struct ChainFile {
  std::vector<MatrixFactorization> mfs;
  std::vector<ChainMap> maps;
};
ChainFile chain_from_json(const Json& j, int trunc_override = 0);

}  // namespace mflab
