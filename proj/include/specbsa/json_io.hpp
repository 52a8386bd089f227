#pragma once

#include <string>

#include "specbsa/datasets.hpp"
#include "specbsa/openflights.hpp"

namespace specbsa {

// Dataset JSON schema:
//   {"n": int,
//    "networks": [{"id": str, "label": str|null, "adjacency": [[number; n]; n]}, ...],
//    "meta": {str: str}}
// Adjacency is row-major; numbers survive a save/load round trip bit for bit;
// symmetry is enforced on load at 1e-12. Schema violations raise SchemaError
// with a JSON pointer to the offending field.
void save_dataset(const Dataset& ds, const std::string& path);
Dataset load_dataset(const std::string& path);

// Region mapping JSON: {"regions": [str; 6], "country_to_region": {str: str}}.
RegionMapping load_region_mapping(const std::string& path);

// Single-network JSON: {"id": str, "adjacency": [[number; n]; n]}.
void save_network(const Network& net, const std::string& path);
Network load_network(const std::string& path);

} // namespace specbsa
