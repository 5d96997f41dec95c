#pragma once

#include <json.hpp>

#include <string>

#include "hdx/complex.hpp"

namespace hdx {

using Json = nlohmann::json;

Json complex_to_json(const CellComplex& X);

/**
 * Accepts either the explicit form {cells, incidence} or a facet list
 * {facets: [[v, ...], ...]} which is closed downward into a simplicial
 * complex. Unknown keys are rejected.
 */
CellComplex complex_from_json(const Json& j);

CellComplex read_complex_file(const std::string& path);
void write_complex_file(const std::string& path, const CellComplex& X);

/** Canonical serialization (sorted keys, no whitespace). */
std::string canonical_dump(const Json& j);

/** Content hash of the canonical serialization. */
std::string complex_hash(const CellComplex& X);

/** Hash of a report with volatile fields (runtime_ms) removed. */
std::string report_hash(Json j);

Json chain_to_json(const Chain& c);
Chain chain_from_json(const Json& j);

}  // namespace hdx
