#pragma once

#include <string>

#include "mflab/io.hpp"

namespace mflab {

enum class OutputFormat { Json, Table, Csv };

OutputFormat parse_format(const std::string& name);

// Deterministic serialization: JSON with stable key order, column-aligned
// tables, RFC-4180 CSV. `rows` semantics apply to arrays of flat objects;
// other values fall back to JSON.
std::string emit_report(const Json& report, OutputFormat fmt);

std::string to_csv(const Json& rows);
std::string to_table(const Json& rows);

// Structural schema check: `schema` uses the subset {"type", "properties",
// "required", "items"} of JSON Schema. Returns an error description or "".
std::string validate_against_schema(const Json& value, const Json& schema);

}  // namespace mflab
