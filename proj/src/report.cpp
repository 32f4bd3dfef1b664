#include "mflab/report.hpp"

#include <algorithm>
#include <sstream>

namespace mflab {

OutputFormat parse_format(const std::string& name) {
  if (name == "json") return OutputFormat::Json;
  if (name == "table") return OutputFormat::Table;
  if (name == "csv") return OutputFormat::Csv;
  fail(ErrorKind::InvalidInput, "unknown output format '" + name + "'");
}

namespace {
std::string cell_str(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

std::string csv_quote(const std::string& s) {
  bool need = s.find_first_of(",\"\r\n") != std::string::npos;
  if (!need) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

const Json* find_rows(const Json& report) {
  if (report.is_array()) return &report;
  if (report.is_object() && report.contains("rows") && report["rows"].is_array())
    return &report["rows"];
  return nullptr;
}
}  // namespace

std::string to_csv(const Json& report) {
  const Json* rows = find_rows(report);
  if (!rows || rows->empty() || !(*rows)[0].is_object()) {
    if (rows) return "";  // header-only empty table
    return csv_quote(report.dump()) + "\r\n";
  }
  std::ostringstream out;
  std::vector<std::string> keys;
  for (auto it = (*rows)[0].begin(); it != (*rows)[0].end(); ++it)
    keys.push_back(it.key());
  for (size_t i = 0; i < keys.size(); ++i)
    out << (i ? "," : "") << csv_quote(keys[i]);
  out << "\r\n";
  for (const auto& row : *rows) {
    for (size_t i = 0; i < keys.size(); ++i) {
      out << (i ? "," : "");
      if (row.contains(keys[i])) out << csv_quote(cell_str(row[keys[i]]));
    }
    out << "\r\n";
  }
  return out.str();
}

std::string to_table(const Json& report) {
  const Json* rows = find_rows(report);
  std::ostringstream out;
  if (report.is_object()) {
    // Scalar header fields first.
    for (auto it = report.begin(); it != report.end(); ++it) {
      if (it.key() == "rows") continue;
      out << it.key() << ": " << cell_str(it.value()) << "\n";
    }
  }
  if (!rows || rows->empty() || !(*rows)[0].is_object()) return out.str();
  std::vector<std::string> keys;
  for (auto it = (*rows)[0].begin(); it != (*rows)[0].end(); ++it)
    keys.push_back(it.key());
  std::vector<size_t> width;
  for (const auto& k : keys) width.push_back(k.size());
  std::vector<std::vector<std::string>> cells;
  for (const auto& row : *rows) {
    std::vector<std::string> line;
    for (size_t i = 0; i < keys.size(); ++i) {
      std::string c = row.contains(keys[i]) ? cell_str(row[keys[i]]) : "";
      width[i] = std::max(width[i], c.size());
      line.push_back(std::move(c));
    }
    cells.push_back(std::move(line));
  }
  auto pad = [&](const std::string& s, size_t w) {
    return s + std::string(w - s.size(), ' ');
  };
  for (size_t i = 0; i < keys.size(); ++i)
    out << (i ? "  " : "") << pad(keys[i], width[i]);
  out << "\n";
  for (size_t i = 0; i < keys.size(); ++i)
    out << (i ? "  " : "") << std::string(width[i], '-');
  out << "\n";
  for (const auto& line : cells) {
    for (size_t i = 0; i < keys.size(); ++i)
      out << (i ? "  " : "") << pad(line[i], width[i]);
    out << "\n";
  }
  return out.str();
}

std::string emit_report(const Json& report, OutputFormat fmt) {
  switch (fmt) {
    case OutputFormat::Json:
      return report.dump(2) + "\n";
    case OutputFormat::Csv:
      return to_csv(report);
    case OutputFormat::Table:
      return to_table(report);
  }
  return report.dump(2) + "\n";
}

namespace {
bool type_matches(const Json& v, const std::string& type) {
  if (type == "object") return v.is_object();
  if (type == "array") return v.is_array();
  if (type == "string") return v.is_string();
  if (type == "integer") return v.is_number_integer();
  if (type == "number") return v.is_number();
  if (type == "boolean") return v.is_boolean();
  return true;
}
}  // namespace

std::string validate_against_schema(const Json& value, const Json& schema) {
  if (schema.contains("type")) {
    std::string t = schema["type"].get<std::string>();
    if (!type_matches(value, t)) return "expected type " + t;
  }
  if (schema.contains("required")) {
    for (const auto& key : schema["required"]) {
      if (!value.is_object() || !value.contains(key.get<std::string>()))
        return "missing required key '" + key.get<std::string>() + "'";
    }
  }
  if (schema.contains("properties") && value.is_object()) {
    for (auto it = schema["properties"].begin(); it != schema["properties"].end(); ++it) {
      if (!value.contains(it.key())) continue;
      std::string err = validate_against_schema(value[it.key()], it.value());
      if (!err.empty()) return "in '" + it.key() + "': " + err;
    }
  }
  if (schema.contains("items") && value.is_array()) {
    for (const auto& item : value) {
      std::string err = validate_against_schema(item, schema["items"]);
      if (!err.empty()) return "in items: " + err;
    }
  }
  return "";
}

}  // namespace mflab
