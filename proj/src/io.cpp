#include "mflab/io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace mflab {

namespace {
[[noreturn]] void bad(const std::string& what) { fail(ErrorKind::InvalidInput, what); }

struct TomlParser {
  const std::string& s;
  size_t pos = 0;

  void skip_ws(bool newlines) {
    while (pos < s.size()) {
      char c = s[pos];
      if (c == '#') {
        while (pos < s.size() && s[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(c)) &&
                 (newlines || (c != '\n' && c != '\r'))) {
        ++pos;
      } else {
        break;
      }
    }
  }

  std::string parse_key() {
    skip_ws(false);
    size_t start = pos;
    while (pos < s.size() &&
           (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
      ++pos;
    if (start == pos) bad("TOML: expected key at offset " + std::to_string(pos));
    return s.substr(start, pos - start);
  }

  Json parse_value() {
    skip_ws(false);
    if (pos >= s.size()) bad("TOML: expected value");
    char c = s[pos];
    if (c == '"') {
      ++pos;
      std::string v;
      while (pos < s.size() && s[pos] != '"') {
        if (s[pos] == '\\' && pos + 1 < s.size()) ++pos;
        v += s[pos++];
      }
      if (pos >= s.size()) bad("TOML: unterminated string");
      ++pos;
      return Json(v);
    }
    if (c == '[') {
      ++pos;
      Json arr = Json::array();
      skip_ws(true);
      if (pos < s.size() && s[pos] == ']') {
        ++pos;
        return arr;
      }
      while (true) {
        arr.push_back(parse_value());
        skip_ws(true);
        if (pos < s.size() && s[pos] == ',') {
          ++pos;
          skip_ws(true);
          continue;
        }
        if (pos < s.size() && s[pos] == ']') {
          ++pos;
          return arr;
        }
        bad("TOML: expected ',' or ']' in array");
      }
    }
    if (c == '{') {
      ++pos;
      Json obj = Json::object();
      skip_ws(false);
      if (pos < s.size() && s[pos] == '}') {
        ++pos;
        return obj;
      }
      while (true) {
        std::string key = parse_key();
        skip_ws(false);
        if (pos >= s.size() || s[pos] != '=') bad("TOML: expected '=' in inline table");
        ++pos;
        obj[key] = parse_value();
        skip_ws(false);
        if (pos < s.size() && s[pos] == ',') {
          ++pos;
          continue;
        }
        if (pos < s.size() && s[pos] == '}') {
          ++pos;
          return obj;
        }
        bad("TOML: expected ',' or '}' in inline table");
      }
    }
    if (c == '-' || std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = pos;
      if (c == '-') ++pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      return Json(std::stoll(s.substr(start, pos - start)));
    }
    if (s.compare(pos, 4, "true") == 0) {
      pos += 4;
      return Json(true);
    }
    if (s.compare(pos, 5, "false") == 0) {
      pos += 5;
      return Json(false);
    }
    bad("TOML: unsupported value at offset " + std::to_string(pos));
  }

  Json parse() {
    Json root = Json::object();
    Json* current = &root;
    while (true) {
      skip_ws(true);
      if (pos >= s.size()) break;
      if (s[pos] == '[') {
        ++pos;
        std::string name = parse_key();
        skip_ws(false);
        if (pos >= s.size() || s[pos] != ']') bad("TOML: expected ']' after table name");
        ++pos;
        root[name] = Json::object();
        current = &root[name];
        continue;
      }
      std::string key = parse_key();
      skip_ws(false);
      if (pos >= s.size() || s[pos] != '=') bad("TOML: expected '=' after key");
      ++pos;
      (*current)[key] = parse_value();
    }
    return root;
  }
};
}  // namespace

Json parse_toml_subset(const std::string& text) {
  TomlParser p{text};
  return p.parse();
}

Json load_descriptor_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  if (path.size() > 5 && path.substr(path.size() - 5) == ".toml")
    return parse_toml_subset(text);
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) bad("file '" + path + "' is not valid JSON");
  return j;
}

Field field_from_json(const Json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "Q") return Field::rationals();
    bad("unknown field '" + j.get<std::string>() + "'");
  }
  if (j.is_object() && j.contains("Fp")) return Field::fp(j["Fp"].get<int64_t>());
  bad("field descriptor must be \"Q\" or {\"Fp\": p}");
}

HypersurfaceRing ring_from_json(const Json& j, int trunc_override) {
  if (!j.contains("field") || !j.contains("vars") || !j.contains("f"))
    bad("ring descriptor needs field, vars, f");
  Field k = field_from_json(j["field"]);
  std::vector<std::string> vars;
  for (const auto& v : j["vars"]) vars.push_back(v.get<std::string>());
  int trunc = trunc_override > 0 ? trunc_override
                                 : (j.contains("trunc") ? j["trunc"].get<int>() : 12);
  auto ctx = make_series_context(k, vars, trunc);
  return make_hypersurface(ctx, parse_series(j["f"].get<std::string>(), ctx));
}

MonomialCurveRing curve_from_json(const Json& j, int trunc_override) {
  if (!j.contains("field") || !j.contains("semigroup"))
    bad("curve descriptor needs field and semigroup");
  Field k = field_from_json(j["field"]);
  std::vector<int64_t> gens;
  for (const auto& v : j["semigroup"]) gens.push_back(v.get<int64_t>());
  int trunc = trunc_override > 0 ? trunc_override
                                 : (j.contains("trunc") ? j["trunc"].get<int>() : 30);
  return make_monomial_curve(k, gens, trunc);
}

namespace {
SMat smat_from_json(const Json& j, const SeriesCtxPtr& ctx) {
  SMat m;
  for (const auto& row : j) {
    std::vector<TruncSeries> r;
    for (const auto& e : row) r.push_back(parse_series(e.get<std::string>(), ctx));
    m.push_back(std::move(r));
  }
  return m;
}
}  // namespace

MatrixFactorization mf_from_json(const Json& j, int trunc_override) {
  if (!j.contains("ring") || !j.contains("phi") || !j.contains("psi"))
    bad("matrix factorization file needs ring, phi, psi");
  HypersurfaceRing R = ring_from_json(j["ring"], trunc_override);
  return make_mf(R, smat_from_json(j["phi"], R.S), smat_from_json(j["psi"], R.S));
}

Json ring_to_json(const HypersurfaceRing& R) {
  Json j;
  if (R.field().is_fp())
    j["field"] = Json{{"Fp", R.field().prime()}};
  else
    j["field"] = "Q";
  j["vars"] = R.S->vars;
  j["f"] = R.f.str();
  j["trunc"] = R.trunc();
  return j;
}

Json mf_to_json(const MatrixFactorization& mf) {
  Json j;
  j["ring"] = ring_to_json(mf.ring);
  Json phi = Json::array(), psi = Json::array();
  for (size_t i = 0; i < mf.size(); ++i) {
    Json prow = Json::array(), qrow = Json::array();
    for (size_t c = 0; c < mf.size(); ++c) {
      prow.push_back(mf.phi[i][c].str());
      qrow.push_back(mf.psi[i][c].str());
    }
    phi.push_back(prow);
    psi.push_back(qrow);
  }
  j["phi"] = phi;
  j["psi"] = psi;
  return j;
}

ChainFile chain_from_json(const Json& j, int trunc_override) {
  if (!j.contains("ring") || !j.contains("mfs") || !j.contains("maps"))
    bad("chain file needs ring, mfs, maps");
  HypersurfaceRing R = ring_from_json(j["ring"], trunc_override);
  ChainFile out;
  for (const auto& m : j["mfs"]) {
    if (!m.contains("phi") || !m.contains("psi")) bad("chain mf needs phi and psi");
    out.mfs.push_back(
        make_mf(R, smat_from_json(m["phi"], R.S), smat_from_json(m["psi"], R.S)));
  }
  for (const auto& a : j["maps"]) out.maps.push_back(ChainMap{smat_from_json(a, R.S)});
  return out;
}

}  // namespace mflab
