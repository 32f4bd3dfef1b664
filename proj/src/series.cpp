#include "mflab/series.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace mflab {

int SeriesContext::var_index(const std::string& name) const {
  for (size_t i = 0; i < vars.size(); ++i)
    if (vars[i] == name) return int(i);
  fail(ErrorKind::UnknownVariable, "variable '" + name + "' not in ring context");
}

SeriesCtxPtr make_series_context(Field f, std::vector<std::string> vars, int trunc) {
  if (trunc < 0) fail(ErrorKind::InvalidInput, "negative truncation");
  for (size_t i = 0; i < vars.size(); ++i)
    for (size_t j = i + 1; j < vars.size(); ++j)
      if (vars[i] == vars[j])
        fail(ErrorKind::InvalidInput, "duplicate variable '" + vars[i] + "'");
  return std::make_shared<SeriesContext>(SeriesContext{f, std::move(vars), trunc});
}

TruncSeries TruncSeries::constant(SeriesCtxPtr ctx, const Scalar& c) {
  TruncSeries s(std::move(ctx));
  s.add_term(Exponent(s.ctx_->vars.size(), 0), c);
  return s;
}

TruncSeries TruncSeries::constant_int(SeriesCtxPtr ctx, int64_t c) {
  Scalar s(ctx->field, c);
  return constant(std::move(ctx), s);
}

TruncSeries TruncSeries::variable(SeriesCtxPtr ctx, const std::string& name) {
  int idx = ctx->var_index(name);
  Exponent e(ctx->vars.size(), 0);
  e[idx] = 1;
  Scalar one = Scalar::one(ctx->field);
  return monomial(std::move(ctx), e, one);
}

TruncSeries TruncSeries::monomial(SeriesCtxPtr ctx, const Exponent& e, const Scalar& c) {
  TruncSeries s(std::move(ctx));
  s.add_term(e, c);
  return s;
}

void TruncSeries::add_term(const Exponent& e, const Scalar& c) {
  if (c.is_zero()) return;
  if (e.size() != ctx_->vars.size())
    fail(ErrorKind::InvalidInput, "exponent arity mismatch");
  if (total_degree(e) > ctx_->trunc) return;
  auto it = coeffs_.find(e);
  if (it == coeffs_.end()) {
    coeffs_.emplace(e, c);
  } else {
    it->second = it->second + c;
    if (it->second.is_zero()) coeffs_.erase(it);
  }
}

Scalar TruncSeries::coefficient(const Exponent& e) const {
  auto it = coeffs_.find(e);
  return it == coeffs_.end() ? Scalar::zero(ctx_->field) : it->second;
}

Scalar TruncSeries::constant_term() const {
  return coefficient(Exponent(ctx_->vars.size(), 0));
}

void TruncSeries::check_compatible(const TruncSeries& o) const {
  if (!ctx_ || !o.ctx_ || !(*ctx_ == *o.ctx_))
    fail(ErrorKind::MismatchedRing, "series over different ring contexts");
}

TruncSeries TruncSeries::operator+(const TruncSeries& o) const {
  check_compatible(o);
  TruncSeries r = *this;
  for (const auto& [e, c] : o.coeffs_) r.add_term(e, c);
  return r;
}

TruncSeries TruncSeries::operator-(const TruncSeries& o) const {
  check_compatible(o);
  TruncSeries r = *this;
  for (const auto& [e, c] : o.coeffs_) r.add_term(e, -c);
  return r;
}

TruncSeries TruncSeries::operator-() const {
  TruncSeries r(ctx_);
  for (const auto& [e, c] : coeffs_) r.coeffs_.emplace(e, -c);
  return r;
}

TruncSeries TruncSeries::scale(const Scalar& c) const {
  TruncSeries r(ctx_);
  if (c.is_zero()) return r;
  for (const auto& [e, v] : coeffs_) {
    Scalar w = v * c;
    if (!w.is_zero()) r.coeffs_.emplace(e, w);
  }
  return r;
}

TruncSeries TruncSeries::operator*(const TruncSeries& o) const {
  check_compatible(o);
  TruncSeries r(ctx_);
  const int N = ctx_->trunc;
  for (const auto& [ea, ca] : coeffs_) {
    int da = total_degree(ea);
    for (const auto& [eb, cb] : o.coeffs_) {
      if (da + total_degree(eb) > N) continue;
      Exponent e(ea.size());
      for (size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      r.add_term(e, ca * cb);
    }
  }
  return r;
}

TruncSeries TruncSeries::mul_monomial(const Exponent& me, const Scalar& c) const {
  TruncSeries r(ctx_);
  if (c.is_zero()) return r;
  const int N = ctx_->trunc;
  int dm = total_degree(me);
  for (const auto& [e, v] : coeffs_) {
    if (total_degree(e) + dm > N) continue;
    Exponent w(e.size());
    for (size_t i = 0; i < w.size(); ++i) w[i] = e[i] + me[i];
    r.add_term(w, v * c);
  }
  return r;
}

TruncSeries TruncSeries::invert() const {
  Scalar c0 = constant_term();
  if (c0.is_zero()) fail(ErrorKind::NotAUnit, "series has zero constant term");
  // a = c0 (1 - t) with ord(t) >= 1; a^{-1} = c0^{-1} (1 + t + t^2 + ...).
  Scalar c0inv = c0.inverse();
  TruncSeries one = constant(ctx_, Scalar::one(ctx_->field));
  TruncSeries t = one - scale(c0inv);
  TruncSeries acc = one, power = one;
  for (int k = 1; k <= ctx_->trunc; ++k) {
    power = power * t;
    if (power.is_zero()) break;
    acc = acc + power;
  }
  return acc.scale(c0inv);
}

int TruncSeries::order() const {
  if (coeffs_.empty()) return kOrderInfinity;
  return total_degree(coeffs_.begin()->first);  // graded map order
}

TruncSeries TruncSeries::substitute_zero(const std::string& var) const {
  int idx = ctx_->var_index(var);
  std::vector<std::string> new_vars = ctx_->vars;
  new_vars.erase(new_vars.begin() + idx);
  SeriesCtxPtr nctx = make_series_context(ctx_->field, new_vars, ctx_->trunc);
  TruncSeries r(nctx);
  for (const auto& [e, c] : coeffs_) {
    if (e[idx] != 0) continue;
    Exponent w = e;
    w.erase(w.begin() + idx);
    r.add_term(w, c);
  }
  return r;
}

TruncSeries TruncSeries::rename_vars(const SeriesCtxPtr& target,
                                     const std::vector<std::string>& mapping) const {
  if (mapping.size() != ctx_->vars.size())
    fail(ErrorKind::InvalidInput, "rename mapping arity mismatch");
  if (target->field != ctx_->field)
    fail(ErrorKind::MismatchedRing, "rename across different fields");
  std::vector<int> pos(mapping.size());
  for (size_t i = 0; i < mapping.size(); ++i) pos[i] = target->var_index(mapping[i]);
  TruncSeries r(target);
  for (const auto& [e, c] : coeffs_) {
    Exponent w(target->vars.size(), 0);
    for (size_t i = 0; i < e.size(); ++i) w[pos[i]] += e[i];
    r.add_term(w, c);
  }
  return r;
}

TruncSeries TruncSeries::with_trunc(int new_trunc) const {
  SeriesCtxPtr nctx = make_series_context(ctx_->field, ctx_->vars, new_trunc);
  TruncSeries r(nctx);
  for (const auto& [e, c] : coeffs_) r.add_term(e, c);
  return r;
}

bool TruncSeries::operator==(const TruncSeries& o) const {
  if (!ctx_ || !o.ctx_) return !ctx_ && !o.ctx_;
  if (!(*ctx_ == *o.ctx_)) return false;
  if (coeffs_.size() != o.coeffs_.size()) return false;
  auto it = coeffs_.begin();
  auto jt = o.coeffs_.begin();
  for (; it != coeffs_.end(); ++it, ++jt)
    if (it->first != jt->first || it->second != jt->second) return false;
  return true;
}

std::string TruncSeries::str() const {
  if (coeffs_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [e, c] : coeffs_) {
    std::string cs = c.str();
    bool neg = !cs.empty() && cs[0] == '-';
    if (first) {
      if (neg) { out << "-"; cs = cs.substr(1); }
    } else {
      out << (neg ? " - " : " + ");
      if (neg) cs = cs.substr(1);
    }
    first = false;
    std::string monos;
    for (size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!monos.empty()) monos += "*";
      monos += ctx_->vars[i];
      if (e[i] > 1) monos += "^" + std::to_string(e[i]);
    }
    if (monos.empty()) {
      out << cs;
    } else if (cs == "1") {
      out << monos;
    } else {
      out << cs << "*" << monos;
    }
  }
  return out.str();
}

namespace {
struct Parser {
  const std::string& s;
  const SeriesCtxPtr& ctx;
  size_t pos = 0;

  [[noreturn]] void err(const std::string& what) const {
    fail(ErrorKind::ParseError, what + " at position " + std::to_string(pos));
  }
  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eof() {
    skip_ws();
    return pos >= s.size();
  }
  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }

  int64_t parse_uint() {
    skip_ws();
    if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
      err("expected number");
    int64_t v = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      v = v * 10 + (s[pos] - '0');
      if (v > (int64_t(1) << 56)) err("number literal too large");
      ++pos;
    }
    return v;
  }

  std::string parse_ident() {
    skip_ws();
    size_t start = pos;
    if (pos >= s.size() || !(std::isalpha(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
      err("expected identifier");
    while (pos < s.size() &&
           (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
      ++pos;
    return s.substr(start, pos - start);
  }

  // term := [coeff] ( '*'? var ('^' uint)? )*
  TruncSeries parse_term() {
    Scalar coeff = Scalar::one(ctx->field);
    Exponent e(ctx->vars.size(), 0);
    bool saw_atom = false;
    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      int64_t num = parse_uint();
      if (peek() == '/') {
        ++pos;
        int64_t den = parse_uint();
        if (den == 0) err("zero denominator");
        coeff = Scalar(ctx->field, mpq_class(num, den));
      } else {
        coeff = Scalar(ctx->field, num);
      }
      saw_atom = true;
    }
    while (true) {
      char c = peek();
      if (c == '*') {
        ++pos;
        c = peek();
        if (!(std::isalpha(static_cast<unsigned char>(c)) || c == '_')) err("expected variable after '*'");
      }
      if (!(std::isalpha(static_cast<unsigned char>(c)) || c == '_')) break;
      size_t id_pos = pos;
      std::string name = parse_ident();
      int idx = -1;
      for (size_t i = 0; i < ctx->vars.size(); ++i)
        if (ctx->vars[i] == name) { idx = int(i); break; }
      if (idx < 0) {
        pos = id_pos;
        fail(ErrorKind::ParseError, "unknown variable '" + name + "' at position " +
                                        std::to_string(id_pos));
      }
      int exp = 1;
      if (peek() == '^') {
        ++pos;
        exp = int(parse_uint());
      }
      e[idx] += exp;
      saw_atom = true;
    }
    if (!saw_atom) err("expected term");
    TruncSeries t(ctx);
    t.add_term(e, coeff);
    return t;
  }

  TruncSeries parse_expr() {
    TruncSeries acc(ctx);
    bool negate = false;
    char c = peek();
    if (c == '+' || c == '-') {
      negate = (c == '-');
      ++pos;
    }
    while (true) {
      TruncSeries t = parse_term();
      acc = negate ? acc - t : acc + t;
      if (eof()) break;
      char op = peek();
      if (op == '+' || op == '-') {
        negate = (op == '-');
        ++pos;
      } else {
        err("unexpected character '" + std::string(1, op) + "'");
      }
    }
    return acc;
  }
};
}  // namespace

TruncSeries parse_series(const std::string& text, const SeriesCtxPtr& ctx) {
  Parser p{text, ctx};
  if (p.eof()) fail(ErrorKind::ParseError, "empty polynomial at position 0");
  return p.parse_expr();
}

}  // namespace mflab
