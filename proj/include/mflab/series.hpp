#pragma once

#include <limits>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "mflab/field.hpp"

namespace mflab {

// Exponent vector, parallel to the variable list of the ambient context.
using Exponent = std::vector<int>;

inline int total_degree(const Exponent& e) {
  int d = 0;
  for (int x : e) d += x;
  return d;
}

// Graded order on exponents: total degree first, then lexicographic.
// Map iteration therefore visits terms from lowest order upward.
struct GradedLexLess {
  bool operator()(const Exponent& a, const Exponent& b) const {
    int da = total_degree(a), db = total_degree(b);
    if (da != db) return da < db;
    return a < b;
  }
};

struct SeriesContext {
  Field field;
  std::vector<std::string> vars;
  int trunc;  // total-degree bound N

  bool operator==(const SeriesContext& o) const {
    return field == o.field && vars == o.vars && trunc == o.trunc;
  }
  int var_index(const std::string& name) const;  // UnknownVariable if absent
};

using SeriesCtxPtr = std::shared_ptr<const SeriesContext>;

SeriesCtxPtr make_series_context(Field f, std::vector<std::string> vars, int trunc);

constexpr int kOrderInfinity = std::numeric_limits<int>::max();

// Multivariate power series truncated at total degree N, sparse exponent map.
// Stored coefficients are always nonzero and of total degree <= N.
class TruncSeries {
 public:
  TruncSeries() = default;
  explicit TruncSeries(SeriesCtxPtr ctx) : ctx_(std::move(ctx)) {}

  static TruncSeries constant(SeriesCtxPtr ctx, const Scalar& c);
  static TruncSeries constant_int(SeriesCtxPtr ctx, int64_t c);
  static TruncSeries variable(SeriesCtxPtr ctx, const std::string& name);
  static TruncSeries monomial(SeriesCtxPtr ctx, const Exponent& e, const Scalar& c);

  const SeriesCtxPtr& context() const { return ctx_; }
  const std::map<Exponent, Scalar, GradedLexLess>& terms() const { return coeffs_; }

  bool is_zero() const { return coeffs_.empty(); }
  Scalar coefficient(const Exponent& e) const;
  Scalar constant_term() const;

  TruncSeries operator+(const TruncSeries& o) const;
  TruncSeries operator-(const TruncSeries& o) const;
  TruncSeries operator*(const TruncSeries& o) const;
  TruncSeries operator-() const;
  TruncSeries scale(const Scalar& c) const;
  // Multiply by the monomial c * x^e (with truncation).
  TruncSeries mul_monomial(const Exponent& e, const Scalar& c) const;

  // Inverse of a unit (nonzero constant term); NotAUnit otherwise.
  TruncSeries invert() const;

  // Minimal total degree of a nonzero term; kOrderInfinity for 0.
  int order() const;

  // Set var := 0 and drop it from the context.
  TruncSeries substitute_zero(const std::string& var) const;

  // Transport to a context with the same field/trunc under a variable rename;
  // `mapping[i]` is the image of vars[i] in the target context.
  TruncSeries rename_vars(const SeriesCtxPtr& target,
                          const std::vector<std::string>& mapping) const;
  // Widen/narrow truncation (terms above the new bound are dropped).
  TruncSeries with_trunc(int new_trunc) const;

  bool operator==(const TruncSeries& o) const;
  bool operator!=(const TruncSeries& o) const { return !(*this == o); }

  std::string str() const;

  // Adds c at exponent e, dropping the term if it cancels or exceeds N.
  void add_term(const Exponent& e, const Scalar& c);

 private:
  void check_compatible(const TruncSeries& o) const;
  SeriesCtxPtr ctx_;
  std::map<Exponent, Scalar, GradedLexLess> coeffs_;
};

// Polynomial grammar: terms joined by '+'/'-'; a term is an optional
// coefficient (decimal integer or a/b rational) and '*'-joined variable
// powers `var[^exp]`. Whitespace is insignificant. Throws ParseError with
// the offending position.
TruncSeries parse_series(const std::string& text, const SeriesCtxPtr& ctx);

}  // namespace mflab
