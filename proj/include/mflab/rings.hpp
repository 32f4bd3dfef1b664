#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "mflab/series.hpp"

namespace mflab {

// R = S/(f) for S = k[[x_0..x_d]] truncated at total degree N.
// Invariants: f != 0 and ord(f) >= 2 (f lies in the square of the maximal
// ideal), and ord(f) <= N so f survives truncation.
struct HypersurfaceRing {
  SeriesCtxPtr S;
  TruncSeries f;
  // Set when the ring was produced by double_branched_cover.
  std::optional<size_t> cover_var;

  int dim() const { return int(S->vars.size()) - 1; }
  Field field() const { return S->field; }
  int trunc() const { return S->trunc; }
  HypersurfaceRing at_trunc(int new_trunc) const;
};

HypersurfaceRing make_hypersurface(SeriesCtxPtr S, TruncSeries f);

struct CoverResult {
  HypersurfaceRing ring;
  std::string cover_name;
  bool renamed = false;  // true if "u" was taken and a fallback name was used
};

// R^# = S[[u]]/(f + u^2); rejects characteristic 2.
CoverResult double_branched_cover(const HypersurfaceRing& R);

// e(R) = ord(f) for hypersurfaces. The module engine provides the
// Hilbert-difference cross-check.
int ring_multiplicity(const HypersurfaceRing& R);

// Identifies the variable v such that f = g + v^2 with g free of v,
// i.e. the shape produced by double_branched_cover.
std::optional<size_t> detect_cover_var(const HypersurfaceRing& R);

// k[[t^{a_1},...,t^{a_g}]] truncated at t-degree N.
struct MonomialCurveRing {
  Field field = Field::rationals();
  std::vector<int64_t> gens;  // a_1 < ... < a_g, gcd 1
  int trunc = 0;
};

MonomialCurveRing make_monomial_curve(Field field, std::vector<int64_t> gens, int trunc);

// Frobenius number + 1: minimal c with [c, inf) inside the semigroup.
int64_t curve_conductor(const std::vector<int64_t>& gens);
// True iff the numerical semigroup is symmetric.
bool curve_is_gorenstein(const std::vector<int64_t>& gens);
bool semigroup_contains(const std::vector<int64_t>& gens, int64_t n);

// The truncated quotient algebra A = R / m^{N+1} with a fixed monomial
// k-basis in ascending graded order (basis[0] = 1). Elements are represented
// by series in normal form, supported on basis monomials only.
//
// Hypersurface normal form: one local rewrite rule lt(f) -> lt(f) - c^{-1} f,
// where lt(f) is the reverse-lex largest monomial of the lowest-degree part
// of f (the pure power v^m when one exists; u^2 for covers, xy for the node).
// The normal-form basis is the set of monomials not divisible by lt(f), and
// reduction never lowers total degree, so m^j is spanned by the basis
// monomials of order >= j.
class Algebra : public std::enable_shared_from_this<Algebra> {
 public:
  static std::shared_ptr<const Algebra> hypersurface(const HypersurfaceRing& R);
  static std::shared_ptr<const Algebra> curve(const MonomialCurveRing& C);

  Field field() const { return ctx_->field; }
  int trunc() const { return ctx_->trunc; }
  const SeriesCtxPtr& ambient() const { return ctx_; }
  bool is_curve() const { return curve_.has_value(); }
  const std::optional<HypersurfaceRing>& hyper() const { return hyper_; }
  const std::optional<MonomialCurveRing>& curve_ring() const { return curve_; }
  // Krull dimension of R (not of the truncation).
  int krull_dim() const;

  size_t dim() const { return basis_.size(); }
  const std::vector<Exponent>& basis() const { return basis_; }
  // m-adic order of a basis element (filtration by powers of the maximal
  // ideal; used for minimal generators and Hilbert functions).
  int order_of(size_t i) const { return orders_[i]; }
  // Truncation weight: the grading the truncation cuts at (total degree for
  // hypersurfaces, t-degree for curves; used for certification windows).
  int weight_of(size_t i) const { return total_degree(basis_[i]); }
  // Index of a basis monomial; InvalidInput if not in the basis.
  size_t index_of(const Exponent& e) const;

  // Normal form of an arbitrary ambient series.
  TruncSeries reduce(const TruncSeries& s) const;
  bool is_normal_form(const TruncSeries& s) const;

  TruncSeries mul(const TruncSeries& a, const TruncSeries& b) const;
  TruncSeries one() const { return TruncSeries::constant_int(ctx_, 1); }

  // Sparse product of two basis elements, from the cached table.
  using SparseVec = std::vector<std::pair<uint32_t, Scalar>>;
  const SparseVec& basis_product(size_t i, size_t j) const;

  // Sparse coordinates of a normal-form series.
  SparseVec sparse(const TruncSeries& nf) const;
  TruncSeries from_sparse(const SparseVec& v) const;

  // Generators of the maximal ideal, in normal form.
  const std::vector<TruncSeries>& m_gens() const { return m_gens_; }
  // m-adic order of a normal-form element (kOrderInfinity for 0).
  int elem_order(const TruncSeries& nf) const;
  // Truncation weight of a normal-form element (kOrderInfinity for 0).
  int elem_weight(const TruncSeries& nf) const;

  // Rebuild the same ring at a different truncation (for certificates).
  std::shared_ptr<const Algebra> at_trunc(int new_trunc) const;

  bool same_ring(const Algebra& o) const;

 private:
  Algebra() = default;
  void build_basis();
  void build_table();

  SeriesCtxPtr ctx_;
  std::optional<HypersurfaceRing> hyper_;
  std::optional<MonomialCurveRing> curve_;

  // Rewrite rule lt -> rest (hypersurface only).
  Exponent lt_exp_;
  TruncSeries lt_rest_;
  bool has_rule_ = false;

  std::vector<Exponent> basis_;
  std::vector<int> orders_;
  std::unordered_map<std::string, size_t> index_;  // key: packed exponent
  std::vector<TruncSeries> m_gens_;
  std::vector<SparseVec> table_;  // dim*dim products
};

using AlgebraPtr = std::shared_ptr<const Algebra>;

// Element of the truncated quotient ring, kept in normal form.
struct QuotientElem {
  AlgebraPtr A;
  TruncSeries rep;
};

QuotientElem reduce_mod_f(const TruncSeries& s, const AlgebraPtr& A);

}  // namespace mflab
