#pragma once

// Shared internals of the module engine (not installed).

#include "mflab/homalg.hpp"

namespace mflab::detail {

struct HomSolve {
  // RREF'd solution rows over [alpha coords | beta coords].
  DenseMat rows;
  size_t ua = 0, ub = 0;
  RowSpace zero_reps;  // span of the representatives inducing the zero map
};

HomSolve solve_hom(const Presentation& M, const Presentation& N);

HomSpace assemble(const Presentation& M, const Presentation& N, const HomSolve& hs,
                  RowSpace& quotient_span);

RowSpace stable_zero_span(const Presentation& M, const Presentation& N,
                          const HomSolve& hs);

SMat alpha_from_coords(const Presentation& M, const Presentation& N, const KVec& v);
KVec alpha_coords(const Presentation& M, const Presentation& N, const SMat& alpha);
KVec apply_to_relations(const Presentation& M, const Presentation& N, const SMat& alpha);
SMat scale_alpha(const AlgebraPtr& A, const SMat& alpha, const TruncSeries& x);

// Composition of homomorphism representatives (matrix product over A).
SMat compose_alpha(const AlgebraPtr& A, const SMat& f, const SMat& g);

int kvec_order(const AlgebraPtr& A, const KVec& v, size_t blocks);
// Minimal truncation weight over the support (certification windows).
int kvec_weight(const AlgebraPtr& A, const KVec& v, size_t blocks);

// Minimal-generator selection used by the kernel machinery: certified
// candidates sorted by m-adic order, spanning m*K, keeping those that grow
// the span. Candidates above the window cutoff are discarded.
std::vector<KVec> select_min_gens(const AlgebraPtr& A, size_t blocks,
                                  std::vector<KVec> candidates, int cutoff,
                                  size_t* discarded);

// Presentation of the A-submodule of a realized module generated by the given
// ambient vectors (minimal generators are selected, then their syzygies).
Presentation submodule_presentation(const Realized& R, const std::vector<KVec>& span_vecs,
                                    std::vector<KVec>* chosen_gens = nullptr);

// Echelon span with coefficient tracking: inserted vectors get tag slots, and
// express() recovers the coefficients of a vector over the inserted ones.
class SpanTracker {
 public:
  SpanTracker(Field k, size_t main_cols, size_t max_tags)
      : main_(main_cols), tags_(max_tags), count_(0), rs_(k, main_cols + max_tags) {}

  bool insert(const KVec& v) {
    KVec w = v;
    w.resize(main_ + tags_, Scalar::zero(rs_.field()));
    w[main_ + count_] = Scalar::one(rs_.field());
    if (!rs_.insert(w)) return false;  // cannot happen for independent inserts
    ++count_;
    return true;
  }

  // Coefficients over the inserted vectors, or nullopt if not in the span.
  std::optional<KVec> express(const KVec& v) const {
    KVec w = v;
    w.resize(main_ + tags_, Scalar::zero(rs_.field()));
    KVec r = rs_.reduce(w);
    for (size_t t = 0; t < main_; ++t)
      if (!r[t].is_zero()) return std::nullopt;
    KVec coeffs(count_, Scalar::zero(rs_.field()));
    for (size_t t = 0; t < count_; ++t) coeffs[t] = -r[main_ + t];
    return coeffs;
  }

  size_t count() const { return count_; }

 private:
  size_t main_, tags_, count_;
  RowSpace rs_;
};

// Operator of a homomorphism representative on the quotient coordinates of
// the realized source (target = source ring; used for endomorphisms).
DenseMat alpha_operator(const Realized& R, const SMat& alpha);

// Search a matrix subspace for an element with invertible constant part.
// Tries basis elements, seeded random combinations, then exhaustive
// projective enumeration when p^dim is within budget. Returns the witness,
// or nullopt+conclusive=false when the search was exhaustive.
struct InvertibleSearch {
  std::optional<DenseMat> witness;
  bool conclusive = false;
};
InvertibleSearch find_invertible_in_span(const std::vector<DenseMat>& gens, size_t n,
                                         uint64_t seed);

}  // namespace mflab::detail
