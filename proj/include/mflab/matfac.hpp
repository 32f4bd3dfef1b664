#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mflab/linalg.hpp"
#include "mflab/rings.hpp"

namespace mflab {

using SMat = std::vector<std::vector<TruncSeries>>;

SMat smat_mul(const SMat& a, const SMat& b);
SMat smat_identity(const SeriesCtxPtr& ctx, size_t n, const TruncSeries& diag);
bool smat_equal(const SMat& a, const SMat& b);

// A pair (phi, psi) of n x n matrices over the ambient series ring with
// phi psi = psi phi = f I_n at truncation. Coker(phi) is the associated
// stable module over R = S/(f).
struct MatrixFactorization {
  HypersurfaceRing ring;
  SMat phi, psi;

  size_t size() const { return phi.size(); }
  MatrixFactorization at_trunc(int new_trunc) const;
};

MatrixFactorization make_mf(HypersurfaceRing ring, SMat phi, SMat psi);

struct MfValidation {
  bool valid = false;
  bool reduced = false;
  // First offending entry when invalid: which product, position, deviation.
  std::string offender;
};

// Checks phi psi = psi phi = f I exactly at truncation, and whether all
// entries lie in the maximal ideal.
MfValidation mf_validate(const MatrixFactorization& mf);
void mf_validate_or_throw(const MatrixFactorization& mf);
bool mf_is_reduced(const MatrixFactorization& mf);

// (psi, phi): the syzygy shift.
MatrixFactorization mf_shift(const MatrixFactorization& mf);

MatrixFactorization mf_direct_sum(const MatrixFactorization& a,
                                  const MatrixFactorization& b);

// Splits off trivial blocks by exact unit pivoting until all entries of both
// matrices lie in the maximal ideal. Coker is unchanged up to free summands.
MatrixFactorization mf_reduce(const MatrixFactorization& mf);

// Transpose convention: Tr(Coker phi) = Coker(psi^t), i.e. (psi^t, phi^t).
// Input must be reduced.
MatrixFactorization mf_transpose(const MatrixFactorization& mf);

// Auslander-Reiten translate via transpose, d syzygy shifts, and the R-dual;
// d is the Krull dimension of the ring.
MatrixFactorization mf_ar_translate(const MatrixFactorization& mf);

enum class IsoAnswer { Yes, No };

struct IsoResult {
  bool isomorphic = false;
  // Constant parts of an isomorphism witness pair (alpha, beta), when found.
  std::optional<DenseMat> alpha_const;
  std::string method;  // "direct", "random", "exhaustive", "size", "empty"
};

// Module isomorphism test Coker(phi_a) =~ Coker(phi_b) by searching the
// intertwining space for alpha with invertible constant term. Randomized
// search uses the given seed; exhaustive fallback enumerates the
// constant-term subspace when that is feasible. Throws Inconclusive when
// neither settles the question.
IsoResult mf_is_isomorphic(const MatrixFactorization& a,
                           const MatrixFactorization& b, uint64_t seed);

// Transports an MF along a variable renaming into a target ring whose
// defining equation matches the renamed f.
MatrixFactorization mf_rename_vars(const MatrixFactorization& mf,
                                   const HypersurfaceRing& target,
                                   const std::vector<std::string>& mapping);

}  // namespace mflab
