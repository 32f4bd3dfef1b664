#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "mflab/homalg.hpp"
#include "mflab/matfac.hpp"

namespace mflab {

// M -> M#: the reduced 2n x 2n factorization of f + u^2 with blocks
// [[psi, u],[-u, phi]] and [[phi, -u],[u, psi]].
MatrixFactorization sharp_mf(const MatrixFactorization& mf);

// N -> N/uN: substitutes the cover variable by zero and reduces. NotACover
// when the ring does not have the shape f + u^2.
MatrixFactorization flat_mf(const MatrixFactorization& mf);
MatrixFactorization flat_mf_raw(const MatrixFactorization& mf);  // no reduction

struct RoundtripReport {
  std::string identity;
  bool holds = false;
  IsoResult witness;
  int trunc = 0;
};

// flat(sharp(M)) =~ M + Omega M.
RoundtripReport verify_roundtrip_sharp_flat(const MatrixFactorization& mf, uint64_t seed);
// sharp(flat(N)) =~ N + Omega N for N over the cover.
RoundtripReport verify_roundtrip_flat_sharp(const MatrixFactorization& mf, uint64_t seed);

// The [[psi,u],[-u,phi]] block shape (or an already-normalized u +- phi'
// pair) converted to the pair (u + phi', u - phi') presenting the same
// module; nullopt when the deterministic conversion does not apply.
std::optional<MatrixFactorization> mf_u_normal_form(const MatrixFactorization& mf);

struct SplitReport {
  bool generic_homotopy_ok = false;
  bool section_found = false;
  bool used_normal_form = false;
  std::string detail;
  int trunc = 0;
};

// Verifies symbolically, in the algebra k[u,f][phi]/(phi^2 + f), that
// (1/2)[[-1,0],[1,1]] is a contracting homotopy for multiplication by u on
// the two-periodic cone complex with differentials [[-Psi,0],[u,Phi]] and
// [[-Phi,0],[u,Psi]], Phi = u + phi, Psi = u - phi.
bool verify_splitting_homotopy_generic(Field k);

// Certifies split exactness of 0 -> Omega N -> (flat N)# -> N -> 0 for a
// concrete factorization over the cover: explicit section in normal form,
// linear solve otherwise.
SplitReport verify_splitting_section(const MatrixFactorization& N);

struct HomCompatReport {
  size_t lhs_dim = 0, rhs_dim = 0;
  bool equal = false;
  int trunc = 0;
  Certificate cert;
};

// dim stableHom(M#, C#) over the cover vs dim stableHom(M + Omega M, C) over
// the base, with a two-level stabilization certificate.
HomCompatReport verify_sharp_hom_compat(const MatrixFactorization& M,
                                        const MatrixFactorization& C);

}  // namespace mflab
