#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mflab/homalg.hpp"
#include "mflab/knoerrer.hpp"

namespace mflab {

// A named family of validated, reduced, pairwise non-isomorphic
// matrix factorizations over one ring.
struct CatalogEntry {
  std::string family;  // "An1v", "Ancurve", "Dn", "E6", "E7", "E8", "node"
  int n = 0;
  HypersurfaceRing ring;
  std::vector<MatrixFactorization> mfs;
};

// Families:
//   An1v    : y^{n+1} over k[[y]], factorizations (y^j, y^{n+1-j})
//   node    : xy over k[[x,y]], (x,y) and (y,x)
//   Ancurve : x^2 + y^{n+1}, the 2x2 family [[x, y^j],[y^{n+1-j}, -x]]
//   Dn      : x^2 y + y^{n-1}, the two 1x1 splittings and a 2x2 pair
//   E6/E7/E8: x^3 + y^4, x^3 + x y^3, x^3 + y^5
// Entries are deduplicated up to isomorphism with the given seed.
std::vector<CatalogEntry> ade_catalog(Field k, int trunc, const std::string& family,
                                      int max_n, uint64_t seed);

// The full default catalog used by the verification suites.
std::vector<CatalogEntry> ade_catalog_default(Field k, int trunc, uint64_t seed);

struct KawasakiRow {
  int n = 0;
  int64_t bound = 0;     // binomial(d+n-1, d-1)
  int64_t beta = 0;      // beta(Omega^{d+1}(R/m^n))
  bool ok = false;       // beta >= bound
  std::vector<int64_t> betti_sequence;
  std::string indec;     // "yes"/"no"/"skipped"/"inconclusive"
};

// Syzygy betti growth over a hypersurface of dimension >= 2.
KawasakiRow kawasaki_growth(const HypersurfaceRing& R, int n, bool check_indec,
                            uint64_t seed);

struct ChainMap {
  SMat alpha;  // n_{i+1} x n_i over the ambient ring
};

struct HaradaSaiReport {
  size_t chain_length = 0;
  int64_t length_bound = 0;     // b = max l(M_i / x^2 M_i)
  int64_t harada_sai_bound = 0; // 2^b - 1
  // Least prefix length whose composition vanishes mod (x)^2; 0 if none
  // within the chain.
  size_t vanishing_prefix = 0;
  bool within_bound = false;
};

// Composes a chain of non-isomorphisms and reduces modulo (x^2).
// NotFaithful if x fails the faithfulness check for a member.
HaradaSaiReport harada_sai_chain(const std::vector<MatrixFactorization>& mfs,
                                 const std::vector<ChainMap>& maps,
                                 const TruncSeries& x, uint64_t seed);

// R-submodule of k[[t]] over a numerical-semigroup curve ring, given by
// truncated generators.
struct FractionalModule {
  MonomialCurveRing curve;
  std::vector<TruncSeries> gens;  // over the full power-series ring in t
};

// The one-parameter family M_tau generated by {1, t + tau t^2} together with
// the conductor generators. DTooSmall when dim_k D < 3.
std::vector<FractionalModule> pullback_family(const MonomialCurveRing& curve,
                                              const std::vector<Scalar>& taus);

// Syzygy presentation of a fractional module over the curve algebra.
Presentation pres_from_fractional(const AlgebraPtr& A, const FractionalModule& fm);

struct BtFamilyRow {
  std::string tau;
  size_t betti = 0;
  size_t hlength = 0;
  bool indecomposable = false;
  bool distinct = true;  // pairwise non-isomorphic from earlier members
};

struct BtFamilyReport {
  std::vector<BtFamilyRow> rows;
  bool all_indecomposable = false;
  bool pairwise_non_isomorphic = false;
  bool equal_betti = false;
  bool equal_hlength = false;
  size_t common_hlength = 0;
  Certificate cert;
  int trunc = 0;
  uint64_t seed = 0;
};

BtFamilyReport bt_family_report(const MonomialCurveRing& curve,
                                const std::vector<Scalar>& taus, uint64_t seed,
                                int jobs = 1);

struct TransferRow {
  std::string source;
  size_t summands = 0;
  size_t hlength_cover = 0;
};

struct TransferReport {
  std::vector<TransferRow> rows;
  size_t family_size = 0;
  size_t distinct_summand_classes = 0;
  bool summand_bound_ok = false;   // every image has <= 2 indecomposable summands
  bool pool_growth_ok = false;     // distinct classes > ceil(family/2)
  std::string hclass_note;
};

// Sharp images of a family of pairwise non-isomorphic indecomposables of one
// h-length; the family is partitioned by h-length when values differ.
TransferReport knoerrer_transfer_report(const std::vector<MatrixFactorization>& family,
                                        uint64_t seed);

}  // namespace mflab
