#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mflab/linalg.hpp"
#include "mflab/matfac.hpp"
#include "mflab/rings.hpp"

namespace mflab {

// Cokernel presentation M = Coker(mat : A^cols -> A^rows) over the truncated
// quotient algebra. Entries are kept in normal form.
struct Presentation {
  AlgebraPtr A;
  size_t rows = 0, cols = 0;
  std::vector<TruncSeries> entries;  // row-major, rows*cols

  const TruncSeries& at(size_t i, size_t j) const { return entries[i * cols + j]; }
  TruncSeries& at(size_t i, size_t j) { return entries[i * cols + j]; }
  bool is_minimal() const;  // no unit entries

  static Presentation free_module(AlgebraPtr A, size_t rank);
  static Presentation zero_module(AlgebraPtr A);
  // k = A/m presented by the maximal-ideal generators.
  static Presentation simple_k(AlgebraPtr A);
  Presentation direct_sum(const Presentation& o) const;
};

Presentation pres_from_mf(const MatrixFactorization& mf, AlgebraPtr A);
Presentation pres_from_mf(const MatrixFactorization& mf);

// Strips unit entries (Schur complement steps); Coker unchanged.
Presentation pres_minimize(const Presentation& P);

// k-realization of a presentation: the span of the relation columns inside
// k^{rows * dim A}, with ambient coordinates indexed by (generator, basis).
struct Realized {
  Presentation P;
  size_t D = 0;        // dim A
  size_t ambient = 0;  // rows * D
  RowSpace image;      // A-span of relation columns
  Realized() : image(Field::rationals(), 0) {}

  size_t length() const { return ambient - image.dim(); }
  size_t coord(size_t gen, size_t basis_idx) const { return gen * D + basis_idx; }
};

Realized realize(const Presentation& P);

using KVec = std::vector<Scalar>;

// v (blocks of length D per generator) times a ring element.
KVec module_mul(const AlgebraPtr& A, size_t blocks, const KVec& v,
                const Algebra::SparseVec& elem);
// Ambient vector of the element with component `entry` in block `gen`.
KVec ambient_vector(const AlgebraPtr& A, size_t blocks, size_t gen,
                    const Algebra::SparseVec& entry);

// Multiplication operator by a ring element on the quotient coordinates of a
// realized module.
DenseMat action_matrix(const Realized& R, const TruncSeries& elem);

// ---- kernels and resolutions ----

struct KernelResult {
  // Certified minimal generators of the kernel of P's matrix as a submodule
  // of A^cols (ambient vectors of length cols * D).
  std::vector<KVec> gens;
  size_t discarded_high_order = 0;  // candidates above the certification window
  int window_cutoff = 0;
};

KernelResult kernel_min_gens(const Presentation& P);

// The next minimal differential: presentation of ker as quotient target,
// i.e. the matrix A^{#gens} -> A^{cols} with the kernel generators as columns.
Presentation kernel_presentation(const Presentation& P);

// Minimal free resolution steps d_1..d_t with d_i d_{i+1} = 0; d_1 presents
// the minimized module. WindowExceeded when the certification window closes.
std::vector<Presentation> minimal_resolution(const Presentation& P, int steps);

// ---- Hom and stable Hom ----

struct HomSpace {
  Presentation src, tgt;
  // Basis homomorphisms alpha (tgt.rows x src.rows over A) with lift
  // witnesses beta (tgt.cols x src.cols over A): alpha * A_src = A_tgt * beta.
  std::vector<SMat> alphas;
  std::vector<SMat> betas;
  size_t dim = 0;
  int trunc = 0;
};

// Hom(M, N): intertwining solutions modulo representatives inducing the zero
// map. Basis is reported in reduced row-echelon position.
HomSpace hom_space(const Presentation& M, const Presentation& N);

// Stable Hom: additionally quotients by maps factoring through projectives.
HomSpace stable_hom(const Presentation& M, const Presentation& N);

size_t hom_dim(const Presentation& M, const Presentation& N);
size_t stable_hom_dim(const Presentation& M, const Presentation& N);

// ---- numerical invariants ----

// Minimal number of generators dim_k M/mM.
size_t betti(const Presentation& P);

struct MultiplicityResult {
  int64_t value = 0;
  std::vector<int64_t> hilbert;  // l(M/m^{j+1}M), j = 0..N-1
};

// Hilbert-Samuel multiplicity: d-th finite difference of the length
// sequence, required constant over the last three in-window samples.
MultiplicityResult multiplicity_module(const Presentation& P);

// dim_k Ext^i(M, N) for i >= 1.
size_t ext_dim(const Presentation& M, const Presentation& N, int i);

// Whether multiplication by x on M factors through a projective; solved as a
// lifting problem and cross-checked against x * stableEnd(M) = 0.
bool check_faithful_element(const Presentation& M, const TruncSeries& x);

// Minimal c with m^c * stableEnd(M) = 0; InfiniteLength when the window is
// exhausted before stabilizing.
int annihilator_exponent(const Presentation& M);

// ---- endomorphism algebra and indecomposability ----

struct EndAlgebra {
  Presentation M;
  size_t dim = 0;
  std::vector<SMat> basis;                  // representatives
  std::vector<DenseMat> left_mult;          // regular representation, dim x dim
  std::vector<Scalar> unit_coords;          // identity in basis coordinates
  std::vector<std::vector<KVec>> structure; // structure[i][j] = coords of b_i b_j
  // Reduction modulo the zero-map representatives (fixes coordinates).
  std::function<KVec(const KVec&)> zero_reduce;
};

EndAlgebra end_algebra(const Presentation& M);

// Jacobson radical of an abstract algebra given by left-multiplication
// matrices over F_p (Friedl-Ronyai chain); returns a basis of the radical as
// coordinate vectors. The result is verified nilpotent.
std::vector<KVec> radical_basis(const std::vector<DenseMat>& left_mult, Field k);

enum class IndecVerdict { Yes, No, Inconclusive };

struct IndecResult {
  IndecVerdict verdict = IndecVerdict::Inconclusive;
  std::string detail;
  // For No: a verified splitting M = M1 + M2 (presentations of the two
  // idempotent pieces).
  std::optional<Presentation> part1, part2;
  size_t end_dim = 0;
};

IndecResult is_indecomposable(const Presentation& M, uint64_t seed);

// Module isomorphism test on presentations (Nakayama: a homomorphism with
// invertible constant part between minimal presentations of equal length is
// an isomorphism).
IsoResult pres_isomorphic(const Presentation& a, const Presentation& b, uint64_t seed);

// ---- lattice approximation of the simple module ----

struct ApproximationResult {
  Presentation G;          // the lattice part X
  Presentation Y;          // kernel of X -> k
  std::vector<Scalar> map_to_k;  // image of each generator of G in k
  int kernel_pd = -1;      // verified projective-dimension bound (<= d)
  bool d0_caveat = false;  // dimension-0 rings are outside the stated scope
  std::string mcm_certificate;
};

// Minimal lattice approximation G -> k over a Gorenstein ring of Krull
// dimension <= 2, by resolving Ext^d(k, R), dualizing, and taking the kernel
// at spot d; free summands inside the kernel of the map are stripped.
ApproximationResult lat_approximation_of_simple(const AlgebraPtr& A);

struct HLength {
  size_t value = 0;
  int trunc = 0;
};

// l_R(stableHom(M, M + G)) with G the approximation of k.
HLength hlength(const Presentation& M, const Presentation& G);

// ---- certified (two-level) wrappers ----

struct Certificate {
  int trunc = 0;
  int checked_at = 0;
  bool stable = false;
};

// Runs `compute` at N and N+2 and requires equal values; NotStabilized
// otherwise. `compute` receives the truncation level.
int64_t certified_value(const std::function<int64_t(int)>& compute, int trunc,
                        Certificate* cert_out, const std::string& what,
                        bool check_three = false);

}  // namespace mflab
