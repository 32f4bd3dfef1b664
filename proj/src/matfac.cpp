#include "mflab/matfac.hpp"

#include <algorithm>

#include "mflab/homalg.hpp"

namespace mflab {

SMat smat_mul(const SMat& a, const SMat& b) {
  size_t n = a.size(), m = b.empty() ? 0 : b[0].size(), k = b.size();
  SMat r(n);
  for (size_t i = 0; i < n; ++i) {
    r[i].resize(m);
    for (size_t j = 0; j < m; ++j) {
      TruncSeries acc = a[i].empty() ? TruncSeries() : TruncSeries(a[i][0].context());
      for (size_t t = 0; t < k; ++t) {
        TruncSeries prod = a[i][t] * b[t][j];
        acc = t == 0 ? prod : acc + prod;
      }
      r[i][j] = acc;
    }
  }
  return r;
}

SMat smat_identity(const SeriesCtxPtr& ctx, size_t n, const TruncSeries& diag) {
  SMat r(n);
  for (size_t i = 0; i < n; ++i) {
    r[i].assign(n, TruncSeries(ctx));
    r[i][i] = diag;
  }
  return r;
}

bool smat_equal(const SMat& a, const SMat& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != b[i].size()) return false;
    for (size_t j = 0; j < a[i].size(); ++j)
      if (a[i][j] != b[i][j]) return false;
  }
  return true;
}

MatrixFactorization MatrixFactorization::at_trunc(int new_trunc) const {
  MatrixFactorization r;
  r.ring = ring.at_trunc(new_trunc);
  auto lift = [&](const SMat& m) {
    SMat out(m.size());
    for (size_t i = 0; i < m.size(); ++i)
      for (const auto& e : m[i])
        out[i].push_back(e.rename_vars(r.ring.S, ring.S->vars));
    return out;
  };
  r.phi = lift(phi);
  r.psi = lift(psi);
  return r;
}

MatrixFactorization make_mf(HypersurfaceRing ring, SMat phi, SMat psi) {
  size_t n = phi.size();
  if (psi.size() != n)
    fail(ErrorKind::InvalidInput, "phi and psi must have the same size");
  for (const auto& row : phi)
    if (row.size() != n) fail(ErrorKind::InvalidInput, "phi is not square");
  for (const auto& row : psi)
    if (row.size() != n) fail(ErrorKind::InvalidInput, "psi is not square");
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      if (!(*phi[i][j].context() == *ring.S) || !(*psi[i][j].context() == *ring.S))
        fail(ErrorKind::MismatchedRing, "matrix entries not over the ambient ring");
  return MatrixFactorization{std::move(ring), std::move(phi), std::move(psi)};
}

bool mf_is_reduced(const MatrixFactorization& mf) {
  for (const SMat* m : {&mf.phi, &mf.psi})
    for (const auto& row : *m)
      for (const auto& e : row)
        if (!e.constant_term().is_zero()) return false;
  return true;
}

MfValidation mf_validate(const MatrixFactorization& mf) {
  MfValidation rep;
  size_t n = mf.size();
  const char* names[2] = {"phi*psi", "psi*phi"};
  SMat prods[2] = {smat_mul(mf.phi, mf.psi), smat_mul(mf.psi, mf.phi)};
  for (int w = 0; w < 2; ++w) {
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) {
        TruncSeries expect = i == j ? mf.ring.f : TruncSeries(mf.ring.S);
        TruncSeries dev = prods[w][i][j] - expect;
        if (!dev.is_zero()) {
          rep.valid = false;
          rep.offender = std::string(names[w]) + "[" + std::to_string(i) + "][" +
                         std::to_string(j) + "] deviates by " + dev.str();
          return rep;
        }
      }
  }
  rep.valid = true;
  rep.reduced = mf_is_reduced(mf);
  return rep;
}

void mf_validate_or_throw(const MatrixFactorization& mf) {
  MfValidation rep = mf_validate(mf);
  if (!rep.valid) fail(ErrorKind::NotAFactorization, rep.offender);
}

MatrixFactorization mf_shift(const MatrixFactorization& mf) {
  return MatrixFactorization{mf.ring, mf.psi, mf.phi};
}

MatrixFactorization mf_direct_sum(const MatrixFactorization& a,
                                  const MatrixFactorization& b) {
  if (!(*a.ring.S == *b.ring.S) || !(a.ring.f == b.ring.f))
    fail(ErrorKind::MismatchedRing, "direct sum of factorizations over different rings");
  size_t n = a.size(), m = b.size();
  auto block = [&](const SMat& x, const SMat& y) {
    SMat r(n + m);
    for (size_t i = 0; i < n + m; ++i) r[i].assign(n + m, TruncSeries(a.ring.S));
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) r[i][j] = x[i][j];
    for (size_t i = 0; i < m; ++i)
      for (size_t j = 0; j < m; ++j) r[n + i][n + j] = y[i][j];
    return r;
  };
  return MatrixFactorization{a.ring, block(a.phi, b.phi), block(a.psi, b.psi)};
}

namespace {
// One unit-pivot elimination step on (A, B) with A B = B A = f I. Scales and
// clears row i / column j of A by invertible row/column operations, mirrors
// the inverse operations on B, then deletes the pivot row/column pair.
void pivot_step(SMat& A, SMat& B, size_t i, size_t j) {
  size_t n = A.size();
  // Scale A row i so the pivot becomes 1; B column i absorbs the inverse.
  TruncSeries u = A[i][j];
  TruncSeries uinv = u.invert();
  for (size_t c = 0; c < n; ++c) A[i][c] = A[i][c] * uinv;
  for (size_t r = 0; r < n; ++r) B[r][i] = B[r][i] * u;
  // Clear column j of A with row operations; B columns absorb inverses.
  for (size_t r = 0; r < n; ++r) {
    if (r == i || A[r][j].is_zero()) continue;
    TruncSeries c = A[r][j];
    for (size_t t = 0; t < n; ++t) A[r][t] = A[r][t] - c * A[i][t];
    for (size_t t = 0; t < n; ++t) B[t][i] = B[t][i] + c * B[t][r];
  }
  // Clear row i of A with column operations; B rows absorb inverses.
  for (size_t c = 0; c < n; ++c) {
    if (c == j || A[i][c].is_zero()) continue;
    TruncSeries d = A[i][c];
    for (size_t t = 0; t < n; ++t) A[t][c] = A[t][c] - d * A[t][j];
    for (size_t t = 0; t < n; ++t) B[j][t] = B[j][t] + d * B[c][t];
  }
  // Drop A's row i and column j, and B's row j and column i.
  SMat A2, B2;
  for (size_t r = 0; r < n; ++r) {
    if (r == i) continue;
    std::vector<TruncSeries> row;
    for (size_t c = 0; c < n; ++c)
      if (c != j) row.push_back(A[r][c]);
    A2.push_back(std::move(row));
  }
  for (size_t r = 0; r < n; ++r) {
    if (r == j) continue;
    std::vector<TruncSeries> row;
    for (size_t c = 0; c < n; ++c)
      if (c != i) row.push_back(B[r][c]);
    B2.push_back(std::move(row));
  }
  A = std::move(A2);
  B = std::move(B2);
}

bool find_unit(const SMat& m, size_t& oi, size_t& oj) {
  for (size_t i = 0; i < m.size(); ++i)
    for (size_t j = 0; j < m.size(); ++j)
      if (!m[i][j].constant_term().is_zero()) { oi = i; oj = j; return true; }
  return false;
}
}  // namespace

MatrixFactorization mf_reduce(const MatrixFactorization& mf) {
  SMat phi = mf.phi, psi = mf.psi;
  while (true) {
    size_t i, j;
    if (find_unit(phi, i, j)) {
      pivot_step(phi, psi, i, j);
    } else if (find_unit(psi, i, j)) {
      pivot_step(psi, phi, i, j);
    } else {
      break;
    }
  }
  return MatrixFactorization{mf.ring, std::move(phi), std::move(psi)};
}

namespace {
SMat smat_transpose(const SMat& m) {
  size_t n = m.size();
  SMat r(n);
  for (size_t i = 0; i < n; ++i) {
    r[i].resize(n);
    for (size_t j = 0; j < n; ++j) r[i][j] = m[j][i];
  }
  return r;
}
}  // namespace

MatrixFactorization mf_transpose(const MatrixFactorization& mf) {
  if (!mf_is_reduced(mf))
    fail(ErrorKind::NotReduced, "transpose requires a reduced factorization");
  return MatrixFactorization{mf.ring, smat_transpose(mf.psi), smat_transpose(mf.phi)};
}

MatrixFactorization mf_ar_translate(const MatrixFactorization& mf) {
  MatrixFactorization t = mf_transpose(mf);
  int d = mf.ring.dim();
  for (int k = 0; k < d; ++k) t = mf_shift(t);
  t = mf_transpose(t);
  mf_validate_or_throw(t);
  return t;
}

IsoResult mf_is_isomorphic(const MatrixFactorization& a,
                           const MatrixFactorization& b, uint64_t seed) {
  if (!(*a.ring.S == *b.ring.S) || !(a.ring.f == b.ring.f))
    fail(ErrorKind::MismatchedRing, "isomorphism test across different rings");
  MatrixFactorization ra = mf_reduce(a), rb = mf_reduce(b);
  IsoResult out;
  if (ra.size() != rb.size()) {
    out.isomorphic = false;
    out.method = "size";
    return out;
  }
  if (ra.size() == 0) {
    out.isomorphic = true;
    out.method = "empty";
    return out;
  }
  AlgebraPtr A = Algebra::hypersurface(ra.ring);
  Presentation pa = pres_from_mf(ra, A), pb = pres_from_mf(rb, A);
  return pres_isomorphic(pa, pb, seed);
}

MatrixFactorization mf_rename_vars(const MatrixFactorization& mf,
                                   const HypersurfaceRing& target,
                                   const std::vector<std::string>& mapping) {
  auto lift = [&](const SMat& m) {
    SMat out(m.size());
    for (size_t i = 0; i < m.size(); ++i)
      for (const auto& e : m[i]) out[i].push_back(e.rename_vars(target.S, mapping));
    return out;
  };
  MatrixFactorization r{target, lift(mf.phi), lift(mf.psi)};
  if (!(r.ring.f == mf.ring.f.rename_vars(target.S, mapping)))
    fail(ErrorKind::MismatchedRing,
         "renamed defining equation does not match the target ring");
  return r;
}

}  // namespace mflab
