#include <algorithm>
#include <cassert>

#include "homalg_internal.hpp"

namespace mflab {

bool Presentation::is_minimal() const {
  for (const auto& e : entries)
    if (!e.constant_term().is_zero()) return false;
  return true;
}

Presentation Presentation::free_module(AlgebraPtr A, size_t rank) {
  Presentation p;
  p.A = std::move(A);
  p.rows = rank;
  p.cols = 0;
  return p;
}

Presentation Presentation::zero_module(AlgebraPtr A) {
  return free_module(std::move(A), 0);
}

Presentation Presentation::simple_k(AlgebraPtr A) {
  Presentation p;
  p.A = A;
  p.rows = 1;
  p.cols = A->m_gens().size();
  p.entries = A->m_gens();
  return p;
}

Presentation Presentation::direct_sum(const Presentation& o) const {
  if (!A->same_ring(*o.A)) fail(ErrorKind::MismatchedRing, "direct sum across rings");
  Presentation p;
  p.A = A;
  p.rows = rows + o.rows;
  p.cols = cols + o.cols;
  p.entries.assign(p.rows * p.cols, TruncSeries(A->ambient()));
  for (size_t i = 0; i < rows; ++i)
    for (size_t j = 0; j < cols; ++j) p.at(i, j) = at(i, j);
  for (size_t i = 0; i < o.rows; ++i)
    for (size_t j = 0; j < o.cols; ++j) p.at(rows + i, cols + j) = o.at(i, j);
  return p;
}

Presentation pres_from_mf(const MatrixFactorization& mf, AlgebraPtr A) {
  Presentation p;
  p.A = std::move(A);
  size_t n = mf.size();
  p.rows = n;
  p.cols = n;
  p.entries.reserve(n * n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) p.entries.push_back(p.A->reduce(mf.phi[i][j]));
  return p;
}

Presentation pres_from_mf(const MatrixFactorization& mf) {
  return pres_from_mf(mf, Algebra::hypersurface(mf.ring));
}

Presentation pres_minimize(const Presentation& P) {
  Presentation cur = P;
  while (true) {
    size_t pi = 0, pj = 0;
    bool found = false;
    for (size_t i = 0; i < cur.rows && !found; ++i)
      for (size_t j = 0; j < cur.cols && !found; ++j)
        if (!cur.at(i, j).constant_term().is_zero()) {
          pi = i;
          pj = j;
          found = true;
        }
    if (!found) return cur;
    // Schur complement: generator pi is expressible through relation pj.
    TruncSeries inv = cur.A->reduce(cur.at(pi, pj).invert());
    Presentation next;
    next.A = cur.A;
    next.rows = cur.rows - 1;
    next.cols = cur.cols - 1;
    next.entries.reserve(next.rows * next.cols);
    for (size_t i = 0; i < cur.rows; ++i) {
      if (i == pi) continue;
      for (size_t j = 0; j < cur.cols; ++j) {
        if (j == pj) continue;
        TruncSeries v =
            cur.at(i, j) - cur.A->mul(cur.A->mul(cur.at(i, pj), inv), cur.at(pi, j));
        next.entries.push_back(cur.A->reduce(v));
      }
    }
    cur = std::move(next);
  }
}

KVec module_mul(const AlgebraPtr& A, size_t blocks, const KVec& v,
                const Algebra::SparseVec& elem) {
  size_t D = A->dim();
  KVec out(blocks * D, Scalar::zero(A->field()));
  for (size_t j = 0; j < blocks; ++j)
    for (size_t b = 0; b < D; ++b) {
      const Scalar& val = v[j * D + b];
      if (val.is_zero()) continue;
      for (const auto& [g, cg] : elem) {
        for (const auto& [t, ct] : A->basis_product(b, g)) {
          size_t idx = j * D + t;
          out[idx] = out[idx] + val * cg * ct;
        }
      }
    }
  return out;
}

KVec ambient_vector(const AlgebraPtr& A, size_t blocks, size_t gen,
                    const Algebra::SparseVec& entry) {
  size_t D = A->dim();
  KVec out(blocks * D, Scalar::zero(A->field()));
  for (const auto& [t, c] : entry) out[gen * D + t] = c;
  return out;
}

Realized realize(const Presentation& P) {
  Realized R;
  R.P = P;
  R.D = P.A->dim();
  R.ambient = P.rows * R.D;
  R.image = RowSpace(P.A->field(), R.ambient);
  std::vector<Algebra::SparseVec> sp(P.rows * P.cols);
  for (size_t i = 0; i < P.rows * P.cols; ++i) sp[i] = P.A->sparse(P.entries[i]);
  for (size_t j = 0; j < P.cols; ++j)
    for (size_t b = 0; b < R.D; ++b) {
      KVec w(R.ambient, Scalar::zero(P.A->field()));
      bool nonzero = false;
      for (size_t i = 0; i < P.rows; ++i) {
        for (const auto& [g, cg] : sp[i * P.cols + j]) {
          for (const auto& [t, ct] : P.A->basis_product(g, b)) {
            size_t idx = i * R.D + t;
            w[idx] = w[idx] + cg * ct;
            nonzero = true;
          }
        }
      }
      if (nonzero) R.image.insert(w);
    }
  return R;
}

DenseMat action_matrix(const Realized& R, const TruncSeries& elem) {
  const AlgebraPtr& A = R.P.A;
  Algebra::SparseVec se = A->sparse(A->reduce(elem));
  size_t L = R.length();
  DenseMat out(A->field(), L, L);
  std::vector<bool> is_pivot(R.ambient, false);
  for (size_t c : R.image.pivot_cols()) is_pivot[c] = true;
  std::vector<size_t> free_coords;
  for (size_t j = 0; j < R.ambient; ++j)
    if (!is_pivot[j]) free_coords.push_back(j);
  for (size_t t = 0; t < free_coords.size(); ++t) {
    KVec e(R.ambient, Scalar::zero(A->field()));
    e[free_coords[t]] = Scalar::one(A->field());
    KVec prod = module_mul(A, R.P.rows, e, se);
    KVec q = R.image.quotient_coords(prod);
    for (size_t i = 0; i < L; ++i) out.set(i, t, q[i]);
  }
  return out;
}

namespace detail {

int kvec_order(const AlgebraPtr& A, const KVec& v, size_t blocks) {
  size_t D = A->dim();
  int best = kOrderInfinity;
  for (size_t j = 0; j < blocks; ++j)
    for (size_t b = 0; b < D; ++b)
      if (!v[j * D + b].is_zero()) best = std::min(best, A->order_of(b));
  return best;
}

int kvec_weight(const AlgebraPtr& A, const KVec& v, size_t blocks) {
  size_t D = A->dim();
  int best = kOrderInfinity;
  for (size_t j = 0; j < blocks; ++j)
    for (size_t b = 0; b < D; ++b)
      if (!v[j * D + b].is_zero()) best = std::min(best, A->weight_of(b));
  return best;
}

// Shared minimal-generator selection: sorts certified candidates by m-adic
// order, spans m*K, and picks the candidates that grow the span.
std::vector<KVec> select_min_gens(const AlgebraPtr& A, size_t blocks,
                                  std::vector<KVec> candidates, int cutoff,
                                  size_t* discarded) {
  struct Cand {
    KVec v;
    int ord;
    size_t idx;
  };
  std::vector<Cand> cands;
  size_t drop = 0;
  for (size_t s = 0; s < candidates.size(); ++s) {
    int o = kvec_weight(A, candidates[s], blocks);
    if (o == kOrderInfinity) continue;
    if (o > cutoff) {
      ++drop;
      continue;
    }
    cands.push_back({std::move(candidates[s]), o, s});
  }
  if (discarded) *discarded = drop;
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    return a.ord != b.ord ? a.ord < b.ord : a.idx < b.idx;
  });
  RowSpace span(A->field(), blocks * A->dim());
  for (const auto& cd : cands)
    for (const auto& g : A->m_gens())
      span.insert(module_mul(A, blocks, cd.v, A->sparse(g)));
  std::vector<KVec> gens;
  for (const auto& cd : cands)
    if (span.insert(cd.v)) gens.push_back(cd.v);
  return gens;
}

}  // namespace detail

namespace {
int max_entry_weight(const Presentation& P) {
  int m = 0;
  for (const auto& e : P.entries) {
    int o = e.is_zero() ? 0 : P.A->elem_weight(e);
    m = std::max(m, o);
  }
  return m;
}
}  // namespace

KernelResult kernel_min_gens(const Presentation& P) {
  const AlgebraPtr& A = P.A;
  size_t D = A->dim();
  Field k = A->field();
  KernelResult out;
  int maxord = max_entry_weight(P);
  out.window_cutoff = A->trunc() - maxord;
  if (out.window_cutoff < 1)
    fail(ErrorKind::WindowExceeded,
         "kernel certification window is empty; rerun with truncation >= " +
             std::to_string(maxord + 2));
  if (P.cols == 0) return out;

  // Realization of the matrix as a k-linear map A^cols -> A^rows.
  DenseMat Mhat(k, P.rows * D, P.cols * D);
  std::vector<Algebra::SparseVec> sp(P.rows * P.cols);
  for (size_t i = 0; i < P.rows * P.cols; ++i) sp[i] = A->sparse(P.entries[i]);
  for (size_t j = 0; j < P.cols; ++j)
    for (size_t b = 0; b < D; ++b)
      for (size_t i = 0; i < P.rows; ++i)
        for (const auto& [g, cg] : sp[i * P.cols + j])
          for (const auto& [t, ct] : A->basis_product(g, b)) {
            size_t r = i * D + t, c = j * D + b;
            Mhat.set(r, c, Mhat.get(r, c) + cg * ct);
          }
  DenseMat null = Mhat.nullspace();

  // A kernel candidate of order o pushes all of its action above the
  // truncation only when o + maxord > N, so candidates within the window are
  // true syzygies; higher-order candidates are discarded as junk.
  std::vector<KVec> cands;
  for (size_t s = 0; s < null.rows(); ++s) cands.push_back(null.row(s));
  out.gens = detail::select_min_gens(A, P.cols, std::move(cands), out.window_cutoff,
                                     &out.discarded_high_order);
  return out;
}

Presentation kernel_presentation(const Presentation& P) {
  KernelResult K = kernel_min_gens(P);
  const AlgebraPtr& A = P.A;
  size_t D = A->dim();
  Presentation next;
  next.A = A;
  next.rows = P.cols;
  next.cols = K.gens.size();
  next.entries.assign(next.rows * next.cols, TruncSeries(A->ambient()));
  for (size_t g = 0; g < K.gens.size(); ++g)
    for (size_t j = 0; j < P.cols; ++j) {
      Algebra::SparseVec sv;
      for (size_t b = 0; b < D; ++b) {
        const Scalar& c = K.gens[g][j * D + b];
        if (!c.is_zero()) sv.emplace_back(uint32_t(b), c);
      }
      next.at(j, g) = A->from_sparse(sv);
    }
  return next;
}

std::vector<Presentation> minimal_resolution(const Presentation& P, int steps) {
  if (steps < 1) fail(ErrorKind::InvalidInput, "resolution needs at least one step");
  std::vector<Presentation> diffs;
  diffs.push_back(pres_minimize(P));
  for (int t = 1; t < steps; ++t) {
    if (diffs.back().cols == 0) {
      // Free module reached; the resolution is over.
      Presentation stop;
      stop.A = P.A;
      stop.rows = 0;
      stop.cols = 0;
      diffs.push_back(stop);
      continue;
    }
    diffs.push_back(kernel_presentation(diffs.back()));
  }
  return diffs;
}

namespace detail {

KVec apply_to_relations(const Presentation& M, const Presentation& N, const SMat& alpha) {
  const AlgebraPtr& A = M.A;
  size_t D = A->dim();
  KVec out(M.cols * N.rows * D, Scalar::zero(A->field()));
  for (size_t l = 0; l < M.cols; ++l)
    for (size_t i = 0; i < N.rows; ++i) {
      TruncSeries acc(A->ambient());
      for (size_t j = 0; j < M.rows; ++j)
        acc = acc + alpha[i][j] * M.at(j, l);
      acc = A->reduce(acc);
      for (const auto& [t, c] : A->sparse(acc)) out[l * N.rows * D + i * D + t] = c;
    }
  return out;
}

SMat alpha_from_coords(const Presentation& M, const Presentation& N, const KVec& v) {
  const AlgebraPtr& A = M.A;
  size_t D = A->dim();
  SMat alpha(N.rows);
  for (size_t i = 0; i < N.rows; ++i) {
    alpha[i].assign(M.rows, TruncSeries(A->ambient()));
    for (size_t j = 0; j < M.rows; ++j) {
      Algebra::SparseVec sv;
      for (size_t b = 0; b < D; ++b) {
        const Scalar& c = v[(i * M.rows + j) * D + b];
        if (!c.is_zero()) sv.emplace_back(uint32_t(b), c);
      }
      alpha[i][j] = A->from_sparse(sv);
    }
  }
  return alpha;
}

KVec alpha_coords(const Presentation& M, const Presentation& N, const SMat& alpha) {
  const AlgebraPtr& A = M.A;
  size_t D = A->dim();
  KVec av(N.rows * M.rows * D, Scalar::zero(A->field()));
  for (size_t i = 0; i < N.rows; ++i)
    for (size_t j = 0; j < M.rows; ++j)
      for (const auto& [g, cg] : A->sparse(alpha[i][j]))
        av[(i * M.rows + j) * D + g] = cg;
  return av;
}

SMat scale_alpha(const AlgebraPtr& A, const SMat& alpha, const TruncSeries& x) {
  SMat out(alpha.size());
  for (size_t i = 0; i < alpha.size(); ++i)
    for (const auto& e : alpha[i]) out[i].push_back(A->mul(x, e));
  return out;
}

SMat compose_alpha(const AlgebraPtr& A, const SMat& f, const SMat& g) {
  size_t n = f.size(), m = g.empty() ? 0 : g[0].size(), k = g.size();
  SMat r(n);
  for (size_t i = 0; i < n; ++i) {
    r[i].assign(m, TruncSeries(A->ambient()));
    for (size_t j = 0; j < m; ++j) {
      TruncSeries acc(A->ambient());
      for (size_t t = 0; t < k; ++t) acc = acc + f[i][t] * g[t][j];
      r[i][j] = A->reduce(acc);
    }
  }
  return r;
}

HomSolve solve_hom(const Presentation& M, const Presentation& N) {
  if (!M.A->same_ring(*N.A)) fail(ErrorKind::MismatchedRing, "hom across rings");
  const AlgebraPtr& A = M.A;
  size_t D = A->dim();
  Field k = A->field();
  HomSolve hs{DenseMat(k, 0, 0), N.rows * M.rows * D, N.cols * M.cols * D,
              RowSpace(k, N.rows * M.rows * D)};

  std::vector<Algebra::SparseVec> spM(M.rows * M.cols), spN(N.rows * N.cols);
  for (size_t i = 0; i < spM.size(); ++i) spM[i] = A->sparse(M.entries[i]);
  for (size_t i = 0; i < spN.size(); ++i) spN[i] = A->sparse(N.entries[i]);

  // Equations, for l < M.cols, i < N.rows, basis coordinate t:
  //   sum_j alpha[i][j] M[j][l] - sum_s N[i][s] beta[s][l] = 0.
  size_t eq_rows = M.cols * N.rows * D;
  DenseMat E(k, eq_rows, hs.ua + hs.ub);
  for (size_t i = 0; i < N.rows; ++i)
    for (size_t j = 0; j < M.rows; ++j)
      for (size_t b = 0; b < D; ++b) {
        size_t col = (i * M.rows + j) * D + b;
        for (size_t l = 0; l < M.cols; ++l)
          for (const auto& [g, cg] : spM[j * M.cols + l])
            for (const auto& [t, ct] : A->basis_product(b, g)) {
              size_t r = l * N.rows * D + i * D + t;
              E.set(r, col, E.get(r, col) + cg * ct);
            }
      }
  for (size_t s = 0; s < N.cols; ++s)
    for (size_t l = 0; l < M.cols; ++l)
      for (size_t b = 0; b < D; ++b) {
        size_t col = hs.ua + (s * M.cols + l) * D + b;
        for (size_t i = 0; i < N.rows; ++i)
          for (const auto& [g, cg] : spN[i * N.cols + s])
            for (const auto& [t, ct] : A->basis_product(g, b)) {
              size_t r = l * N.rows * D + i * D + t;
              E.set(r, col, E.get(r, col) - cg * ct);
            }
      }
  DenseMat null = E.nullspace();
  null.rref();
  hs.rows = std::move(null);

  // Zero-map representatives: alpha = A_N * gamma.
  for (size_t s = 0; s < N.cols; ++s)
    for (size_t j = 0; j < M.rows; ++j)
      for (size_t b = 0; b < D; ++b) {
        KVec w(hs.ua, Scalar::zero(k));
        bool nz = false;
        for (size_t i = 0; i < N.rows; ++i)
          for (const auto& [g, cg] : spN[i * N.cols + s])
            for (const auto& [t, ct] : A->basis_product(g, b)) {
              size_t idx = (i * M.rows + j) * D + t;
              w[idx] = w[idx] + cg * ct;
              nz = true;
            }
        if (nz) hs.zero_reps.insert(w);
      }
  return hs;
}

HomSpace assemble(const Presentation& M, const Presentation& N, const HomSolve& hs,
                  RowSpace& quotient_span) {
  HomSpace out;
  out.src = M;
  out.tgt = N;
  out.trunc = M.A->trunc();
  size_t D = M.A->dim();
  for (size_t r = 0; r < hs.rows.rows(); ++r) {
    KVec full = hs.rows.row(r);
    KVec av(full.begin(), full.begin() + hs.ua);
    bool a_zero = true;
    for (const Scalar& s : av)
      if (!s.is_zero()) { a_zero = false; break; }
    if (a_zero) continue;
    if (!quotient_span.insert(av)) continue;
    out.alphas.push_back(alpha_from_coords(M, N, av));
    KVec bv(full.begin() + hs.ua, full.end());
    SMat beta(N.cols);
    for (size_t s = 0; s < N.cols; ++s) {
      beta[s].assign(M.cols, TruncSeries(M.A->ambient()));
      for (size_t l = 0; l < M.cols; ++l) {
        Algebra::SparseVec sv;
        for (size_t b = 0; b < D; ++b) {
          const Scalar& c = bv[(s * M.cols + l) * D + b];
          if (!c.is_zero()) sv.emplace_back(uint32_t(b), c);
        }
        beta[s][l] = M.A->from_sparse(sv);
      }
    }
    out.betas.push_back(std::move(beta));
  }
  out.dim = out.alphas.size();
  return out;
}

RowSpace stable_zero_span(const Presentation& M, const Presentation& N,
                          const HomSolve& hs) {
  RowSpace span = hs.zero_reps;
  size_t m = hs.rows.rows();
  if (m == 0) return span;
  if (M.cols == 0) {
    // M free: every map factors through a projective; stable Hom vanishes.
    for (size_t r = 0; r < m; ++r) {
      KVec full = hs.rows.row(r);
      span.insert(KVec(full.begin(), full.begin() + hs.ua));
    }
    return span;
  }
  // Strict solutions (alpha * A_M = 0 exactly) are the maps factoring through
  // the projective cover of N; find them inside the solution space.
  size_t big = M.cols * N.rows * M.A->dim();
  DenseMat W(M.A->field(), big, m);
  for (size_t r = 0; r < m; ++r) {
    KVec full = hs.rows.row(r);
    KVec av(full.begin(), full.begin() + hs.ua);
    SMat alpha = alpha_from_coords(M, N, av);
    KVec w = apply_to_relations(M, N, alpha);
    for (size_t t = 0; t < big; ++t) W.set(t, r, w[t]);
  }
  DenseMat combos = W.nullspace();
  for (size_t cidx = 0; cidx < combos.rows(); ++cidx) {
    KVec lam = combos.row(cidx);
    KVec av(hs.ua, Scalar::zero(M.A->field()));
    for (size_t r = 0; r < m; ++r) {
      if (lam[r].is_zero()) continue;
      for (size_t t = 0; t < hs.ua; ++t)
        av[t] = av[t] + lam[r] * hs.rows.get(r, t);
    }
    span.insert(av);
  }
  return span;
}

Presentation submodule_presentation(const Realized& R, const std::vector<KVec>& span_vecs,
                                    std::vector<KVec>* chosen_gens) {
  const AlgebraPtr& A = R.P.A;
  size_t D = A->dim();
  Field k = A->field();
  // Minimal generators of the submodule generated by span_vecs (mod image).
  RowSpace span = R.image;
  std::vector<KVec> reduced;
  for (const KVec& v : span_vecs) {
    KVec w = R.image.reduce(v);
    reduced.push_back(std::move(w));
  }
  // m * U + image.
  for (const KVec& v : reduced)
    for (const auto& g : A->m_gens()) span.insert(module_mul(A, R.P.rows, v, A->sparse(g)));
  std::vector<KVec> gens;
  for (const KVec& v : reduced)
    if (span.insert(v)) gens.push_back(v);
  if (chosen_gens) *chosen_gens = gens;

  size_t mu = gens.size();
  Presentation out;
  out.A = A;
  out.rows = mu;
  if (mu == 0) {
    out.cols = 0;
    return out;
  }
  // Syzygies: kernel of A^mu -> M, e_g -> gens[g], on quotient coordinates.
  size_t L = R.length();
  DenseMat Q(k, L, mu * D);
  for (size_t g = 0; g < mu; ++g)
    for (size_t b = 0; b < D; ++b) {
      Algebra::SparseVec be{{uint32_t(b), Scalar::one(k)}};
      KVec prod = module_mul(A, R.P.rows, gens[g], be);
      KVec q = R.image.quotient_coords(prod);
      for (size_t t = 0; t < L; ++t) Q.set(t, g * D + b, q[t]);
    }
  DenseMat null = Q.nullspace();
  int maxord = 0;
  for (const KVec& v : gens) {
    for (size_t t = 0; t < v.size(); ++t)
      if (!v[t].is_zero()) maxord = std::max(maxord, A->weight_of(t % D));
  }
  int cutoff = A->trunc() - maxord;
  if (cutoff < 1)
    fail(ErrorKind::WindowExceeded, "syzygy window empty for submodule presentation");
  std::vector<KVec> cands;
  for (size_t s = 0; s < null.rows(); ++s) cands.push_back(null.row(s));
  std::vector<KVec> rels = detail::select_min_gens(A, mu, std::move(cands), cutoff, nullptr);
  out.cols = rels.size();
  out.entries.assign(out.rows * out.cols, TruncSeries(A->ambient()));
  for (size_t c = 0; c < rels.size(); ++c)
    for (size_t g = 0; g < mu; ++g) {
      Algebra::SparseVec sv;
      for (size_t b = 0; b < D; ++b) {
        const Scalar& cc = rels[c][g * D + b];
        if (!cc.is_zero()) sv.emplace_back(uint32_t(b), cc);
      }
      out.at(g, c) = A->from_sparse(sv);
    }
  return out;
}

}  // namespace detail

HomSpace hom_space(const Presentation& M, const Presentation& N) {
  detail::HomSolve hs = detail::solve_hom(M, N);
  RowSpace span = hs.zero_reps;
  return detail::assemble(M, N, hs, span);
}

HomSpace stable_hom(const Presentation& M, const Presentation& N) {
  detail::HomSolve hs = detail::solve_hom(M, N);
  RowSpace span = detail::stable_zero_span(M, N, hs);
  return detail::assemble(M, N, hs, span);
}

size_t hom_dim(const Presentation& M, const Presentation& N) {
  return hom_space(M, N).dim;
}

size_t stable_hom_dim(const Presentation& M, const Presentation& N) {
  return stable_hom(M, N).dim;
}

size_t betti(const Presentation& P) {
  DenseMat c0(P.A->field(), P.rows, P.cols);
  for (size_t i = 0; i < P.rows; ++i)
    for (size_t j = 0; j < P.cols; ++j) c0.set(i, j, P.at(i, j).constant_term());
  return P.rows - c0.rank();
}

MultiplicityResult multiplicity_module(const Presentation& P) {
  const AlgebraPtr& A = P.A;
  int N = A->trunc();
  int d = A->krull_dim();
  Realized R = realize(P);
  Field k = A->field();
  // S_j = dim(image + coordinates of order >= j+1), computed descending so
  // the space only grows.
  std::vector<size_t> S(size_t(N), 0);
  RowSpace space = R.image;
  for (int j = N - 1; j >= 0; --j) {
    for (size_t gen = 0; gen < P.rows; ++gen)
      for (size_t b = 0; b < R.D; ++b)
        if (A->order_of(b) == j + 1) {
          KVec e(R.ambient, Scalar::zero(k));
          e[R.coord(gen, b)] = Scalar::one(k);
          space.insert(e);
        }
    S[size_t(j)] = space.dim();
  }
  MultiplicityResult out;
  for (int j = 0; j < N; ++j) out.hilbert.push_back(int64_t(R.ambient - S[size_t(j)]));
  // d-th finite difference, constant over the last three in-window samples.
  std::vector<int64_t> seq = out.hilbert;
  for (int t = 0; t < d; ++t) {
    std::vector<int64_t> next;
    for (size_t i = 1; i < seq.size(); ++i) next.push_back(seq[i] - seq[i - 1]);
    seq = std::move(next);
  }
  if (seq.size() < 3)
    fail(ErrorKind::NotStabilized, "truncation window too small for multiplicity");
  size_t n = seq.size();
  if (seq[n - 1] != seq[n - 2] || seq[n - 2] != seq[n - 3])
    fail(ErrorKind::NotStabilized,
         "Hilbert differences not constant over the last three samples; "
         "rerun with a larger truncation");
  out.value = seq[n - 1];
  return out;
}

size_t ext_dim(const Presentation& M, const Presentation& N, int i) {
  if (i < 1) fail(ErrorKind::InvalidInput, "ext index must be >= 1");
  std::vector<Presentation> diffs = minimal_resolution(M, i + 1);
  Realized RN = realize(N);
  size_t lN = RN.length();
  const AlgebraPtr& A = M.A;
  Field k = A->field();

  // Orders of the quotient coordinates of N (socle-filtering below).
  std::vector<int> coord_order;
  {
    std::vector<bool> is_pivot(RN.ambient, false);
    for (size_t c : RN.image.pivot_cols()) is_pivot[c] = true;
    for (size_t j = 0; j < RN.ambient; ++j)
      if (!is_pivot[j]) coord_order.push_back(A->weight_of(j % RN.D));
  }

  // For a differential d (a x b over A): Hom(A^a, N) -> Hom(A^b, N).
  auto hom_map = [&](const Presentation& d) {
    size_t a = d.rows, b = d.cols;
    DenseMat T(k, b * lN, a * lN);
    for (size_t s = 0; s < a; ++s)
      for (size_t t = 0; t < b; ++t) {
        if (d.at(s, t).is_zero()) continue;
        DenseMat act = action_matrix(RN, d.at(s, t));
        for (size_t r = 0; r < lN; ++r)
          for (size_t c = 0; c < lN; ++c) {
            Scalar v = act.get(r, c);
            if (v.is_zero()) continue;
            size_t rr = t * lN + r, cc = s * lN + c;
            T.set(rr, cc, T.get(rr, cc) + v);
          }
      }
    return T;
  };

  const Presentation& di = diffs[size_t(i - 1)];
  const Presentation& di1 = diffs[size_t(i)];
  size_t mid = di.cols * lN;  // Hom(A^{b_i}, N)

  // Certification window: cohomology classes whose representatives live
  // entirely above it are truncation socle, not certified classes (a cochain
  // of order o pushes its action above the truncation only when o plus the
  // largest entry order exceeds N).
  int maxord = 1;
  for (const Presentation* d : {&di, &di1})
    for (const auto& e : d->entries)
      if (!e.is_zero()) maxord = std::max(maxord, A->elem_weight(e));
  int cutoff = A->trunc() - maxord;
  if (cutoff < 1)
    fail(ErrorKind::WindowExceeded, "ext certification window is empty");

  DenseMat ker(k, 0, 0);
  if (di1.rows == 0 || di1.cols == 0) {
    ker = DenseMat::identity(k, mid);
  } else {
    ker = hom_map(di1).nullspace();
  }
  RowSpace span(k, mid);
  if (di.rows != 0 && di.cols != 0) {
    DenseMat T = hom_map(di);
    for (size_t c = 0; c < T.cols(); ++c) {
      KVec col(T.rows(), Scalar::zero(k));
      for (size_t r = 0; r < T.rows(); ++r) col[r] = T.get(r, c);
      span.insert(col);
    }
  }
  size_t count = 0;
  for (size_t r = 0; r < ker.rows(); ++r) {
    KVec v = ker.row(r);
    int ord = kOrderInfinity;
    for (size_t t = 0; t < mid; ++t)
      if (!v[t].is_zero()) ord = std::min(ord, coord_order[t % lN]);
    if (ord > cutoff) continue;  // socle artifact
    if (span.insert(v)) ++count;
  }
  return count;
}

bool check_faithful_element(const Presentation& M, const TruncSeries& x) {
  const AlgebraPtr& A = M.A;
  TruncSeries xr = A->reduce(x);
  if (!xr.is_zero() && A->elem_order(xr) < 1)
    fail(ErrorKind::InvalidInput, "element must lie in the maximal ideal");
  if (M.cols == 0 || xr.is_zero()) return true;  // free module or zero element
  size_t D = A->dim();
  Field k = A->field();
  // Solve (x I - A_M gamma) A_M = 0 for gamma (cols x rows over A).
  size_t unknowns = M.cols * M.rows * D;
  size_t eqs = M.rows * M.cols * D;
  DenseMat E(k, eqs, unknowns);
  for (size_t s = 0; s < M.cols; ++s)
    for (size_t t = 0; t < M.rows; ++t)
      for (size_t b = 0; b < D; ++b) {
        size_t col = (s * M.rows + t) * D + b;
        TruncSeries bmono = A->from_sparse({{uint32_t(b), Scalar::one(k)}});
        for (size_t i = 0; i < M.rows; ++i) {
          if (M.at(i, s).is_zero()) continue;
          TruncSeries left = A->mul(M.at(i, s), bmono);
          if (left.is_zero()) continue;
          for (size_t l = 0; l < M.cols; ++l) {
            if (M.at(t, l).is_zero()) continue;
            TruncSeries prod = A->mul(left, M.at(t, l));
            for (const auto& [g, cg] : A->sparse(prod)) {
              size_t r = (i * M.cols + l) * D + g;
              E.set(r, col, E.get(r, col) + cg);
            }
          }
        }
      }
  std::vector<Scalar> rhs(eqs, Scalar::zero(k));
  for (size_t i = 0; i < M.rows; ++i)
    for (size_t l = 0; l < M.cols; ++l) {
      TruncSeries v = A->mul(xr, M.at(i, l));
      for (const auto& [g, cg] : A->sparse(v)) rhs[(i * M.cols + l) * D + g] = cg;
    }
  bool liftable = E.solve(rhs).has_value();

  // Cross-check: x factors through a projective iff x annihilates stableEnd.
  detail::HomSolve hs = detail::solve_hom(M, M);
  RowSpace pspan = detail::stable_zero_span(M, M, hs);
  RowSpace span = pspan;
  HomSpace se = detail::assemble(M, M, hs, span);
  bool kills = true;
  for (const SMat& alpha : se.alphas) {
    KVec av = detail::alpha_coords(M, M, detail::scale_alpha(A, alpha, xr));
    if (!pspan.contains(av)) { kills = false; break; }
  }
  if (liftable != kills)
    fail(ErrorKind::MathFailure,
         "faithfulness lifting solve disagrees with stable-End annihilation");
  return liftable;
}

int annihilator_exponent(const Presentation& M) {
  const AlgebraPtr& A = M.A;
  size_t D = A->dim();
  Field k = A->field();
  detail::HomSolve hs = detail::solve_hom(M, M);
  RowSpace pspan = detail::stable_zero_span(M, M, hs);
  RowSpace span = pspan;
  HomSpace se = detail::assemble(M, M, hs, span);
  if (se.dim == 0) return 0;

  for (int c = 1; c <= A->trunc() - 2; ++c) {
    bool all_killed = true;
    for (size_t b = 0; b < D && all_killed; ++b) {
      if (A->order_of(b) != c) continue;
      TruncSeries ms = A->from_sparse({{uint32_t(b), Scalar::one(k)}});
      for (const SMat& alpha : se.alphas) {
        KVec av = detail::alpha_coords(M, M, detail::scale_alpha(A, alpha, ms));
        if (!pspan.contains(av)) { all_killed = false; break; }
      }
    }
    if (all_killed) return c;
  }
  fail(ErrorKind::InfiniteLength,
       "no annihilator exponent within the truncation window (is the "
       "singularity isolated?)");
}

int64_t certified_value(const std::function<int64_t(int)>& compute, int trunc,
                        Certificate* cert_out, const std::string& what,
                        bool check_three) {
  int64_t v1 = compute(trunc);
  int64_t v2 = compute(trunc + 2);
  if (cert_out) {
    cert_out->trunc = trunc;
    cert_out->checked_at = trunc + 2;
    cert_out->stable = (v1 == v2);
  }
  if (v1 == v2) return v1;
  if (check_three) {
    int64_t v3 = compute(trunc + 4);
    if (v2 < v3 && v1 < v2)
      fail(ErrorKind::InfiniteLength,
           what + " grows across three truncation levels (" + std::to_string(v1) +
               ", " + std::to_string(v2) + ", " + std::to_string(v3) + ")");
  }
  fail(ErrorKind::NotStabilized,
       what + " changed between truncation " + std::to_string(trunc) + " (" +
           std::to_string(v1) + ") and " + std::to_string(trunc + 2) + " (" +
           std::to_string(v2) + "); rerun with a larger truncation");
}

}  // namespace mflab
