#pragma once

// Independent test oracles: deliberately naive implementations that share no
// code path with the library's solvers (plain int64 modular arithmetic,
// textbook elimination, direct enumeration).

#include <cstdint>
#include <map>
#include <vector>

namespace oracle {

inline int64_t md(int64_t v, int64_t p) {
  int64_t r = v % p;
  return r < 0 ? r + p : r;
}

inline int64_t inv_mod(int64_t a, int64_t p) {
  int64_t r = 1;
  int64_t e = p - 2, b = md(a, p);
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

// Textbook Gauss-Jordan over F_p; returns the rank, matrix is destroyed.
inline size_t rank_mod_p(std::vector<std::vector<int64_t>> m, int64_t p) {
  size_t rows = m.size();
  if (rows == 0) return 0;
  size_t cols = m[0].size();
  size_t rank = 0;
  for (size_t c = 0; c < cols && rank < rows; ++c) {
    size_t piv = rank;
    while (piv < rows && md(m[piv][c], p) == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[rank]);
    int64_t inv = inv_mod(m[rank][c], p);
    for (size_t t = 0; t < cols; ++t) m[rank][t] = md(m[rank][t] * inv, p);
    for (size_t r = 0; r < rows; ++r) {
      if (r == rank) continue;
      int64_t f = md(m[r][c], p);
      if (!f) continue;
      for (size_t t = 0; t < cols; ++t) m[r][t] = md(m[r][t] - f * m[rank][t], p);
    }
    ++rank;
  }
  return rank;
}

// Monomials in `nv` variables of total degree <= deg, in a fixed order.
inline void monomials_up_to(int nv, int deg, std::vector<std::vector<int>>& out,
                            std::vector<int>& cur, int var = 0, int used = 0) {
  if (var == nv) {
    out.push_back(cur);
    return;
  }
  for (int k = 0; used + k <= deg; ++k) {
    cur[size_t(var)] = k;
    monomials_up_to(nv, deg, out, cur, var + 1, used + k);
  }
  cur[size_t(var)] = 0;
}

// dim_k of S/( (f) + m^bound ) where S = k[x_1..x_nv], f given as a sparse
// exponent->coefficient map over F_p. Computed as (#monomials of degree
// < bound) - rank{ f * mu : truncated to degree < bound }.
inline int64_t quotient_length_mod_p(const std::map<std::vector<int>, int64_t>& f,
                                     int nv, int bound, int64_t p) {
  std::vector<std::vector<int>> monos;
  std::vector<int> cur(size_t(nv), 0);
  monomials_up_to(nv, bound - 1, monos, cur);
  std::map<std::vector<int>, size_t> index;
  for (size_t i = 0; i < monos.size(); ++i) index[monos[i]] = i;
  std::vector<std::vector<int64_t>> rows;
  for (const auto& mu : monos) {
    std::vector<int64_t> row(monos.size(), 0);
    bool nonzero = false;
    for (const auto& [e, c] : f) {
      std::vector<int> w(size_t(nv), 0);
      int total = 0;
      for (int t = 0; t < nv; ++t) {
        w[size_t(t)] = e[size_t(t)] + mu[size_t(t)];
        total += w[size_t(t)];
      }
      if (total >= bound) continue;
      row[index.at(w)] = md(row[index.at(w)] + c, p);
      nonzero = true;
    }
    if (nonzero) rows.push_back(std::move(row));
  }
  return int64_t(monos.size()) - int64_t(rank_mod_p(std::move(rows), p));
}

// Brute-force numerical semigroup membership sieve up to `limit`.
inline std::vector<char> semigroup_sieve(const std::vector<int64_t>& gens, int64_t limit) {
  std::vector<char> mem(size_t(limit) + 1, 0);
  mem[0] = 1;
  for (int64_t s = 1; s <= limit; ++s)
    for (int64_t a : gens)
      if (s >= a && mem[size_t(s - a)]) { mem[size_t(s)] = 1; break; }
  return mem;
}

}  // namespace oracle
