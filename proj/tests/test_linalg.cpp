#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "mflab/linalg.hpp"
#include "oracle.hpp"

using namespace mflab;

namespace {
DenseMat random_mat(Field k, size_t r, size_t c, std::mt19937_64& rng) {
  DenseMat m(k, r, c);
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < c; ++j) m.set_int(i, j, int64_t(rng() % 11) - 5);
  return m;
}

std::vector<std::vector<int64_t>> to_oracle(const DenseMat& m, int64_t p) {
  std::vector<std::vector<int64_t>> out(m.rows(), std::vector<int64_t>(m.cols()));
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < m.cols(); ++j) out[i][j] = m.get(i, j).fp_value();
  (void)p;
  return out;
}
}  // namespace

TEST_CASE("rank agrees with the naive oracle") {
  std::mt19937_64 rng(17);
  Field k = Field::fp(7);
  for (int t = 0; t < 40; ++t) {
    size_t r = 1 + rng() % 9, c = 1 + rng() % 9;
    DenseMat m = random_mat(k, r, c, rng);
    CHECK(m.rank() == oracle::rank_mod_p(to_oracle(m, 7), 7));
  }
}

TEST_CASE("nullspace vectors annihilate and have full count") {
  std::mt19937_64 rng(19);
  for (Field k : {Field::fp(7), Field::fp(101), Field::rationals()}) {
    for (int t = 0; t < 25; ++t) {
      size_t r = 1 + rng() % 7, c = 1 + rng() % 7;
      DenseMat m = random_mat(k, r, c, rng);
      DenseMat ns = m.nullspace();
      CHECK(ns.rows() == c - m.rank());
      for (size_t v = 0; v < ns.rows(); ++v) {
        for (size_t i = 0; i < r; ++i) {
          Scalar acc = Scalar::zero(k);
          for (size_t j = 0; j < c; ++j) acc = acc + m.get(i, j) * ns.get(v, j);
          CHECK(acc.is_zero());
        }
      }
      // Nullspace rows are independent.
      CHECK(ns.rank() == ns.rows());
    }
  }
}

TEST_CASE("solve finds solutions of consistent systems") {
  std::mt19937_64 rng(29);
  Field k = Field::fp(101);
  for (int t = 0; t < 30; ++t) {
    size_t r = 1 + rng() % 6, c = 1 + rng() % 6;
    DenseMat m = random_mat(k, r, c, rng);
    std::vector<Scalar> x0;
    for (size_t j = 0; j < c; ++j) x0.push_back(Scalar(k, int64_t(rng() % 101)));
    std::vector<Scalar> b(r, Scalar::zero(k));
    for (size_t i = 0; i < r; ++i)
      for (size_t j = 0; j < c; ++j) b[i] = b[i] + m.get(i, j) * x0[j];
    auto x = m.solve(b);
    REQUIRE(x.has_value());
    for (size_t i = 0; i < r; ++i) {
      Scalar acc = Scalar::zero(k);
      for (size_t j = 0; j < c; ++j) acc = acc + m.get(i, j) * (*x)[j];
      CHECK(acc == b[i]);
    }
  }
}

TEST_CASE("inconsistent systems are detected") {
  Field k = Field::fp(7);
  DenseMat m(k, 2, 1);
  m.set_int(0, 0, 1);
  m.set_int(1, 0, 1);
  std::vector<Scalar> b{Scalar(k, 1), Scalar(k, 2)};
  CHECK(!m.solve(b).has_value());
}

TEST_CASE("RowSpace matches oracle rank and membership") {
  std::mt19937_64 rng(37);
  Field k = Field::fp(7);
  for (int t = 0; t < 20; ++t) {
    size_t c = 2 + rng() % 8, n = 1 + rng() % 10;
    DenseMat m = random_mat(k, n, c, rng);
    RowSpace rs(k, c);
    rs.insert_mat_rows(m);
    CHECK(rs.dim() == oracle::rank_mod_p(to_oracle(m, 7), 7));
    // Random combinations of the rows are members.
    for (int w = 0; w < 5; ++w) {
      std::vector<Scalar> v(c, Scalar::zero(k));
      for (size_t i = 0; i < n; ++i) {
        Scalar lam(k, int64_t(rng() % 7));
        for (size_t j = 0; j < c; ++j) v[j] = v[j] + lam * m.get(i, j);
      }
      CHECK(rs.contains(v));
    }
    // Quotient coordinates vanish exactly on the span.
    std::vector<Scalar> probe(c, Scalar::zero(k));
    probe[rng() % c] = Scalar(k, 1 + int64_t(rng() % 6));
    auto q = rs.quotient_coords(probe);
    bool qzero = true;
    for (const Scalar& s : q) qzero &= s.is_zero();
    CHECK(qzero == rs.contains(probe));
  }
}

TEST_CASE("delayed-reduction echelon on a larger system") {
  // A 200x300 random system over F_101; rank must agree with the oracle.
  std::mt19937_64 rng(41);
  Field k = Field::fp(101);
  DenseMat m(k, 200, 300);
  for (size_t i = 0; i < 200; ++i)
    for (size_t j = 0; j < 300; ++j) m.set_int(i, j, int64_t(rng() % 101));
  std::vector<std::vector<int64_t>> om(200, std::vector<int64_t>(300));
  for (size_t i = 0; i < 200; ++i)
    for (size_t j = 0; j < 300; ++j) om[i][j] = m.get(i, j).fp_value();
  CHECK(m.rank() == oracle::rank_mod_p(std::move(om), 101));
}

TEST_CASE("rational row space") {
  Field q = Field::rationals();
  RowSpace rs(q, 3);
  std::vector<Scalar> v1{Scalar(q, mpq_class(1, 2)), Scalar(q, 1), Scalar(q, 0)};
  std::vector<Scalar> v2{Scalar(q, 1), Scalar(q, 2), Scalar(q, 0)};
  CHECK(rs.insert(v1));
  CHECK(!rs.insert(v2));  // dependent
  std::vector<Scalar> v3{Scalar(q, 0), Scalar(q, 0), Scalar(q, mpq_class(7, 3))};
  CHECK(rs.insert(v3));
  CHECK(rs.dim() == 2);
}
