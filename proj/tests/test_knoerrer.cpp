#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mflab/knoerrer.hpp"

using namespace mflab;

namespace {
HypersurfaceRing ring_from(Field k, std::vector<std::string> vars, const std::string& f,
                           int N = 12) {
  auto ctx = make_series_context(k, std::move(vars), N);
  return make_hypersurface(ctx, parse_series(f, ctx));
}

MatrixFactorization mf_from(const HypersurfaceRing& R,
                            std::vector<std::vector<std::string>> phi,
                            std::vector<std::vector<std::string>> psi) {
  SMat mphi, mpsi;
  for (const auto& row : phi) {
    std::vector<TruncSeries> r;
    for (const auto& e : row) r.push_back(parse_series(e, R.S));
    mphi.push_back(r);
  }
  for (const auto& row : psi) {
    std::vector<TruncSeries> r;
    for (const auto& e : row) r.push_back(parse_series(e, R.S));
    mpsi.push_back(r);
  }
  return make_mf(R, std::move(mphi), std::move(mpsi));
}
}  // namespace

TEST_CASE("sharp block matrices match the displayed formula") {
  Field k = Field::fp(7);
  HypersurfaceRing R = ring_from(k, {"y"}, "y^3");
  MatrixFactorization a = mf_from(R, {{"y"}}, {{"y^2"}});
  MatrixFactorization s = sharp_mf(a);
  REQUIRE(s.size() == 2);
  const SeriesCtxPtr& S = s.ring.S;
  CHECK(s.ring.f == parse_series("y^3 + u^2", S));
  // Phi = [[y^2, u],[-u, y]].
  CHECK(s.phi[0][0] == parse_series("y^2", S));
  CHECK(s.phi[0][1] == parse_series("u", S));
  CHECK(s.phi[1][0] == parse_series("-u", S));
  CHECK(s.phi[1][1] == parse_series("y", S));
  // Psi = [[y, -u],[u, y^2]].
  CHECK(s.psi[0][0] == parse_series("y", S));
  CHECK(s.psi[0][1] == parse_series("-u", S));
  CHECK(s.psi[1][0] == parse_series("u", S));
  CHECK(s.psi[1][1] == parse_series("y^2", S));
  MfValidation v = mf_validate(s);
  CHECK(v.valid);
  CHECK(v.reduced);

  // A1: (y, y) over y^2 gives Phi = [[y, u],[-u, y]].
  HypersurfaceRing R1 = ring_from(k, {"y"}, "y^2");
  MatrixFactorization a1 = mf_from(R1, {{"y"}}, {{"y"}});
  MatrixFactorization s1 = sharp_mf(a1);
  CHECK(s1.phi[0][0] == parse_series("y", s1.ring.S));
  CHECK(s1.phi[0][1] == parse_series("u", s1.ring.S));
  CHECK(mf_validate(s1).valid);
}

TEST_CASE("beta doubles under sharp") {
  Field k = Field::fp(7);
  HypersurfaceRing R = ring_from(k, {"x", "y"}, "x^2 + y^3");
  MatrixFactorization s =
      mf_from(R, {{"x", "y"}, {"y^2", "-x"}}, {{"x", "y"}, {"y^2", "-x"}});
  MatrixFactorization sh = sharp_mf(s);
  CHECK(sh.size() == 2 * s.size());
  CHECK(mf_validate(sh).valid);
  CHECK(mf_is_reduced(sh));
}

TEST_CASE("flat substitutes the cover variable") {
  Field k = Field::fp(7);
  HypersurfaceRing R = ring_from(k, {"y"}, "y^3");
  MatrixFactorization a = mf_from(R, {{"y"}}, {{"y^2"}});
  MatrixFactorization s = sharp_mf(a);

  // Raw flat: diag(y^2, y) and diag(y, y^2) blocks over the base ring.
  MatrixFactorization raw = flat_mf_raw(s);
  CHECK(raw.size() == 2);
  CHECK(raw.phi[0][0] == parse_series("y^2", raw.ring.S));
  CHECK(raw.phi[1][1] == parse_series("y", raw.ring.S));
  CHECK(raw.phi[0][1].is_zero());
  CHECK(mf_validate(raw).valid);
  // flat(sharp(M)) equals Omega(M) + M as block matrices.
  MatrixFactorization expect = mf_direct_sum(mf_shift(a), a);
  CHECK(smat_equal(raw.phi, expect.phi));
  CHECK(smat_equal(raw.psi, expect.psi));

  // Trivial factorization flattens to nothing.
  HypersurfaceRing C = sharp_mf(a).ring;
  MatrixFactorization triv = mf_from(C, {{"1"}}, {{"y^3 + u^2"}});
  CHECK(flat_mf(triv).size() == 0);

  // [[y,u],[-u,y]] over y^2 + u^2 flattens to (y,y) + (y,y).
  HypersurfaceRing R1 = ring_from(k, {"y"}, "y^2");
  MatrixFactorization s1 = sharp_mf(mf_from(R1, {{"y"}}, {{"y"}}));
  MatrixFactorization f1 = flat_mf_raw(s1);
  CHECK(f1.phi[0][0] == parse_series("y", f1.ring.S));
  CHECK(f1.phi[1][1] == parse_series("y", f1.ring.S));

  // A ring without the cover shape is rejected.
  HypersurfaceRing node = ring_from(k, {"x", "y"}, "x*y");
  MatrixFactorization mx = mf_from(node, {{"x"}}, {{"y"}});
  CHECK_THROWS_AS(flat_mf(mx), Error);
}

TEST_CASE("knoerrer roundtrips for A2 and the node") {
  Field k = Field::fp(7);
  uint64_t seed = 42;

  HypersurfaceRing R = ring_from(k, {"y"}, "y^3");
  MatrixFactorization a = mf_from(R, {{"y"}}, {{"y^2"}});
  RoundtripReport r1 = verify_roundtrip_sharp_flat(a, seed);
  CHECK(r1.holds);
  RoundtripReport r2 = verify_roundtrip_flat_sharp(sharp_mf(a), seed);
  CHECK(r2.holds);

  HypersurfaceRing node = ring_from(k, {"x", "y"}, "x*y");
  MatrixFactorization mx = mf_from(node, {{"x"}}, {{"y"}});
  CHECK(verify_roundtrip_sharp_flat(mx, seed).holds);
  CHECK(verify_roundtrip_flat_sharp(sharp_mf(mx), seed).holds);
}

TEST_CASE("generic splitting homotopy") {
  CHECK(verify_splitting_homotopy_generic(Field::rationals()));
  CHECK(verify_splitting_homotopy_generic(Field::fp(7)));
  CHECK(verify_splitting_homotopy_generic(Field::fp(101)));
}

TEST_CASE("normal form and explicit section for sharp images") {
  Field k = Field::fp(7);
  HypersurfaceRing R = ring_from(k, {"y"}, "y^3");
  MatrixFactorization s = sharp_mf(mf_from(R, {{"y"}}, {{"y^2"}}));

  auto nf = mf_u_normal_form(s);
  REQUIRE(nf.has_value());
  CHECK(mf_validate(*nf).valid);
  // Phi_nf - u I is u-free and Phi + Psi = 2u.
  const SeriesCtxPtr& S = nf->ring.S;
  TruncSeries u = TruncSeries::variable(S, "u");
  for (size_t i = 0; i < nf->size(); ++i)
    for (size_t j = 0; j < nf->size(); ++j) {
      TruncSeries sum = nf->phi[i][j] + nf->psi[i][j];
      if (i == j)
        CHECK(sum == u + u);
      else
        CHECK(sum.is_zero());
    }

  SplitReport rep = verify_splitting_section(s);
  CHECK(rep.generic_homotopy_ok);
  CHECK(rep.section_found);
  CHECK(rep.used_normal_form);
}

TEST_CASE("section solve works without the normal form") {
  // Hand the verifier a factorization over the cover that is not in block
  // shape: the cover of the node with a scrambled basis.
  Field k = Field::fp(7);
  HypersurfaceRing node = ring_from(k, {"x", "y"}, "x*y");
  MatrixFactorization s = sharp_mf(mf_from(node, {{"x"}}, {{"y"}}));
  // Conjugate by a unimodular constant matrix to break the block pattern:
  // phi' = P phi P^{-1}, psi' = P psi P^{-1} with P = [[1,1],[0,1]].
  const SeriesCtxPtr& S = s.ring.S;
  auto add_row = [&](SMat m, bool inverse) {
    // P m P^{-1}: row0 += row1, then col1 -= col0.
    SMat r = m;
    for (size_t j = 0; j < 2; ++j)
      r[0][j] = inverse ? r[0][j] - r[1][j] : r[0][j] + r[1][j];
    for (size_t i = 0; i < 2; ++i)
      r[i][1] = inverse ? r[i][1] + r[i][0] : r[i][1] - r[i][0];
    return r;
  };
  MatrixFactorization scr{s.ring, add_row(s.phi, false), add_row(s.psi, false)};
  REQUIRE(mf_validate(scr).valid);
  CHECK(!mf_u_normal_form(scr).has_value());
  SplitReport rep = verify_splitting_section(scr);
  CHECK(rep.section_found);
  CHECK(!rep.used_normal_form);
  (void)S;
}

TEST_CASE("stable hom compatibility") {
  Field k = Field::fp(7);
  HypersurfaceRing R = ring_from(k, {"y"}, "y^3");
  MatrixFactorization a = mf_from(R, {{"y"}}, {{"y^2"}});
  HomCompatReport rep = verify_sharp_hom_compat(a, a);
  CHECK(rep.equal);
  CHECK(rep.cert.stable);
  CHECK(rep.lhs_dim == rep.rhs_dim);
  CHECK(rep.lhs_dim > 0);

  // Free module: both sides vanish.
  MatrixFactorization t = mf_reduce(mf_from(R, {{"1"}}, {{"y^3"}}));
  HomCompatReport repf = verify_sharp_hom_compat(t, a);
  CHECK(repf.equal);
  CHECK(repf.lhs_dim == 0);

  // Node: M = Coker(x), C = Coker(y).
  HypersurfaceRing node = ring_from(k, {"x", "y"}, "x*y");
  MatrixFactorization mx = mf_from(node, {{"x"}}, {{"y"}});
  MatrixFactorization my = mf_from(node, {{"y"}}, {{"x"}});
  HomCompatReport repn = verify_sharp_hom_compat(mx, my);
  CHECK(repn.equal);
}
