// mflab: exact computations with matrix factorizations and lattices over
// hypersurface and numerical-semigroup rings.

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <random>

#include "mflab/experiments.hpp"
#include "mflab/io.hpp"
#include "mflab/report.hpp"

using namespace mflab;

namespace {

constexpr uint64_t kDefaultSeed = 42;  // documented default; --seed random opts out

struct Options {
  int trunc = 0;  // 0: use file value / default
  std::string seed_str = std::to_string(kDefaultSeed);
  std::string format = "json";
  int jobs = 1;
  int exit_code = 0;

  uint64_t seed() const {
    if (seed_str == "random") return std::random_device{}();
    return std::stoull(seed_str);
  }
};

void add_common(CLI::App* cmd, Options& opt) {
  cmd->add_option("--trunc", opt.trunc, "truncation level override (>= 4)");
  cmd->add_option("--seed", opt.seed_str, "random seed (or 'random')");
  cmd->add_option("--format", opt.format, "output format: json|table|csv");
  cmd->add_option("--jobs", opt.jobs, "parallel jobs for experiment items");
}

int effective_trunc(const Options& opt) {
  int t = opt.trunc;
  if (t == 0) {
    if (const char* env = std::getenv("MFLAB_TRUNC")) t = std::atoi(env);
  }
  if (t != 0 && t < 4) fail(ErrorKind::InvalidInput, "truncation must be at least 4");
  return t;
}

void print_report(const Json& rep, const Options& opt) {
  std::cout << emit_report(rep, parse_format(opt.format));
}

Json iso_json(const IsoResult& r) {
  Json j;
  j["isomorphic"] = r.isomorphic;
  j["method"] = r.method;
  if (r.alpha_const) {
    Json w = Json::array();
    for (size_t i = 0; i < r.alpha_const->rows(); ++i) {
      Json row = Json::array();
      for (size_t c = 0; c < r.alpha_const->cols(); ++c)
        row.push_back(r.alpha_const->get(i, c).str());
      w.push_back(row);
    }
    j["witness_constant_part"] = w;
  }
  return j;
}

std::vector<Scalar> tau_values(Field k, int count) {
  std::vector<Scalar> taus;
  for (int t = 1; t <= count; ++t) taus.push_back(Scalar(k, t));
  return taus;
}

std::vector<int64_t> parse_int_list(const std::string& s) {
  std::vector<int64_t> out;
  std::string cur;
  for (char c : s + ",") {
    if (c == ',') {
      if (!cur.empty()) out.push_back(std::stoll(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact matrix-factorization and lattice computations"};
  app.require_subcommand(1);
  Options opt;

  std::string path_a, path_b, ring_path, family = "An1v", roundtrip = "both";
  std::string chain_path, x_elem, curve_spec = "3,7";
  int max_n = 6, steps = 4, kaw_n = 4, count = 10;
  int64_t field_p = 101;
  bool check_indec = false;

  // ring check
  auto* ring_cmd = app.add_subcommand("ring", "ring descriptor operations");
  auto* ring_check = ring_cmd->add_subcommand("check", "validate a ring descriptor");
  ring_check->add_option("file", path_a)->required();
  add_common(ring_check, opt);

  // mf subcommands
  auto* mf_cmd = app.add_subcommand("mf", "matrix factorization operations");
  std::map<std::string, CLI::App*> mf_sub;
  for (const char* name : {"validate", "shift", "reduce", "transpose", "tau"}) {
    auto* c = mf_cmd->add_subcommand(name, name);
    c->add_option("file", path_a)->required();
    add_common(c, opt);
    mf_sub[name] = c;
  }
  auto* mf_iso = mf_cmd->add_subcommand("iso", "test module isomorphism");
  mf_iso->add_option("a", path_a)->required();
  mf_iso->add_option("b", path_b)->required();
  add_common(mf_iso, opt);

  // knoerrer
  auto* kn = app.add_subcommand("knoerrer", "double branched cover functors");
  auto* kn_sharp = kn->add_subcommand("sharp", "M -> M#");
  kn_sharp->add_option("file", path_a)->required();
  add_common(kn_sharp, opt);
  auto* kn_flat = kn->add_subcommand("flat", "N -> N/uN");
  kn_flat->add_option("file", path_a)->required();
  add_common(kn_flat, opt);
  auto* kn_verify = kn->add_subcommand("verify", "round-trip / splitting / hom suite");
  kn_verify->add_option("--roundtrip", roundtrip, "sharp|flat|both");
  kn_verify->add_option("--catalog", family, "catalog family (default ade = full)");
  kn_verify->add_option("--max", max_n, "catalog size bound");
  kn_verify->add_option("--mf", path_a, "single factorization file");
  add_common(kn_verify, opt);

  // hom stable
  auto* hom = app.add_subcommand("hom", "homomorphism spaces");
  auto* hom_stable = hom->add_subcommand("stable", "stable Hom dimension");
  hom_stable->add_option("M", path_a)->required();
  hom_stable->add_option("N", path_b)->required();
  add_common(hom_stable, opt);

  // invariant
  auto* inv = app.add_subcommand("invariant", "numerical invariants");
  std::map<std::string, CLI::App*> inv_sub;
  for (const char* name : {"hlength", "betti", "mult", "annexp"}) {
    auto* c = inv->add_subcommand(name, name);
    c->add_option("file", path_a)->required();
    add_common(c, opt);
    inv_sub[name] = c;
  }

  // resolve
  auto* resolve_cmd = app.add_subcommand("resolve", "minimal free resolution");
  resolve_cmd->add_option("file", path_a)->required();
  resolve_cmd->add_option("--steps", steps, "number of differentials");
  add_common(resolve_cmd, opt);

  // approx-k
  auto* approx_cmd = app.add_subcommand("approx-k", "lattice approximation of k");
  approx_cmd->add_option("--ring", ring_path, "ring or curve descriptor")->required();
  add_common(approx_cmd, opt);

  // exp
  auto* exp_cmd = app.add_subcommand("exp", "verification experiments");
  auto* exp_catalog = exp_cmd->add_subcommand("catalog", "generate the ADE catalog");
  exp_catalog->add_option("--family", family, "An1v|node|Ancurve|Dn|E6|E7|E8|ade");
  exp_catalog->add_option("--max", max_n, "largest n");
  exp_catalog->add_option("--field", field_p, "prime p");
  add_common(exp_catalog, opt);

  auto* exp_kaw = exp_cmd->add_subcommand("kawasaki", "syzygy betti growth");
  exp_kaw->add_option("--ring", ring_path)->required();
  exp_kaw->add_option("--n", kaw_n, "power of the maximal ideal");
  exp_kaw->add_flag("--check-indec", check_indec, "also test indecomposability");
  add_common(exp_kaw, opt);

  auto* exp_hs = exp_cmd->add_subcommand("harada-sai", "composition vanishing");
  exp_hs->add_option("--chain", chain_path)->required();
  exp_hs->add_option("--x", x_elem, "faithful element")->required();
  add_common(exp_hs, opt);

  auto* exp_bt = exp_cmd->add_subcommand("bt-family", "one-parameter lattice family");
  exp_bt->add_option("--curve", curve_spec, "semigroup generators, e.g. 3,7");
  exp_bt->add_option("--field", field_p, "prime p");
  exp_bt->add_option("--count", count, "number of tau values");
  add_common(exp_bt, opt);

  auto* exp_tr = exp_cmd->add_subcommand("knoerrer-transfer", "sharp image analysis");
  exp_tr->add_option("--family", family, "catalog family");
  exp_tr->add_option("--max", max_n, "family parameter n");
  exp_tr->add_option("--field", field_p, "prime p");
  add_common(exp_tr, opt);

  CLI11_PARSE(app, argc, argv);

  try {
    int trunc = effective_trunc(opt);
    uint64_t seed = opt.seed();
    auto load_mf = [&](const std::string& p) {
      return mf_from_json(load_descriptor_file(p), trunc);
    };

    if (ring_check->parsed()) {
      Json d = load_descriptor_file(path_a);
      Json rep;
      if (d.contains("semigroup")) {
        MonomialCurveRing C = curve_from_json(d, trunc);
        rep["kind"] = "curve";
        rep["semigroup"] = C.gens;
        rep["conductor"] = curve_conductor(C.gens);
        rep["gorenstein"] = curve_is_gorenstein(C.gens);
        rep["trunc"] = C.trunc;
      } else {
        HypersurfaceRing R = ring_from_json(d, trunc);
        rep["kind"] = "hypersurface";
        rep["dim"] = R.dim();
        rep["multiplicity"] = ring_multiplicity(R);
        rep["trunc"] = R.trunc();
      }
      rep["status"] = "ok";
      print_report(rep, opt);
      return 0;
    }

    if (mf_sub["validate"]->parsed()) {
      MatrixFactorization m = load_mf(path_a);
      MfValidation v = mf_validate(m);
      Json rep;
      rep["valid"] = v.valid;
      rep["reduced"] = v.reduced;
      rep["size"] = m.size();
      if (!v.valid) rep["offender"] = v.offender;
      rep["trunc"] = m.ring.trunc();
      print_report(rep, opt);
      return v.valid ? 0 : 1;
    }
    for (const char* name : {"shift", "reduce", "transpose", "tau"}) {
      if (!mf_sub[name]->parsed()) continue;
      MatrixFactorization m = load_mf(path_a);
      MatrixFactorization r = std::string(name) == "shift"       ? mf_shift(m)
                              : std::string(name) == "reduce"    ? mf_reduce(m)
                              : std::string(name) == "transpose" ? mf_transpose(m)
                                                                 : mf_ar_translate(m);
      print_report(mf_to_json(r), opt);
      return 0;
    }
    if (mf_iso->parsed()) {
      IsoResult r = mf_is_isomorphic(load_mf(path_a), load_mf(path_b), seed);
      Json rep = iso_json(r);
      rep["trunc"] = trunc ? trunc : 12;
      rep["seed"] = seed;
      print_report(rep, opt);
      return 0;
    }

    if (kn_sharp->parsed()) {
      print_report(mf_to_json(sharp_mf(load_mf(path_a))), opt);
      return 0;
    }
    if (kn_flat->parsed()) {
      print_report(mf_to_json(flat_mf(load_mf(path_a))), opt);
      return 0;
    }
    if (kn_verify->parsed()) {
      std::vector<MatrixFactorization> targets;
      if (!path_a.empty()) {
        targets.push_back(load_mf(path_a));
      } else {
        Field k = Field::fp(7);
        int N = trunc ? trunc : 12;
        auto cat = family == "ade" ? ade_catalog_default(k, N, seed)
                                   : ade_catalog(k, N, family, max_n, seed);
        for (const auto& e : cat)
          for (const auto& m : e.mfs) targets.push_back(m);
      }
      Json rows = Json::array();
      bool all_ok = true;
      for (const auto& m : targets) {
        if (roundtrip == "sharp" || roundtrip == "both") {
          RoundtripReport r = verify_roundtrip_sharp_flat(m, seed);
          rows.push_back(Json{{"identity", r.identity},
                              {"status", r.holds ? "pass" : "fail"},
                              {"method", r.witness.method},
                              {"trunc", r.trunc}});
          all_ok &= r.holds;
        }
        if (roundtrip == "flat" || roundtrip == "both") {
          RoundtripReport r = verify_roundtrip_flat_sharp(sharp_mf(m), seed);
          rows.push_back(Json{{"identity", r.identity},
                              {"status", r.holds ? "pass" : "fail"},
                              {"method", r.witness.method},
                              {"trunc", r.trunc}});
          all_ok &= r.holds;
        }
        SplitReport sp = verify_splitting_section(sharp_mf(m));
        rows.push_back(Json{{"identity", "splitting section"},
                            {"status", sp.section_found ? "pass" : "fail"},
                            {"method", sp.used_normal_form ? "normal-form" : "solve"},
                            {"trunc", sp.trunc}});
        all_ok &= sp.section_found;
      }
      Json rep;
      rep["schema"] = "mflab.report.v1";
      rep["suite"] = "knoerrer-verify";
      rep["seed"] = seed;
      rep["rows"] = rows;
      rep["status"] = all_ok ? "pass" : "fail";
      print_report(rep, opt);
      return all_ok ? 0 : 1;
    }

    if (hom_stable->parsed()) {
      MatrixFactorization M = load_mf(path_a), N = load_mf(path_b);
      if (!(*M.ring.S == *N.ring.S) || !(M.ring.f == N.ring.f))
        fail(ErrorKind::MismatchedRing, "factorizations over different rings");
      Certificate cert;
      int N0 = M.ring.trunc();
      int64_t dim = certified_value(
          [&](int t) {
            AlgebraPtr A = Algebra::hypersurface(M.ring.at_trunc(t));
            return int64_t(stable_hom_dim(pres_from_mf(M.at_trunc(t), A),
                                          pres_from_mf(N.at_trunc(t), A)));
          },
          N0, &cert, "stable Hom dimension");
      Json rep;
      rep["value"] = dim;
      rep["trunc"] = N0;
      rep["certificate"] =
          Json{{"checked_at", cert.checked_at}, {"stable", cert.stable}};
      print_report(rep, opt);
      return 0;
    }

    for (const char* name : {"hlength", "betti", "mult", "annexp"}) {
      if (!inv_sub[name]->parsed()) continue;
      MatrixFactorization M = load_mf(path_a);
      int N0 = M.ring.trunc();
      std::string id = name;
      Certificate cert;
      int64_t value = 0;
      if (id == "betti") {
        AlgebraPtr A = Algebra::hypersurface(M.ring);
        value = int64_t(betti(pres_from_mf(mf_reduce(M), A)));
        cert = Certificate{N0, N0, true};
      } else {
        value = certified_value(
            [&](int t) -> int64_t {
              AlgebraPtr A = Algebra::hypersurface(M.ring.at_trunc(t));
              Presentation P = pres_from_mf(M.at_trunc(t), A);
              if (id == "mult") return multiplicity_module(P).value;
              if (id == "annexp") return annihilator_exponent(P);
              ApproximationResult ap = lat_approximation_of_simple(A);
              return int64_t(hlength(P, ap.G).value);
            },
            N0, &cert, id, id == "hlength");
      }
      Json rep;
      rep["invariant"] = id;
      rep["value"] = value;
      rep["trunc"] = N0;
      rep["certificate"] =
          Json{{"checked_at", cert.checked_at}, {"stable", cert.stable}};
      print_report(rep, opt);
      return 0;
    }

    if (resolve_cmd->parsed()) {
      MatrixFactorization M = load_mf(path_a);
      AlgebraPtr A = Algebra::hypersurface(M.ring);
      std::vector<Presentation> res = minimal_resolution(pres_from_mf(M, A), steps);
      Json rows = Json::array();
      for (size_t i = 0; i < res.size(); ++i) {
        Json mat = Json::array();
        for (size_t r = 0; r < res[i].rows; ++r) {
          Json row = Json::array();
          for (size_t c = 0; c < res[i].cols; ++c) row.push_back(res[i].at(r, c).str());
          mat.push_back(row);
        }
        rows.push_back(Json{{"step", i + 1},
                            {"rows", res[i].rows},
                            {"cols", res[i].cols},
                            {"matrix", mat}});
      }
      Json rep;
      rep["schema"] = "mflab.report.v1";
      rep["betti"] = [&] {
        Json b = Json::array();
        b.push_back(res[0].rows);
        for (const auto& d : res) b.push_back(d.cols);
        return b;
      }();
      rep["differentials"] = rows;
      rep["trunc"] = M.ring.trunc();
      print_report(rep, opt);
      return 0;
    }

    if (approx_cmd->parsed()) {
      Json d = load_descriptor_file(ring_path);
      AlgebraPtr A = d.contains("semigroup")
                         ? Algebra::curve(curve_from_json(d, trunc))
                         : Algebra::hypersurface(ring_from_json(d, trunc));
      ApproximationResult ap = lat_approximation_of_simple(A);
      Json rep;
      rep["lattice_generators"] = ap.G.rows;
      rep["lattice_relations"] = ap.G.cols;
      rep["kernel_pd"] = ap.kernel_pd;
      rep["mcm_certificate"] = ap.mcm_certificate;
      rep["d0_caveat"] = ap.d0_caveat;
      rep["trunc"] = A->trunc();
      rep["status"] = "ok";
      print_report(rep, opt);
      return 0;
    }

    if (exp_catalog->parsed()) {
      Field k = Field::fp(field_p);
      int N = trunc ? trunc : 12;
      auto cat = family == "ade" ? ade_catalog_default(k, N, seed)
                                 : ade_catalog(k, N, family, max_n, seed);
      Json rows = Json::array();
      for (const auto& e : cat)
        for (size_t i = 0; i < e.mfs.size(); ++i)
          rows.push_back(Json{{"family", e.family},
                              {"n", e.n},
                              {"index", i},
                              {"size", e.mfs[i].size()},
                              {"f", e.ring.f.str()}});
      Json rep;
      rep["schema"] = "mflab.report.v1";
      rep["suite"] = "catalog";
      rep["seed"] = seed;
      rep["trunc"] = N;
      rep["rows"] = rows;
      print_report(rep, opt);
      return 0;
    }

    if (exp_kaw->parsed()) {
      HypersurfaceRing R = ring_from_json(load_descriptor_file(ring_path), trunc);
      KawasakiRow row = kawasaki_growth(R, kaw_n, check_indec, seed);
      Json rep;
      rep["schema"] = "mflab.report.v1";
      rep["suite"] = "kawasaki";
      rep["trunc"] = R.trunc();
      rep["seed"] = seed;
      rep["rows"] = Json::array({Json{{"n", row.n},
                                      {"bound", row.bound},
                                      {"beta", row.beta},
                                      {"betti_sequence", row.betti_sequence},
                                      {"indecomposable", row.indec},
                                      {"status", row.ok ? "pass" : "fail"}}});
      rep["status"] = row.ok ? "pass" : "fail";
      print_report(rep, opt);
      return row.ok ? 0 : 1;
    }

    if (exp_hs->parsed()) {
      ChainFile chain = chain_from_json(load_descriptor_file(chain_path), trunc);
      if (chain.mfs.empty()) fail(ErrorKind::InvalidInput, "empty chain");
      TruncSeries x = parse_series(x_elem, chain.mfs[0].ring.S);
      HaradaSaiReport r = harada_sai_chain(chain.mfs, chain.maps, x, seed);
      Json rep;
      rep["schema"] = "mflab.report.v1";
      rep["suite"] = "harada-sai";
      rep["chain_length"] = r.chain_length;
      rep["length_bound"] = r.length_bound;
      rep["harada_sai_bound"] = r.harada_sai_bound;
      rep["vanishing_prefix"] = r.vanishing_prefix;
      rep["status"] = r.within_bound ? "pass" : "fail";
      rep["trunc"] = chain.mfs[0].ring.trunc();
      rep["seed"] = seed;
      print_report(rep, opt);
      return r.within_bound ? 0 : 1;
    }

    if (exp_bt->parsed()) {
      Field k = Field::fp(field_p);
      std::vector<int64_t> gens = parse_int_list(curve_spec);
      MonomialCurveRing C = make_monomial_curve(k, gens, trunc ? trunc : 30);
      BtFamilyReport r = bt_family_report(C, tau_values(k, count), seed, opt.jobs);
      Json rows = Json::array();
      for (const auto& row : r.rows)
        rows.push_back(Json{{"tau", row.tau},
                            {"betti", row.betti},
                            {"hlength", row.hlength},
                            {"indecomposable", row.indecomposable},
                            {"distinct", row.distinct}});
      bool ok = r.all_indecomposable && r.pairwise_non_isomorphic && r.equal_betti &&
                r.equal_hlength;
      Json rep;
      rep["schema"] = "mflab.report.v1";
      rep["suite"] = "bt-family";
      rep["trunc"] = r.trunc;
      rep["seed"] = r.seed;
      rep["rows"] = rows;
      rep["common_hlength"] = r.common_hlength;
      rep["certificate"] = Json{{"checked_at", r.cert.checked_at},
                                {"stable", r.cert.stable}};
      rep["status"] = ok ? "pass" : "fail";
      print_report(rep, opt);
      return ok ? 0 : 1;
    }

    if (exp_tr->parsed()) {
      Field k = Field::fp(field_p);
      int N = trunc ? trunc : 12;
      auto cat = ade_catalog(k, N, family, max_n, seed);
      std::vector<MatrixFactorization> fam;
      for (const auto& e : cat)
        for (const auto& m : e.mfs) fam.push_back(m);
      TransferReport r = knoerrer_transfer_report(fam, seed);
      Json rows = Json::array();
      for (const auto& row : r.rows)
        rows.push_back(Json{{"source", row.source},
                            {"summands", row.summands},
                            {"hlength_cover", row.hlength_cover}});
      bool ok = r.summand_bound_ok && r.pool_growth_ok;
      Json rep;
      rep["schema"] = "mflab.report.v1";
      rep["suite"] = "knoerrer-transfer";
      rep["trunc"] = N;
      rep["seed"] = seed;
      rep["rows"] = rows;
      rep["family_size"] = r.family_size;
      rep["distinct_summand_classes"] = r.distinct_summand_classes;
      if (!r.hclass_note.empty()) rep["note"] = r.hclass_note;
      rep["status"] = ok ? "pass" : "fail";
      print_report(rep, opt);
      return ok ? 0 : 1;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return int(e.category());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
