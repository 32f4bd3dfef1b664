#include "mflab/rings.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace mflab {

HypersurfaceRing HypersurfaceRing::at_trunc(int new_trunc) const {
  HypersurfaceRing r;
  r.S = make_series_context(S->field, S->vars, new_trunc);
  r.f = f.rename_vars(r.S, S->vars);
  r.cover_var = cover_var;
  return r;
}

HypersurfaceRing make_hypersurface(SeriesCtxPtr S, TruncSeries f) {
  if (!(*f.context() == *S))
    fail(ErrorKind::MismatchedRing, "defining equation not over the ambient ring");
  if (f.is_zero()) fail(ErrorKind::InvalidInput, "defining equation is zero");
  int ord = f.order();
  if (ord < 2)
    fail(ErrorKind::InvalidInput, "defining equation must lie in the square of the maximal ideal");
  if (ord > S->trunc)
    fail(ErrorKind::InvalidInput, "truncation too small for the defining equation");
  HypersurfaceRing R;
  R.S = std::move(S);
  R.f = std::move(f);
  return R;
}

CoverResult double_branched_cover(const HypersurfaceRing& R) {
  if (R.field().characteristic() == 2)
    fail(ErrorKind::CharTwo, "double branched cover requires characteristic != 2");
  auto taken = [&](const std::string& n) {
    return std::find(R.S->vars.begin(), R.S->vars.end(), n) != R.S->vars.end();
  };
  std::string fresh = "u";
  bool renamed = false;
  if (taken(fresh)) {
    renamed = true;
    for (std::string cand : {std::string("v"), std::string("w")}) {
      if (!taken(cand)) { fresh = cand; break; }
    }
    if (taken(fresh)) {
      int k = 1;
      while (taken("u" + std::to_string(k))) ++k;
      fresh = "u" + std::to_string(k);
    }
  }
  std::vector<std::string> vars = R.S->vars;
  vars.push_back(fresh);
  SeriesCtxPtr S2 = make_series_context(R.field(), vars, R.trunc());
  TruncSeries f2 = R.f.rename_vars(S2, R.S->vars);
  Exponent usq(vars.size(), 0);
  usq.back() = 2;
  f2.add_term(usq, Scalar::one(R.field()));
  CoverResult out;
  out.ring = make_hypersurface(S2, f2);
  out.ring.cover_var = vars.size() - 1;
  out.cover_name = fresh;
  out.renamed = renamed;
  return out;
}

int ring_multiplicity(const HypersurfaceRing& R) { return R.f.order(); }

std::optional<size_t> detect_cover_var(const HypersurfaceRing& R) {
  if (R.cover_var) return R.cover_var;
  size_t nv = R.S->vars.size();
  for (size_t v = 0; v < nv; ++v) {
    bool ok = true, found_sq = false;
    for (const auto& [e, c] : R.f.terms()) {
      if (e[v] == 0) continue;
      bool is_vsq = (e[v] == 2) && total_degree(e) == 2 && c.is_one();
      if (is_vsq) found_sq = true;
      else { ok = false; break; }
    }
    if (ok && found_sq) return v;
  }
  return std::nullopt;
}

bool semigroup_contains(const std::vector<int64_t>& gens, int64_t n) {
  if (n < 0) return false;
  std::vector<char> mem(size_t(n) + 1, 0);
  mem[0] = 1;
  for (int64_t s = 1; s <= n; ++s)
    for (int64_t a : gens)
      if (s >= a && mem[size_t(s - a)]) { mem[size_t(s)] = 1; break; }
  return mem[size_t(n)];
}

int64_t curve_conductor(const std::vector<int64_t>& gens) {
  int64_t a1 = gens.front();
  if (a1 == 1) return 0;
  std::vector<char> mem;
  mem.push_back(1);
  int64_t run = 0;
  for (int64_t s = 1; s < (int64_t)1e7; ++s) {
    char in = 0;
    for (int64_t a : gens)
      if (s >= a && mem[size_t(s - a)]) { in = 1; break; }
    mem.push_back(in);
    run = in ? run + 1 : 0;
    if (run == a1) return s - a1 + 1;
  }
  fail(ErrorKind::InvalidInput, "conductor search exceeded bound (is gcd 1?)");
}

bool curve_is_gorenstein(const std::vector<int64_t>& gens) {
  int64_t c = curve_conductor(gens);
  int64_t frob = c - 1;
  if (frob < 0) return true;  // the full semigroup
  std::vector<char> mem(size_t(frob) + 1, 0);
  mem[0] = 1;
  for (int64_t s = 1; s <= frob; ++s)
    for (int64_t a : gens)
      if (s >= a && mem[size_t(s - a)]) { mem[size_t(s)] = 1; break; }
  for (int64_t s = 0; s <= frob; ++s)
    if (mem[size_t(s)] == mem[size_t(frob - s)]) return false;
  return true;
}

MonomialCurveRing make_monomial_curve(Field field, std::vector<int64_t> gens, int trunc) {
  if (gens.empty()) fail(ErrorKind::InvalidInput, "empty semigroup generator list");
  for (size_t i = 0; i < gens.size(); ++i) {
    if (gens[i] <= 0) fail(ErrorKind::InvalidInput, "semigroup generators must be positive");
    if (i + 1 < gens.size() && gens[i] >= gens[i + 1])
      fail(ErrorKind::InvalidInput, "semigroup generators must be strictly increasing");
  }
  int64_t g = 0;
  for (int64_t a : gens) g = std::gcd(g, a);
  if (g != 1) fail(ErrorKind::InvalidInput, "semigroup generators must have gcd 1");
  int64_t c = curve_conductor(gens);
  if (trunc < c + gens.back())
    fail(ErrorKind::InvalidInput,
         "truncation must be at least conductor + largest generator (" +
             std::to_string(c + gens.back()) + ")");
  return MonomialCurveRing{field, std::move(gens), trunc};
}

namespace {
// Reverse-lex comparison used to pick the rewrite monomial: compares exponent
// vectors read from the last variable backwards.
bool revlex_less(const Exponent& a, const Exponent& b) {
  for (size_t i = a.size(); i-- > 0;) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

bool divisible(const Exponent& e, const Exponent& d) {
  for (size_t i = 0; i < e.size(); ++i)
    if (e[i] < d[i]) return false;
  return true;
}

void enumerate_monomials(size_t var, int remaining, Exponent& cur,
                         std::vector<Exponent>& out) {
  if (var + 1 == cur.size()) {
    for (int k = 0; k <= remaining; ++k) {
      cur[var] = k;
      out.push_back(cur);
    }
    cur[var] = 0;
    return;
  }
  for (int k = 0; k <= remaining; ++k) {
    cur[var] = k;
    enumerate_monomials(var + 1, remaining - k, cur, out);
  }
  cur[var] = 0;
}
}  // namespace

std::shared_ptr<const Algebra> Algebra::hypersurface(const HypersurfaceRing& R) {
  auto A = std::shared_ptr<Algebra>(new Algebra());
  A->ctx_ = R.S;
  A->hyper_ = R;

  // Rewrite rule: lt = reverse-lex largest monomial of the lowest-degree
  // homogeneous part of f.
  int ord = R.f.order();
  const Exponent* best = nullptr;
  for (const auto& [e, c] : R.f.terms()) {
    if (total_degree(e) != ord) continue;
    if (!best || revlex_less(*best, e)) best = &e;
  }
  A->lt_exp_ = *best;
  Scalar c = R.f.coefficient(A->lt_exp_);
  // lt -> lt - c^{-1} f  (the defining relation solved for lt).
  TruncSeries lt_mono = TruncSeries::monomial(R.S, A->lt_exp_, Scalar::one(R.field()));
  A->lt_rest_ = lt_mono - R.f.scale(c.inverse());
  A->has_rule_ = true;

  A->build_basis();
  A->build_table();
  return A;
}

std::shared_ptr<const Algebra> Algebra::curve(const MonomialCurveRing& C) {
  auto A = std::shared_ptr<Algebra>(new Algebra());
  A->ctx_ = make_series_context(C.field, {"t"}, C.trunc);
  A->curve_ = C;
  A->build_basis();
  A->build_table();
  return A;
}

int Algebra::krull_dim() const {
  if (curve_) return 1;
  return hyper_->dim();
}

void Algebra::build_basis() {
  const int N = ctx_->trunc;
  if (curve_) {
    const auto& gens = curve_->gens;
    std::vector<char> mem(size_t(N) + 1, 0);
    mem[0] = 1;
    for (int64_t s = 1; s <= N; ++s)
      for (int64_t a : gens)
        if (s >= a && mem[size_t(s - a)]) { mem[size_t(s)] = 1; break; }
    // m-adic order: ord(s) = 1 + max over generators a with s - a in the
    // semigroup of ord(s - a).
    std::vector<int> ord(size_t(N) + 1, 0);
    for (int64_t s = 1; s <= N; ++s) {
      if (!mem[size_t(s)]) continue;
      int best = 0;
      for (int64_t a : gens)
        if (s >= a && mem[size_t(s - a)]) best = std::max(best, ord[size_t(s - a)] + 1);
      ord[size_t(s)] = best;
    }
    for (int64_t s = 0; s <= N; ++s) {
      if (!mem[size_t(s)]) continue;
      basis_.push_back(Exponent{int(s)});
      orders_.push_back(ord[size_t(s)]);
    }
    for (int64_t a : gens)
      m_gens_.push_back(TruncSeries::monomial(ctx_, Exponent{int(a)}, Scalar::one(field())));
  } else {
    std::vector<Exponent> all;
    Exponent cur(ctx_->vars.size(), 0);
    enumerate_monomials(0, N, cur, all);
    std::sort(all.begin(), all.end(), GradedLexLess{});
    for (const auto& e : all) {
      if (divisible(e, lt_exp_)) continue;
      basis_.push_back(e);
      orders_.push_back(total_degree(e));
    }
    for (const auto& v : ctx_->vars)
      m_gens_.push_back(TruncSeries::variable(ctx_, v));
  }
  for (size_t i = 0; i < basis_.size(); ++i) {
    std::string key(basis_[i].size(), '\0');
    for (size_t t = 0; t < basis_[i].size(); ++t) key[t] = char(basis_[i][t]);
    index_.emplace(key, i);
  }
}

size_t Algebra::index_of(const Exponent& e) const {
  std::string key(e.size(), '\0');
  for (size_t t = 0; t < e.size(); ++t) key[t] = char(e[t]);
  auto it = index_.find(key);
  if (it == index_.end()) fail(ErrorKind::InvalidInput, "monomial not in normal-form basis");
  return it->second;
}

TruncSeries Algebra::reduce(const TruncSeries& s) const {
  if (!(*s.context() == *ctx_))
    fail(ErrorKind::MismatchedRing, "series not over this ring's ambient context");
  if (curve_) {
    for (const auto& [e, c] : s.terms()) {
      std::string key(e.size(), '\0');
      for (size_t t = 0; t < e.size(); ++t) key[t] = char(e[t]);
      if (index_.find(key) == index_.end())
        fail(ErrorKind::InvalidInput,
             "t-exponent " + std::to_string(e[0]) + " not in the semigroup");
    }
    return s;
  }
  TruncSeries cur = s;
  while (true) {
    const Exponent* red = nullptr;
    Scalar coef = Scalar::zero(field());
    for (const auto& [e, c] : cur.terms()) {
      if (divisible(e, lt_exp_)) { red = &e; coef = c; break; }
    }
    if (!red) return cur;
    Exponent shift = *red;
    for (size_t i = 0; i < shift.size(); ++i) shift[i] -= lt_exp_[i];
    // Replace coef * x^red by coef * x^shift * lt_rest_.
    TruncSeries repl = lt_rest_.mul_monomial(shift, coef);
    TruncSeries drop = TruncSeries::monomial(ctx_, *red, coef);
    cur = cur - drop + repl;
  }
}

bool Algebra::is_normal_form(const TruncSeries& s) const {
  if (!(*s.context() == *ctx_)) return false;
  for (const auto& [e, c] : s.terms()) {
    std::string key(e.size(), '\0');
    for (size_t t = 0; t < e.size(); ++t) key[t] = char(e[t]);
    if (index_.find(key) == index_.end()) return false;
  }
  return true;
}

TruncSeries Algebra::mul(const TruncSeries& a, const TruncSeries& b) const {
  return reduce(a * b);
}

void Algebra::build_table() {
  size_t n = basis_.size();
  table_.resize(n * n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i; j < n; ++j) {
      SparseVec v;
      if (total_degree(basis_[i]) + total_degree(basis_[j]) <= ctx_->trunc) {
        Exponent e(basis_[i].size());
        for (size_t t = 0; t < e.size(); ++t) e[t] = basis_[i][t] + basis_[j][t];
        TruncSeries prod =
            reduce(TruncSeries::monomial(ctx_, e, Scalar::one(field())));
        v = sparse(prod);
      }
      table_[i * n + j] = v;
      table_[j * n + i] = std::move(v);
    }
  }
}

const Algebra::SparseVec& Algebra::basis_product(size_t i, size_t j) const {
  return table_[i * basis_.size() + j];
}

Algebra::SparseVec Algebra::sparse(const TruncSeries& nf) const {
  SparseVec v;
  v.reserve(nf.terms().size());
  for (const auto& [e, c] : nf.terms()) v.emplace_back(uint32_t(index_of(e)), c);
  return v;
}

TruncSeries Algebra::from_sparse(const SparseVec& v) const {
  TruncSeries s(ctx_);
  for (const auto& [i, c] : v) s.add_term(basis_[i], c);
  return s;
}

int Algebra::elem_order(const TruncSeries& nf) const {
  int best = kOrderInfinity;
  for (const auto& [e, c] : nf.terms())
    best = std::min(best, orders_[index_of(e)]);
  return best;
}

int Algebra::elem_weight(const TruncSeries& nf) const {
  int best = kOrderInfinity;
  for (const auto& [e, c] : nf.terms()) best = std::min(best, total_degree(e));
  return best;
}

std::shared_ptr<const Algebra> Algebra::at_trunc(int new_trunc) const {
  if (curve_) {
    MonomialCurveRing c2 = *curve_;
    c2.trunc = new_trunc;
    return Algebra::curve(c2);
  }
  return Algebra::hypersurface(hyper_->at_trunc(new_trunc));
}

bool Algebra::same_ring(const Algebra& o) const {
  if (curve_.has_value() != o.curve_.has_value()) return false;
  if (curve_) {
    return curve_->field == o.curve_->field && curve_->gens == o.curve_->gens &&
           curve_->trunc == o.curve_->trunc;
  }
  return *ctx_ == *o.ctx_ && hyper_->f == o.hyper_->f;
}

QuotientElem reduce_mod_f(const TruncSeries& s, const AlgebraPtr& A) {
  return QuotientElem{A, A->reduce(s)};
}

}  // namespace mflab
