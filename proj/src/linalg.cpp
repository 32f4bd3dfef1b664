#include "mflab/linalg.hpp"

#include <algorithm>
#include <cassert>
#include <utility>

namespace mflab {

namespace {
constexpr uint64_t kAccumBudget = (uint64_t(1) << 62);

uint64_t norm_i64(int64_t v, uint64_t p) {
  int64_t r = v % int64_t(p);
  return uint64_t(r < 0 ? r + int64_t(p) : r);
}

// Forward-echelon store over F_p with delayed modular reduction. Rows are kept
// in insertion order; each stored row is zero at the pivot columns of all rows
// stored before it and starts with a unit pivot at its first nonzero column.
struct FpEchelon {
  uint64_t p;
  size_t cols;
  std::vector<std::vector<uint64_t>> rows;
  std::vector<size_t> pivots;

  FpEchelon(uint64_t p_, size_t cols_) : p(p_), cols(cols_) {}

  // Reduces v (entries < p) against stored rows, in storage order.
  void reduce(std::vector<uint64_t>& v) const {
    const uint64_t growth = (p - 1) * (p - 1);
    uint64_t dirt = p - 1;
    for (size_t i = 0; i < rows.size(); ++i) {
      size_t c = pivots[i];
      uint64_t f = v[c] % p;
      if (!f) continue;
      if (dirt > kAccumBudget - growth) {
        for (auto& x : v) x %= p;
        dirt = p - 1;
      }
      uint64_t coef = p - f;
      const uint64_t* src = rows[i].data();
      uint64_t* dst = v.data();
      for (size_t t = c; t < cols; ++t) dst[t] += coef * src[t];
      v[c] = 0;
      dirt += growth;
    }
    for (auto& x : v) x %= p;
  }

  // Returns true if the row space grew.
  bool insert(std::vector<uint64_t> v) {
    reduce(v);
    size_t lead = cols;
    for (size_t j = 0; j < cols; ++j)
      if (v[j]) { lead = j; break; }
    if (lead == cols) return false;
    uint64_t inv = fp_inv(v[lead], p);
    for (auto& x : v) x = x * inv % p;
    rows.push_back(std::move(v));
    pivots.push_back(lead);
    return true;
  }

  // Sorts rows by pivot column and clears every pivot column from the other
  // rows, producing a reduced row echelon basis.
  void make_rref() {
    std::vector<size_t> order(rows.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return pivots[a] < pivots[b]; });
    std::vector<std::vector<uint64_t>> r2;
    std::vector<size_t> p2;
    r2.reserve(rows.size());
    for (size_t idx : order) {
      r2.push_back(std::move(rows[idx]));
      p2.push_back(pivots[idx]);
    }
    rows = std::move(r2);
    pivots = std::move(p2);
    // Descending pass: row i's support starts at pivots[i], so eliminating it
    // from earlier rows cannot disturb already-cleared later pivots.
    for (size_t i = rows.size(); i-- > 0;) {
      size_t c = pivots[i];
      for (size_t j = 0; j < i; ++j) {
        uint64_t f = rows[j][c] % p;
        if (!f) continue;
        uint64_t coef = p - f;
        uint64_t* dst = rows[j].data();
        const uint64_t* src = rows[i].data();
        for (size_t t = c; t < cols; ++t) dst[t] = (dst[t] + coef * src[t]) % p;
      }
    }
  }
};

struct QqEchelon {
  size_t cols;
  std::vector<std::vector<mpq_class>> rows;
  std::vector<size_t> pivots;

  explicit QqEchelon(size_t cols_) : cols(cols_) {}

  void reduce(std::vector<mpq_class>& v) const {
    for (size_t i = 0; i < rows.size(); ++i) {
      size_t c = pivots[i];
      if (v[c] == 0) continue;
      mpq_class f = v[c];
      for (size_t t = c; t < cols; ++t) v[t] -= f * rows[i][t];
      v[c] = 0;
    }
  }

  bool insert(std::vector<mpq_class> v) {
    reduce(v);
    size_t lead = cols;
    for (size_t j = 0; j < cols; ++j)
      if (v[j] != 0) { lead = j; break; }
    if (lead == cols) return false;
    mpq_class inv = 1 / v[lead];
    for (auto& x : v) x *= inv;
    rows.push_back(std::move(v));
    pivots.push_back(lead);
    return true;
  }

  void make_rref() {
    std::vector<size_t> order(rows.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return pivots[a] < pivots[b]; });
    std::vector<std::vector<mpq_class>> r2;
    std::vector<size_t> p2;
    for (size_t idx : order) {
      r2.push_back(std::move(rows[idx]));
      p2.push_back(pivots[idx]);
    }
    rows = std::move(r2);
    pivots = std::move(p2);
    for (size_t i = rows.size(); i-- > 0;) {
      size_t c = pivots[i];
      for (size_t j = 0; j < i; ++j) {
        if (rows[j][c] == 0) continue;
        mpq_class f = rows[j][c];
        for (size_t t = c; t < cols; ++t) rows[j][t] -= f * rows[i][t];
      }
    }
  }
};
}  // namespace

uint64_t fp_inv(uint64_t a, uint64_t p) {
  int64_t t = 0, newt = 1, r = int64_t(p), newr = int64_t(a % p);
  while (newr != 0) {
    int64_t q = r / newr;
    t = std::exchange(newt, t - q * newt);
    r = std::exchange(newr, r - q * newr);
  }
  return norm_i64(t, p);
}

DenseMat::DenseMat(Field f, size_t rows, size_t cols)
    : field_(f), rows_(rows), cols_(cols) {
  if (field_.is_fp())
    fp_.assign(rows * cols, 0);
  else
    qq_.assign(rows * cols, mpq_class(0));
}

DenseMat DenseMat::identity(Field f, size_t n) {
  DenseMat m(f, n, n);
  for (size_t i = 0; i < n; ++i) m.set_int(i, i, 1);
  return m;
}

Scalar DenseMat::get(size_t i, size_t j) const {
  if (field_.is_fp()) return Scalar(field_, int64_t(fp_[i * cols_ + j]));
  return Scalar(field_, qq_[i * cols_ + j]);
}

void DenseMat::set(size_t i, size_t j, const Scalar& s) {
  if (field_.is_fp())
    fp_[i * cols_ + j] = uint64_t(s.fp_value());
  else
    qq_[i * cols_ + j] = s.rat_value();
}

void DenseMat::set_int(size_t i, size_t j, int64_t v) {
  if (field_.is_fp())
    fp_[i * cols_ + j] = norm_i64(v, uint64_t(field_.prime()));
  else
    qq_[i * cols_ + j] = v;
}

DenseMat DenseMat::mul(const DenseMat& o) const {
  assert(cols_ == o.rows_ && field_ == o.field_);
  DenseMat r(field_, rows_, o.cols_);
  if (field_.is_fp()) {
    uint64_t p = uint64_t(field_.prime());
    for (size_t i = 0; i < rows_; ++i)
      for (size_t j = 0; j < o.cols_; ++j) {
        unsigned __int128 acc = 0;
        for (size_t k = 0; k < cols_; ++k)
          acc += (unsigned __int128)fp_[i * cols_ + k] * o.fp_[k * o.cols_ + j];
        r.fp_[i * o.cols_ + j] = uint64_t(acc % p);
      }
  } else {
    for (size_t i = 0; i < rows_; ++i)
      for (size_t j = 0; j < o.cols_; ++j) {
        mpq_class acc(0);
        for (size_t k = 0; k < cols_; ++k)
          acc += qq_[i * cols_ + k] * o.qq_[k * o.cols_ + j];
        r.qq_[i * o.cols_ + j] = acc;
      }
  }
  return r;
}

DenseMat DenseMat::transpose() const {
  DenseMat r(field_, cols_, rows_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j)
      if (field_.is_fp())
        r.fp_[j * rows_ + i] = fp_[i * cols_ + j];
      else
        r.qq_[j * rows_ + i] = qq_[i * cols_ + j];
  return r;
}

std::vector<size_t> DenseMat::rref() {
  if (field_.is_fp()) {
    uint64_t p = uint64_t(field_.prime());
    FpEchelon e(p, cols_);
    for (size_t i = 0; i < rows_; ++i) {
      std::vector<uint64_t> v(fp_.begin() + i * cols_, fp_.begin() + (i + 1) * cols_);
      e.insert(std::move(v));
    }
    e.make_rref();
    std::fill(fp_.begin(), fp_.end(), 0);
    for (size_t i = 0; i < e.rows.size(); ++i)
      std::copy(e.rows[i].begin(), e.rows[i].end(), fp_.begin() + i * cols_);
    return e.pivots;
  }
  QqEchelon e(cols_);
  for (size_t i = 0; i < rows_; ++i) {
    std::vector<mpq_class> v(qq_.begin() + i * cols_, qq_.begin() + (i + 1) * cols_);
    e.insert(std::move(v));
  }
  e.make_rref();
  std::fill(qq_.begin(), qq_.end(), mpq_class(0));
  for (size_t i = 0; i < e.rows.size(); ++i)
    std::copy(e.rows[i].begin(), e.rows[i].end(), qq_.begin() + i * cols_);
  return e.pivots;
}

size_t DenseMat::rank() const {
  DenseMat copy = *this;
  return copy.rref().size();
}

DenseMat DenseMat::nullspace() const {
  DenseMat copy = *this;
  std::vector<size_t> pivots = copy.rref();
  std::vector<bool> is_pivot(cols_, false);
  for (size_t c : pivots) is_pivot[c] = true;
  size_t nfree = cols_ - pivots.size();
  DenseMat basis(field_, nfree, cols_);
  size_t bi = 0;
  for (size_t j = 0; j < cols_; ++j) {
    if (is_pivot[j]) continue;
    basis.set_int(bi, j, 1);
    for (size_t i = 0; i < pivots.size(); ++i) {
      Scalar a = copy.get(i, j);
      if (!a.is_zero()) basis.set(bi, pivots[i], -a);
    }
    ++bi;
  }
  return basis;
}

std::optional<std::vector<Scalar>> DenseMat::solve(const std::vector<Scalar>& b) const {
  assert(b.size() == rows_);
  DenseMat aug(field_, rows_, cols_ + 1);
  for (size_t i = 0; i < rows_; ++i) {
    for (size_t j = 0; j < cols_; ++j) aug.set(i, j, get(i, j));
    aug.set(i, cols_, b[i]);
  }
  std::vector<size_t> pivots = aug.rref();
  if (!pivots.empty() && pivots.back() == cols_) return std::nullopt;  // inconsistent
  std::vector<Scalar> x(cols_, Scalar::zero(field_));
  for (size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = aug.get(i, cols_);
  return x;
}

std::vector<Scalar> DenseMat::row(size_t i) const {
  std::vector<Scalar> r;
  r.reserve(cols_);
  for (size_t j = 0; j < cols_; ++j) r.push_back(get(i, j));
  return r;
}

void DenseMat::append_row(const std::vector<Scalar>& r) {
  assert(r.size() == cols_);
  if (field_.is_fp()) {
    for (const Scalar& s : r) fp_.push_back(uint64_t(s.fp_value()));
  } else {
    for (const Scalar& s : r) qq_.push_back(s.rat_value());
  }
  ++rows_;
}

bool DenseMat::operator==(const DenseMat& o) const {
  return field_ == o.field_ && rows_ == o.rows_ && cols_ == o.cols_ &&
         fp_ == o.fp_ && qq_ == o.qq_;
}

// RowSpace: same forward-echelon discipline as FpEchelon/QqEchelon, held in
// the member arrays so the space can grow incrementally across calls.
RowSpace::RowSpace(Field f, size_t ambient_cols) : field_(f), cols_(ambient_cols) {}

namespace {
void fp_span_reduce(std::vector<uint64_t>& v, uint64_t p, size_t cols,
                    const std::vector<size_t>& pivots,
                    const std::vector<std::vector<uint64_t>>& rows) {
  const uint64_t growth = (p - 1) * (p - 1);
  uint64_t dirt = p - 1;
  for (size_t i = 0; i < rows.size(); ++i) {
    size_t c = pivots[i];
    uint64_t f = v[c] % p;
    if (!f) continue;
    if (dirt > kAccumBudget - growth) {
      for (auto& x : v) x %= p;
      dirt = p - 1;
    }
    uint64_t coef = p - f;
    const uint64_t* src = rows[i].data();
    uint64_t* dst = v.data();
    for (size_t t = c; t < cols; ++t) dst[t] += coef * src[t];
    v[c] = 0;
    dirt += growth;
  }
  for (auto& x : v) x %= p;
}

void qq_span_reduce(std::vector<mpq_class>& v, size_t cols,
                    const std::vector<size_t>& pivots,
                    const std::vector<std::vector<mpq_class>>& rows) {
  for (size_t i = 0; i < rows.size(); ++i) {
    size_t c = pivots[i];
    if (v[c] == 0) continue;
    mpq_class f = v[c];
    for (size_t t = c; t < cols; ++t) v[t] -= f * rows[i][t];
    v[c] = 0;
  }
}
}  // namespace

bool RowSpace::insert(const std::vector<Scalar>& v) {
  assert(v.size() == cols_);
  if (field_.is_fp()) {
    uint64_t p = uint64_t(field_.prime());
    std::vector<uint64_t> w(cols_);
    for (size_t j = 0; j < cols_; ++j) w[j] = uint64_t(v[j].fp_value());
    fp_span_reduce(w, p, cols_, pivots_, fp_rows_);
    size_t lead = cols_;
    for (size_t j = 0; j < cols_; ++j)
      if (w[j]) { lead = j; break; }
    if (lead == cols_) return false;
    uint64_t inv = fp_inv(w[lead], p);
    for (auto& x : w) x = x * inv % p;
    fp_rows_.push_back(std::move(w));
    pivots_.push_back(lead);
    return true;
  }
  std::vector<mpq_class> w(cols_);
  for (size_t j = 0; j < cols_; ++j) w[j] = v[j].rat_value();
  qq_span_reduce(w, cols_, pivots_, qq_rows_);
  size_t lead = cols_;
  for (size_t j = 0; j < cols_; ++j)
    if (w[j] != 0) { lead = j; break; }
  if (lead == cols_) return false;
  mpq_class inv = 1 / w[lead];
  for (auto& x : w) x *= inv;
  qq_rows_.push_back(std::move(w));
  pivots_.push_back(lead);
  return true;
}

bool RowSpace::insert_mat_rows(const DenseMat& m) {
  bool grew = false;
  for (size_t i = 0; i < m.rows(); ++i) grew |= insert(m.row(i));
  return grew;
}

std::vector<Scalar> RowSpace::reduce(const std::vector<Scalar>& v) const {
  assert(v.size() == cols_);
  std::vector<Scalar> out;
  out.reserve(cols_);
  if (field_.is_fp()) {
    uint64_t p = uint64_t(field_.prime());
    std::vector<uint64_t> w(cols_);
    for (size_t j = 0; j < cols_; ++j) w[j] = uint64_t(v[j].fp_value());
    fp_span_reduce(w, p, cols_, pivots_, fp_rows_);
    for (size_t j = 0; j < cols_; ++j) out.push_back(Scalar(field_, int64_t(w[j])));
  } else {
    std::vector<mpq_class> w(cols_);
    for (size_t j = 0; j < cols_; ++j) w[j] = v[j].rat_value();
    qq_span_reduce(w, cols_, pivots_, qq_rows_);
    for (size_t j = 0; j < cols_; ++j) out.push_back(Scalar(field_, w[j]));
  }
  return out;
}

bool RowSpace::contains(const std::vector<Scalar>& v) const {
  std::vector<Scalar> r = reduce(v);
  for (const Scalar& s : r)
    if (!s.is_zero()) return false;
  return true;
}

std::vector<Scalar> RowSpace::quotient_coords(const std::vector<Scalar>& v) const {
  std::vector<Scalar> r = reduce(v);
  std::vector<bool> is_pivot(cols_, false);
  for (size_t c : pivots_) is_pivot[c] = true;
  std::vector<Scalar> out;
  out.reserve(cols_ - pivots_.size());
  for (size_t j = 0; j < cols_; ++j)
    if (!is_pivot[j]) out.push_back(r[j]);
  return out;
}

DenseMat RowSpace::basis() const {
  DenseMat m(field_, pivots_.size(), cols_);
  for (size_t r = 0; r < pivots_.size(); ++r)
    for (size_t j = 0; j < cols_; ++j)
      if (field_.is_fp())
        m.set_int(r, j, int64_t(fp_rows_[r][j]));
      else
        m.set(r, j, Scalar(field_, qq_rows_[r][j]));
  return m;
}

}  // namespace mflab
