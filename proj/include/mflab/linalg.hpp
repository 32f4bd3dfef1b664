#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mflab/field.hpp"

namespace mflab {

// Dense matrix over the coefficient field. The F_p payload keeps entries as
// uint64_t and delays modular reduction inside elimination loops (entry growth
// is budgeted against 2^63), which is what makes the larger kernel
// computations tractable. The rational payload is exact GMP arithmetic.
class DenseMat {
 public:
  DenseMat() : field_(Field::rationals()), rows_(0), cols_(0) {}
  DenseMat(Field f, size_t rows, size_t cols);

  static DenseMat identity(Field f, size_t n);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  Field field() const { return field_; }

  Scalar get(size_t i, size_t j) const;
  void set(size_t i, size_t j, const Scalar& s);
  void set_int(size_t i, size_t j, int64_t v);

  DenseMat mul(const DenseMat& o) const;
  DenseMat transpose() const;

  // Reduced row echelon form in place; returns pivot column indices.
  std::vector<size_t> rref();
  size_t rank() const;

  // Basis of {x : this * x = 0}, returned as rows.
  DenseMat nullspace() const;

  // One solution x of this * x = b, if consistent.
  std::optional<std::vector<Scalar>> solve(const std::vector<Scalar>& b) const;

  std::vector<Scalar> row(size_t i) const;
  void append_row(const std::vector<Scalar>& r);

  bool operator==(const DenseMat& o) const;

 private:
  friend class RowSpace;
  Field field_;
  size_t rows_, cols_;
  std::vector<uint64_t> fp_;     // row-major, entries canonical in [0,p)
  std::vector<mpq_class> qq_;    // row-major
};

// An echelonized row space: supports incremental insertion, membership,
// residual reduction and quotient coordinates. Rows are kept fully reduced
// (RREF) so results are deterministic.
class RowSpace {
 public:
  explicit RowSpace(Field f, size_t ambient_cols);

  size_t dim() const { return pivots_.size(); }
  size_t ambient() const { return cols_; }
  Field field() const { return field_; }

  // Inserts the row; returns true if the space grew.
  bool insert(const std::vector<Scalar>& v);
  bool insert_mat_rows(const DenseMat& m);

  bool contains(const std::vector<Scalar>& v) const;

  // Residual of v after eliminating against the space (v - projection).
  std::vector<Scalar> reduce(const std::vector<Scalar>& v) const;

  // Coordinates of the residual on the non-pivot columns: a vector of length
  // ambient() - dim() representing v in the quotient space. Ordering follows
  // ascending non-pivot column index and is deterministic.
  std::vector<Scalar> quotient_coords(const std::vector<Scalar>& v) const;
  size_t quotient_dim() const { return cols_ - pivots_.size(); }

  const std::vector<size_t>& pivot_cols() const { return pivots_; }
  DenseMat basis() const;  // RREF basis rows

 private:
  Field field_;
  size_t cols_;
  std::vector<size_t> pivots_;              // pivot column of each stored row
  std::vector<std::vector<uint64_t>> fp_rows_;
  std::vector<std::vector<mpq_class>> qq_rows_;
};

// Fp helpers shared with other modules.
uint64_t fp_inv(uint64_t a, uint64_t p);

}  // namespace mflab
