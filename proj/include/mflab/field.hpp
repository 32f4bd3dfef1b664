#pragma once

#include <cstdint>
#include <gmpxx.h>
#include <string>

#include "mflab/errors.hpp"

namespace mflab {

// Coefficient field: either F_p for an odd prime p, or the exact rationals.
class Field {
 public:
  static Field fp(int64_t p);
  static Field rationals() { return Field(0); }

  bool is_fp() const { return p_ != 0; }
  bool is_rationals() const { return p_ == 0; }
  int64_t prime() const { return p_; }
  // Characteristic: p for F_p, 0 for Q. Never 2 by construction.
  int64_t characteristic() const { return p_; }

  bool operator==(const Field& o) const { return p_ == o.p_; }
  bool operator!=(const Field& o) const { return p_ != o.p_; }

  std::string str() const;

 private:
  explicit Field(int64_t p) : p_(p) {}
  int64_t p_;
};

// An exact field element. Carries its field tag so arithmetic can check
// operand compatibility. F_p values are kept canonical in [0, p);
// rationals are kept in lowest terms with positive denominator
// (mpq_class canonical form).
class Scalar {
 public:
  Scalar() : p_(0), v_(0), q_(0) {}  // zero over Q
  Scalar(const Field& f, int64_t n);
  Scalar(const Field& f, const mpq_class& q);

  static Scalar zero(const Field& f) { return Scalar(f, 0); }
  static Scalar one(const Field& f) { return Scalar(f, 1); }

  Field field() const { return p_ ? Field::fp(p_) : Field::rationals(); }
  bool is_fp() const { return p_ != 0; }
  bool is_zero() const { return p_ ? v_ == 0 : q_ == 0; }
  bool is_one() const { return p_ ? v_ == 1 : q_ == 1; }

  // F_p payload; only valid when is_fp().
  int64_t fp_value() const { return v_; }
  const mpq_class& rat_value() const { return q_; }

  Scalar operator+(const Scalar& o) const;
  Scalar operator-(const Scalar& o) const;
  Scalar operator*(const Scalar& o) const;
  Scalar operator-() const;
  Scalar inverse() const;  // NotAUnit on zero

  bool operator==(const Scalar& o) const;
  bool operator!=(const Scalar& o) const { return !(*this == o); }

  std::string str() const;

 private:
  void check_same(const Scalar& o) const {
    if (p_ != o.p_) fail(ErrorKind::MismatchedRing, "scalars over different fields");
  }
  int64_t p_;
  int64_t v_;
  mpq_class q_;
};

bool is_prime(int64_t n);

}  // namespace mflab
