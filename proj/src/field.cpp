#include "mflab/field.hpp"

#include <utility>

namespace mflab {

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::MismatchedRing: return "MismatchedRing";
    case ErrorKind::NotAUnit: return "NotAUnit";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::UnknownVariable: return "UnknownVariable";
    case ErrorKind::CharTwo: return "CharTwo";
    case ErrorKind::NotAFactorization: return "NotAFactorization";
    case ErrorKind::NotReduced: return "NotReduced";
    case ErrorKind::NotACover: return "NotACover";
    case ErrorKind::NoNormalForm: return "NoNormalForm";
    case ErrorKind::NotGorenstein: return "NotGorenstein";
    case ErrorKind::DimensionUnsupported: return "DimensionUnsupported";
    case ErrorKind::DTooSmall: return "DTooSmall";
    case ErrorKind::NotFaithful: return "NotFaithful";
    case ErrorKind::SizeMismatch: return "SizeMismatch";
    case ErrorKind::Inconclusive: return "Inconclusive";
    case ErrorKind::NotStabilized: return "NotStabilized";
    case ErrorKind::WindowExceeded: return "WindowExceeded";
    case ErrorKind::InfiniteLength: return "InfiniteLength";
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::MathFailure: return "MathFailure";
  }
  return "Error";
}

bool is_prime(int64_t n) {
  if (n < 2) return false;
  for (int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

Field Field::fp(int64_t p) {
  if (p == 2) fail(ErrorKind::CharTwo, "F_2 is not supported (2 must be invertible)");
  if (!is_prime(p))
    fail(ErrorKind::InvalidInput, "field order " + std::to_string(p) + " is not prime");
  return Field(p);
}

std::string Field::str() const {
  return p_ ? "F" + std::to_string(p_) : "Q";
}

namespace {
int64_t mod_norm(int64_t n, int64_t p) {
  int64_t r = n % p;
  return r < 0 ? r + p : r;
}

// Extended Euclid; a must be nonzero mod p.
int64_t mod_inv(int64_t a, int64_t p) {
  int64_t t = 0, newt = 1, r = p, newr = a;
  while (newr != 0) {
    int64_t q = r / newr;
    t = std::exchange(newt, t - q * newt);
    r = std::exchange(newr, r - q * newr);
  }
  return mod_norm(t, p);
}
}  // namespace

Scalar::Scalar(const Field& f, int64_t n) : p_(f.prime()), v_(0), q_(0) {
  if (p_)
    v_ = mod_norm(n, p_);
  else
    q_ = n;
}

Scalar::Scalar(const Field& f, const mpq_class& q) : p_(f.prime()), v_(0), q_(0) {
  // Work with the numerator/denominator parts: q itself may violate the
  // canonical-form contract (gmp requires a positive denominator).
  mpz_class num = q.get_num(), den = q.get_den();
  if (den == 0) fail(ErrorKind::NotAUnit, "zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  if (p_) {
    // Reduce a rational mod p: numerator * denominator^{-1}.
    mpz_class nm = num % p_, dm = den % p_;
    int64_t n = mod_norm(nm.get_si(), p_), d = mod_norm(dm.get_si(), p_);
    if (d == 0) fail(ErrorKind::NotAUnit, "denominator divisible by p");
    v_ = mod_norm(n * mod_inv(d, p_), p_);
  } else {
    q_ = mpq_class(num) / mpq_class(den);  // division canonicalizes
  }
}

Scalar Scalar::operator+(const Scalar& o) const {
  check_same(o);
  Scalar r;
  r.p_ = p_;
  if (p_) r.v_ = mod_norm(v_ + o.v_, p_);
  else r.q_ = q_ + o.q_;
  return r;
}

Scalar Scalar::operator-(const Scalar& o) const {
  check_same(o);
  Scalar r;
  r.p_ = p_;
  if (p_) r.v_ = mod_norm(v_ - o.v_, p_);
  else r.q_ = q_ - o.q_;
  return r;
}

Scalar Scalar::operator*(const Scalar& o) const {
  check_same(o);
  Scalar r;
  r.p_ = p_;
  if (p_) r.v_ = mod_norm(v_ * o.v_, p_);
  else r.q_ = q_ * o.q_;
  return r;
}

Scalar Scalar::operator-() const {
  Scalar r;
  r.p_ = p_;
  if (p_) r.v_ = mod_norm(-v_, p_);
  else r.q_ = -q_;
  return r;
}

Scalar Scalar::inverse() const {
  if (is_zero()) fail(ErrorKind::NotAUnit, "inverse of zero");
  Scalar r;
  r.p_ = p_;
  if (p_) r.v_ = mod_inv(v_, p_);
  else r.q_ = 1 / q_;
  return r;
}

bool Scalar::operator==(const Scalar& o) const {
  if (p_ != o.p_) return false;
  return p_ ? v_ == o.v_ : q_ == o.q_;
}

std::string Scalar::str() const {
  if (p_) return std::to_string(v_);
  return q_.get_str();
}

}  // namespace mflab
