#pragma once

#include <stdexcept>
#include <string>

namespace mflab {

// Error taxonomy. The category drives the CLI exit code:
//   kInput        -> 3 (bad files, parse errors, violated preconditions)
//   kUncertified  -> 2 (computation could not certify a result)
//   kMathFailure  -> 1 (a verified identity was falsified)
enum class ErrorKind {
  MismatchedRing,
  NotAUnit,
  ParseError,
  UnknownVariable,
  CharTwo,
  NotAFactorization,
  NotReduced,
  NotACover,
  NoNormalForm,
  NotGorenstein,
  DimensionUnsupported,
  DTooSmall,
  NotFaithful,
  SizeMismatch,
  Inconclusive,
  NotStabilized,
  WindowExceeded,
  InfiniteLength,
  InvalidInput,
  MathFailure,
};

enum class ErrorCategory { kInput = 3, kUncertified = 2, kMathFailure = 1 };

inline ErrorCategory category_of(ErrorKind k) {
  switch (k) {
    case ErrorKind::Inconclusive:
    case ErrorKind::NotStabilized:
    case ErrorKind::WindowExceeded:
    case ErrorKind::InfiniteLength:
      return ErrorCategory::kUncertified;
    case ErrorKind::MathFailure:
      return ErrorCategory::kMathFailure;
    default:
      return ErrorCategory::kInput;
  }
}

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }
  ErrorCategory category() const { return category_of(kind_); }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace mflab
