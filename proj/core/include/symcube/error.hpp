#pragma once

#include <stdexcept>
#include <string>

namespace symcube {

/// Failure categories raised by the library. The CLI maps these onto exit codes.
enum class ErrorCode {
  kInsufficientMoments,
  kDegenerateKnots,
  kGaussKnotOutsideDomain,
  kLadderTooShallow,
  kUnsupported,       // precondition on d, k or the weight not met
  kSolveFailed,
  kIntegrity,         // a construction invariant did not hold
  kDomain,
  kNotCentrallySymmetric,
  kInvalidArgument,
  kOverflow,
  kInternal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Thrown by moment oracles backed by a finite table.
class InsufficientMoments : public Error {
 public:
  explicit InsufficientMoments(int required_order)
      : Error(ErrorCode::kInsufficientMoments,
              "insufficient moments: order " + std::to_string(required_order) + " required"),
        required_order_(required_order) {}

  int required_order() const noexcept { return required_order_; }

 private:
  int required_order_;
};

}  // namespace symcube
