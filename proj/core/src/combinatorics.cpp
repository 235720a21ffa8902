#include "symcube/combinatorics.hpp"

#include <limits>
#include <numeric>

#include "symcube/error.hpp"

namespace symcube {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) {
    throw Error(ErrorCode::kOverflow, "integer overflow in count arithmetic");
  }
  return out;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw Error(ErrorCode::kOverflow, "integer overflow in count arithmetic");
  }
  return out;
}

std::int64_t binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  // C(n, i) = C(n, i-1) * (n-i+1) / i. With g = gcd(C(n, i-1), i), i/g divides n-i+1.
  std::int64_t result = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    const std::int64_t g = std::gcd(result, i);
    result = checked_mul(result / g, (n - k + i) / (i / g));
  }
  return result;
}

BigInt big_binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt result = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    result *= (n - k + i);
    result /= i;
  }
  return result;
}

std::int64_t to_int64(const BigInt& value) {
  if (value > std::numeric_limits<std::int64_t>::max() ||
      value < std::numeric_limits<std::int64_t>::min()) {
    throw Error(ErrorCode::kOverflow, "count does not fit in 64 bits");
  }
  return static_cast<std::int64_t>(value);
}

}  // namespace symcube
