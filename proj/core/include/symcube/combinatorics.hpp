#pragma once

#include <cstdint>

#include <boost/multiprecision/cpp_int.hpp>

namespace symcube {

using BigInt = boost::multiprecision::cpp_int;

// Checked 64-bit arithmetic; throws Error(kOverflow).
std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_mul(std::int64_t a, std::int64_t b);

/// Exact binomial coefficient C(n, k); 0 when k < 0 or k > n.
std::int64_t binomial(std::int64_t n, std::int64_t k);
BigInt big_binomial(std::int64_t n, std::int64_t k);

/// Narrow a big integer, throwing on overflow.
std::int64_t to_int64(const BigInt& value);

}  // namespace symcube
