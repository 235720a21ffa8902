#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "symcube/combinatorics.hpp"
#include "symcube/formula.hpp"

namespace symcube {

/// 1e-9 up to degree 5, 1e-8 beyond.
double default_tolerance(int ell);

struct ExactnessOptions {
  double tolerance = -1.0;    // < 0: default_tolerance(ell)
  bool use_symmetry = true;   // skip monomials that vanish by exact symmetry
};

struct ExactnessReport {
  int degree = 0;
  std::size_t monomials = 0;   // all |alpha| <= degree, including those certified by symmetry
  std::size_t evaluated = 0;   // monomials actually summed
  std::string symmetry;        // "sign", "central" or "none"
  std::vector<int> worst;      // monomial with the largest normalized error
  double max_abs_error = 0.0;
  double max_rel_error = 0.0;  // |Q - I| / |I|, or against the fallback scale when I = 0
  double tolerance = 0.0;
  bool passed = false;
};

/// Sweeps every monomial |alpha| <= ell in graded lexicographic order and
/// compares the rule against the target's oracle (product moments, sphere
/// integrals or sums over F(d,k)).
///
/// A monomial passes when |Q - I| <= tol |I|; when I = 0 the bound is
/// max(1e-12, tol * sum_i |a_i x_i^alpha|). If the rule is bitwise invariant
/// under every sign flip, monomials with an odd exponent vanish exactly and
/// are skipped; if it is bitwise centrally symmetric, odd-degree monomials are.
ExactnessReport exactness(const CubatureFormula& rule, const Target& target, int ell,
                          const ExactnessOptions& options = {});
ExactnessReport exactness(const CubatureFormula& rule, int ell, const ExactnessOptions& options = {});

/// Oracle value of x^alpha for a target.
double target_integral(const Target& target, std::span<const int> alpha);

/// Lower bound for the number of knots of a degree-ell (odd) formula for a
/// centrally symmetric weight, as an exact integer.
BigInt moller_bound_exact(int ell, int d);
std::int64_t moller_bound(int ell, int d);

/// d^2+d+1 (k = 2) and (d^3+3d^2+8d)/3 (k = 3).
std::int64_t moller_simple(int k, int d);

/// Number of monomials of degree <= k with even / odd total degree.
std::pair<std::int64_t, std::int64_t> dim_even_odd(int k, int d);

/// Sum |a_i| divided by the target's total mass.
double condition_number(const CubatureFormula& rule, const ProductWeight& weight);
double condition_number(const CubatureFormula& rule);

struct AsymptoticsRow {
  int d = 0;
  std::int64_t moller = 0;
  double moller_ratio = 0.0;    // moller / (2 d^k / k!)
  std::int64_t smolyak = 0;
  double smolyak_ratio = 0.0;   // n(d+k,d) / (2^k d^k / k!)
  bool in_envelope = true;      // both ratios in [0.5, 2] (checked for d >= 10k)
};

std::vector<AsymptoticsRow> order_asymptotics(int k, const std::vector<int>& dims);

}  // namespace symcube
