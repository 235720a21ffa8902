#pragma once

// Helpers shared by the test suites: brute-force moment oracles for random
// densities, random polynomials and exact odd-monomial cancellation checks.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "symcube/formula.hpp"
#include "symcube/weights.hpp"

namespace symcube::testing {

/// Integral of f over [-h, h] by composite 5-point Gauss-Legendre on
/// `panels` equal panels; for smooth f this is accurate to round-off.
inline double integrate(const std::function<double(double)>& f, double h, int panels = 400) {
  static constexpr std::array<double, 5> nodes = {0.0, 0.5384693101056831, -0.5384693101056831,
                                                  0.9061798459386640, -0.9061798459386640};
  static constexpr std::array<double, 5> weights = {0.5688888888888889, 0.4786286704993665,
                                                    0.4786286704993665, 0.2369268850561891,
                                                    0.2369268850561891};
  const double width = 2.0 * h / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = -h + (p + 0.5) * width;
    double panel = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) panel += weights[i] * f(mid + 0.5 * width * nodes[i]);
    sum += 0.5 * width * panel;
  }
  return sum;
}

/// A random symmetric positive density on [-h, h],
///   rho(x) = c0 + c1 x^2 + c2 cos^2(pi x / (2h)) + c3 exp(-c4 x^2),
/// turned into a moment-table weight by brute-force integration.
inline Weight1D random_density_weight(std::mt19937_64& rng, const std::string& label, int orders = 16) {
  std::uniform_real_distribution<double> coef(0.1, 2.0);
  std::uniform_real_distribution<double> width(0.8, 2.0);
  const double h = width(rng);
  const double c0 = coef(rng), c1 = coef(rng), c2 = coef(rng), c3 = coef(rng), c4 = coef(rng);
  const double pi = std::acos(-1.0);
  auto rho = [=](double x) {
    const double c = std::cos(pi * x / (2.0 * h));
    return c0 + c1 * x * x + c2 * c * c + c3 * std::exp(-c4 * x * x);
  };
  std::vector<double> moments;
  for (int j = 0; j < orders; ++j) {
    moments.push_back(integrate([&](double x) { return rho(x) * std::pow(x, 2 * j); }, h));
  }
  return Weight1D::from_moments(label, h, std::move(moments));
}

/// A random multi-index with |alpha| <= degree.
inline std::vector<int> random_monomial(std::mt19937_64& rng, int d, int degree) {
  std::uniform_int_distribution<int> total(0, degree);
  std::uniform_int_distribution<int> coord(0, d - 1);
  std::vector<int> alpha(static_cast<std::size_t>(d), 0);
  const int t = total(rng);
  for (int s = 0; s < t; ++s) ++alpha[static_cast<std::size_t>(coord(rng))];
  return alpha;
}

inline double monomial(std::span<const double> x, std::span<const int> alpha) {
  double v = 1.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    for (int p = 0; p < alpha[j]; ++p) v *= x[j];
  }
  return v;
}

/// A sparse random polynomial: coefficients paired with multi-indices.
struct Polynomial {
  std::vector<double> coefficients;
  std::vector<std::vector<int>> terms;

  double operator()(std::span<const double> x) const {
    double v = 0.0;
    for (std::size_t t = 0; t < terms.size(); ++t) v += coefficients[t] * monomial(x, terms[t]);
    return v;
  }
};

inline Polynomial random_polynomial(std::mt19937_64& rng, int d, int degree, int terms = 12) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  Polynomial p;
  for (int t = 0; t < terms; ++t) {
    p.coefficients.push_back(coef(rng));
    p.terms.push_back(random_monomial(rng, d, degree));
  }
  return p;
}

inline double apply(const CubatureFormula& rule, const std::function<double(std::span<const double>)>& f) {
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) sum += rule.weights[i] * f(rule.points[i]);
  return sum;
}

/// True if the terms a_i x_i^alpha form a multiset closed under negation,
/// so that their exact sum is zero whatever the summation order.
inline bool odd_terms_cancel(const CubatureFormula& rule, std::span<const int> alpha) {
  std::vector<double> terms;
  terms.reserve(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) terms.push_back(rule.weights[i] * monomial(rule.points[i], alpha));
  std::sort(terms.begin(), terms.end());
  for (std::size_t i = 0, j = terms.size(); i < j--; ++i) {
    if (terms[i] != -terms[j]) return false;
  }
  return true;
}

/// Every odd multi-index with |alpha| <= degree, up to `limit` of them.
inline std::vector<std::vector<int>> odd_monomials(int d, int degree, std::size_t limit = 400) {
  std::vector<std::vector<int>> out;
  std::vector<int> alpha(static_cast<std::size_t>(d), 0);
  std::function<void(int, int)> rec = [&](int j, int left) {
    if (out.size() >= limit) return;
    if (j == d) {
      int total = 0;
      for (int a : alpha) total += a;
      if (total % 2 == 1) out.push_back(alpha);
      return;
    }
    for (int a = 0; a <= left; ++a) {
      alpha[static_cast<std::size_t>(j)] = a;
      rec(j + 1, left - a);
    }
    alpha[static_cast<std::size_t>(j)] = 0;
  };
  rec(0, degree);
  return out;
}

}  // namespace symcube::testing
