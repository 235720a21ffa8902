#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "support.hpp"
#include "symcube/combinatorics.hpp"
#include "symcube/error.hpp"
#include "symcube/smolyak.hpp"
#include "symcube/sphere.hpp"
#include "symcube/verify.hpp"

using namespace symcube;
using doctest::Approx;

namespace {

const double kPi = std::acos(-1.0);

double norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
  return s;
}

}  // namespace

TEST_SUITE("simplex") {
  TEST_CASE("regular simplex frames") {
    for (int d = 2; d <= 25; ++d) {
      for (bool aligned : {true, false}) {
        const SimplexFrame f(d, aligned);
        std::vector<double> sum(static_cast<std::size_t>(d), 0.0);
        for (int i = 0; i <= d; ++i) {
          CHECK(std::abs(norm(f.vertex(i)) - 1.0) <= 1e-14);
          for (int j = 0; j < i; ++j) CHECK(std::abs(dot(f.vertex(i), f.vertex(j)) + 1.0 / d) <= 1e-14);
          for (int c = 0; c < d; ++c) sum[static_cast<std::size_t>(c)] += f.vertex(i)[static_cast<std::size_t>(c)];
        }
        for (double s : sum) CHECK(std::abs(s) <= 1e-13);
        if (aligned) {
          CHECK(f.vertex(0)[0] == 1.0);
          for (int c = 1; c < d; ++c) CHECK(f.vertex(0)[static_cast<std::size_t>(c)] == 0.0);
        }
      }
    }
  }
}

TEST_SUITE("point families") {
  TEST_CASE("M families") {
    CHECK(m_points(3, 1, 1.0).size() == 6);
    CHECK(m_points(10, 2, 1.0).size() == 180);
    CHECK(m_points(4, 4, 1.0).size() == 16);
    const PointSet m = m_points(5, 2, 0.5);
    for (std::size_t i = 0; i < m.size(); ++i) CHECK(norm(m[i]) == Approx(0.5 * std::sqrt(2.0)));
  }

  TEST_CASE("simplex face and edge families") {
    const SimplexFrame f4(4);
    CHECK(s_points(f4, 1, 1.0).size() == 10);
    const PointSet s2 = s_points(f4, 2, 1.0);
    CHECK(s2.size() == 20);
    for (std::size_t i = 0; i < s2.size(); ++i) CHECK(norm(s2[i]) == Approx(1.0).epsilon(1e-14));
    for (int d = 3; d <= 10; ++d) {
      const SimplexFrame f(d);
      CHECK(s_points(f, 1, 1.0).size() + s_points(f, 2, 1.0).size() ==
            static_cast<std::size_t>((d + 1) * (d + 2)));
    }
    const SimplexFrame f2(2);
    const PointSet h = h_points(f2, 1.0);
    CHECK(h.size() == 12);
    for (std::size_t i = 0; i < h.size(); ++i) {
      CHECK(norm(h[i]) == Approx(1.0).epsilon(1e-12));
      for (std::size_t j = 0; j < i; ++j) CHECK(norm(std::vector<double>{h[i][0] - h[j][0], h[i][1] - h[j][1]}) > 1e-6);
    }
  }

  TEST_CASE("M family sums") {
    const std::vector<int> zero = {0, 0, 0, 0, 0};
    CHECK(m_family_sum(5, 2, 1.0, zero) == Approx(4.0 * 10));
    const std::vector<int> a = {2, 2, 0, 0, 0};
    CHECK(m_family_sum(5, 2, 2.0, a) == Approx(4.0 * 16));
    const std::vector<int> odd = {1, 2, 0, 0, 0};
    CHECK(m_family_sum(5, 2, 1.0, odd) == 0.0);
  }
}

TEST_SUITE("sphere integrals") {
  TEST_CASE("monomial integrals") {
    const std::vector<int> zero3 = {0, 0, 0};
    CHECK(sphere_monomial_integral(zero3) == Approx(4 * kPi).epsilon(1e-14));
    CHECK(surface_area(3) == Approx(4 * kPi).epsilon(1e-14));
    const std::vector<int> odd = {1, 0, 0, 0};
    CHECK(sphere_monomial_integral(odd) == 0.0);
    const std::vector<int> x2 = {2, 0, 0, 0};
    CHECK(sphere_monomial_integral(x2) == Approx(kPi * kPi / 2).epsilon(1e-14));
    CHECK(surface_area(4) / 4 == Approx(kPi * kPi / 2).epsilon(1e-14));
    // radius R scales by R^{d-1+|alpha|}
    CHECK(sphere_monomial_integral(x2, 2.0) == Approx(kPi * kPi / 2 * std::pow(2.0, 5)).epsilon(1e-14));
  }
}

TEST_SUITE("sphere rules") {
  TEST_CASE("simplex degree-5 rule") {
    for (int d = 4; d <= 10; ++d) {
      const CubatureFormula r = mysovskikh_deg5(d, SimplexFrame(d));
      const auto v = mysovskikh_deg5_coefficients(d);
      if (d == 7) {
        CHECK(v[0] == 0.0);
        CHECK(r.size() == static_cast<std::size_t>((d + 1) * d));
      } else {
        CHECK(r.size() == static_cast<std::size_t>((d + 1) * (d + 2)));
      }
      CHECK(exactness(r, 5, {1e-10}).passed);
      CHECK(sphere_radius(r) == Approx(1.0));
    }
    const CubatureFormula r4 = mysovskikh_deg5(4, SimplexFrame(4));
    const std::vector<int> x4 = {4, 0, 0, 0};
    CHECK(r4.apply_monomial(x4) == Approx(sphere_monomial_integral(x4)).epsilon(1e-12));
    CHECK_THROWS_AS(mysovskikh_deg5(3, SimplexFrame(3)), Error);
  }

  TEST_CASE("product degree-5 rule") {
    CHECK(product_deg5_coefficients(4)[0] == 0.0);
    CHECK(product_deg5_sphere(10).size() == 200);
    CHECK(product_deg5_sphere(4).size() == 24);
    const CubatureFormula r5 = product_deg5_sphere(5);
    const std::vector<int> a = {2, 2, 0, 0, 0};
    CHECK(r5.apply_monomial(a) == Approx(sphere_monomial_integral(a)).epsilon(1e-12));
    for (int d = 3; d <= 10; ++d) CHECK(exactness(product_deg5_sphere(d), 5, {1e-10}).passed);
  }

  TEST_CASE("product degree-7 rule") {
    const CubatureFormula r6 = product_deg7_sphere(6);
    CHECK(static_cast<std::int64_t>(r6.size()) == count_projected(3, 6));
    const std::vector<int> a = {4, 2, 0, 0, 0, 0};
    CHECK(r6.apply_monomial(a) == Approx(sphere_monomial_integral(a)).epsilon(1e-11));
    for (const auto& alpha : testing::odd_monomials(6, 7)) CHECK(testing::odd_terms_cancel(r6, alpha));
    for (int d = 6; d <= 10; ++d) CHECK(exactness(product_deg7_sphere(d), 7, {1e-9}).passed);
  }

  TEST_CASE("simplex degree-7 rule") {
    for (int d = 6; d <= 10; ++d) {
      const CubatureFormula r = mysovskikh_deg7(d, SimplexFrame(d));
      CHECK(static_cast<int>(r.size()) == (d * d * d + 9 * d * d + 14 * d + 6) / 3);
      CHECK(exactness(r, 7, {1e-9}).passed);
      const std::vector<int> zero(static_cast<std::size_t>(d), 0);
      CHECK(r.apply_monomial(zero) == Approx(surface_area(d)).epsilon(1e-12));
    }
  }

  TEST_CASE("rules on other radii") {
    const CubatureFormula r = mysovskikh_deg5(6, SimplexFrame(6, false), 1.7);
    CHECK(sphere_radius(r) == Approx(1.7));
    CHECK(exactness(r, 5, {1e-10}).passed);
  }
}

TEST_SUITE("projection") {
  TEST_CASE("projection constant") {
    CHECK(projection_constant(1.0, 2, 0) == Approx(0.5).epsilon(1e-15));
    CHECK(projection_constant(1.0, 3, 1) == Approx(std::tgamma(2.5) / 2).epsilon(1e-14));
  }

  TEST_CASE("projected Smolyak rule") {
    for (int d = 5; d <= 8; ++d) {
      const CubatureFormula r = projected_smolyak_sphere(d, 2, 1.0);
      CHECK(r.size() == static_cast<std::size_t>(2 * d * d));
      CHECK(exactness(r, 5, {1e-10}).passed);
    }
    CHECK(projected_smolyak_sphere(4, 2, 1.0).size() == 24);
    const CubatureFormula r = projected_smolyak_sphere(5, 2, std::sqrt(2.0));
    const std::vector<int> a = {2, 2, 0, 0, 0};
    CHECK(r.apply_monomial(a) == Approx(sphere_monomial_integral(a, std::sqrt(2.0))).epsilon(1e-10));
    const CubatureFormula r3 = projected_smolyak_sphere(6, 3, 1.0);
    CHECK(static_cast<std::int64_t>(r3.size()) == count_projected(3, 6));
    CHECK(exactness(r3, 7, {1e-9}).passed);
  }

  TEST_CASE("projection requires central symmetry") {
    CubatureFormula lopsided;
    lopsided.points = PointSet(2);
    lopsided.add(std::vector<double>{1.0, 0.0}, 1.0);
    lopsided.target = ProductTarget{ProductWeight(2, Weight1D::gaussian())};
    CHECK_THROWS_AS(project_to_sphere(lopsided, 1.0, 2), Error);
  }
}

TEST_SUITE("mdk") {
  TEST_CASE("splitting out M_{d,k}") {
    const MdkSplit s = projected_mdk_split(10, 2);
    CHECK(s.w > 0.0);
    CHECK(s.remainder.size() <= 20);
    const MdkSplit s3 = projected_mdk_split(6, 3);
    CHECK(s3.w > 0.0);
  }

  TEST_CASE("split rejects rules without a full F(d, k)") {
    // On radius sqrt(2) the second family of this rule is exactly F(5, 2).
    const CubatureFormula full = product_deg5_sphere(5, std::sqrt(2.0));
    const MdkSplit ok = split_mdk(full, 2);
    CHECK(ok.remainder.size() + 40 == full.size());

    CubatureFormula missing{PointSet(5), {}, full.degree, full.target, full.provenance};
    bool dropped = false;
    for (std::size_t i = 0; i < full.size(); ++i) {
      int ones = 0;
      for (double v : full.points[i]) ones += std::abs(std::abs(v) - 1.0) <= 1e-12 ? 1 : 0;
      if (!dropped && ones == 2) {
        dropped = true;
        continue;
      }
      missing.add(full.points[i], full.weights[i]);
    }
    REQUIRE(dropped);
    CHECK_THROWS_AS(split_mdk(missing, 2), Error);
  }

  TEST_CASE("replacement formulas") {
    for (int d = 4; d <= 10; ++d) {
      const CubatureFormula r = mdk_replacement(d, 2);
      CHECK(static_cast<int>(r.size()) <= d * d + 5 * d + 2);
      const std::vector<int> zero(static_cast<std::size_t>(d), 0);
      CHECK(r.apply_monomial(zero) == Approx(4.0 * binomial(d, 2)).epsilon(1e-9));
      CHECK(exactness(r, 5, {1e-9}).passed);
      for (std::size_t i = 0; i < r.size(); ++i) CHECK(norm(r.points[i]) == Approx(std::sqrt(2.0)).epsilon(1e-13));
    }
    for (int d = 6; d <= 8; ++d) {
      const CubatureFormula r = mdk_replacement(d, 3);
      CHECK(static_cast<int>(r.size()) <= (d * d * d + 15 * d * d + 14 * d + 6) / 3);
      CHECK(exactness(r, 7, {1e-8}).passed);
    }
  }

  TEST_CASE("replacement agrees with direct M_{d,2} on random polynomials") {
    std::mt19937_64 rng(5);
    const int d = 8;
    const CubatureFormula r = mdk_replacement(d, 2);
    const PointSet f = m_points(d, 2, 1.0);
    for (int t = 0; t < 25; ++t) {
      const auto p = testing::random_polynomial(rng, d, 5);
      double direct = 0.0;
      double scale = 0.0;
      for (std::size_t i = 0; i < f.size(); ++i) {
        direct += p(f[i]);
        scale += std::abs(p(f[i]));
      }
      CHECK(std::abs(testing::apply(r, p) - direct) <= 1e-9 * scale);
    }
  }
}
