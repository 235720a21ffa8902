#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "support.hpp"
#include "symcube/compose.hpp"
#include "symcube/error.hpp"
#include "symcube/smolyak.hpp"
#include "symcube/verify.hpp"

using namespace symcube;
using doctest::Approx;

TEST_SUITE("exactness") {
  TEST_CASE("pass at the construction degree, fail two degrees higher") {
    const CubatureFormula rule = build_deg5(Weight1D::lebesgue(), 10);
    const ExactnessReport pass = exactness(rule, 5);
    CHECK(pass.passed);
    CHECK(pass.monomials == 3003);
    CHECK(pass.tolerance == 1e-9);
    CHECK(pass.evaluated < pass.monomials);

    const ExactnessReport fail = exactness(rule, 7);
    CHECK_FALSE(fail.passed);
    CHECK(fail.tolerance == 1e-8);
    int degree = 0;
    for (int a : fail.worst) degree += a;
    CHECK(degree >= 6);
    CHECK(fail.max_rel_error > fail.tolerance);
  }

  TEST_CASE("default tolerances") {
    CHECK(default_tolerance(3) == 1e-9);
    CHECK(default_tolerance(5) == 1e-9);
    CHECK(default_tolerance(7) == 1e-8);
  }

  TEST_CASE("odd monomials cancel exactly on every constructed rule") {
    std::vector<CubatureFormula> rules = {
        build_deg5(Weight1D::lebesgue(), 6),
        build_deg5(Weight1D::gaussian(), 7),
        build_deg7(Weight1D::gaussian(), 6),
        mysovskikh_deg5(6, SimplexFrame(6, false)),
        mysovskikh_deg7(6, SimplexFrame(6)),
        product_deg7_sphere(6),
        projected_smolyak_sphere(6, 2, 1.0),
        mdk_replacement(6, 2),
        transfer(build_deg5(Weight1D::lebesgue(), 6), ProductWeight(6, Weight1D::gaussian()), 2),
    };
    std::mt19937_64 rng(8);
    rules.push_back(build_general(ProductWeight({testing::random_density_weight(rng, "a"),
                                                 testing::random_density_weight(rng, "b"), Weight1D::gaussian(),
                                                 Weight1D::lebesgue(), Weight1D::lebesgue(),
                                                 testing::random_density_weight(rng, "c")}),
                                  2));
    for (const auto& rule : rules) {
      CHECK(is_centrally_symmetric(rule));
      for (const auto& alpha : testing::odd_monomials(static_cast<int>(rule.dim()), 7)) {
        REQUIRE(testing::odd_terms_cancel(rule, alpha));
      }
    }
  }

  TEST_CASE("fast path and full sweep agree on the pass flag") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> eps(-1e-6, 1e-6);
    std::bernoulli_distribution perturb(0.5);
    const CubatureFormula base = build_deg5(Weight1D::gaussian(), 5);
    for (int t = 0; t < 20; ++t) {
      CubatureFormula rule = base;
      if (perturb(rng)) {
        // Perturb a point and its mirror by the same factor, keeping symmetry.
        const std::size_t i = std::uniform_int_distribution<std::size_t>(0, rule.size() - 1)(rng);
        const double f = 1.0 + eps(rng);
        for (std::size_t j = 0; j < rule.size(); ++j) {
          bool mirror = true;
          for (std::size_t c = 0; c < rule.dim(); ++c) mirror = mirror && rule.points[j][c] == -rule.points[i][c];
          if (mirror || j == i) rule.weights[j] *= f;
        }
      }
      const bool fast = exactness(rule, 5).passed;
      ExactnessOptions full;
      full.use_symmetry = false;
      const ExactnessReport slow = exactness(rule, 5, full);
      CHECK(fast == slow.passed);
      CHECK(slow.evaluated == slow.monomials);
    }
  }

  TEST_CASE("sign-symmetric rules skip odd exponents") {
    const KnotLadder ladder = default_ladder(Weight1D::gaussian(), 3, 1.0);
    const CubatureFormula rule = combine(SmolyakPlan(6, 4, ladder));
    const ExactnessReport r = exactness(rule, 5);
    CHECK(r.symmetry == "sign");
    CHECK(r.evaluated == 15);  // |alpha| in {0, 2, 4} with every exponent even: 1 + 4 + 10
    CHECK(r.passed);
  }

  TEST_CASE("targets and errors") {
    CubatureFormula rule;
    rule.points = PointSet(2);
    rule.add(std::vector<double>{0.0, 0.0}, 4.0);
    CHECK_THROWS_AS(exactness(rule, 1), Error);
    rule.target = ProductTarget{ProductWeight(2, Weight1D::lebesgue())};
    CHECK(exactness(rule, 1).passed);
    CHECK_FALSE(exactness(rule, 2).passed);
    CHECK_THROWS_AS(exactness(rule, ProductTarget{ProductWeight(3, Weight1D::lebesgue())}, 1), Error);
    CHECK_THROWS_AS(exactness(rule, -1), Error);

    const std::vector<int> zero = {0, 0, 0, 0};
    CHECK(target_integral(MdkTarget{2}, zero) == 24.0);
  }
}

TEST_SUITE("bounds") {
  TEST_CASE("Moller bound values") {
    CHECK(moller_bound(5, 10) == 111);
    CHECK(moller_bound(7, 20) == 3120);
    CHECK(moller_bound(7, 100) == 343600);
    CHECK(moller_bound(5, 25) == 651);
    CHECK(moller_bound(7, 10) == 460);
    CHECK(moller_bound(5, 1) == 3);
    CHECK(moller_bound_exact(7, 200) == BigInt(2707200));
    CHECK_THROWS_AS(moller_bound(6, 10), Error);
  }

  TEST_CASE("simple forms agree for d <= 200") {
    for (int d = 1; d <= 200; ++d) {
      REQUIRE(moller_simple(2, d) == moller_bound(5, d));
      REQUIRE(moller_simple(3, d) == moller_bound(7, d));
    }
  }

  TEST_CASE("even/odd polynomial dimensions") {
    CHECK(dim_even_odd(2, 2) == std::pair<std::int64_t, std::int64_t>{4, 2});
    CHECK(dim_even_odd(0, 5) == std::pair<std::int64_t, std::int64_t>{1, 0});
    CHECK(dim_even_odd(3, 10) == std::pair<std::int64_t, std::int64_t>{56, 230});
    for (int k = 1; k <= 6; ++k) {
      for (int d = 1; d <= 30; ++d) {
        const auto [even, odd] = dim_even_odd(k, d);
        REQUIRE(even + odd == binomial(k + d, d));
        const std::int64_t expect = k % 2 == 1 ? 2 * odd : 2 * even - 1;
        REQUIRE(expect == moller_bound(2 * k + 1, d));
      }
    }
  }

  TEST_CASE("bound never exceeds a constructed count") {
    for (int d = 4; d <= 10; ++d) {
      CHECK(static_cast<std::int64_t>(build_deg5(Weight1D::gaussian(), d).size()) >= moller_bound(5, d));
    }
    for (int d = 6; d <= 9; ++d) {
      CHECK(static_cast<std::int64_t>(build_deg7(Weight1D::lebesgue(), d).size()) >= moller_bound(7, d));
    }
  }
}

TEST_SUITE("condition") {
  TEST_CASE("positive constant-exact rules have sigma = 1") {
    const CubatureFormula s = mysovskikh_deg5(5, SimplexFrame(5));
    CHECK(condition_number(s) == Approx(1.0).epsilon(1e-12));
    const KnotLadder ladder = default_ladder(Weight1D::gaussian(), 2, 1.0);
    const CubatureFormula a = combine(SmolyakPlan(2, 1, ladder));
    CHECK(condition_number(a, ProductWeight(1, Weight1D::gaussian())) == Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("sigma >= 1 for every degree-5 build up to d = 25") {
    for (int d = 4; d <= 25; ++d) {
      CHECK(condition_number(build_deg5(Weight1D::lebesgue(), d)) >= 1.0 - 1e-12);
    }
  }
}

TEST_SUITE("asymptotics") {
  TEST_CASE("ratios stay within the envelope") {
    const auto rows = order_asymptotics(2, {10, 20, 50, 100});
    REQUIRE(rows.size() == 4);
    CHECK(rows[3].moller == 10101);
    CHECK(rows[3].moller_ratio == Approx(1.0101));
    for (const auto& r : rows) CHECK(r.in_envelope);
    CHECK(order_asymptotics(3, {30, 60}).back().in_envelope);
    CHECK_THROWS_AS(order_asymptotics(0, {10}), Error);
  }
}
