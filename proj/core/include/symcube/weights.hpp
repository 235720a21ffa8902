#pragma once

#include <limits>
#include <span>
#include <string>
#include <vector>

namespace symcube {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// A symmetric one-dimensional weight function, known only through its even
/// moments. Odd moments vanish by symmetry.
///
/// Two weights are built in (Lebesgue on [-1, 1] and exp(-x^2) on the real
/// line); anything else is supplied as a finite table of even moments.
/// A weight can be rescaled: `scaled(s)` represents y -> rho(s * y) on
/// [-h/s, h/s], whose moments are s^{-(p+1)} times the original ones.
class Weight1D {
 public:
  static Weight1D lebesgue();
  static Weight1D gaussian();
  /// `even_moments[j]` is the moment of order 2j. Validates positivity and
  /// Cauchy-Schwarz consistency of the table.
  static Weight1D from_moments(std::string label, double half_width,
                               std::vector<double> even_moments);

  const std::string& label() const { return label_; }
  double half_width() const { return half_width_ / scale_; }
  bool bounded() const { return half_width_ < kInfinity; }

  /// Integral of x^order against the weight. Odd orders return exactly 0.
  /// Throws InsufficientMoments past the end of a custom table.
  double moment(int order) const;
  /// Largest order this weight can answer (INT_MAX for built-ins).
  int max_order() const;

  /// Moments normalized by the total mass: m(p) / m(0).
  double normalized_moment(int order) const { return moment(order) / moment(0); }

  Weight1D scaled(double factor) const;
  double scale() const { return scale_; }

  bool is_builtin() const { return kind_ != Kind::kTable; }
  bool is_lebesgue() const { return kind_ == Kind::kLebesgue && scale_ == 1.0; }
  bool is_gaussian() const { return kind_ == Kind::kGaussian && scale_ == 1.0; }
  /// Raw even-moment table of a custom weight (unscaled).
  const std::vector<double>& table() const { return table_; }

  friend bool operator==(const Weight1D& a, const Weight1D& b) {
    return a.kind_ == b.kind_ && a.scale_ == b.scale_ && a.half_width_ == b.half_width_ &&
           a.table_ == b.table_;
  }

 private:
  enum class Kind { kLebesgue, kGaussian, kTable };

  Weight1D(Kind kind, std::string label, double half_width)
      : kind_(kind), label_(std::move(label)), half_width_(half_width) {}

  double unscaled_moment(int order) const;

  Kind kind_;
  std::string label_;
  double half_width_;  // unscaled
  double scale_ = 1.0;
  std::vector<double> table_;
};

/// rho(x) = rho_1(x_1) * ... * rho_d(x_d) on a box of symmetric intervals.
class ProductWeight {
 public:
  ProductWeight(std::size_t dim, const Weight1D& factor);
  explicit ProductWeight(std::vector<Weight1D> factors);

  std::size_t dim() const { return factors_.size(); }
  const Weight1D& factor(std::size_t j) const { return factors_[j]; }
  const std::vector<Weight1D>& factors() const { return factors_; }
  bool fully_symmetric() const;

  /// Product of the one-dimensional moments; 0 if any exponent is odd.
  double moment(std::span<const int> alpha) const;
  double total_mass() const;

  friend bool operator==(const ProductWeight& a, const ProductWeight& b) {
    return a.factors_ == b.factors_;
  }

 private:
  std::vector<Weight1D> factors_;
};

/// A symmetric quadrature rule; knots ascending, knots = -reverse(knots).
struct Rule1D {
  std::vector<double> knots;
  std::vector<double> weights;
  int exact_degree = -1;

  double apply_monomial(int power) const;
};

/// Weights of the interpolatory rule on a symmetric knot set, from the
/// even-moment equations on the nonnegative radii. The reported degree is
/// the verified one, capped at 2n+1 or by the available moments.
Rule1D interpolatory_rule(const Weight1D& w, std::span<const double> knots);

/// The 3-point Gauss rule {-a, 0, a}, a = sqrt(m4 / m2), in closed form.
Rule1D gauss3(const Weight1D& w);

/// Nested symmetric knot sets X^1 c X^2 c ... with their interpolatory rules.
///
/// Knots are stored in insertion order, so level i uses the first n_i of them
/// and every grid point can be keyed by per-coordinate knot indices.
class KnotLadder {
 public:
  /// `knots` in insertion order (0 first, then symmetric pairs -r, r);
  /// `cardinalities[i-1]` = n_i. Validates nesting, n_i <= 2i-1, symmetry,
  /// domain membership and the degree requirement m_i >= 2i-1.
  KnotLadder(Weight1D weight, std::vector<double> knots, std::vector<int> cardinalities);

  int depth() const { return static_cast<int>(cardinalities_.size()); }
  int cardinality(int level) const { return cardinalities_.at(level - 1); }
  std::vector<int> cardinalities() const { return cardinalities_; }

  /// Knots of level `level` in insertion order.
  std::span<const double> knots(int level) const;
  /// Weights of the level rule, aligned with `knots(level)`.
  std::span<const double> level_weights(int level) const;
  /// The level rule with ascending knots.
  const Rule1D& rule(int level) const { return rules_.at(level - 1); }
  /// The level set X^i, ascending.
  std::vector<double> level_set(int level) const { return rule(level).knots; }

  double knot(std::size_t index) const { return knots_[index]; }
  const Weight1D& weight() const { return weight_; }

 private:
  Weight1D weight_;
  std::vector<double> knots_;
  std::vector<int> cardinalities_;
  std::vector<Rule1D> rules_;
  std::vector<std::vector<double>> aligned_weights_;
};

/// n_i = 2i-1 with X^1 = {0}, X^2 = {-c, 0, c}. Later levels add one pair
/// each: radius c*i/2 on unbounded domains, otherwise equidistant radii in
/// (c, outer] where outer defaults to the half width.
KnotLadder default_ladder(const Weight1D& w, int max_level, double level2_radius,
                          double outer_radius = 0.0);

/// n_2 = n_3 = 3 with X^2 = X^3 the Gauss knots; n_i = 2i-1 otherwise.
KnotLadder ladder_variant_n3(const Weight1D& w, int max_level);

}  // namespace symcube
