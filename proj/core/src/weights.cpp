#include "symcube/weights.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "symcube/error.hpp"

namespace symcube {

namespace {

constexpr double kDegreeTol = 1e-12;

/// Relative agreement of a rule moment with the oracle.
bool moment_matches(double rule_value, double target) {
  return std::abs(rule_value - target) <= kDegreeTol * std::abs(target);
}

/// Largest odd degree d such that the rule reproduces every even moment of
/// order < d. Stops at the first mismatch, at 2n+1, or at the end of the
/// weight's moment table.
int verified_degree(const Weight1D& w, const Rule1D& rule) {
  const int cap = 2 * static_cast<int>(rule.knots.size());
  int degree = -1;
  for (int p = 0; p <= cap; p += 2) {
    if (p > w.max_order()) break;
    if (!moment_matches(rule.apply_monomial(p), w.moment(p))) break;
    degree = p + 1;
  }
  return degree;
}

void check_symmetric(std::span<const double> knots) {
  const std::size_t n = knots.size();
  double scale = 1.0;
  for (double x : knots) scale = std::max(scale, std::abs(x));
  for (std::size_t i = 0; i < n; ++i) {
    if (i + 1 < n && !(knots[i] < knots[i + 1])) {
      throw Error(ErrorCode::kDegenerateKnots, "degenerate knot set: knots must be distinct");
    }
    if (std::abs(knots[i] + knots[n - 1 - i]) > 1e-13 * scale) {
      throw Error(ErrorCode::kInvalidArgument, "knot set is not symmetric about 0");
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Weight1D

Weight1D Weight1D::lebesgue() { return Weight1D(Kind::kLebesgue, "lebesgue", 1.0); }

Weight1D Weight1D::gaussian() { return Weight1D(Kind::kGaussian, "gaussian", kInfinity); }

Weight1D Weight1D::from_moments(std::string label, double half_width,
                                std::vector<double> even_moments) {
  if (even_moments.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "moment table is empty");
  }
  if (!(half_width > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "half width must be positive");
  }
  for (double m : even_moments) {
    if (!std::isfinite(m) || !(m > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "even moments must be finite and positive");
    }
  }
  // m(2a) m(2b) >= m(a+b)^2 whenever a+b is even.
  const std::size_t count = even_moments.size();
  for (std::size_t a = 0; a < count; ++a) {
    for (std::size_t b = a; b < count; ++b) {
      if ((a + b) % 2 != 0) continue;
      const double mid = even_moments[(a + b) / 2];
      if (even_moments[a] * even_moments[b] < mid * mid * (1.0 - 1e-12)) {
        throw Error(ErrorCode::kInvalidArgument,
                    "moment table violates Cauchy-Schwarz at orders " + std::to_string(2 * a) +
                        ", " + std::to_string(2 * b));
      }
    }
  }
  Weight1D w(Kind::kTable, std::move(label), half_width);
  w.table_ = std::move(even_moments);
  return w;
}

int Weight1D::max_order() const {
  if (kind_ != Kind::kTable) return INT_MAX;
  return 2 * static_cast<int>(table_.size()) - 1;
}

double Weight1D::unscaled_moment(int order) const {
  switch (kind_) {
    case Kind::kLebesgue:
      return 2.0 / (order + 1);
    case Kind::kGaussian: {
      // Gamma((p+1)/2) by the recurrence m(p) = m(p-2) (p-1)/2.
      double m = std::sqrt(std::numbers::pi);
      for (int p = 2; p <= order; p += 2) m *= 0.5 * (p - 1);
      return m;
    }
    case Kind::kTable:
      if (order / 2 >= static_cast<int>(table_.size())) throw InsufficientMoments(order);
      return table_[order / 2];
  }
  throw Error(ErrorCode::kInternal, "unknown weight kind");
}

double Weight1D::moment(int order) const {
  if (order < 0) throw Error(ErrorCode::kInvalidArgument, "moment order must be nonnegative");
  if (order % 2 != 0) return 0.0;
  const double m = unscaled_moment(order);
  return scale_ == 1.0 ? m : m * std::pow(scale_, -(order + 1));
}

Weight1D Weight1D::scaled(double factor) const {
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    throw Error(ErrorCode::kInvalidArgument, "scale factor must be positive and finite");
  }
  Weight1D out = *this;
  out.scale_ *= factor;
  return out;
}

// ---------------------------------------------------------------------------
// ProductWeight

ProductWeight::ProductWeight(std::size_t dim, const Weight1D& factor)
    : factors_(dim, factor) {
  if (dim == 0) throw Error(ErrorCode::kInvalidArgument, "dimension must be positive");
}

ProductWeight::ProductWeight(std::vector<Weight1D> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) throw Error(ErrorCode::kInvalidArgument, "dimension must be positive");
}

bool ProductWeight::fully_symmetric() const {
  return std::all_of(factors_.begin(), factors_.end(),
                     [&](const Weight1D& w) { return w == factors_.front(); });
}

double ProductWeight::moment(std::span<const int> alpha) const {
  if (alpha.size() != factors_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "multi-index dimension mismatch");
  }
  for (int a : alpha) {
    if (a % 2 != 0) return 0.0;
  }
  double value = 1.0;
  for (std::size_t j = 0; j < alpha.size(); ++j) value *= factors_[j].moment(alpha[j]);
  return value;
}

double ProductWeight::total_mass() const {
  double value = 1.0;
  for (const auto& w : factors_) value *= w.moment(0);
  return value;
}

// ---------------------------------------------------------------------------
// Rules

double Rule1D::apply_monomial(int power) const {
  if (power % 2 != 0) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < knots.size(); ++i) sum += weights[i] * std::pow(knots[i], power);
  return sum;
}

Rule1D interpolatory_rule(const Weight1D& w, std::span<const double> knots) {
  if (knots.empty()) throw Error(ErrorCode::kInvalidArgument, "knot set is empty");
  check_symmetric(knots);
  const double half_width = w.half_width();
  for (double x : knots) {
    if (std::abs(x) > half_width * (1.0 + 1e-14)) {
      throw Error(ErrorCode::kDomain, "knot outside the weight's domain");
    }
  }

  const std::size_t n = knots.size();
  const bool has_origin = n % 2 == 1;
  // Nonnegative radii, ascending; the origin (if any) first.
  std::vector<double> radii;
  if (has_origin) radii.push_back(0.0);
  for (std::size_t i = (n + 1) / 2; i < n; ++i) {
    radii.push_back(0.5 * (knots[i] - knots[n - 1 - i]));
  }
  const std::size_t unknowns = radii.size();
  const double r_max = radii.back();

  std::vector<double> radius_weight(unknowns);
  if (r_max == 0.0) {
    radius_weight[0] = w.moment(0);
  } else {
    for (std::size_t j = 1; j < unknowns; ++j) {
      if (radii[j] - radii[j - 1] <= 1e-12 * r_max) {
        throw Error(ErrorCode::kDegenerateKnots, "degenerate knot set: duplicate radii");
      }
    }
    // Scaled even-power basis: sum_j mult_j (r_j / r_max)^{2i} c_j = m(2i) / r_max^{2i}.
    Eigen::MatrixXd a(unknowns, unknowns);
    Eigen::VectorXd b(unknowns);
    for (std::size_t i = 0; i < unknowns; ++i) {
      b(i) = w.moment(2 * static_cast<int>(i)) / std::pow(r_max, 2.0 * i);
      for (std::size_t j = 0; j < unknowns; ++j) {
        const double mult = radii[j] == 0.0 ? 1.0 : 2.0;
        a(i, j) = mult * std::pow(radii[j] / r_max, 2.0 * i);
      }
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    const Eigen::VectorXd c = lu.solve(b);
    const double residual = (a * c - b).cwiseAbs().maxCoeff();
    if (!c.allFinite() || residual > 1e-10 * b.cwiseAbs().maxCoeff()) {
      throw Error(ErrorCode::kDegenerateKnots, "degenerate knot set: singular moment system");
    }
    for (std::size_t j = 0; j < unknowns; ++j) radius_weight[j] = c(j);
  }

  Rule1D rule;
  rule.knots.assign(knots.begin(), knots.end());
  rule.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Upper-half position; for odd n the middle knot maps to the origin slot.
    const std::size_t mirror = std::max(i, n - 1 - i);
    rule.weights[i] = radius_weight[mirror - n / 2];
  }
  rule.exact_degree = verified_degree(w, rule);
  return rule;
}

Rule1D gauss3(const Weight1D& w) {
  const double m0 = w.moment(0);
  const double m2 = w.moment(2);
  const double m4 = w.moment(4);
  const double a = std::sqrt(m4 / m2);
  if (a > w.half_width() * (1.0 + 1e-15)) {
    throw Error(ErrorCode::kGaussKnotOutsideDomain, "Gauss knot outside domain");
  }
  Rule1D rule;
  rule.knots = {-a, 0.0, a};
  const double pair = m2 / (2.0 * a * a);
  rule.weights = {pair, m0 - m2 / (a * a), pair};
  rule.exact_degree = verified_degree(w, rule);
  return rule;
}

// ---------------------------------------------------------------------------
// KnotLadder

KnotLadder::KnotLadder(Weight1D weight, std::vector<double> knots, std::vector<int> cardinalities)
    : weight_(std::move(weight)), knots_(std::move(knots)), cardinalities_(std::move(cardinalities)) {
  if (cardinalities_.empty()) throw Error(ErrorCode::kInvalidArgument, "ladder needs a level");
  if (cardinalities_.front() != 1 || knots_.empty() || knots_.front() != 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "ladder level 1 must be {0}");
  }
  const double half_width = weight_.half_width();
  for (double x : knots_) {
    if (std::abs(x) > half_width * (1.0 + 1e-14)) {
      throw Error(ErrorCode::kDomain, "ladder knot outside the weight's domain");
    }
  }
  for (std::size_t i = 0; i < cardinalities_.size(); ++i) {
    const int level = static_cast<int>(i) + 1;
    const int n = cardinalities_[i];
    if (n > 2 * level - 1) {
      throw Error(ErrorCode::kInvalidArgument, "ladder cardinality exceeds 2i-1");
    }
    if (i > 0 && n < cardinalities_[i - 1]) {
      throw Error(ErrorCode::kInvalidArgument, "ladder cardinalities must be nondecreasing");
    }
    if (static_cast<std::size_t>(n) > knots_.size()) {
      throw Error(ErrorCode::kInvalidArgument, "ladder has fewer knots than its cardinalities");
    }
    std::vector<double> sorted(knots_.begin(), knots_.begin() + n);
    std::sort(sorted.begin(), sorted.end());
    Rule1D rule = interpolatory_rule(weight_, sorted);
    if (rule.exact_degree < 2 * level - 1) {
      if (2 * level - 2 > weight_.max_order()) throw InsufficientMoments(2 * level - 2);
      throw Error(ErrorCode::kDegenerateKnots,
                  "ladder level " + std::to_string(level) + " is not exact of degree " +
                      std::to_string(2 * level - 1));
    }
    std::vector<double> aligned(n);
    for (int k = 0; k < n; ++k) {
      const auto it = std::lower_bound(rule.knots.begin(), rule.knots.end(), knots_[k]);
      aligned[k] = rule.weights[static_cast<std::size_t>(it - rule.knots.begin())];
    }
    rules_.push_back(std::move(rule));
    aligned_weights_.push_back(std::move(aligned));
  }
}

std::span<const double> KnotLadder::knots(int level) const {
  return {knots_.data(), static_cast<std::size_t>(cardinality(level))};
}

std::span<const double> KnotLadder::level_weights(int level) const {
  return aligned_weights_.at(level - 1);
}

namespace {

void append_pair(std::vector<double>& knots, double r) {
  knots.push_back(-r);
  knots.push_back(r);
}

}  // namespace

KnotLadder default_ladder(const Weight1D& w, int max_level, double level2_radius,
                          double outer_radius) {
  if (max_level < 1) throw Error(ErrorCode::kInvalidArgument, "max_level must be >= 1");
  std::vector<double> knots{0.0};
  std::vector<int> cards;
  for (int i = 1; i <= max_level; ++i) cards.push_back(2 * i - 1);
  if (max_level >= 2) {
    if (!(level2_radius > 0.0) || level2_radius > w.half_width()) {
      throw Error(ErrorCode::kDomain, "level-2 radius must lie in (0, half_width]");
    }
    append_pair(knots, level2_radius);
  }
  const double bound = outer_radius > 0.0 ? std::min(outer_radius, w.half_width()) : w.half_width();
  for (int i = 3; i <= max_level; ++i) {
    if (bound == kInfinity) {
      append_pair(knots, level2_radius * i / 2.0);
    } else {
      if (!(bound > level2_radius)) {
        throw Error(ErrorCode::kDomain, "ladder radii cannot fit between level-2 radius and domain");
      }
      append_pair(knots, level2_radius + (bound - level2_radius) * (i - 2) / (max_level - 2));
    }
  }
  return KnotLadder(w, std::move(knots), std::move(cards));
}

KnotLadder ladder_variant_n3(const Weight1D& w, int max_level) {
  if (max_level < 1) throw Error(ErrorCode::kInvalidArgument, "max_level must be >= 1");
  std::vector<double> knots{0.0};
  std::vector<int> cards{1};
  if (max_level >= 2) {
    const double a = gauss3(w).knots.back();
    append_pair(knots, a);
    const int extra_pairs = std::max(0, max_level - 2);
    const double hw = w.half_width();
    if (extra_pairs > 0 && hw != kInfinity && !(hw > a)) {
      throw Error(ErrorCode::kDomain, "no room for ladder radii beyond the Gauss knot");
    }
    for (int j = 1; j <= extra_pairs; ++j) {
      append_pair(knots, hw == kInfinity ? a * (j + 2) / 2.0 : a + (hw - a) * j / extra_pairs);
    }
    for (int i = 2; i <= max_level; ++i) cards.push_back(i == 3 ? 3 : 2 * i - 1);
  }
  return KnotLadder(w, std::move(knots), std::move(cards));
}

}  // namespace symcube
