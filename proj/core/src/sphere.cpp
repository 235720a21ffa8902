#include "symcube/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "symcube/combinatorics.hpp"
#include "symcube/error.hpp"
#include "symcube/smolyak.hpp"
#include "symcube/weights.hpp"

namespace symcube {

namespace {

constexpr double kSplitTolerance = 1e-12;
constexpr double kUniformWeightSpread = 1e-10;
constexpr double kSolveResidual = 1e-10;

/// Calls `visit(subset)` for every k-subset of {0, ..., n-1} in lexicographic order.
void for_each_subset(int n, int k, const std::function<void(const std::vector<int>&)>& visit) {
  if (k < 0 || k > n) return;
  std::vector<int> subset(k);
  for (int i = 0; i < k; ++i) subset[i] = i;
  while (true) {
    visit(subset);
    int i = k - 1;
    while (i >= 0 && subset[i] == n - k + i) --i;
    if (i < 0) return;
    ++subset[i];
    for (int j = i + 1; j < k; ++j) subset[j] = subset[j - 1] + 1;
  }
}

double norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

/// Appends r x/|x| and then, after all points, the antipodes.
PointSet with_antipodes(const std::vector<std::vector<double>>& directions, int d, double r) {
  PointSet points(static_cast<std::size_t>(d));
  points.reserve(2 * directions.size());
  std::vector<double> y(d);
  for (int sign : {1, -1}) {
    for (const auto& x : directions) {
      const double scale = sign * r / norm(x);
      for (int j = 0; j < d; ++j) y[j] = scale * x[j];
      points.push_back(y);
    }
  }
  return points;
}

std::vector<int> class_monomial(int d, std::initializer_list<int> parts) {
  std::vector<int> alpha(d, 0);
  int j = 0;
  for (int p : parts) alpha[j++] = p;
  return alpha;
}

/// Even monomial classes up to degree 6 (one representative per partition);
/// for fully symmetric families, exactness on these is exactness to degree 7.
std::vector<std::vector<int>> degree7_classes(int d) {
  std::vector<std::vector<int>> classes = {class_monomial(d, {}), class_monomial(d, {2}),
                                           class_monomial(d, {4}), class_monomial(d, {6})};
  if (d >= 2) {
    classes.push_back(class_monomial(d, {2, 2}));
    classes.push_back(class_monomial(d, {4, 2}));
  }
  if (d >= 3) classes.push_back(class_monomial(d, {2, 2, 2}));
  return classes;
}

double family_sum(const PointSet& family, std::span<const int> alpha) {
  double sum = 0.0;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto x = family[i];
    double term = 1.0;
    for (std::size_t j = 0; j < alpha.size(); ++j) {
      for (int p = 0; p < alpha[j]; ++p) term *= x[j];
    }
    sum += term;
  }
  return sum;
}

void require_frame(const SimplexFrame& frame, int d) {
  if (frame.dim() != d) throw Error(ErrorCode::kInvalidArgument, "simplex frame dimension mismatch");
}

void require_dim(int d, int minimum, const char* what) {
  if (d < minimum) {
    throw Error(ErrorCode::kUnsupported, std::string(what) + " needs d >= " + std::to_string(minimum) +
                                             " (got d = " + std::to_string(d) + ")");
  }
}

CubatureFormula sphere_formula(int d, double radius, int degree, const std::string& construction) {
  if (!(radius > 0.0)) throw Error(ErrorCode::kInvalidArgument, "sphere radius must be positive");
  CubatureFormula rule;
  rule.points = PointSet(static_cast<std::size_t>(d));
  rule.degree = degree;
  rule.target = SphereTarget{radius};
  rule.provenance.construction = construction;
  rule.provenance.params = {{"d", d}, {"radius", radius}};
  return rule;
}

/// Adds `family` (given on the unit sphere) scaled to `radius` with the
/// unit-sphere coefficient `coefficient`.
void add_scaled_family(CubatureFormula& rule, const PointSet& family, double coefficient, double radius) {
  if (coefficient == 0.0) return;
  const int d = static_cast<int>(family.dim());
  PointSet scaled(family.dim());
  scaled.reserve(family.size());
  std::vector<double> y(d);
  for (std::size_t i = 0; i < family.size(); ++i) {
    for (int j = 0; j < d; ++j) y[j] = radius * family[i][j];
    scaled.push_back(y);
  }
  rule.add_family(scaled, coefficient * std::pow(radius, d - 1));
}

void finish(CubatureFormula& rule) {
  rule.provenance.raw_count = rule.size();
  rule = merge_knots(rule);
}

}  // namespace

// ---------------------------------------------------------------------------
// Simplex frame and point families

SimplexFrame::SimplexFrame(int d, bool aligned_first)
    : d_(d), aligned_(aligned_first), vertices_(static_cast<std::size_t>(d)) {
  if (d < 1) throw Error(ErrorCode::kInvalidArgument, "simplex dimension must be >= 1");
  // vertices of the regular simplex in R^m, built up from m = 1
  std::vector<std::vector<double>> current = {{1.0}, {-1.0}};
  for (int m = 2; m <= d; ++m) {
    std::vector<std::vector<double>> next;
    std::vector<double> first(m, 0.0);
    first[0] = 1.0;
    next.push_back(first);
    const double tail = std::sqrt(1.0 - 1.0 / (static_cast<double>(m) * m));
    for (const auto& u : current) {
      std::vector<double> v(m);
      v[0] = -1.0 / m;
      for (int j = 1; j < m; ++j) v[j] = tail * u[j - 1];
      next.push_back(std::move(v));
    }
    current = std::move(next);
  }
  if (!aligned_first && d > 1) {
    // Householder reflection taking e_1 to (1, ..., 1)/sqrt(d).
    std::vector<double> u(d, -1.0 / std::sqrt(static_cast<double>(d)));
    u[0] += 1.0;
    double uu = 0.0;
    for (double x : u) uu += x * x;
    for (auto& v : current) {
      double uv = 0.0;
      for (int j = 0; j < d; ++j) uv += u[j] * v[j];
      for (int j = 0; j < d; ++j) v[j] -= 2.0 * uv / uu * u[j];
    }
  }
  vertices_.reserve(current.size());
  for (const auto& v : current) vertices_.push_back(v);
}

PointSet m_points(int d, int k, double r) {
  if (k < 1 || k > d) {
    throw Error(ErrorCode::kInvalidArgument,
                "F(d,k) needs 1 <= k <= d (got d = " + std::to_string(d) + ", k = " + std::to_string(k) + ")");
  }
  PointSet points(static_cast<std::size_t>(d));
  points.reserve(static_cast<std::size_t>(binomial(d, k)) << k);
  std::vector<double> x(d, 0.0);
  for_each_subset(d, k, [&](const std::vector<int>& support) {
    for (unsigned mask = 0; mask < (1U << k); ++mask) {
      for (int b = 0; b < k; ++b) x[support[b]] = (mask >> b) & 1U ? -r : r;
      points.push_back(x);
    }
    for (int j : support) x[j] = 0.0;
  });
  return points;
}

PointSet s_points(const SimplexFrame& frame, int k, double r) {
  const int d = frame.dim();
  if (k < 1 || k > d) throw Error(ErrorCode::kInvalidArgument, "face sets need 1 <= k <= d");
  std::vector<std::vector<double>> centroids;
  for_each_subset(d + 1, k, [&](const std::vector<int>& face) {
    std::vector<double> c(d, 0.0);
    for (int i : face) {
      for (int j = 0; j < d; ++j) c[j] += frame.vertex(i)[j];
    }
    if (norm(c) < 1e-8) throw Error(ErrorCode::kInternal, "degenerate simplex face centroid");
    centroids.push_back(std::move(c));
  });
  return with_antipodes(centroids, d, r);
}

PointSet h_points(const SimplexFrame& frame, double r) {
  const int d = frame.dim();
  std::vector<std::vector<double>> directions;
  for (int i = 0; i <= d; ++i) {
    for (int j = 0; j <= d; ++j) {
      if (i == j) continue;
      std::vector<double> p(d);
      for (int m = 0; m < d; ++m) p[m] = 0.25 * frame.vertex(i)[m] + 0.75 * frame.vertex(j)[m];
      directions.push_back(std::move(p));
    }
  }
  return with_antipodes(directions, d, r);
}

double m_family_sum(int d, int k, double r, std::span<const int> alpha) {
  int support = 0;
  int total = 0;
  for (int a : alpha) {
    if (a % 2 != 0) return 0.0;
    if (a > 0) ++support;
    total += a;
  }
  if (support > k) return 0.0;
  return std::ldexp(static_cast<double>(binomial(d - support, k - support)), k) * std::pow(r, total);
}

// ---------------------------------------------------------------------------
// Sphere moments

double sphere_monomial_integral(std::span<const int> alpha, double radius) {
  const int d = static_cast<int>(alpha.size());
  if (d < 1) throw Error(ErrorCode::kInvalidArgument, "sphere dimension must be >= 1");
  double log_value = std::log(2.0);
  int total = 0;
  for (int a : alpha) {
    if (a < 0) throw Error(ErrorCode::kInvalidArgument, "negative exponent");
    if (a % 2 != 0) return 0.0;
    log_value += std::lgamma(a / 2.0 + 0.5);
    total += a;
  }
  log_value -= std::lgamma(d / 2.0 + total / 2.0);
  log_value += (d - 1 + total) * std::log(radius);
  return std::exp(log_value);
}

double surface_area(int d, double radius) {
  const std::vector<int> zero(static_cast<std::size_t>(d), 0);
  return sphere_monomial_integral(zero, radius);
}

double sphere_radius(const CubatureFormula& rule) {
  const auto* sphere = std::get_if<SphereTarget>(&rule.target);
  if (sphere == nullptr) throw Error(ErrorCode::kInvalidArgument, "formula does not target a sphere");
  return sphere->radius;
}

// ---------------------------------------------------------------------------
// Coefficients

std::array<double, 2> mysovskikh_deg5_coefficients(int d) {
  require_dim(d, 4, "the degree-5 simplex rule");
  const double w = surface_area(d);
  const double dd = d;
  return {dd * (7.0 - dd) * w / (2.0 * (dd + 1) * (dd + 1) * (dd + 2)),
          2.0 * (dd - 1) * (dd - 1) * w / (dd * (dd + 1) * (dd + 1) * (dd + 2))};
}

std::array<double, 2> product_deg5_coefficients(int d) {
  require_dim(d, 3, "the degree-5 product sphere rule");
  const double w = surface_area(d);
  const double dd = d;
  return {(4.0 - dd) * w / (2.0 * dd * (dd + 2)), w / (dd * (dd + 2))};
}

std::array<double, 3> product_deg7_coefficients(int d) {
  require_dim(d, 3, "the degree-7 product sphere rule");
  const double radii[3] = {1.0, 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(3.0)};
  const std::vector<std::vector<int>> rows = {class_monomial(d, {}), class_monomial(d, {4}),
                                              class_monomial(d, {6})};
  Eigen::Matrix3d a;
  Eigen::Vector3d b;
  for (int i = 0; i < 3; ++i) {
    for (int f = 0; f < 3; ++f) a(i, f) = m_family_sum(d, f + 1, radii[f], rows[i]);
    b(i) = sphere_monomial_integral(rows[i]);
  }
  const Eigen::Vector3d u = a.partialPivLu().solve(b);

  // Certify on every even monomial class up to degree 6.
  double residual = 0.0;
  for (const auto& alpha : degree7_classes(d)) {
    double value = 0.0;
    for (int f = 0; f < 3; ++f) value += u(f) * m_family_sum(d, f + 1, radii[f], alpha);
    residual = std::max(residual, std::abs(value - sphere_monomial_integral(alpha)));
  }
  if (!(residual <= kSolveResidual * surface_area(d))) {
    throw Error(ErrorCode::kSolveFailed,
                "coefficient solve failed for the degree-7 product sphere rule (residual " +
                    std::to_string(residual) + ")");
  }
  return {u(0), u(1), u(2)};
}

std::array<double, 4> mysovskikh_deg7_coefficients(const SimplexFrame& frame) {
  const int d = frame.dim();
  require_dim(d, 6, "the degree-7 simplex rule");
  const PointSet families[4] = {s_points(frame, 1, 1.0), s_points(frame, 2, 1.0), s_points(frame, 3, 1.0),
                                h_points(frame, 1.0)};
  const std::vector<std::vector<int>> rows = {class_monomial(d, {}),     class_monomial(d, {2}),
                                              class_monomial(d, {4}),    class_monomial(d, {6}),
                                              class_monomial(d, {4, 2}), class_monomial(d, {2, 2, 2})};
  Eigen::MatrixXd a(rows.size(), 4);
  Eigen::VectorXd b(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (int f = 0; f < 4; ++f) a(static_cast<Eigen::Index>(i), f) = family_sum(families[f], rows[i]);
    b(static_cast<Eigen::Index>(i)) = sphere_monomial_integral(rows[i]);
  }
  const Eigen::VectorXd v = a.colPivHouseholderQr().solve(b);
  const double residual = (a * v - b).cwiseAbs().maxCoeff();
  if (!(residual <= kSolveResidual * surface_area(d))) {
    throw Error(ErrorCode::kSolveFailed, "coefficient solve failed for the degree-7 simplex rule (residual " +
                                             std::to_string(residual) + ")");
  }
  return {v(0), v(1), v(2), v(3)};
}

// ---------------------------------------------------------------------------
// Rules

CubatureFormula mysovskikh_deg5(int d, const SimplexFrame& frame, double radius) {
  require_frame(frame, d);
  const auto v = mysovskikh_deg5_coefficients(d);
  CubatureFormula rule = sphere_formula(d, radius, 5, "mysovskikh5");
  add_scaled_family(rule, s_points(frame, 1, 1.0), v[0], radius);
  add_scaled_family(rule, s_points(frame, 2, 1.0), v[1], radius);
  finish(rule);
  return rule;
}

CubatureFormula product_deg5_sphere(int d, double radius) {
  const auto u = product_deg5_coefficients(d);
  CubatureFormula rule = sphere_formula(d, radius, 5, "product5");
  add_scaled_family(rule, m_points(d, 1, 1.0), u[0], radius);
  add_scaled_family(rule, m_points(d, 2, 1.0 / std::sqrt(2.0)), u[1], radius);
  finish(rule);
  return rule;
}

CubatureFormula product_deg7_sphere(int d, double radius) {
  const auto u = product_deg7_coefficients(d);
  CubatureFormula rule = sphere_formula(d, radius, 7, "product7");
  add_scaled_family(rule, m_points(d, 1, 1.0), u[0], radius);
  add_scaled_family(rule, m_points(d, 2, 1.0 / std::sqrt(2.0)), u[1], radius);
  add_scaled_family(rule, m_points(d, 3, 1.0 / std::sqrt(3.0)), u[2], radius);
  finish(rule);
  return rule;
}

CubatureFormula mysovskikh_deg7(int d, const SimplexFrame& frame, double radius) {
  require_frame(frame, d);
  const auto v = mysovskikh_deg7_coefficients(frame);
  CubatureFormula rule = sphere_formula(d, radius, 7, "mysovskikh7");
  add_scaled_family(rule, s_points(frame, 1, 1.0), v[0], radius);
  add_scaled_family(rule, s_points(frame, 2, 1.0), v[1], radius);
  add_scaled_family(rule, s_points(frame, 3, 1.0), v[2], radius);
  add_scaled_family(rule, h_points(frame, 1.0), v[3], radius);
  finish(rule);
  return rule;
}

CubatureFormula mysovskikh_rule(int k, const SimplexFrame& frame, double radius) {
  if (k == 2) return mysovskikh_deg5(frame.dim(), frame, radius);
  if (k == 3) return mysovskikh_deg7(frame.dim(), frame, radius);
  throw Error(ErrorCode::kUnsupported, "simplex sphere rules exist for k = 2, 3 only");
}

// ---------------------------------------------------------------------------
// Projection and the M_{d,k} replacement

double projection_constant(double radius, int d, int k) {
  const int power = d - 1 + 2 * k;
  return std::exp(std::lgamma((d + 2.0 * k) / 2.0) - std::log(2.0) - power * std::log(radius));
}

CubatureFormula project_to_sphere(const CubatureFormula& rule, double radius, int k) {
  if (!(radius > 0.0)) throw Error(ErrorCode::kInvalidArgument, "sphere radius must be positive");
  if (k < 0) throw Error(ErrorCode::kInvalidArgument, "k must be >= 0");
  if (rule.degree >= 0 && rule.degree < 2 * k + 1) {
    throw Error(ErrorCode::kInvalidArgument, "projection needs a rule of degree >= 2k+1");
  }
  if (!is_centrally_symmetric(rule)) {
    throw Error(ErrorCode::kNotCentrallySymmetric, "projection needs a centrally symmetric rule");
  }
  const int d = static_cast<int>(rule.dim());
  const double c = projection_constant(radius, d, k);
  CubatureFormula out = sphere_formula(d, radius, 2 * k + 1, "projected");
  out.provenance.params["k"] = k;
  std::vector<double> y(d);
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const auto x = rule.points[i];
    const double r = norm(x);
    if (r == 0.0) continue;
    for (int j = 0; j < d; ++j) y[j] = radius * (x[j] / r);
    out.add(y, rule.weights[i] * std::pow(r / radius, 2 * k) / c);
  }
  out.provenance.raw_count = rule.size();
  return merge_knots(out);
}

CubatureFormula projected_smolyak_sphere(int d, int k, double radius) {
  const SmolyakPlan plan(d + k, d, ladder_variant_n3(Weight1D::gaussian(), k + 1));
  CubatureFormula projected = project_to_sphere(combine(plan), radius, k);
  projected.provenance.params["d"] = d;
  return projected;
}

MdkSplit split_mdk(const CubatureFormula& rule, int k) {
  const int d = static_cast<int>(rule.dim());
  if (k < 1 || k > d) throw Error(ErrorCode::kInvalidArgument, "M_{d,k} split needs 1 <= k <= d");
  MdkSplit split;
  split.remainder = CubatureFormula{PointSet(rule.dim()), {}, rule.degree, rule.target, rule.provenance};
  std::vector<double> found;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const auto x = rule.points[i];
    int ones = 0;
    int zeros = 0;
    for (double v : x) {
      if (std::abs(v) <= kSplitTolerance) {
        ++zeros;
      } else if (std::abs(std::abs(v) - 1.0) <= kSplitTolerance) {
        ++ones;
      }
    }
    if (ones == k && zeros == d - k) {
      found.push_back(rule.weights[i]);
    } else {
      split.remainder.add(x, rule.weights[i]);
    }
  }
  const auto expected = static_cast<std::size_t>(binomial(d, k)) << k;
  if (found.size() != expected) {
    throw Error(ErrorCode::kIntegrity, "M_{d,k} split found " + std::to_string(found.size()) + " of the " +
                                           std::to_string(expected) + " points of F(d,k)");
  }
  std::sort(found.begin(), found.end());
  double sum = 0.0;
  for (double w : found) sum += w;
  split.w = sum / static_cast<double>(found.size());
  if (!(split.w > 0.0)) throw Error(ErrorCode::kIntegrity, "M_{d,k} weight is not positive");
  if (found.back() - found.front() > kUniformWeightSpread * split.w) {
    throw Error(ErrorCode::kIntegrity, "F(d,k) points do not carry a uniform weight");
  }
  split.remainder.provenance.raw_count = split.remainder.size();
  return split;
}

MdkSplit projected_mdk_split(int d, int k) {
  return split_mdk(projected_smolyak_sphere(d, k, std::sqrt(static_cast<double>(k))), k);
}

CubatureFormula mdk_replacement(int d, int k, const SimplexFrame& frame) {
  if (k != 2 && k != 3) throw Error(ErrorCode::kUnsupported, "M_{d,k} replacement exists for k = 2, 3 only");
  require_dim(d, k == 2 ? 4 : 6, "the M_{d,k} replacement");
  require_frame(frame, d);
  const double radius = std::sqrt(static_cast<double>(k));
  const MdkSplit split = projected_mdk_split(d, k);
  const CubatureFormula sphere_rule = mysovskikh_rule(k, frame, radius);

  CubatureFormula out;
  out.points = PointSet(static_cast<std::size_t>(d));
  out.degree = 2 * k + 1;
  out.target = MdkTarget{k};
  out.provenance.construction = "mdk_replacement";
  out.provenance.params = {{"d", d}, {"k", k}};
  out.append(sphere_rule, 1.0 / split.w);
  out.append(split.remainder, -1.0 / split.w);
  out.provenance.raw_count = out.size();
  return merge_knots(out);
}

CubatureFormula mdk_replacement(int d, int k) { return mdk_replacement(d, k, SimplexFrame(d)); }

}  // namespace symcube
