#include "symcube/compose.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>

#include <Eigen/Dense>

#include "symcube/error.hpp"
#include "symcube/smolyak.hpp"

namespace symcube {

namespace {

constexpr double kRingResidual = 1e-9;
constexpr double kRelationAgreement = 1e-8;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
const double kInvSqrt3 = 1.0 / std::sqrt(3.0);

std::vector<int> monomial(int d, std::initializer_list<int> parts) {
  std::vector<int> alpha(d, 0);
  int j = 0;
  for (int p : parts) alpha[j++] = p;
  return alpha;
}

/// One representative per even monomial class of degree <= max_degree:
/// exponents are nonincreasing even parts, at most d of them.
std::vector<std::vector<int>> even_classes(int d, int max_degree) {
  std::vector<std::vector<int>> classes;
  std::vector<int> alpha(d, 0);
  std::function<void(int, int, int)> rec = [&](int j, int remaining, int largest) {
    classes.push_back(alpha);
    if (j == d) return;
    for (int part = 2; part <= std::min(remaining, largest); part += 2) {
      alpha[j] = part;
      rec(j + 1, remaining - part, part);
      alpha[j] = 0;
    }
  };
  rec(0, max_degree, max_degree);
  return classes;
}

double points_sum(const PointSet& points, std::span<const int> alpha) {
  double sum = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    double term = 1.0;
    for (std::size_t j = 0; j < alpha.size(); ++j) {
      for (int p = 0; p < alpha[j]; ++p) term *= points[i][j];
    }
    sum += term;
  }
  return sum;
}

double origin_value(std::span<const int> alpha) {
  return std::all_of(alpha.begin(), alpha.end(), [](int a) { return a == 0; }) ? 1.0 : 0.0;
}

std::string format_sci(double v) {
  std::ostringstream s;
  s << std::scientific << std::setprecision(2) << v;
  return s.str();
}

void require_radius(const Weight1D& weight, double r, const char* name) {
  if (!(r > 0.0) || r > weight.half_width()) {
    throw Error(ErrorCode::kDomain, std::string(name) + " = " + std::to_string(r) +
                                        " must lie in (0, half_width = " +
                                        std::to_string(weight.half_width()) + "]");
  }
}

void require_distinct(double a, double b, const std::string& what) {
  if (std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b))) {
    throw Error(ErrorCode::kSolveFailed, "singular coefficient system: radii collide (" + what + ")");
  }
}

/// Solves a x = b after scaling rows and columns to unit max-norm; the
/// families' point sums grow like 2^d r^|alpha| and would otherwise defeat
/// the rank test at large d. Empty when the scaled matrix is singular.
template <typename Matrix, typename Vector>
std::optional<Vector> equilibrated_solve(Matrix a, Vector b) {
  const Eigen::Index n = a.rows();
  Vector col_scale(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = a.row(i).cwiseAbs().maxCoeff();
    if (!(r > 0.0)) return std::nullopt;
    a.row(i) /= r;
    b(i) /= r;
  }
  for (Eigen::Index f = 0; f < n; ++f) {
    col_scale(f) = a.col(f).cwiseAbs().maxCoeff();
    if (!(col_scale(f) > 0.0)) return std::nullopt;
    a.col(f) /= col_scale(f);
  }
  const Eigen::FullPivLU<Matrix> lu(a);
  if (!lu.isInvertible()) return std::nullopt;
  Vector x = lu.solve(b);
  const Vector r = b - a * x;  // one step of iterative refinement
  x += lu.solve(r);
  return Vector(x.cwiseQuotient(col_scale));
}

/// Solves the ring system for M families plus Q_0 and certifies it on every
/// even monomial class of degree below `degree`.
RingForm solve_ring(const Weight1D& weight, int d, int degree, const std::vector<FamilyTerm>& families,
                    const std::vector<std::vector<int>>& basis) {
  const ProductWeight product(static_cast<std::size_t>(d), weight);
  const auto n = static_cast<Eigen::Index>(families.size() + 1);
  Eigen::MatrixXd a(n, n);
  Eigen::VectorXd b(n);
  RingForm ring;
  ring.dim = d;
  ring.degree = degree;
  ring.solve.basis = basis;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& alpha = basis[static_cast<std::size_t>(i)];
    std::vector<double> row;
    for (std::size_t f = 0; f < families.size(); ++f) {
      row.push_back(m_family_sum(d, families[f].k, families[f].radius, alpha));
    }
    row.push_back(origin_value(alpha));
    for (Eigen::Index f = 0; f < n; ++f) a(i, f) = row[static_cast<std::size_t>(f)];
    b(i) = product.moment(alpha);
    ring.solve.matrix.push_back(std::move(row));
    ring.solve.rhs.push_back(b(i));
  }
  const auto solved = equilibrated_solve(a, b);
  if (!solved) throw Error(ErrorCode::kSolveFailed, "singular ring coefficient system");
  const Eigen::VectorXd& x = *solved;

  for (std::size_t f = 0; f < families.size(); ++f) {
    FamilyTerm term = families[f];
    term.coefficient = x(static_cast<Eigen::Index>(f));
    ring.terms.push_back(term);
  }
  ring.terms.push_back({FamilyTerm::Kind::kOrigin, 0, 0.0, x(n - 1)});
  ring.solve.solution.assign(x.data(), x.data() + n);

  double worst = 0.0;
  double scale = 0.0;
  for (const auto& alpha : even_classes(d, degree - 1)) {
    const double target = product.moment(alpha);
    scale = std::max(scale, std::abs(target));
    worst = std::max(worst, std::abs(ring.apply_monomial(alpha) - target));
  }
  ring.solve.residual = worst / scale;
  if (!(ring.solve.residual <= kRingResidual)) {
    throw Error(ErrorCode::kSolveFailed,
                "ring coefficient solve failed (relative residual " + format_sci(ring.solve.residual) + ")");
  }
  return ring;
}

/// Solves `columns` (point sums per basis monomial) against product moments.
template <std::size_t N>
std::array<double, N> direct_solve(const Weight1D& weight, int d,
                                   const std::vector<std::function<double(std::span<const int>)>>& columns,
                                   const std::vector<std::vector<int>>& basis) {
  const ProductWeight product(static_cast<std::size_t>(d), weight);
  Eigen::Matrix<double, N, N> a;
  Eigen::Matrix<double, N, 1> b;
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t f = 0; f < N; ++f) a(i, f) = columns[f](basis[i]);
    b(i) = product.moment(basis[i]);
  }
  const auto solved = equilibrated_solve(a, b);
  if (!solved) throw Error(ErrorCode::kSolveFailed, "singular simplex-form coefficient system");
  const Eigen::Matrix<double, N, 1>& x = *solved;
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = x(i);
  return out;
}

template <std::size_t N>
void cross_check(const std::array<double, N>& direct, const std::array<double, N>& relations) {
  double scale = 0.0;
  double diff = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    scale = std::max(scale, std::abs(direct[i]));
    diff = std::max(diff, std::abs(direct[i] - relations[i]));
  }
  if (diff > kRelationAgreement * scale) {
    throw Error(ErrorCode::kIntegrity, "direct and closed-relation coefficients disagree");
  }
}

void require_half_width(const Weight1D& weight) {
  if (weight.half_width() < 1.0) {
    throw Error(ErrorCode::kDomain, "coefficients need half width >= 1; rescale the weight first");
  }
}

void require_min_dim(int d, int minimum, int degree) {
  if (d < minimum) {
    throw Error(ErrorCode::kUnsupported, "degree " + std::to_string(degree) + " construction needs d >= " +
                                             std::to_string(minimum) + " (got d = " + std::to_string(d) + ")");
  }
}

PointSet origin(int d) {
  PointSet p(static_cast<std::size_t>(d));
  p.push_back(std::vector<double>(d, 0.0));
  return p;
}

/// Maps a rule built for w.scaled(s) back to w: x -> s x, a -> s^d a.
CubatureFormula unscale(const CubatureFormula& rule, double s) {
  if (s == 1.0) return rule;
  const std::vector<double> scales(rule.dim(), s);
  return scale_points(rule, scales, std::pow(s, static_cast<double>(rule.dim())));
}

double internal_scale(const Weight1D& weight) { return weight.half_width() < 1.0 ? weight.half_width() : 1.0; }

CubatureFormula product_formula(const ProductWeight& weight, int degree, const std::string& construction) {
  CubatureFormula rule;
  rule.points = PointSet(weight.dim());
  rule.degree = degree;
  rule.target = ProductTarget{weight};
  rule.provenance.construction = construction;
  rule.provenance.params = {{"d", static_cast<double>(weight.dim())}};
  return rule;
}

/// Rule in u-space (u = x / scale) for the frame's weight.
CubatureFormula to_unit(const CubatureFormula& rule, const std::vector<double>& scale) {
  std::vector<double> inverse(scale.size());
  double factor = 1.0;
  for (std::size_t j = 0; j < scale.size(); ++j) {
    inverse[j] = 1.0 / scale[j];
    factor /= scale[j];
  }
  return scale_points(rule, inverse, factor);
}

CubatureFormula from_unit(const CubatureFormula& rule, const std::vector<double>& scale) {
  double factor = 1.0;
  for (double s : scale) factor *= s;
  return scale_points(rule, scale, factor);
}

/// (ratio)(rule - split_from.remainder) + split_to.remainder, merged.
CubatureFormula sandwich(const CubatureFormula& rule, const MdkSplit& from, const MdkSplit& to) {
  const double ratio = to.w / from.w;
  CubatureFormula out;
  out.points = PointSet(rule.dim());
  out.append(rule, ratio);
  out.append(from.remainder, -ratio);
  out.append(to.remainder, 1.0);
  out.provenance.raw_count = out.size();
  return merge_knots(out);
}

double max_abs_coordinate(const CubatureFormula& rule, std::size_t j) {
  double m = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) m = std::max(m, std::abs(rule.points[i][j]));
  return m;
}

/// Largest outer ladder radius usable in u-space: min(h_j / sigma_j, 2).
double ladder_outer(const ProductWeight& weight) {
  double outer = 2.0;
  for (const auto& w : weight.factors()) {
    outer = std::min(outer, w.half_width() / std::sqrt(w.normalized_moment(2)));
  }
  return outer;
}

/// lambda <= 1 such that every u-space point and ladder radius fits the domain.
double fit_factor(const ProductWeight& weight, const CubatureFormula& unit_rule, double outer) {
  double lambda = 1.0;
  for (std::size_t j = 0; j < weight.dim(); ++j) {
    const auto& w = weight.factor(j);
    if (!w.bounded()) continue;
    const double reach = std::max(max_abs_coordinate(unit_rule, j), outer);
    lambda = std::min(lambda, w.half_width() / (std::sqrt(w.normalized_moment(2)) * reach));
  }
  return lambda;
}

void require_transfer_k(int k, int d) {
  if (k < 1 || k > d) throw Error(ErrorCode::kInvalidArgument, "transfer needs 1 <= k <= d");
}

void require_outer(double outer, int k) {
  if (k >= 2 && !(outer > 1.0)) {
    throw Error(ErrorCode::kDomain, "domain too small for ladder radii beyond the level-2 knot");
  }
}

/// Rescales a sphere rule to radius r.
CubatureFormula to_radius(const CubatureFormula& rule, double r) {
  const double r0 = sphere_radius(rule);
  const double s = r / r0;
  const std::vector<double> scales(rule.dim(), s);
  CubatureFormula out = scale_points(rule, scales, std::pow(s, static_cast<double>(rule.dim()) - 1.0));
  out.target = SphereTarget{r};
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Ring forms

double RingForm::apply_monomial(std::span<const int> alpha) const {
  double value = 0.0;
  for (const auto& term : terms) {
    switch (term.kind) {
      case FamilyTerm::Kind::kM:
        value += term.coefficient * m_family_sum(dim, term.k, term.radius, alpha);
        break;
      case FamilyTerm::Kind::kOrigin:
        value += term.coefficient * origin_value(alpha);
        break;
      default:
        throw Error(ErrorCode::kUnsupported, "closed-form evaluation covers M families and Q_0 only");
    }
  }
  return value;
}

CubatureFormula RingForm::formula(const ProductWeight& weight) const {
  CubatureFormula rule = product_formula(weight, degree, "ring");
  for (const auto& term : terms) {
    switch (term.kind) {
      case FamilyTerm::Kind::kM:
        rule.add_family(m_points(dim, term.k, term.radius), term.coefficient);
        break;
      case FamilyTerm::Kind::kOrigin:
        rule.add_family(origin(dim), term.coefficient);
        break;
      default:
        throw Error(ErrorCode::kUnsupported, "ring expansion covers M families and Q_0 only");
    }
  }
  rule.provenance.raw_count = rule.size();
  return rule;
}

RingForm ring_solve_deg5(const Weight1D& weight, int d, double gamma) {
  if (d < 2) throw Error(ErrorCode::kUnsupported, "degree-5 ring form needs d >= 2");
  require_radius(weight, gamma, "gamma");
  require_radius(weight, kInvSqrt2, "1/sqrt(2)");
  require_distinct(gamma, kInvSqrt2, "gamma = 1/sqrt(2)");
  using K = FamilyTerm::Kind;
  const std::vector<FamilyTerm> families = {{K::kM, 2, kInvSqrt2, 0.0}, {K::kM, 1, kInvSqrt2, 0.0},
                                            {K::kM, 1, gamma, 0.0}};
  const std::vector<std::vector<int>> basis = {monomial(d, {}), monomial(d, {2}), monomial(d, {4}),
                                               monomial(d, {2, 2})};
  return solve_ring(weight, d, 5, families, basis);
}

RingForm ring_solve_deg7(const Weight1D& weight, int d, double gamma1, double gamma2) {
  if (d < 3) throw Error(ErrorCode::kUnsupported, "degree-7 ring form needs d >= 3");
  require_radius(weight, gamma1, "gamma1");
  require_radius(weight, gamma2, "gamma2");
  require_radius(weight, kInvSqrt3, "1/sqrt(3)");
  require_distinct(gamma1, gamma2, "gamma1 = gamma2");
  require_distinct(gamma1, kInvSqrt3, "gamma1 = 1/sqrt(3)");
  require_distinct(gamma2, kInvSqrt3, "gamma2 = 1/sqrt(3)");
  using K = FamilyTerm::Kind;
  const std::vector<FamilyTerm> families = {{K::kM, 3, kInvSqrt3, 0.0}, {K::kM, 2, kInvSqrt3, 0.0},
                                            {K::kM, 1, kInvSqrt3, 0.0}, {K::kM, 2, gamma1, 0.0},
                                            {K::kM, 1, gamma1, 0.0},    {K::kM, 1, gamma2, 0.0}};
  const std::vector<std::vector<int>> basis = {monomial(d, {}),        monomial(d, {2}),
                                               monomial(d, {4}),       monomial(d, {2, 2}),
                                               monomial(d, {2, 2, 2}), monomial(d, {4, 2}),
                                               monomial(d, {6})};
  return solve_ring(weight, d, 7, families, basis);
}

// ---------------------------------------------------------------------------
// Fully symmetric constructions

Deg5Coefficients deg5_coefficients(const Weight1D& weight, int d, const SimplexFrame& frame) {
  require_min_dim(d, 4, 5);
  require_half_width(weight);
  if (frame.dim() != d) throw Error(ErrorCode::kInvalidArgument, "simplex frame dimension mismatch");
  Deg5Coefficients c;
  const RingForm ring = ring_solve_deg5(weight, d, 1.0);
  std::copy_n(ring.solve.solution.begin(), 4, c.a.begin());

  const double dd = d;
  const double face_ratio = dd * dd * (7.0 - dd) / (4.0 * (dd - 1) * (dd - 1));
  c.alpha_relations = {2.0 * (dd - 1) * (dd - 1) / ((dd + 1) * (dd + 1)) * c.a[0],
                       c.a[2] - (4.0 - dd) / 2.0 * c.a[0], c.a[1], c.a[3]};

  const PointSet s1 = s_points(frame, 1, 1.0);
  const PointSet s2 = s_points(frame, 2, 1.0);
  const PointSet m1 = m_points(d, 1, 1.0);
  const PointSet m1h = m_points(d, 1, kInvSqrt2);
  const std::vector<std::function<double(std::span<const int>)>> columns = {
      [&](std::span<const int> al) { return points_sum(s2, al) + face_ratio * points_sum(s1, al); },
      [&](std::span<const int> al) { return points_sum(m1, al); },
      [&](std::span<const int> al) { return points_sum(m1h, al); },
      [&](std::span<const int> al) { return origin_value(al); }};
  c.alpha = direct_solve<4>(weight, d, columns, ring.solve.basis);
  cross_check(c.alpha, c.alpha_relations);
  return c;
}

Deg7Coefficients deg7_coefficients(const Weight1D& weight, int d, const SimplexFrame& frame) {
  require_min_dim(d, 6, 7);
  require_half_width(weight);
  if (frame.dim() != d) throw Error(ErrorCode::kInvalidArgument, "simplex frame dimension mismatch");
  Deg7Coefficients c;
  const RingForm ring = ring_solve_deg7(weight, d);
  std::copy_n(ring.solve.solution.begin(), 7, c.a.begin());
  const auto& a = c.a;
  const auto u = product_deg7_coefficients(d);
  c.alpha_relations = {a[0] / u[2], a[5] - a[0] * u[0] / u[2], a[3] - a[0] * u[1] / u[2], a[4], a[1], a[2], a[6]};

  const CubatureFormula block = mysovskikh_deg7(d, frame, 1.0);
  const PointSet m1 = m_points(d, 1, 1.0);
  const PointSet m2h = m_points(d, 2, kInvSqrt2);
  const PointSet m1h = m_points(d, 1, kInvSqrt2);
  const PointSet m2t = m_points(d, 2, kInvSqrt3);
  const PointSet m1t = m_points(d, 1, kInvSqrt3);
  const std::vector<std::function<double(std::span<const int>)>> columns = {
      [&](std::span<const int> al) { return block.apply_monomial(al); },
      [&](std::span<const int> al) { return points_sum(m1, al); },
      [&](std::span<const int> al) { return points_sum(m2h, al); },
      [&](std::span<const int> al) { return points_sum(m1h, al); },
      [&](std::span<const int> al) { return points_sum(m2t, al); },
      [&](std::span<const int> al) { return points_sum(m1t, al); },
      [&](std::span<const int> al) { return origin_value(al); }};
  c.alpha = direct_solve<7>(weight, d, columns, ring.solve.basis);
  cross_check(c.alpha, c.alpha_relations);
  return c;
}

CubatureFormula build_deg5(const Weight1D& weight, int d) {
  require_min_dim(d, 4, 5);
  return build_deg5(weight, d, SimplexFrame(d));
}

CubatureFormula build_deg5(const Weight1D& weight, int d, const SimplexFrame& frame) {
  require_min_dim(d, 4, 5);
  const double s = internal_scale(weight);
  const Weight1D unit = s == 1.0 ? weight : weight.scaled(s);
  const Deg5Coefficients c = deg5_coefficients(unit, d, frame);
  const double dd = d;
  const double face_ratio = dd * dd * (7.0 - dd) / (4.0 * (dd - 1) * (dd - 1));

  CubatureFormula rule = product_formula(ProductWeight(static_cast<std::size_t>(d), unit), 5, "deg5");
  rule.add_family(s_points(frame, 2, 1.0), c.alpha[0]);
  if (face_ratio != 0.0) rule.add_family(s_points(frame, 1, 1.0), c.alpha[0] * face_ratio);
  rule.add_family(m_points(d, 1, 1.0), c.alpha[1]);
  rule.add_family(m_points(d, 1, kInvSqrt2), c.alpha[2]);
  rule.add_family(origin(d), c.alpha[3]);
  const std::size_t raw = rule.size();
  rule = unscale(merge_knots(rule), s);
  rule.target = ProductTarget{ProductWeight(static_cast<std::size_t>(d), weight)};
  rule.provenance.raw_count = raw;
  return rule;
}

CubatureFormula build_deg7(const Weight1D& weight, int d) {
  require_min_dim(d, 6, 7);
  return build_deg7(weight, d, SimplexFrame(d));
}

CubatureFormula build_deg7(const Weight1D& weight, int d, const SimplexFrame& frame) {
  require_min_dim(d, 6, 7);
  const double s = internal_scale(weight);
  const Weight1D unit = s == 1.0 ? weight : weight.scaled(s);
  const Deg7Coefficients c = deg7_coefficients(unit, d, frame);

  CubatureFormula rule = product_formula(ProductWeight(static_cast<std::size_t>(d), unit), 7, "deg7");
  CubatureFormula block = mysovskikh_deg7(d, frame, 1.0);
  rule.append(block, c.alpha[0]);
  rule.add_family(m_points(d, 1, 1.0), c.alpha[1]);
  rule.add_family(m_points(d, 2, kInvSqrt2), c.alpha[2]);
  rule.add_family(m_points(d, 1, kInvSqrt2), c.alpha[3]);
  rule.add_family(m_points(d, 2, kInvSqrt3), c.alpha[4]);
  rule.add_family(m_points(d, 1, kInvSqrt3), c.alpha[5]);
  rule.add_family(origin(d), c.alpha[6]);
  const std::size_t raw = rule.size();
  rule = unscale(merge_knots(rule), s);
  rule.target = ProductTarget{ProductWeight(static_cast<std::size_t>(d), weight)};
  rule.provenance.raw_count = raw;
  return rule;
}

std::int64_t fully_symmetric_count(int ell, int d) {
  const std::int64_t dd = d;
  if (ell == 5) return dd * dd + 7 * dd + 1;
  if (ell == 7) return (dd * dd * dd + 21 * dd * dd + 20 * dd + 3) / 3;
  throw Error(ErrorCode::kUnsupported, "fully symmetric constructions exist for degrees 5 and 7");
}

std::int64_t general_count_bound(int ell, int d) {
  const std::int64_t dd = d;
  if (ell == 5) return dd * dd + 9 * dd + 1;
  if (ell == 7) return (dd * dd * dd + 33 * dd * dd + 14 * dd + 3) / 3;
  throw Error(ErrorCode::kUnsupported, "general constructions exist for degrees 5 and 7");
}

// ---------------------------------------------------------------------------
// General weights and transfer

UnitFrame unit_frame(const ProductWeight& weight, double t) {
  if (!(t > 0.0)) throw Error(ErrorCode::kInvalidArgument, "frame factor must be positive");
  std::vector<double> scale;
  std::vector<Weight1D> factors;
  for (const auto& w : weight.factors()) {
    const double s = std::sqrt(w.normalized_moment(2)) * t;
    scale.push_back(s);
    factors.push_back(w.scaled(s));
  }
  return {std::move(scale), ProductWeight(std::move(factors))};
}

MdkSplit product_mdk_split(const UnitFrame& frame, int k, double outer) {
  const int d = static_cast<int>(frame.weight.dim());
  const int q = d + k;
  CubatureFormula rule;
  if (frame.weight.fully_symmetric()) {
    rule = combine(SmolyakPlan(q, d, default_ladder(frame.weight.factor(0), k + 1, 1.0, outer)),
                   frame.weight);
  } else {
    std::vector<KnotLadder> ladders;
    for (const auto& w : frame.weight.factors()) ladders.push_back(default_ladder(w, k + 1, 1.0, outer));
    rule = combine(SmolyakPlan(q, std::move(ladders)), frame.weight);
  }
  return split_mdk(rule, k);
}

CubatureFormula build_general(const ProductWeight& weight, int k) {
  if (k != 2 && k != 3) throw Error(ErrorCode::kUnsupported, "general construction exists for k = 2, 3");
  const int d = static_cast<int>(weight.dim());
  require_min_dim(d, k == 2 ? 4 : 6, 2 * k + 1);
  const double radius = std::sqrt(static_cast<double>(k));

  // Shrink so the sphere of radius sqrt(k) in u-space fits every factor's domain.
  double t = 1.0;
  for (const auto& w : weight.factors()) {
    if (w.bounded()) t = std::min(t, w.half_width() / (std::sqrt(w.normalized_moment(2)) * radius));
  }
  const UnitFrame frame = unit_frame(weight, t);
  const MdkSplit split = product_mdk_split(frame, k, radius);
  const CubatureFormula replacement = mdk_replacement(d, k);

  CubatureFormula rule = product_formula(frame.weight, 2 * k + 1, "general");
  rule.append(replacement, split.w);
  rule.append(split.remainder, 1.0);
  const std::size_t raw = rule.size();
  rule = from_unit(merge_knots(rule), frame.scale);
  rule.target = ProductTarget{weight};
  rule.provenance.params["k"] = k;
  rule.provenance.raw_count = raw;
  return rule;
}

double transfer_added_bound(int k, int d) {
  double factorial = 1.0;
  for (int i = 2; i < k; ++i) factorial *= i;
  return std::ldexp(1.0, 2 * k) / factorial * std::pow(static_cast<double>(d), k - 1);
}

CubatureFormula transfer(const CubatureFormula& rule, const ProductWeight& target, int k) {
  const auto* source = std::get_if<ProductTarget>(&rule.target);
  if (source == nullptr) throw Error(ErrorCode::kInvalidArgument, "transfer needs a product-weight rule");
  const int d = static_cast<int>(rule.dim());
  if (target.dim() != rule.dim()) throw Error(ErrorCode::kInvalidArgument, "target dimension mismatch");
  require_transfer_k(k, d);
  if (rule.degree >= 0 && rule.degree < 2 * k + 1) {
    throw Error(ErrorCode::kInvalidArgument, "transfer needs a rule of degree >= 2k+1");
  }

  const double outer = std::min(ladder_outer(source->weight), ladder_outer(target));
  require_outer(outer, k);
  const UnitFrame from = unit_frame(source->weight, 1.0);
  const CubatureFormula unit_rule = to_unit(rule, from.scale);
  const UnitFrame to = unit_frame(target, fit_factor(target, unit_rule, outer));

  CubatureFormula out =
      sandwich(unit_rule, product_mdk_split(from, k, outer), product_mdk_split(to, k, outer));
  out = from_unit(out, to.scale);
  out.degree = 2 * k + 1;
  out.target = ProductTarget{target};
  out.provenance.construction = "transfer";
  out.provenance.params = {{"d", d}, {"k", k}};
  return out;
}

CubatureFormula transfer_from_sphere(const CubatureFormula& rule, const ProductWeight& target, int k) {
  sphere_radius(rule);
  const int d = static_cast<int>(rule.dim());
  if (target.dim() != rule.dim()) throw Error(ErrorCode::kInvalidArgument, "target dimension mismatch");
  require_transfer_k(k, d);
  const CubatureFormula on_sphere = to_radius(rule, std::sqrt(static_cast<double>(k)));

  const double outer = ladder_outer(target);
  require_outer(outer, k);
  const UnitFrame to = unit_frame(target, fit_factor(target, on_sphere, outer));
  CubatureFormula out = sandwich(on_sphere, projected_mdk_split(d, k), product_mdk_split(to, k, outer));
  out = from_unit(out, to.scale);
  out.degree = 2 * k + 1;
  out.target = ProductTarget{target};
  out.provenance.construction = "transfer_from_sphere";
  out.provenance.params = {{"d", d}, {"k", k}};
  return out;
}

CubatureFormula transfer_sphere(const CubatureFormula& rule, double radius, int k) {
  const int d = static_cast<int>(rule.dim());
  require_transfer_k(k, d);
  CubatureFormula out;
  if (std::holds_alternative<SphereTarget>(rule.target)) {
    const double r = std::sqrt(static_cast<double>(k));
    const MdkSplit split = projected_mdk_split(d, k);
    out = sandwich(to_radius(rule, r), split, split);
    out.target = SphereTarget{r};
    out = to_radius(out, radius);
  } else {
    out = project_to_sphere(transfer(rule, ProductWeight(rule.dim(), Weight1D::gaussian()), k), radius, k);
  }
  out.degree = 2 * k + 1;
  out.target = SphereTarget{radius};
  out.provenance.construction = "transfer_sphere";
  out.provenance.params = {{"d", d}, {"k", k}, {"radius", radius}};
  return out;
}

}  // namespace symcube
