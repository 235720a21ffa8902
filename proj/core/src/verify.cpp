#include "symcube/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "symcube/error.hpp"
#include "symcube/smolyak.hpp"
#include "symcube/sphere.hpp"

namespace symcube {

namespace {

struct Symmetry {
  bool sign = false;
  bool central = false;
};

Symmetry detect(const CubatureFormula& rule) {
  Symmetry s;
  s.central = is_centrally_symmetric(rule);
  s.sign = s.central && is_sign_symmetric(rule);
  return s;
}

void check_dim(const CubatureFormula& rule, const Target& target) {
  std::size_t dim = rule.dim();
  if (const auto* p = std::get_if<ProductTarget>(&target)) dim = p->weight.dim();
  if (dim != rule.dim()) throw Error(ErrorCode::kInvalidArgument, "rule and target dimensions differ");
  if (std::holds_alternative<std::monostate>(target)) {
    throw Error(ErrorCode::kInvalidArgument, "formula has no target to verify against");
  }
}

}  // namespace

double default_tolerance(int ell) { return ell <= 5 ? 1e-9 : 1e-8; }

double target_integral(const Target& target, std::span<const int> alpha) {
  if (const auto* p = std::get_if<ProductTarget>(&target)) return p->weight.moment(alpha);
  if (const auto* s = std::get_if<SphereTarget>(&target)) return sphere_monomial_integral(alpha, s->radius);
  if (const auto* m = std::get_if<MdkTarget>(&target)) {
    return m_family_sum(static_cast<int>(alpha.size()), m->k, 1.0, alpha);
  }
  throw Error(ErrorCode::kInvalidArgument, "formula has no target to verify against");
}

ExactnessReport exactness(const CubatureFormula& rule, int ell, const ExactnessOptions& options) {
  return exactness(rule, rule.target, ell, options);
}

ExactnessReport exactness(const CubatureFormula& rule, const Target& target, int ell,
                          const ExactnessOptions& options) {
  if (ell < 0) throw Error(ErrorCode::kInvalidArgument, "degree must be >= 0");
  check_dim(rule, target);
  const int d = static_cast<int>(rule.dim());
  const std::size_t n = rule.size();

  ExactnessReport report;
  report.degree = ell;
  report.tolerance = options.tolerance > 0.0 ? options.tolerance : default_tolerance(ell);
  report.monomials = static_cast<std::size_t>(binomial(d + ell, d));
  const Symmetry sym = options.use_symmetry ? detect(rule) : Symmetry{};
  report.symmetry = sym.sign ? "sign" : sym.central ? "central" : "none";
  report.worst.assign(d, 0);
  const double floor_scale = 1e-12 / report.tolerance;

  // values[depth][i] = a_i x_i^alpha for the multi-index on the DFS stack.
  std::vector<std::vector<double>> values(static_cast<std::size_t>(ell) + 1, std::vector<double>(n));
  values[0] = rule.weights;
  std::vector<int> alpha(d, 0);
  const int step = sym.sign ? 2 : 1;

  auto score = [&](const std::vector<double>& v) {
    double q = 0.0;
    double magnitude = 0.0;
    for (double t : v) {
      q += t;
      magnitude += std::abs(t);
    }
    const double exact = target_integral(target, alpha);
    const double err = std::abs(q - exact);
    const double scale = exact != 0.0 ? std::abs(exact) : std::max(magnitude, floor_scale);
    ++report.evaluated;
    report.max_abs_error = std::max(report.max_abs_error, err);
    const double rel = err / scale;
    if (report.evaluated == 1 || rel > report.max_rel_error) {
      report.max_rel_error = rel;
      report.worst = alpha;
    }
  };

  // Multi-indices of total degree exactly g, lexicographically, built by
  // raising one exponent by `step` at a time from coordinate j onward.
  std::function<void(int, int, int)> rec = [&](int j, int remaining, int depth) {
    if (remaining == 0) {
      score(values[depth]);
      return;
    }
    for (int c = j; c < d; ++c) {
      const auto& prev = values[depth];
      auto& next = values[depth + 1];
      const double* col = rule.points.coords().data() + c;
      for (std::size_t i = 0; i < n; ++i) {
        double f = col[i * d];
        if (step == 2) f *= f;
        next[i] = prev[i] * f;
      }
      alpha[c] += step;
      rec(c, remaining - step, depth + 1);
      alpha[c] -= step;
    }
  };
  for (int g = 0; g <= ell; ++g) {
    if ((sym.sign || sym.central) && g % 2 == 1) continue;
    rec(0, g, 0);
  }
  report.passed = report.max_rel_error <= report.tolerance;
  return report;
}

// ---------------------------------------------------------------------------
// Bounds and dimensions

BigInt moller_bound_exact(int ell, int d) {
  if (ell < 3 || ell % 2 == 0) throw Error(ErrorCode::kInvalidArgument, "Moller bound needs odd ell >= 3");
  if (d < 1) throw Error(ErrorCode::kInvalidArgument, "Moller bound needs d >= 1");
  const int k = (ell - 1) / 2;
  const BigInt two_d = BigInt(1) << d;
  BigInt scaled = two_d * big_binomial(d + k, d);
  for (int s = 1; s <= d - 1; ++s) {
    const BigInt two_s = BigInt(1) << s;
    if (k % 2 == 1) {
      scaled += two_s * big_binomial(s + k, s);
    } else {
      scaled += (two_d - two_s) * big_binomial(s + k - 1, s);
    }
  }
  if (scaled % two_d != 0) throw Error(ErrorCode::kInternal, "Moller sum is not an integer");
  return scaled / two_d;
}

std::int64_t moller_bound(int ell, int d) { return to_int64(moller_bound_exact(ell, d)); }

std::int64_t moller_simple(int k, int d) {
  const std::int64_t dd = d;
  if (k == 2) return dd * dd + dd + 1;
  if (k == 3) return (dd * dd * dd + 3 * dd * dd + 8 * dd) / 3;
  throw Error(ErrorCode::kUnsupported, "simple Moller form exists for k = 2, 3");
}

std::pair<std::int64_t, std::int64_t> dim_even_odd(int k, int d) {
  if (k < 0 || d < 0) throw Error(ErrorCode::kInvalidArgument, "dimensions need k, d >= 0");
  std::int64_t even = 0;
  std::int64_t odd = 0;
  for (int j = 0; j <= k; ++j) {
    // homogeneous monomials of degree j in d variables
    const std::int64_t count = d == 0 ? (j == 0 ? 1 : 0) : binomial(j + d - 1, d - 1);
    std::int64_t& bucket = j % 2 == 0 ? even : odd;
    bucket = checked_add(bucket, count);
  }
  return {even, odd};
}

double condition_number(const CubatureFormula& rule, const ProductWeight& weight) {
  const double mass = weight.total_mass();
  if (!(mass > 0.0)) throw Error(ErrorCode::kInvalidArgument, "weight mass must be positive");
  return rule.sum_abs_weights() / mass;
}

double condition_number(const CubatureFormula& rule) {
  const std::vector<int> zero(rule.dim(), 0);
  return rule.sum_abs_weights() / target_integral(rule.target, zero);
}

std::vector<AsymptoticsRow> order_asymptotics(int k, const std::vector<int>& dims) {
  if (k < 1 || k > 8) throw Error(ErrorCode::kInvalidArgument, "asymptotics need 1 <= k <= 8");
  double factorial = 1.0;
  for (int i = 2; i <= k; ++i) factorial *= i;
  std::vector<AsymptoticsRow> rows;
  for (int d : dims) {
    AsymptoticsRow row;
    row.d = d;
    const double dk = std::pow(static_cast<double>(d), k);
    row.moller = moller_bound(2 * k + 1, d);
    row.moller_ratio = static_cast<double>(row.moller) / (2.0 * dk / factorial);
    row.smolyak = count_closed_form(k, d);
    row.smolyak_ratio = static_cast<double>(row.smolyak) / (std::ldexp(dk, k) / factorial);
    if (d >= 10 * k) {
      auto inside = [](double r) { return r >= 0.5 && r <= 2.0; };
      row.in_envelope = inside(row.moller_ratio) && inside(row.smolyak_ratio);
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace symcube
