#include "symcube/formula.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <unordered_map>

#include "symcube/error.hpp"

namespace symcube {

namespace {

template <class T>
struct VectorHash {
  std::size_t operator()(const std::vector<T>& v) const noexcept {
    std::size_t h = 1469598103934665603ULL;
    for (const T& x : v) {
      h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }
};

std::uint64_t canonical_bits(double x) { return std::bit_cast<std::uint64_t>(x == 0.0 ? 0.0 : x); }

using BitKey = std::vector<std::uint64_t>;
using BitMultiset = std::unordered_map<BitKey, int, VectorHash<std::uint64_t>>;

BitKey point_key(std::span<const double> x, double weight, std::size_t flip_mask_dim, bool flip_all) {
  BitKey key(x.size() + 1);
  for (std::size_t j = 0; j < x.size(); ++j) {
    const bool flip = flip_all || j == flip_mask_dim;
    key[j] = canonical_bits(flip ? -x[j] : x[j]);
  }
  key[x.size()] = canonical_bits(weight);
  return key;
}

BitMultiset multiset_of(const CubatureFormula& rule) {
  BitMultiset set;
  set.reserve(rule.size() * 2);
  for (std::size_t i = 0; i < rule.size(); ++i) {
    ++set[point_key(rule.points[i], rule.weights[i], SIZE_MAX, false)];
  }
  return set;
}

bool invariant_under(const CubatureFormula& rule, const BitMultiset& set, std::size_t flip_dim,
                     bool flip_all) {
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const auto it = set.find(point_key(rule.points[i], rule.weights[i], flip_dim, flip_all));
    if (it == set.end()) return false;
  }
  // Multiplicities must match as well.
  BitMultiset image;
  image.reserve(rule.size() * 2);
  for (std::size_t i = 0; i < rule.size(); ++i) {
    ++image[point_key(rule.points[i], rule.weights[i], flip_dim, flip_all)];
  }
  return image == set;
}

}  // namespace

void PointSet::push_back(std::span<const double> x) {
  if (x.size() != dim_) throw Error(ErrorCode::kInvalidArgument, "point dimension mismatch");
  coords_.insert(coords_.end(), x.begin(), x.end());
}

void PointSet::append(const PointSet& other) {
  if (other.empty()) return;
  if (other.dim_ != dim_) throw Error(ErrorCode::kInvalidArgument, "point dimension mismatch");
  coords_.insert(coords_.end(), other.coords_.begin(), other.coords_.end());
}

void CubatureFormula::add(std::span<const double> x, double weight) {
  points.push_back(x);
  weights.push_back(weight);
}

void CubatureFormula::add_family(const PointSet& family, double weight) {
  points.append(family);
  weights.insert(weights.end(), family.size(), weight);
}

void CubatureFormula::append(const CubatureFormula& other, double factor) {
  points.append(other.points);
  for (double a : other.weights) weights.push_back(factor * a);
}

double CubatureFormula::apply_monomial(std::span<const int> alpha) const {
  if (alpha.size() != dim()) throw Error(ErrorCode::kInvalidArgument, "multi-index dimension mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    const auto x = points[i];
    double term = weights[i];
    for (std::size_t j = 0; j < alpha.size(); ++j) {
      for (int p = 0; p < alpha[j]; ++p) term *= x[j];
    }
    sum += term;
  }
  return sum;
}

double CubatureFormula::sum_abs_weights() const {
  double sum = 0.0;
  for (double a : weights) sum += std::abs(a);
  return sum;
}

void drop_small_weights(CubatureFormula& rule, double threshold) {
  double max_abs = 0.0;
  for (double a : rule.weights) max_abs = std::max(max_abs, std::abs(a));
  const double cut = threshold * max_abs;
  CubatureFormula kept{PointSet(rule.dim()), {}, rule.degree, rule.target, rule.provenance};
  kept.points.reserve(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) {
    if (std::abs(rule.weights[i]) >= cut && rule.weights[i] != 0.0) {
      kept.add(rule.points[i], rule.weights[i]);
    }
  }
  rule = std::move(kept);
}

CubatureFormula merge_knots(const CubatureFormula& rule, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::kInvalidArgument, "merge tolerance must be positive");
  const std::size_t dim = rule.dim();
  // Clusters are indexed by a generic linear projection of their first
  // member. Points within tol per coordinate project within tol * sum(c_j),
  // so only a narrow key window has to be searched.
  std::vector<double> c(dim);
  for (std::size_t j = 0; j < dim; ++j) c[j] = std::sqrt(2.0 + static_cast<double>(j) * 1.6180339887498949);
  const double window = tol * std::accumulate(c.begin(), c.end(), 0.0) * (1.0 + 1e-9);
  auto project = [&](std::span<const double> x) {
    double p = 0.0;
    for (std::size_t j = 0; j < dim; ++j) p += c[j] * x[j];
    return p;
  };
  std::multimap<double, std::size_t> index;         // projection -> cluster
  std::vector<std::size_t> representative;           // cluster -> first point
  std::vector<std::size_t> canonical;                // cluster -> emitted point
  std::vector<std::vector<double>> contributions;    // cluster -> weights

  // Emitted coordinates come from the member with the lexicographically
  // smallest absolute values, so a cluster and its mirror image emit mirrored
  // points bit for bit.
  auto abs_less = [&](std::span<const double> a, std::span<const double> b) {
    for (std::size_t j = 0; j < dim; ++j) {
      if (std::abs(a[j]) != std::abs(b[j])) return std::abs(a[j]) < std::abs(b[j]);
    }
    return false;
  };

  auto within_tol = [&](std::span<const double> a, std::span<const double> b) {
    for (std::size_t j = 0; j < dim; ++j) {
      if (std::abs(a[j] - b[j]) > tol) return false;
    }
    return true;
  };

  for (std::size_t i = 0; i < rule.size(); ++i) {
    const auto x = rule.points[i];
    const double p = project(x);
    // Earliest matching cluster, as a linear scan over clusters would find.
    std::size_t found = SIZE_MAX;
    for (auto it = index.lower_bound(p - window); it != index.end() && it->first <= p + window; ++it) {
      if (it->second < found && within_tol(rule.points[representative[it->second]], x)) found = it->second;
    }

    if (found == SIZE_MAX) {
      found = representative.size();
      representative.push_back(i);
      canonical.push_back(i);
      contributions.emplace_back();
      index.emplace(p, found);
    } else if (abs_less(x, rule.points[canonical[found]])) {
      canonical[found] = i;
    }
    contributions[found].push_back(rule.weights[i]);
  }

  CubatureFormula merged{PointSet(dim), {}, rule.degree, rule.target, rule.provenance};
  merged.points.reserve(representative.size());
  for (std::size_t c = 0; c < representative.size(); ++c) {
    auto& parts = contributions[c];
    // Order-independent sum, so mirrored clusters get bitwise equal weights.
    std::sort(parts.begin(), parts.end());
    double sum = 0.0;
    for (double a : parts) sum += a;
    merged.add(rule.points[canonical[c]], sum);
  }
  drop_small_weights(merged);
  return merged;
}

bool is_centrally_symmetric(const CubatureFormula& rule) {
  const BitMultiset set = multiset_of(rule);
  return invariant_under(rule, set, SIZE_MAX, true);
}

bool is_sign_symmetric(const CubatureFormula& rule) {
  const BitMultiset set = multiset_of(rule);
  for (std::size_t j = 0; j < rule.dim(); ++j) {
    if (!invariant_under(rule, set, j, false)) return false;
  }
  return true;
}

CubatureFormula scale_points(const CubatureFormula& rule, std::span<const double> scales,
                             double weight_factor) {
  if (scales.size() != rule.dim()) throw Error(ErrorCode::kInvalidArgument, "scale dimension mismatch");
  CubatureFormula out = rule;
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto x = out.points[i];
    for (std::size_t j = 0; j < x.size(); ++j) x[j] *= scales[j];
    out.weights[i] *= weight_factor;
  }
  return out;
}

}  // namespace symcube
