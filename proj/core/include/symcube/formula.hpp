#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "symcube/weights.hpp"

namespace symcube {

/// Points in R^d, stored row-major.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(std::size_t dim) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  bool empty() const { return coords_.empty(); }

  std::span<const double> operator[](std::size_t i) const { return {coords_.data() + i * dim_, dim_}; }
  std::span<double> operator[](std::size_t i) { return {coords_.data() + i * dim_, dim_}; }

  void push_back(std::span<const double> x);
  void append(const PointSet& other);
  void reserve(std::size_t n) { coords_.reserve(n * dim_); }

  const std::vector<double>& coords() const { return coords_; }

 private:
  std::size_t dim_ = 0;
  std::vector<double> coords_;
};

/// Integral a formula is meant to reproduce.
struct ProductTarget {
  ProductWeight weight;
};
/// Surface measure of the sphere of the given radius.
struct SphereTarget {
  double radius = 1.0;
};
/// The discrete functional summing over all points with exactly k entries
/// equal to +-1 and the rest 0.
struct MdkTarget {
  int k = 2;
};
/// std::monostate marks a formula whose target has not been set.
using Target = std::variant<std::monostate, ProductTarget, SphereTarget, MdkTarget>;

struct Provenance {
  std::string construction;
  std::map<std::string, double> params;
  std::size_t raw_count = 0;  // knots before merging / zero-weight drops
};

/// Q(f) = sum_i a_i f(x_i).
struct CubatureFormula {
  PointSet points;
  std::vector<double> weights;
  int degree = -1;  // claimed exactness
  Target target;
  Provenance provenance;

  std::size_t dim() const { return points.dim(); }
  std::size_t size() const { return weights.size(); }

  void add(std::span<const double> x, double weight);
  /// Appends every point of `family` with the same weight.
  void add_family(const PointSet& family, double weight);
  void append(const CubatureFormula& other, double factor = 1.0);

  /// Sum_i a_i x_i^alpha.
  double apply_monomial(std::span<const int> alpha) const;
  double sum_abs_weights() const;
};

inline constexpr double kMergeTolerance = 1e-12;
inline constexpr double kDropThreshold = 1e-14;

/// Identifies points whose coordinates agree within `tol` (absolute, per
/// coordinate), summing their weights in a deterministic order, then drops
/// points with |weight| < 1e-14 max|weight|. Clusters keep the position of
/// their first member; mirrored clusters yield mirrored points and equal
/// weights bit for bit.
CubatureFormula merge_knots(const CubatureFormula& rule, double tol = kMergeTolerance);

/// Drops points with |weight| below `threshold` * max|weight|.
void drop_small_weights(CubatureFormula& rule, double threshold = kDropThreshold);

/// True if (x, a) in the rule implies (-x, a) in the rule, bit for bit.
bool is_centrally_symmetric(const CubatureFormula& rule);
/// True if the rule is invariant under every single-coordinate sign flip,
/// bit for bit. Implies every monomial with an odd exponent integrates to 0.
bool is_sign_symmetric(const CubatureFormula& rule);

/// Maps the formula through x -> diag(scales) x, multiplying every weight by
/// `weight_factor`.
CubatureFormula scale_points(const CubatureFormula& rule, std::span<const double> scales,
                             double weight_factor);

}  // namespace symcube
