#pragma once

#include <array>
#include <span>

#include "symcube/formula.hpp"

namespace symcube {

/// Vertices of a regular simplex inscribed in the unit sphere of R^d:
/// d+1 unit vectors with pairwise inner products -1/d summing to zero.
///
/// The aligned realization puts v_1 = e_1 exactly (the rest follow the
/// recursive construction with first coordinate -1/d), which lets simplex
/// points coincide with axis points and merge. The non-aligned frame applies
/// a fixed reflection taking e_1 to (1, ..., 1)/sqrt(d).
class SimplexFrame {
 public:
  explicit SimplexFrame(int d, bool aligned_first = true);

  int dim() const { return d_; }
  bool aligned_first() const { return aligned_; }
  std::span<const double> vertex(int i) const { return vertices_[static_cast<std::size_t>(i)]; }
  const PointSet& vertices() const { return vertices_; }

 private:
  int d_;
  bool aligned_;
  PointSet vertices_;
};

/// F^r(d,k): every vector with exactly k nonzero coordinates, each +-r.
/// 2^k C(d,k) points of norm r sqrt(k).
PointSet m_points(int d, int k, double r);

/// Normalized centroids of all k-subsets of simplex vertices, scaled to
/// radius r, followed by their antipodes: 2 C(d+1,k) points.
PointSet s_points(const SimplexFrame& frame, int k, double r);

/// p_ij = v_i/4 + 3v_j/4 (i != j) normalized to radius r, plus antipodes:
/// 2 (d+1) d points.
PointSet h_points(const SimplexFrame& frame, double r);

/// Sum of x^alpha over F^r(d,k), in closed form: 2^k C(d-s, k-s) r^|alpha|
/// when every exponent is even and the support s is at most k, else 0.
double m_family_sum(int d, int k, double r, std::span<const int> alpha);

/// Integral of x^alpha over the sphere of radius R in R^d (surface measure).
double sphere_monomial_integral(std::span<const int> alpha, double radius = 1.0);
/// Surface area of the sphere of radius R in R^d.
double surface_area(int d, double radius = 1.0);

/// Radius of a sphere-target formula (throws if the target is not a sphere).
double sphere_radius(const CubatureFormula& rule);

/// (v_1, v_2) of the degree-5 simplex rule on the unit sphere.
std::array<double, 2> mysovskikh_deg5_coefficients(int d);
/// (u_1, u_2) of the degree-5 rule on M^1_{d,1} and M^{1/sqrt2}_{d,2}.
std::array<double, 2> product_deg5_coefficients(int d);
/// (u_1, u_2, u_3) of the degree-7 rule on M^1_{d,1}, M^{1/sqrt2}_{d,2},
/// M^{1/sqrt3}_{d,3}, solved against the sphere moments of 1, x1^4, x1^6.
std::array<double, 3> product_deg7_coefficients(int d);
/// (v_1, ..., v_4) of the degree-7 simplex rule on S_{d,1}, S_{d,2}, S_{d,3}
/// and the edge set, by least squares over six even monomials. Throws
/// kSolveFailed if the residual exceeds 1e-10 times the surface area.
std::array<double, 4> mysovskikh_deg7_coefficients(const SimplexFrame& frame);

/// v_1 S_{d,1} + v_2 S_{d,2}; (d+1)(d+2) points, d(d+1) when d = 7.
CubatureFormula mysovskikh_deg5(int d, const SimplexFrame& frame, double radius = 1.0);
/// u_1 M^1_{d,1} + u_2 M^{1/sqrt2}_{d,2}; 2d^2 points, 2d(d-1) when d = 4.
CubatureFormula product_deg5_sphere(int d, double radius = 1.0);
/// u_1 M^1_{d,1} + u_2 M^{1/sqrt2}_{d,2} + u_3 M^{1/sqrt3}_{d,3}.
CubatureFormula product_deg7_sphere(int d, double radius = 1.0);
/// v_1 S_{d,1} + v_2 S_{d,2} + v_3 S_{d,3} + v_4 H_d; (d^3+9d^2+14d+6)/3 points.
CubatureFormula mysovskikh_deg7(int d, const SimplexFrame& frame, double radius = 1.0);

/// Degree-(2k+1) simplex rule on the given sphere (k = 2 or 3).
CubatureFormula mysovskikh_rule(int k, const SimplexFrame& frame, double radius);

/// Int_0^inf (r/R)^{d-1+2k} e^{-r^2} dr = Gamma((d+2k)/2) / (2 R^{d-1+2k}).
double projection_constant(double radius, int d, int k);

/// Maps a centrally symmetric rule of degree 2k+1 for exp(-|x|^2) onto the
/// sphere of radius R: x -> R x/|x|, a -> a |x|^{2k} / (R^{2k} c(R,d,k)).
/// Points at the origin are dropped and coincident images merged.
CubatureFormula project_to_sphere(const CubatureFormula& rule, double radius, int k);

/// A(d+k, d) with the n_3 = 3 Gaussian ladder, projected to radius R.
CubatureFormula projected_smolyak_sphere(int d, int k, double radius);

/// rule = w M_{d,k} + remainder, where M_{d,k} sums over F^1(d,k).
struct MdkSplit {
  double w = 0.0;
  CubatureFormula remainder;
};

/// Pulls the points with exactly k coordinates +-1 (and the rest 0, within
/// 1e-12) out of `rule`. Throws kIntegrity unless all 2^k C(d,k) of them are
/// present with one common positive weight (relative spread <= 1e-10).
MdkSplit split_mdk(const CubatureFormula& rule, int k);

/// The sphere-side split used for M_{d,k}: the projected Gaussian Smolyak
/// rule on radius sqrt(k), written as w M_{d,k} + Q_r.
MdkSplit projected_mdk_split(int d, int k);

/// Formula for the functional M_{d,k} with degree 2k+1 whose points all lie
/// on the sphere of radius sqrt(k): (Q~ - Q_r) / w, with Q~ the simplex rule
/// on that sphere. Needs d >= 4 (k = 2) or d >= 6 (k = 3).
CubatureFormula mdk_replacement(int d, int k, const SimplexFrame& frame);
CubatureFormula mdk_replacement(int d, int k);

}  // namespace symcube
