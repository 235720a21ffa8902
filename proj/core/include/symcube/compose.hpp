#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "symcube/formula.hpp"
#include "symcube/sphere.hpp"
#include "symcube/weights.hpp"

namespace symcube {

/// One term of a ring-form formula: coefficient times a point family.
struct FamilyTerm {
  enum class Kind {
    kM,       // F^r(d,k)
    kS,       // simplex face set S^r_{d,k}
    kH,       // simplex edge set H^r_d
    kOrigin,  // Q_0: the origin
  };
  Kind kind = Kind::kOrigin;
  int k = 0;
  double radius = 0.0;
  double coefficient = 0.0;
};

/// A linear system matched against moment oracles, plus its certificate.
struct CoefficientSolve {
  std::vector<std::vector<int>> basis;         // monomials used as equations
  std::vector<std::vector<double>> matrix;     // row per basis monomial
  std::vector<double> rhs;
  std::vector<double> solution;
  double residual = 0.0;  // max error over the verification monomials / largest target moment
};

/// Sum of coefficient * (fully symmetric family); evaluated in closed form.
struct RingForm {
  int dim = 0;
  int degree = 0;
  std::vector<FamilyTerm> terms;
  CoefficientSolve solve;

  double apply_monomial(std::span<const int> alpha) const;
  /// Expands every family into points (no merging).
  CubatureFormula formula(const ProductWeight& weight) const;
};

/// a_1 M^{1/sqrt2}_{d,2} + a_2 M^{1/sqrt2}_{d,1} + a_3 M^gamma_{d,1} + a_4 Q_0,
/// exact for the product weight on {1, x1^2, x1^4, x1^2 x2^2}. Needs d >= 2 and
/// gamma in (0, half_width], gamma != 1/sqrt2.
RingForm ring_solve_deg5(const Weight1D& weight, int d, double gamma = 1.0);

/// a_1 M^{1/sqrt3}_{d,3} + a_2 M^{1/sqrt3}_{d,2} + a_3 M^{1/sqrt3}_{d,1}
/// + a_4 M^{g1}_{d,2} + a_5 M^{g1}_{d,1} + a_6 M^{g2}_{d,1} + a_7 Q_0, exact on
/// {1, x1^2, x1^4, x1^2x2^2, x1^2x2^2x3^2, x1^4x2^2, x1^6}. Needs d >= 3.
RingForm ring_solve_deg7(const Weight1D& weight, int d, double gamma1 = 0.70710678118654752440,
                         double gamma2 = 1.0);

/// Ring coefficients a_i and the final coefficients alpha_i of the simplex
/// form, obtained by direct solve; `alpha_relations` holds the values given
/// by the closed relations to a_i, for cross-checking.
template <std::size_t N>
struct SimplexFormCoefficients {
  std::array<double, N> a{};
  std::array<double, N> alpha{};
  std::array<double, N> alpha_relations{};
};
using Deg5Coefficients = SimplexFormCoefficients<4>;
using Deg7Coefficients = SimplexFormCoefficients<7>;

/// Needs half_width >= 1 (rescale first otherwise) and d >= 4.
Deg5Coefficients deg5_coefficients(const Weight1D& weight, int d, const SimplexFrame& frame);
/// Needs half_width >= 1 and d >= 6.
Deg7Coefficients deg7_coefficients(const Weight1D& weight, int d, const SimplexFrame& frame);

/// alpha_1 (S^1_{d,2} + d^2(7-d)/(4(d-1)^2) S^1_{d,1}) + alpha_2 M^1_{d,1}
/// + alpha_3 M^{1/sqrt2}_{d,1} + alpha_4 Q_0 for the fully symmetric weight,
/// merged: d^2+7d+1 knots with the aligned frame (d^2+5d+1 when d = 7).
/// Weights with half width below 1 are rescaled internally.
CubatureFormula build_deg5(const Weight1D& weight, int d);
CubatureFormula build_deg5(const Weight1D& weight, int d, const SimplexFrame& frame);

/// alpha_1 (degree-7 simplex sphere rule) + alpha_2 M^1_{d,1}
/// + alpha_3 M^{1/sqrt2}_{d,2} + alpha_4 M^{1/sqrt2}_{d,1} + alpha_5 M^{1/sqrt3}_{d,2}
/// + alpha_6 M^{1/sqrt3}_{d,1} + alpha_7 Q_0, merged: (d^3+21d^2+20d+3)/3 knots.
CubatureFormula build_deg7(const Weight1D& weight, int d);
CubatureFormula build_deg7(const Weight1D& weight, int d, const SimplexFrame& frame);

/// d^2+7d+1 (ell = 5) and (d^3+21d^2+20d+3)/3 (ell = 7).
std::int64_t fully_symmetric_count(int ell, int d);
/// d^2+9d+1 (ell = 5) and (d^3+33d^2+14d+3)/3 (ell = 7).
std::int64_t general_count_bound(int ell, int d);

/// Per-coordinate affine frame in which every factor has the same normalized
/// second moment: u_j = x_j / scale_j.
struct UnitFrame {
  std::vector<double> scale;
  ProductWeight weight;  // rho_j(scale_j u), the weight seen in u-space
};

/// u_j = x_j / (sigma_j * t) with sigma_j^2 = m_2/m_0 of factor j.
UnitFrame unit_frame(const ProductWeight& weight, double t);

/// A(d+k, d) in u-space with X^2 = {-1, 0, 1}, n_i = 2i-1 and later levels
/// equidistant in (1, outer], split as w M_{d,k} + Q_r.
MdkSplit product_mdk_split(const UnitFrame& frame, int k, double outer);

/// Degree-(2k+1) formula for an arbitrary symmetric product weight: the
/// Smolyak rule v M_{d,k} + Q_s with M_{d,k} replaced. Needs d >= 4 (k = 2)
/// or d >= 6 (k = 3).
CubatureFormula build_general(const ProductWeight& weight, int k);

/// c_k d^{k-1} with c_k = 2^{2k}/(k-1)!.
double transfer_added_bound(int k, int d);

/// (w_2/w_1)(Q_n - Q_{r_1}) + Q_{r_2}: a degree-(2k+1) rule for `target`
/// from one for the rule's own product weight.
CubatureFormula transfer(const CubatureFormula& rule, const ProductWeight& target, int k);

/// Degree-(2k+1) rule for the sphere of the given radius. A product-weight
/// rule is transferred to the Gaussian weight and projected; a sphere rule is
/// sandwiched through the projected-Gaussian split.
CubatureFormula transfer_sphere(const CubatureFormula& rule, double radius, int k);

/// Degree-(2k+1) rule for `target` from a sphere rule, via the
/// projected-Gaussian split of M_{d,k} on the sphere of radius sqrt(k).
CubatureFormula transfer_from_sphere(const CubatureFormula& rule, const ProductWeight& target, int k);

}  // namespace symcube
