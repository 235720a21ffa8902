#pragma once

#include <cstdint>
#include <vector>

#include "symcube/formula.hpp"
#include "symcube/weights.hpp"

namespace symcube {

/// Smolyak construction A(q, d) over per-coordinate knot ladders.
class SmolyakPlan {
 public:
  /// One ladder shared by all d coordinates.
  SmolyakPlan(int q, int d, KnotLadder shared);
  /// One ladder per coordinate.
  SmolyakPlan(int q, std::vector<KnotLadder> ladders);

  int q() const { return q_; }
  int d() const { return d_; }
  int k() const { return q_ - d_; }
  bool shared() const { return ladders_.size() == 1; }
  const KnotLadder& ladder(int j) const { return ladders_[shared() ? 0 : j]; }
  /// Deepest level any coordinate needs: q - d + 1.
  int max_level() const { return q_ - d_ + 1; }

 private:
  void validate() const;

  int q_;
  int d_;
  std::vector<KnotLadder> ladders_;
};

/// A(q,d) = sum over q-d+1 <= |i| <= q of (-1)^{q-|i|} C(d-1, q-|i|) U^{i_1} x ... x U^{i_d}.
/// Grid points are keyed by per-coordinate knot indices; cancelled weights
/// (below 1e-14 max|w|) are dropped. provenance.raw_count holds |H(q,d)|.
CubatureFormula combine(const SmolyakPlan& plan, const ProductWeight& weight);
CubatureFormula combine(const SmolyakPlan& plan);

/// H(q,d) = union over |i| = q of X^{i_1} x ... x X^{i_d}, deduplicated.
PointSet sparse_grid(const SmolyakPlan& plan);

/// Knot cardinalities n_i, with n_0 = 0.
class CountSequence {
 public:
  enum class Kind {
    kStandard,  // n_i = 2i-1
    kVariant,   // n_3 = 3, otherwise 2i-1
    kDelayed,   // min(delayed Kronrod-Patterson n_i, 2i-1)
  };

  explicit CountSequence(Kind kind) : kind_(kind) {}
  static CountSequence standard() { return CountSequence(Kind::kStandard); }
  static CountSequence variant() { return CountSequence(Kind::kVariant); }
  static CountSequence delayed() { return CountSequence(Kind::kDelayed); }

  Kind kind() const { return kind_; }
  std::int64_t operator()(int i) const;

 private:
  Kind kind_;
};

/// Cardinality 1, 3, 3, 7, 7, 7, 15 (x6), 31 (x12), ... of the delayed
/// Kronrod-Patterson sequence, before capping at 2i-1.
std::int64_t delayed_kronrod_patterson_size(int i);

/// n(q,d) from n(q+1,d+1) = sum_{s=1}^{q-d+1} n(q+1-s,d) (n_s - n_{s-1}), n(q,1) = n_q.
std::int64_t count_recursive(const CountSequence& seq, int q, int d);

/// n(k+d,d) = sum_{s=0}^{min(k,d)} C(k,s) C(k+d-s,k) for n_i = 2i-1.
std::int64_t count_closed_form(int k, int d);

/// n(q,d) for the n_3 = 3 sequence via the six-term recursion
/// n(q+2,d+1) = n(q+1,d+1) + n(q+1,d) + n(q,d) - 2n(q-1,d) + 4n(q-2,d) - 2n(q-3,d).
std::int64_t count_variant_recursion(int q, int d);

/// Points left after projecting H(d+k,d) of the n_3 = 3 variant radially to a
/// sphere (origin removed): 2d^2 for k = 2, (4d^3-6d^2+8d)/3 for k = 3.
std::int64_t count_projected(int k, int d);

/// C(k+d,d) min(2^k, 2^d).
std::int64_t count_upper_bound(int k, int d);

struct CountTable {
  std::string title;
  std::vector<int> degrees;     // rows: ell
  std::vector<int> dims;        // columns: d
  std::vector<std::vector<std::int64_t>> values;  // -1 where not defined
};

enum class TableId { kSmolyakStandard = 1, kSmolyakVariant, kKnownLebesgue, kNewFullySymmetric, kMoller };

/// Reproduces the five count tables. Table 4 uses the fully symmetric
/// degree-5/7 construction counts and table 5 the Moller bound.
CountTable table(TableId which);

/// N(ell, d) entry of table 3: 2d, 2d^2+1, variant count - 2d, then the delayed sequence.
std::int64_t known_lebesgue_count(int ell, int d);

}  // namespace symcube
