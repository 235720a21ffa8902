#include "symcube/smolyak.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <unordered_map>

#include "symcube/combinatorics.hpp"
#include "symcube/error.hpp"

namespace symcube {

namespace {

using GridKey = std::vector<std::uint16_t>;

struct GridKeyHash {
  std::size_t operator()(const GridKey& key) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (auto v : key) {
      h ^= v;
      h *= 0x100000001b3ULL;
    }
    return h;
  }
};

/// Calls `visit(levels, sum)` for every level vector i >= 1 with lo <= |i| <= hi.
void for_each_level_vector(int d, int lo, int hi,
                           const std::function<void(const std::vector<int>&, int)>& visit) {
  std::vector<int> levels(d, 1);
  std::function<void(int, int)> rec = [&](int j, int sum) {
    if (j == d) {
      if (sum >= lo) visit(levels, sum);
      return;
    }
    // Remaining coordinates need at least one level each.
    const int room = hi - sum - (d - j - 1);
    for (int level = 1; level <= room; ++level) {
      levels[j] = level;
      rec(j + 1, sum + level);
    }
    levels[j] = 1;
  };
  rec(0, 0);
}

/// Point-weight accumulator keyed by knot indices, remembering insertion order.
class GridAccumulator {
 public:
  void add(const GridKey& key, double weight) {
    const auto [it, inserted] = index_.try_emplace(key, keys_.size());
    if (inserted) {
      keys_.push_back(key);
      weights_.push_back(weight);
    } else {
      weights_[it->second] += weight;
    }
  }

  const std::vector<GridKey>& keys() const { return keys_; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  std::unordered_map<GridKey, std::size_t, GridKeyHash> index_;
  std::vector<GridKey> keys_;
  std::vector<double> weights_;
};

PointSet to_points(const SmolyakPlan& plan, const std::vector<GridKey>& keys) {
  PointSet points(static_cast<std::size_t>(plan.d()));
  points.reserve(keys.size());
  std::vector<double> x(plan.d());
  for (const auto& key : keys) {
    for (int j = 0; j < plan.d(); ++j) x[j] = plan.ladder(j).knot(key[j]);
    points.push_back(x);
  }
  return points;
}

}  // namespace

// ---------------------------------------------------------------------------
// Plans and the combination formula

SmolyakPlan::SmolyakPlan(int q, int d, KnotLadder shared) : q_(q), d_(d) {
  ladders_.push_back(std::move(shared));
  validate();
}

SmolyakPlan::SmolyakPlan(int q, std::vector<KnotLadder> ladders)
    : q_(q), d_(static_cast<int>(ladders.size())), ladders_(std::move(ladders)) {
  validate();
}

void SmolyakPlan::validate() const {
  if (d_ < 1 || q_ < d_) throw Error(ErrorCode::kInvalidArgument, "Smolyak plan needs q >= d >= 1");
  for (int j = 0; j < (shared() ? 1 : d_); ++j) {
    if (ladder(j).depth() < max_level()) {
      throw Error(ErrorCode::kLadderTooShallow,
                  "ladder for coordinate " + std::to_string(j) + " lacks level " +
                      std::to_string(ladder(j).depth() + 1) + " (needs " +
                      std::to_string(max_level()) + ")");
    }
  }
}

CubatureFormula combine(const SmolyakPlan& plan) {
  std::vector<Weight1D> factors;
  for (int j = 0; j < plan.d(); ++j) factors.push_back(plan.ladder(j).weight());
  return combine(plan, ProductWeight(std::move(factors)));
}

CubatureFormula combine(const SmolyakPlan& plan, const ProductWeight& weight) {
  const int d = plan.d();
  const int q = plan.q();
  if (static_cast<int>(weight.dim()) != d) {
    throw Error(ErrorCode::kInvalidArgument, "weight dimension does not match the plan");
  }
  for (int j = 0; j < d; ++j) {
    if (!(weight.factor(j) == plan.ladder(j).weight())) {
      throw Error(ErrorCode::kInvalidArgument, "ladder weight differs from the target factor");
    }
  }

  GridAccumulator grid;
  GridKey key(d, 0);
  std::vector<int> level_of(d);
  std::function<void(int, double)> expand = [&](int j, double product) {
    if (j == d) {
      grid.add(key, product);
      return;
    }
    const auto& ladder = plan.ladder(j);
    const auto weights = ladder.level_weights(level_of[j]);
    for (std::size_t m = 0; m < weights.size(); ++m) {
      key[j] = static_cast<std::uint16_t>(m);
      expand(j + 1, product * weights[m]);
    }
    key[j] = 0;
  };

  for_each_level_vector(d, std::max(d, q - d + 1), q, [&](const std::vector<int>& levels, int sum) {
    const int gap = q - sum;
    const double coefficient =
        static_cast<double>(binomial(d - 1, gap)) * (gap % 2 == 0 ? 1.0 : -1.0);
    level_of = levels;
    expand(0, coefficient);
  });

  CubatureFormula rule;
  rule.points = to_points(plan, grid.keys());
  rule.weights = grid.weights();
  rule.degree = 2 * plan.k() + 1;
  rule.target = ProductTarget{weight};
  rule.provenance.construction = "smolyak";
  rule.provenance.params = {{"q", q}, {"d", d}};
  rule.provenance.raw_count = grid.keys().size();
  drop_small_weights(rule);
  return rule;
}

PointSet sparse_grid(const SmolyakPlan& plan) {
  const int d = plan.d();
  GridAccumulator grid;
  GridKey key(d, 0);
  std::vector<int> level_of(d);
  std::function<void(int)> expand = [&](int j) {
    if (j == d) {
      grid.add(key, 0.0);
      return;
    }
    const int n = plan.ladder(j).cardinality(level_of[j]);
    for (int m = 0; m < n; ++m) {
      key[j] = static_cast<std::uint16_t>(m);
      expand(j + 1);
    }
    key[j] = 0;
  };
  for_each_level_vector(d, plan.q(), plan.q(), [&](const std::vector<int>& levels, int) {
    level_of = levels;
    expand(0);
  });
  return to_points(plan, grid.keys());
}

// ---------------------------------------------------------------------------
// Counts

std::int64_t delayed_kronrod_patterson_size(int i) {
  if (i <= 0) return 0;
  if (i == 1) return 1;
  std::int64_t block_end = 3;
  std::int64_t size = 3;
  while (i > block_end) {
    block_end *= 2;
    size = 2 * size + 1;
  }
  return size;
}

std::int64_t CountSequence::operator()(int i) const {
  if (i <= 0) return 0;
  const std::int64_t standard = 2 * static_cast<std::int64_t>(i) - 1;
  switch (kind_) {
    case Kind::kStandard:
      return standard;
    case Kind::kVariant:
      return i == 3 ? 3 : standard;
    case Kind::kDelayed:
      return std::min(delayed_kronrod_patterson_size(i), standard);
  }
  return standard;
}

std::int64_t count_recursive(const CountSequence& seq, int q, int d) {
  if (d < 1 || q < d) throw Error(ErrorCode::kInvalidArgument, "count needs q >= d >= 1");
  // table[dd][qq] = n(qq, dd) for qq <= q.
  std::vector<std::vector<std::int64_t>> table(d + 1, std::vector<std::int64_t>(q + 1, 0));
  for (int qq = 1; qq <= q; ++qq) table[1][qq] = seq(qq);
  for (int dd = 2; dd <= d; ++dd) {
    for (int qq = dd; qq <= q; ++qq) {
      std::int64_t sum = 0;
      for (int s = 1; s <= qq - dd + 1; ++s) {
        sum = checked_add(sum, checked_mul(table[dd - 1][qq - s], seq(s) - seq(s - 1)));
      }
      table[dd][qq] = sum;
    }
  }
  return table[d][q];
}

std::int64_t count_closed_form(int k, int d) {
  if (k < 0 || d < 1) throw Error(ErrorCode::kInvalidArgument, "closed form needs k >= 0, d >= 1");
  std::int64_t sum = 0;
  for (int s = 0; s <= std::min(k, d); ++s) {
    sum = checked_add(sum, checked_mul(binomial(k, s), binomial(k + d - s, k)));
  }
  return sum;
}

std::int64_t count_variant_recursion(int q, int d) {
  if (d < 1 || q < d) throw Error(ErrorCode::kInvalidArgument, "count needs q >= d >= 1");
  const CountSequence seq = CountSequence::variant();
  // f[dd][qq] with zero for qq < dd.
  std::vector<std::vector<std::int64_t>> f(d + 1, std::vector<std::int64_t>(q + 1, 0));
  for (int qq = 1; qq <= q; ++qq) f[1][qq] = seq(qq);
  auto lower = [&](int dd, int qq) -> std::int64_t { return qq < 1 ? 0 : f[dd][qq]; };
  for (int dd = 2; dd <= d; ++dd) {
    for (int qq = dd; qq <= q; ++qq) {
      std::int64_t v = f[dd][qq - 1];
      v = checked_add(v, lower(dd - 1, qq - 1));
      v = checked_add(v, lower(dd - 1, qq - 2));
      v = checked_add(v, checked_mul(-2, lower(dd - 1, qq - 3)));
      v = checked_add(v, checked_mul(4, lower(dd - 1, qq - 4)));
      v = checked_add(v, checked_mul(-2, lower(dd - 1, qq - 5)));
      f[dd][qq] = v;
    }
  }
  return f[d][q];
}

std::int64_t count_projected(int k, int d) {
  if (d < k) throw Error(ErrorCode::kInvalidArgument, "projected count needs d >= k");
  const std::int64_t dd = d;
  if (k == 2) return 2 * dd * dd;
  if (k == 3) return (4 * dd * dd * dd - 6 * dd * dd + 8 * dd) / 3;
  throw Error(ErrorCode::kUnsupported, "projected count is only known for k = 2, 3");
}

std::int64_t count_upper_bound(int k, int d) {
  if (k < 0 || d < 1) throw Error(ErrorCode::kInvalidArgument, "bound needs k >= 0, d >= 1");
  const int e = std::min(k, d);
  if (e >= 62) throw Error(ErrorCode::kOverflow, "upper bound does not fit in 64 bits");
  return checked_mul(binomial(k + d, d), std::int64_t{1} << e);
}

std::int64_t known_lebesgue_count(int ell, int d) {
  if (ell < 3 || ell % 2 == 0 || d < 1) {
    throw Error(ErrorCode::kInvalidArgument, "known count needs odd ell >= 3 and d >= 1");
  }
  const std::int64_t dd = d;
  switch (ell) {
    case 3:
      return 2 * dd;
    case 5:
      return 2 * dd * dd + 1;
    case 7:
      // The 4 new knots of X^4 plus the origin form the 5-point Gauss rule,
      // so 2d of the variant method's weights vanish.
      return count_variant_recursion(d + 3, d) - 2 * dd;
    default:
      return count_recursive(CountSequence::delayed(), d + (ell - 1) / 2, d);
  }
}

}  // namespace symcube
