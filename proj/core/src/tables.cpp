#include <functional>

#include "symcube/compose.hpp"
#include "symcube/error.hpp"
#include "symcube/smolyak.hpp"
#include "symcube/verify.hpp"

namespace symcube {

namespace {

const std::vector<int> kOddDegrees = {3, 5, 7, 9, 11, 13, 15, 17};
const std::vector<int> kSmallDims = {5, 10, 15, 20, 25};
const std::vector<int> kWideDims = {5, 10, 15, 20, 25, 50, 100};

CountTable fill(std::string title, std::vector<int> degrees, std::vector<int> dims,
                const std::function<std::int64_t(int, int)>& entry) {
  CountTable t{std::move(title), std::move(degrees), std::move(dims), {}};
  for (int ell : t.degrees) {
    std::vector<std::int64_t> row;
    for (int d : t.dims) row.push_back(entry(ell, d));
    t.values.push_back(std::move(row));
  }
  return t;
}

}  // namespace

CountTable table(TableId which) {
  switch (which) {
    case TableId::kSmolyakStandard:
      return fill("Number of knots for Smolyak's method with n_i = 2i-1", kOddDegrees, kSmallDims,
                  [](int ell, int d) { return count_recursive(CountSequence::standard(), d + (ell - 1) / 2, d); });
    case TableId::kSmolyakVariant:
      return fill("Number of knots for Smolyak's method with n_3 = 3", kOddDegrees, kSmallDims,
                  [](int ell, int d) { return count_variant_recursion(d + (ell - 1) / 2, d); });
    case TableId::kKnownLebesgue:
      return fill("Known values for the Lebesgue measure", kOddDegrees, kSmallDims, known_lebesgue_count);
    case TableId::kNewFullySymmetric:
      return fill("New values for fully symmetric weight functions", {5, 7}, kWideDims, [](int ell, int d) {
        return ell == 7 && d < 6 ? std::int64_t{-1} : fully_symmetric_count(ell, d);
      });
    case TableId::kMoller:
      return fill("Moller's lower bound", {5, 7}, kWideDims, moller_bound);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown table");
}

}  // namespace symcube
