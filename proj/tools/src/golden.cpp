#include "symcube_cli/golden.hpp"

#include <stdexcept>

namespace symcube::cli {

namespace {

const std::vector<int> kOdd = {3, 5, 7, 9, 11, 13, 15, 17};
const std::vector<int> kFive = {5, 10, 15, 20, 25};
const std::vector<int> kSeven = {5, 10, 15, 20, 25, 50, 100};

const GoldenTable kTables[] = {
    {TableId::kSmolyakStandard,
     kOdd,
     kFive,
     {{11, 21, 31, 41, 51},
      {61, 221, 481, 841, 1301},
      {231, 1561, 4991, 11521, 22151},
      {681, 8361, 39041, 118721, 283401},
      {1683, 36365, 246047, 982729, 2908411},
      {3653, 134245, 1303777, 6814249, 24957661},
      {7183, 433905, 5984767, 40754369, 184327311},
      {13073, 1256465, 24331777, 214828609, 1196924561}}},
    {TableId::kSmolyakVariant,
     kOdd,
     kFive,
     {{11, 21, 31, 41, 51},
      {51, 201, 451, 801, 1251},
      {151, 1201, 4151, 10001, 19751},
      {401, 5301, 27701, 90601, 227001},
      {1003, 19505, 146507, 643009, 2040011},
      {2133, 63805, 655017, 3775769, 15056061},
      {4223, 188745, 2584167, 19111089, 94680111},
      {8113, 511625, 9224937, 85920449, 522028561}}},
    {TableId::kKnownLebesgue,
     kOdd,
     kFive,
     {{10, 20, 30, 40, 50},
      {51, 201, 451, 801, 1251},
      {141, 1181, 4121, 9961, 19701},
      {391, 5281, 27671, 90561, 226951},
      {903, 19105, 145607, 641409, 2037511},
      {1733, 60205, 642417, 3745369, 14996061},
      {3263, 168825, 2473287, 18743249, 93755311},
      {5983, 431265, 8522247, 82703329, 511676911}}},
    {TableId::kNewFullySymmetric,
     {5, 7},
     kSeven,
     {{61, 171, 331, 541, 801, 2851, 10701}, {-1, 1101, 2801, 5601, 9751, 59501, 404001}}},
    {TableId::kMoller,
     {5, 7},
     kSeven,
     {{31, 111, 241, 421, 651, 2551, 10101}, {80, 460, 1390, 3120, 5900, 44300, 343600}}},
};

}  // namespace

const GoldenTable& golden_table(TableId id) {
  for (const auto& t : kTables) {
    if (t.id == id) return t;
  }
  throw std::out_of_range("unknown table");
}

TableCheck check_table(TableId id) {
  const GoldenTable& golden = golden_table(id);
  const CountTable computed = table(id);
  TableCheck check;
  for (std::size_t r = 0; r < golden.degrees.size(); ++r) {
    for (std::size_t c = 0; c < golden.dims.size(); ++c) {
      const std::int64_t expected = golden.values[r][c];
      std::int64_t got = -2;
      if (r < computed.values.size() && c < computed.values[r].size() &&
          computed.degrees[r] == golden.degrees[r] && computed.dims[c] == golden.dims[c]) {
        got = computed.values[r][c];
      }
      if (got == expected) {
        ++check.matched;
      } else {
        check.mismatches.push_back("ell=" + std::to_string(golden.degrees[r]) +
                                   ", d=" + std::to_string(golden.dims[c]) + ": expected " +
                                   std::to_string(expected) + ", got " + std::to_string(got));
      }
    }
  }
  return check;
}

}  // namespace symcube::cli
