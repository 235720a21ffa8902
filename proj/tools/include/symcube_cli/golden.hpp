#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "symcube/smolyak.hpp"

namespace symcube::cli {

/// A table exactly as printed, -1 marking entries left blank.
struct GoldenTable {
  TableId id;
  std::vector<int> degrees;
  std::vector<int> dims;
  std::vector<std::vector<std::int64_t>> values;
};

const GoldenTable& golden_table(TableId id);

struct TableCheck {
  std::size_t matched = 0;
  std::vector<std::string> mismatches;  // "ell=.., d=..: expected .., got .."
};

/// Compares the computed table against the golden one, entry by entry.
TableCheck check_table(TableId id);

}  // namespace symcube::cli
