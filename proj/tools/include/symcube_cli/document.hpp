#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "symcube/formula.hpp"

namespace symcube::cli {

inline constexpr int kDocumentVersion = 1;

/// Unreadable file or a document that violates the schema.
class DocumentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Json = nlohmann::ordered_json;

/// Serializes a formula. Points are written sorted by (norm, coordinates) so
/// output is stable; doubles round-trip exactly.
Json to_document(const CubatureFormula& rule);
CubatureFormula from_document(const Json& doc);

void write_document(const CubatureFormula& rule, const std::filesystem::path& path);
CubatureFormula read_document(const std::filesystem::path& path);

/// Weight factor <-> JSON: {"builtin": "lebesgue" | "gaussian"} or
/// {"label": ..., "half_width": h | null, "moments": [m0, m2, ...]}, either
/// with an optional "scale". A document's "weight" field is
/// {"factors": [...]} for product targets (a single factor repeats for every
/// coordinate) and null otherwise.
Json weight_to_json(const Weight1D& w);
Weight1D weight_from_json(const Json& j);

/// A moments file holds one weight factor in the format above, plus a
/// "version" field.
Weight1D read_moments_file(const std::filesystem::path& path);

/// Same formula with points in (norm, lexicographic) order.
CubatureFormula sorted_points(const CubatureFormula& rule);

}  // namespace symcube::cli
