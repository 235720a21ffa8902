#include "symcube_cli/document.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "symcube/error.hpp"

namespace symcube::cli {

namespace {

[[noreturn]] void schema(const std::string& what) { throw DocumentError("schema violation: " + what); }

const Json& field(const Json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) schema(std::string("missing field '") + key + "'");
  return obj.at(key);
}

double number(const Json& j, const char* what) {
  if (!j.is_number()) schema(std::string(what) + " must be a number");
  return j.get<double>();
}

int integer(const Json& j, const char* what) {
  if (!j.is_number_integer()) schema(std::string(what) + " must be an integer");
  return j.get<int>();
}

Json target_to_json(const Target& target) {
  if (std::holds_alternative<ProductTarget>(target)) return {{"kind", "product"}, {"params", Json::object()}};
  if (const auto* s = std::get_if<SphereTarget>(&target)) {
    return {{"kind", "sphere"}, {"params", {{"radius", s->radius}}}};
  }
  if (const auto* m = std::get_if<MdkTarget>(&target)) {
    return {{"kind", "mdk"}, {"params", {{"k", m->k}}}};
  }
  return {{"kind", "none"}, {"params", Json::object()}};
}

Json product_weight_to_json(const Target& target) {
  const auto* p = std::get_if<ProductTarget>(&target);
  if (p == nullptr) return nullptr;
  Json factors = Json::array();
  if (p->weight.fully_symmetric()) {
    factors.push_back(weight_to_json(p->weight.factor(0)));
  } else {
    for (const auto& w : p->weight.factors()) factors.push_back(weight_to_json(w));
  }
  return {{"factors", factors}};
}

// A single factor stands for every coordinate.
ProductWeight product_weight_from_json(const Json& j, std::size_t dim) {
  const Json& factors = field(j, "factors");
  if (!factors.is_array() || factors.empty()) schema("weight factors must be a non-empty array");
  if (factors.size() == 1) return ProductWeight(dim, weight_from_json(factors[0]));
  if (factors.size() != dim) schema("weight needs one factor or one per coordinate");
  std::vector<Weight1D> ws;
  for (const auto& f : factors) ws.push_back(weight_from_json(f));
  return ProductWeight(std::move(ws));
}

Target target_from_json(const Json& doc, std::size_t dim) {
  const Json& j = field(doc, "target");
  const Json& kind = field(j, "kind");
  const Json& params = field(j, "params");
  if (kind == "product") return ProductTarget{product_weight_from_json(field(doc, "weight"), dim)};
  if (kind == "sphere") return SphereTarget{number(field(params, "radius"), "radius")};
  if (kind == "mdk") return MdkTarget{integer(field(params, "k"), "k")};
  if (kind == "none") return std::monostate{};
  schema("unknown target kind");
}

double squared_norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

}  // namespace

Json weight_to_json(const Weight1D& w) {
  Json j;
  if (w.is_builtin()) {
    j["builtin"] = w.label();
  } else {
    j["label"] = w.label();
    const double hw = w.half_width() * w.scale();
    j["half_width"] = std::isfinite(hw) ? Json(hw) : Json(nullptr);
    j["moments"] = w.table();
  }
  if (w.scale() != 1.0) j["scale"] = w.scale();
  return j;
}

Weight1D weight_from_json(const Json& j) {
  if (!j.is_object()) schema("weight must be an object");
  Weight1D w = Weight1D::lebesgue();
  try {
    if (j.contains("builtin")) {
      const Json& name = j.at("builtin");
      if (name == "lebesgue") {
        w = Weight1D::lebesgue();
      } else if (name == "gaussian") {
        w = Weight1D::gaussian();
      } else {
        schema("unknown builtin weight");
      }
    } else {
      const Json& hw = field(j, "half_width");
      const double half_width = hw.is_null() ? kInfinity : number(hw, "half_width");
      const Json& moments = field(j, "moments");
      if (!moments.is_array()) schema("moments must be an array");
      std::vector<double> m;
      for (const auto& v : moments) m.push_back(number(v, "moment"));
      const std::string label = j.contains("label") && j.at("label").is_string() ? j.at("label").get<std::string>()
                                                                                   : std::string("custom");
      w = Weight1D::from_moments(label, half_width, std::move(m));
    }
    if (j.contains("scale")) w = w.scaled(number(j.at("scale"), "scale"));
  } catch (const Error& e) {
    throw DocumentError(std::string("invalid weight: ") + e.what());
  }
  return w;
}

CubatureFormula sorted_points(const CubatureFormula& rule) {
  std::vector<std::size_t> order(rule.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> norms(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) norms[i] = squared_norm(rule.points[i]);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (norms[a] != norms[b]) return norms[a] < norms[b];
    const auto x = rule.points[a];
    const auto y = rule.points[b];
    return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
  });
  CubatureFormula out{PointSet(rule.dim()), {}, rule.degree, rule.target, rule.provenance};
  out.points.reserve(rule.size());
  for (std::size_t i : order) out.add(rule.points[i], rule.weights[i]);
  return out;
}

Json to_document(const CubatureFormula& rule) {
  const CubatureFormula sorted = sorted_points(rule);
  Json points = Json::array();
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const auto x = sorted.points[i];
    points.push_back(std::vector<double>(x.begin(), x.end()));
  }
  Json params = Json::object();
  for (const auto& [key, value] : rule.provenance.params) params[key] = value;
  Json doc;
  doc["version"] = kDocumentVersion;
  doc["dim"] = rule.dim();
  doc["degree"] = rule.degree;
  doc["target"] = target_to_json(rule.target);
  doc["weight"] = product_weight_to_json(rule.target);
  doc["provenance"] = {{"construction", rule.provenance.construction}, {"params", params}};
  doc["counts"] = {{"raw", rule.provenance.raw_count}, {"merged", rule.size()}};
  doc["points"] = std::move(points);
  doc["weights"] = sorted.weights;
  return doc;
}

CubatureFormula from_document(const Json& doc) {
  if (!doc.is_object()) schema("document must be an object");
  const int version = integer(field(doc, "version"), "version");
  if (version != kDocumentVersion) schema("unsupported version " + std::to_string(version));
  const int dim = integer(field(doc, "dim"), "dim");
  if (dim < 1) schema("dim must be >= 1");
  const Json& points = field(doc, "points");
  const Json& weights = field(doc, "weights");
  if (!points.is_array() || !weights.is_array()) schema("points and weights must be arrays");
  if (points.size() != weights.size()) schema("points and weights differ in length");

  CubatureFormula rule;
  rule.points = PointSet(static_cast<std::size_t>(dim));
  rule.points.reserve(points.size());
  rule.degree = integer(field(doc, "degree"), "degree");
  rule.target = target_from_json(doc, static_cast<std::size_t>(dim));
  std::vector<double> x(static_cast<std::size_t>(dim));
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Json& p = points[i];
    if (!p.is_array() || p.size() != x.size()) schema("point " + std::to_string(i) + " has wrong length");
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = number(p[j], "coordinate");
    rule.add(x, number(weights[i], "weight"));
  }
  if (doc.contains("provenance")) {
    const Json& prov = doc.at("provenance");
    if (prov.contains("construction") && prov.at("construction").is_string()) {
      rule.provenance.construction = prov.at("construction").get<std::string>();
    }
    if (prov.contains("params") && prov.at("params").is_object()) {
      for (const auto& [key, value] : prov.at("params").items()) {
        rule.provenance.params[key] = number(value, "provenance parameter");
      }
    }
  }
  if (doc.contains("counts") && doc.at("counts").contains("raw")) {
    rule.provenance.raw_count = doc.at("counts").at("raw").get<std::size_t>();
  }
  return rule;
}

void write_document(const CubatureFormula& rule, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DocumentError("cannot open " + path.string() + " for writing");
  out << to_document(rule).dump(1) << '\n';
  if (!out) throw DocumentError("failed writing " + path.string());
}

namespace {

Json parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DocumentError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw DocumentError(path.string() + ": " + e.what());
  }
}

}  // namespace

CubatureFormula read_document(const std::filesystem::path& path) {
  const Json doc = parse_file(path);
  try {
    return from_document(doc);
  } catch (const Json::exception& e) {
    throw DocumentError(path.string() + ": " + e.what());
  } catch (const Error& e) {
    throw DocumentError(path.string() + ": " + e.what());
  }
}

Weight1D read_moments_file(const std::filesystem::path& path) {
  const Json doc = parse_file(path);
  try {
    if (doc.contains("version") && integer(doc.at("version"), "version") != kDocumentVersion) {
      schema("unsupported moments file version");
    }
    return weight_from_json(doc);
  } catch (const DocumentError& e) {
    throw DocumentError(path.string() + ": " + e.what());
  } catch (const Json::exception& e) {
    throw DocumentError(path.string() + ": " + e.what());
  }
}

}  // namespace symcube::cli
