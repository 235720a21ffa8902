#include "symcube_cli/commands.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "symcube/compose.hpp"
#include "symcube/error.hpp"
#include "symcube/smolyak.hpp"
#include "symcube/sphere.hpp"
#include "symcube/verify.hpp"
#include "symcube_cli/document.hpp"
#include "symcube_cli/golden.hpp"

namespace symcube::cli {

namespace {

/// Flag combination the command cannot act on.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSolveFailed:
    case ErrorCode::kIntegrity:
    case ErrorCode::kInternal:
      return kExitVerificationFailed;
    default:
      return kExitPrecondition;
  }
}

std::string format_alpha(const std::vector<int>& alpha) {
  std::ostringstream s;
  s << '(';
  for (std::size_t j = 0; j < alpha.size(); ++j) s << (j ? "," : "") << alpha[j];
  s << ')';
  return s.str();
}

Weight1D builtin_weight(const std::string& name) {
  if (name == "lebesgue") return Weight1D::lebesgue();
  if (name == "gaussian") return Weight1D::gaussian();
  throw UsageError("unknown weight '" + name + "' (expected lebesgue or gaussian)");
}

/// One moments file is repeated for every coordinate; otherwise one per coordinate.
ProductWeight weight_from_flags(const std::string& name, const std::vector<std::string>& moments, int d) {
  const auto dim = static_cast<std::size_t>(d);
  if (moments.empty()) return ProductWeight(dim, builtin_weight(name));
  if (moments.size() == 1) return ProductWeight(dim, read_moments_file(moments.front()));
  if (moments.size() != dim) {
    throw UsageError("--moments needs one file, or one file per coordinate (" + std::to_string(d) + ")");
  }
  std::vector<Weight1D> factors;
  for (const auto& path : moments) factors.push_back(read_moments_file(path));
  return ProductWeight(std::move(factors));
}

void write_if_requested(const CubatureFormula& rule, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) return;
  write_document(rule, out_path);
  out << "wrote " << out_path << '\n';
}

double tolerance_from_env() {
  const char* env = std::getenv("SYMCUBE_TOL");
  if (env == nullptr || *env == '\0') return -1.0;
  char* end = nullptr;
  const double tol = std::strtod(env, &end);
  if (end == env || *end != '\0' || !(tol > 0.0)) throw UsageError("SYMCUBE_TOL must be a positive number");
  return tol;
}

// ---------------------------------------------------------------------------

struct BuildArgs {
  int degree = 5;
  int dim = 0;
  std::string weight = "lebesgue";
  std::vector<std::string> moments;
  bool general = false;
  std::string out;
};

int cmd_build(const BuildArgs& a, std::ostream& out) {
  if (a.dim < 1) throw UsageError("--dim must be >= 1");
  const int k = (a.degree - 1) / 2;
  const ProductWeight weight = weight_from_flags(a.weight, a.moments, a.dim);
  CubatureFormula rule;
  if (a.general) {
    rule = build_general(weight, k);
  } else if (weight.fully_symmetric()) {
    rule = a.degree == 5 ? build_deg5(weight.factor(0), a.dim) : build_deg7(weight.factor(0), a.dim);
  } else {
    throw UsageError("per-coordinate weights need --general");
  }
  out << "construction: " << rule.provenance.construction << '\n';
  out << "knots: " << rule.size() << '\n';
  out << "moller bound: " << moller_bound(a.degree, a.dim) << '\n';
  out << "condition: " << std::setprecision(12) << condition_number(rule) << '\n';
  write_if_requested(rule, a.out, out);
  return kExitOk;
}

struct VerifyArgs {
  std::string file;
  std::optional<int> degree;
  std::optional<double> tol;
  bool full = false;
  std::string report;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  const CubatureFormula rule = read_document(a.file);
  ExactnessOptions options;
  options.tolerance = a.tol ? *a.tol : tolerance_from_env();
  options.use_symmetry = !a.full;
  const int ell = a.degree ? *a.degree : rule.degree;
  const ExactnessReport r = exactness(rule, ell, options);

  out << "degree: " << r.degree << '\n';
  out << "monomials: " << r.monomials << " (evaluated " << r.evaluated << ", symmetry " << r.symmetry << ")\n";
  out << std::setprecision(3) << std::scientific;
  out << "max abs error: " << r.max_abs_error << '\n';
  out << "max rel error: " << r.max_rel_error << " (tolerance " << r.tolerance << ")\n";
  out << std::defaultfloat;
  out << "worst monomial: x^" << format_alpha(r.worst) << '\n';
  out << (r.passed ? "PASS" : "FAIL") << '\n';

  if (!a.report.empty()) {
    Json doc;
    doc["version"] = kDocumentVersion;
    doc["file"] = a.file;
    doc["degree"] = r.degree;
    doc["monomials"] = r.monomials;
    doc["evaluated"] = r.evaluated;
    doc["symmetry"] = r.symmetry;
    doc["worst"] = r.worst;
    doc["max_abs_error"] = r.max_abs_error;
    doc["max_rel_error"] = r.max_rel_error;
    doc["tolerance"] = r.tolerance;
    doc["passed"] = r.passed;
    std::ofstream f(a.report);
    if (!f) throw DocumentError("cannot open " + a.report + " for writing");
    f << doc.dump(1) << '\n';
  }
  return r.passed ? kExitOk : kExitVerificationFailed;
}

struct CountsArgs {
  std::optional<int> table;
  bool check = false;
  std::optional<int> degree;
  std::vector<int> dims;
  std::string seq = "std";
};

void print_table(const CountTable& t, std::ostream& out) {
  out << t.title << '\n';
  out << std::setw(5) << "ell";
  for (int d : t.dims) out << std::setw(12) << ("d=" + std::to_string(d));
  out << '\n';
  for (std::size_t r = 0; r < t.degrees.size(); ++r) {
    out << std::setw(5) << t.degrees[r];
    for (std::int64_t v : t.values[r]) {
      out << std::setw(12) << (v < 0 ? std::string("-") : std::to_string(v));
    }
    out << '\n';
  }
}

int cmd_counts(const CountsArgs& a, std::ostream& out, std::ostream& err) {
  if (a.degree) {
    if (a.table || a.check) throw UsageError("--degree cannot be combined with --table or --check");
    if (*a.degree < 1 || *a.degree % 2 == 0) throw UsageError("--degree must be odd");
    if (a.dims.empty()) throw UsageError("--degree needs --dims");
    const int k = (*a.degree - 1) / 2;
    for (int d : a.dims) {
      if (d < 1) throw UsageError("dimensions must be >= 1");
      std::int64_t n = 0;
      if (a.seq == "std") {
        n = count_recursive(CountSequence::standard(), d + k, d);
      } else if (a.seq == "variant") {
        n = count_variant_recursion(d + k, d);
      } else {
        n = count_recursive(CountSequence::delayed(), d + k, d);
      }
      out << "ell=" << *a.degree << " d=" << d << ": " << n << '\n';
    }
    return kExitOk;
  }

  std::vector<int> ids;
  if (a.table) {
    if (*a.table < 1 || *a.table > 5) throw UsageError("--table must be 1..5");
    ids.push_back(*a.table);
  } else {
    ids = {1, 2, 3, 4, 5};
  }
  bool all_matched = true;
  for (int id : ids) {
    const auto which = static_cast<TableId>(id);
    if (!a.check) {
      print_table(table(which), out);
      continue;
    }
    const TableCheck check = check_table(which);
    for (const auto& m : check.mismatches) err << "table " << id << " mismatch: " << m << '\n';
    out << "table " << id << ": " << check.matched << " entries matched, " << check.mismatches.size()
        << " mismatched\n";
    all_matched = all_matched && check.mismatches.empty();
  }
  return all_matched ? kExitOk : kExitVerificationFailed;
}

struct BoundsArgs {
  std::vector<int> degrees;
  std::vector<int> dims;
};

int cmd_bounds(const BoundsArgs& a, std::ostream& out) {
  const std::vector<int> degrees = a.degrees.empty() ? std::vector<int>{5, 7} : a.degrees;
  const std::vector<int> dims = a.dims.empty() ? golden_table(TableId::kMoller).dims : a.dims;
  for (int ell : degrees) {
    for (int d : dims) {
      out << "ell=" << ell << " d=" << d << ": " << moller_bound(ell, d) << '\n';
    }
  }
  return kExitOk;
}

struct TransferArgs {
  std::string file;
  std::string to;
  std::vector<std::string> moments;
  std::optional<int> k;
  double radius = 1.0;
  std::string out;
};

int cmd_transfer(const TransferArgs& a, std::ostream& out) {
  const CubatureFormula rule = read_document(a.file);
  const int d = static_cast<int>(rule.dim());
  const int k = a.k ? *a.k : (rule.degree - 1) / 2;
  if (rule.degree < 2 * k + 1) {
    throw UsageError("input formula has degree " + std::to_string(rule.degree) + " < 2k+1 = " +
                     std::to_string(2 * k + 1));
  }
  const bool from_sphere = std::holds_alternative<SphereTarget>(rule.target);
  if (!from_sphere && !std::holds_alternative<ProductTarget>(rule.target)) {
    throw UsageError("transfer needs a product-weight or sphere formula");
  }

  CubatureFormula result;
  if (a.to == "sphere") {
    if (!a.moments.empty()) throw UsageError("--moments cannot be used with --to sphere");
    result = transfer_sphere(rule, a.radius, k);
  } else {
    if (a.to.empty() && a.moments.empty()) throw UsageError("transfer needs --to or --moments");
    const ProductWeight target = weight_from_flags(a.to.empty() ? "lebesgue" : a.to, a.moments, d);
    result = from_sphere ? transfer_from_sphere(rule, target, k) : transfer(rule, target, k);
  }
  const auto delta = static_cast<long long>(result.size()) - static_cast<long long>(rule.size());
  out << "knots: " << rule.size() << " -> " << result.size() << '\n';
  out << "delta: " << delta << " (bound " << std::setprecision(12) << transfer_added_bound(k, d) << ")\n";
  write_if_requested(result, a.out, out);
  return kExitOk;
}

int cmd_condition(const std::string& file, std::ostream& out) {
  const CubatureFormula rule = read_document(file);
  out << "condition: " << std::setprecision(12) << condition_number(rule) << '\n';
  return kExitOk;
}

struct SphereArgs {
  int degree = 5;
  int dim = 0;
  std::string source = "simplex";
  double radius = 1.0;
  std::string out;
};

int cmd_sphere(const SphereArgs& a, std::ostream& out) {
  if (a.dim < 2) throw UsageError("--dim must be >= 2");
  CubatureFormula rule;
  if (a.source == "simplex") {
    const SimplexFrame frame(a.dim);
    rule = a.degree == 5 ? mysovskikh_deg5(a.dim, frame, a.radius) : mysovskikh_deg7(a.dim, frame, a.radius);
  } else if (a.source == "projected") {
    rule = projected_smolyak_sphere(a.dim, (a.degree - 1) / 2, a.radius);
  } else {
    rule = a.degree == 5 ? product_deg5_sphere(a.dim, a.radius) : product_deg7_sphere(a.dim, a.radius);
  }
  out << "construction: " << rule.provenance.construction << '\n';
  out << "points: " << rule.size() << '\n';
  write_if_requested(rule, a.out, out);
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Few-point cubature formulas for symmetric weights and the sphere", "symcube"};
  app.require_subcommand(1);

  BuildArgs build;
  auto* build_cmd = app.add_subcommand("build", "Construct a degree-5 or degree-7 formula");
  build_cmd->add_option("--degree", build.degree, "Degree of exactness")->check(CLI::IsMember({5, 7}));
  build_cmd->add_option("--dim", build.dim, "Dimension d")->required();
  build_cmd->add_option("--weight", build.weight, "Built-in weight")->check(CLI::IsMember({"lebesgue", "gaussian"}));
  build_cmd->add_option("--moments", build.moments, "Moments file(s), one or one per coordinate")->delimiter(',');
  build_cmd->add_flag("--general", build.general, "Use the construction for arbitrary product weights");
  build_cmd->add_option("--out", build.out, "Write the formula document here");

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "Check polynomial exactness of a formula document");
  verify_cmd->add_option("file", verify.file, "Formula document")->required();
  verify_cmd->add_option("--degree", verify.degree, "Degree to check (default: the document's)");
  verify_cmd->add_option("--tol", verify.tol, "Relative tolerance (default: SYMCUBE_TOL or per degree)");
  verify_cmd->add_flag("--full", verify.full, "Evaluate every monomial, ignoring symmetry");
  verify_cmd->add_option("--report", verify.report, "Write a JSON report here");

  CountsArgs counts;
  auto* counts_cmd = app.add_subcommand("counts", "Render or check knot-count tables");
  counts_cmd->add_option("--table", counts.table, "Table number 1..5");
  counts_cmd->add_flag("--check", counts.check, "Compare against the embedded reference values");
  counts_cmd->add_option("--degree", counts.degree, "Odd degree for a custom row");
  counts_cmd->add_option("--dims", counts.dims, "Dimensions")->delimiter(',');
  counts_cmd->add_option("--seq", counts.seq, "Knot sequence")->check(CLI::IsMember({"std", "variant", "delayed"}));

  TransferArgs xfer;
  auto* transfer_cmd = app.add_subcommand("transfer", "Transfer a formula to another weight");
  transfer_cmd->add_option("file", xfer.file, "Formula document")->required();
  transfer_cmd->add_option("--to", xfer.to, "Target")->check(CLI::IsMember({"lebesgue", "gaussian", "sphere"}));
  transfer_cmd->add_option("--moments", xfer.moments, "Target moments file(s)")->delimiter(',');
  transfer_cmd->add_option("--k", xfer.k, "Degree parameter, degree = 2k+1")->check(CLI::IsMember({2, 3}));
  transfer_cmd->add_option("--radius", xfer.radius, "Sphere radius for --to sphere")->check(CLI::PositiveNumber);
  transfer_cmd->add_option("--out", xfer.out, "Write the formula document here");

  BoundsArgs bounds;
  auto* bounds_cmd = app.add_subcommand("bounds", "Lower bounds on the number of knots");
  bounds_cmd->add_option("--degree", bounds.degrees, "Odd degree(s)")->delimiter(',')->check(CLI::Range(3, 99));
  bounds_cmd->add_option("--dims", bounds.dims, "Dimensions")->delimiter(',')->check(CLI::Range(1, 100000));

  std::string condition_file;
  auto* condition_cmd = app.add_subcommand("condition", "Sum of |weights| over the total mass");
  condition_cmd->add_option("file", condition_file, "Formula document")->required();

  SphereArgs sphere;
  auto* sphere_cmd = app.add_subcommand("sphere", "Construct a formula for the sphere");
  sphere_cmd->add_option("--degree", sphere.degree, "Degree of exactness")->check(CLI::IsMember({5, 7}));
  sphere_cmd->add_option("--dim", sphere.dim, "Dimension d of the ambient space")->required();
  sphere_cmd->add_option("--source", sphere.source, "Construction")
      ->check(CLI::IsMember({"simplex", "projected", "product"}));
  sphere_cmd->add_option("--radius", sphere.radius, "Sphere radius")->check(CLI::PositiveNumber);
  sphere_cmd->add_option("--out", sphere.out, "Write the formula document here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitPrecondition;
  }

  try {
    if (*build_cmd) return cmd_build(build, out);
    if (*verify_cmd) return cmd_verify(verify, out);
    if (*counts_cmd) return cmd_counts(counts, out, err);
    if (*transfer_cmd) return cmd_transfer(xfer, out);
    if (*bounds_cmd) return cmd_bounds(bounds, out);
    if (*condition_cmd) return cmd_condition(condition_file, out);
    if (*sphere_cmd) return cmd_sphere(sphere, out);
  } catch (const DocumentError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitPrecondition;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  }
  return kExitPrecondition;
}

}  // namespace symcube::cli
