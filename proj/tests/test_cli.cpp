#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "doctest.h"
#include "symcube/compose.hpp"
#include "symcube_cli/commands.hpp"
#include "symcube_cli/document.hpp"
#include "symcube_cli/golden.hpp"

using namespace symcube;
using namespace symcube::cli;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

Result invoke(std::initializer_list<std::string> args) {
  std::vector<std::string> storage = {"symcube"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : storage) argv.push_back(s.c_str());
  std::ostringstream out;
  std::ostringstream err;
  Result r;
  r.code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

/// A scratch directory removed when the test case ends.
struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("symcube_cli_" + std::to_string(::getpid()) + "_" +
                                        std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

}  // namespace

TEST_SUITE("cli build") {
  TEST_CASE("degree 5, d = 10, Lebesgue") {
    const Result r = invoke({"build", "--degree", "5", "--dim", "10", "--weight", "lebesgue"});
    CHECK(r.code == kExitOk);
    CHECK(contains(r.out, "knots: 171"));
    CHECK(contains(r.out, "moller bound: 111"));
    CHECK(contains(r.out, "condition: "));
  }

  TEST_CASE("degree 7, d = 20, Gaussian") {
    const Result r = invoke({"build", "--degree", "7", "--dim", "20", "--weight", "gaussian"});
    CHECK(r.code == kExitOk);
    CHECK(contains(r.out, "knots: 5601"));
  }

  TEST_CASE("dimension below the minimum") {
    const Result r = invoke({"build", "--degree", "5", "--dim", "3"});
    CHECK(r.code == kExitPrecondition);
    CHECK(contains(r.err, "d >= 4"));
  }

  TEST_CASE("flag errors") {
    CHECK(invoke({"build", "--degree", "6", "--dim", "5"}).code == kExitPrecondition);
    CHECK(invoke({"build", "--dim", "5", "--weight", "cauchy"}).code == kExitPrecondition);
    CHECK(invoke({"frobnicate"}).code == kExitPrecondition);
    CHECK(invoke({}).code == kExitPrecondition);
    CHECK(invoke({"--help"}).code == kExitOk);
  }

  TEST_CASE("moments files") {
    TempDir tmp;
    const std::string good = tmp.file("m.json");
    write_text(good, R"({"version": 1, "label": "legendre", "half_width": 1.0,
      "moments": [2.0, 0.6666666666666666, 0.4, 0.2857142857142857, 0.2222222222222222,
                  0.18181818181818182, 0.15384615384615385, 0.13333333333333333]})");
    const Result r = invoke({"build", "--dim", "6", "--moments", good, "--general"});
    CHECK(r.code == kExitOk);
    const Result fs = invoke({"build", "--dim", "6", "--moments", good});
    CHECK(fs.code == kExitOk);
    CHECK(contains(fs.out, "knots: 79"));

    const std::string bad = tmp.file("bad.json");
    write_text(bad, R"({"version": 1, "half_width": 1.0, "moments": [2.0, "x"]})");
    CHECK(invoke({"build", "--dim", "6", "--moments", bad}).code == kExitIo);
    write_text(bad, "{ not json");
    CHECK(invoke({"build", "--dim", "6", "--moments", bad}).code == kExitIo);
    CHECK(invoke({"build", "--dim", "6", "--moments", tmp.file("missing.json")}).code == kExitIo);
    CHECK(invoke({"build", "--dim", "6", "--moments", good + "," + good, "--general"}).code == kExitPrecondition);
  }
}

TEST_SUITE("cli verify") {
  TEST_CASE("fresh build passes at its degree, fails two above") {
    TempDir tmp;
    const std::string f = tmp.file("rule.json");
    REQUIRE(invoke({"build", "--degree", "5", "--dim", "8", "--out", f}).code == kExitOk);
    const Result ok = invoke({"verify", f});
    CHECK(ok.code == kExitOk);
    CHECK(contains(ok.out, "PASS"));
    const Result bad = invoke({"verify", f, "--degree", "7"});
    CHECK(bad.code == kExitVerificationFailed);
    CHECK(contains(bad.out, "worst monomial: x^("));

    const std::string report = tmp.file("report.json");
    CHECK(invoke({"verify", f, "--full", "--report", report}).code == kExitOk);
    const Json doc = Json::parse(slurp(report));
    CHECK(doc["version"] == 1);
    CHECK(doc["passed"] == true);
    CHECK(doc["evaluated"] == doc["monomials"]);
  }

  TEST_CASE("tolerance below the conditioning floor fails") {
    TempDir tmp;
    const std::string f = tmp.file("rule7.json");
    REQUIRE(invoke({"build", "--degree", "7", "--dim", "10", "--weight", "gaussian", "--out", f}).code == kExitOk);
    CHECK(invoke({"verify", f}).code == kExitOk);
    CHECK(invoke({"verify", f, "--tol", "1e-15"}).code == kExitVerificationFailed);
  }

  TEST_CASE("SYMCUBE_TOL overrides the default tolerance") {
    TempDir tmp;
    const std::string f = tmp.file("rule.json");
    REQUIRE(invoke({"build", "--degree", "5", "--dim", "6", "--out", f}).code == kExitOk);
    ::setenv("SYMCUBE_TOL", "1e-20", 1);
    CHECK(invoke({"verify", f}).code == kExitVerificationFailed);
    CHECK(invoke({"verify", f, "--tol", "1e-9"}).code == kExitOk);
    ::setenv("SYMCUBE_TOL", "banana", 1);
    CHECK(invoke({"verify", f}).code == kExitPrecondition);
    ::unsetenv("SYMCUBE_TOL");
    CHECK(invoke({"verify", f}).code == kExitOk);
  }

  TEST_CASE("schema violations") {
    TempDir tmp;
    const std::string f = tmp.file("broken.json");
    write_text(f, R"({"version": 1, "dim": 2, "degree": 1, "points": [[0, 0]], "weights": [1, 2]})");
    CHECK(invoke({"verify", f}).code == kExitIo);
    write_text(f, R"({"version": 9, "dim": 2, "degree": 1, "points": [], "weights": []})");
    CHECK(invoke({"verify", f}).code == kExitIo);
    write_text(f, R"({"version": 1, "dim": 2, "degree": 1, "target": {"kind": "product", "params": {}},
                      "points": [[0, 0, 0]], "weights": [1]})");
    CHECK(invoke({"verify", f}).code == kExitIo);
    CHECK(invoke({"verify", tmp.file("absent.json")}).code == kExitIo);
  }
}

TEST_SUITE("cli counts and bounds") {
  TEST_CASE("golden checks") {
    const Result one = invoke({"counts", "--table", "1", "--check"});
    CHECK(one.code == kExitOk);
    CHECK(contains(one.out, "40 entries matched"));
    const Result all = invoke({"counts", "--check"});
    CHECK(all.code == kExitOk);
    for (int id = 1; id <= 5; ++id) CHECK(check_table(static_cast<TableId>(id)).mismatches.empty());
  }

  TEST_CASE("custom rows") {
    CHECK(contains(invoke({"counts", "--degree", "9", "--dims", "25", "--seq", "delayed"}).out, ": 226951"));
    CHECK(contains(invoke({"counts", "--degree", "3", "--dims", "5"}).out, ": 11"));
    CHECK(contains(invoke({"counts", "--degree", "7", "--dims", "25", "--seq", "variant"}).out, ": 19751"));
    CHECK(invoke({"counts", "--degree", "4", "--dims", "5"}).code == kExitPrecondition);
    CHECK(invoke({"counts", "--table", "9"}).code == kExitPrecondition);
  }

  TEST_CASE("rendered tables") {
    const Result r = invoke({"counts", "--table", "4"});
    CHECK(r.code == kExitOk);
    CHECK(contains(r.out, "404001"));
    CHECK(contains(r.out, "-"));
  }

  TEST_CASE("bounds") {
    CHECK(contains(invoke({"bounds", "--degree", "7", "--dims", "50"}).out, ": 44300"));
    CHECK(contains(invoke({"bounds"}).out, "ell=7 d=100: 343600"));
  }
}

TEST_SUITE("cli transfer, sphere, condition") {
  TEST_CASE("transfer pipeline") {
    TempDir tmp;
    const std::string in = tmp.file("l10.json");
    const std::string out = tmp.file("g10.json");
    REQUIRE(invoke({"build", "--degree", "5", "--dim", "10", "--out", in}).code == kExitOk);
    const Result t = invoke({"transfer", in, "--to", "gaussian", "--k", "2", "--out", out});
    CHECK(t.code == kExitOk);
    CHECK(contains(t.out, "(bound 160)"));
    CHECK(read_document(out).size() <= 171 + 160);
    CHECK(invoke({"verify", out, "--degree", "5", "--tol", "1e-9"}).code == kExitOk);

    const Result same = invoke({"transfer", in, "--to", "lebesgue"});
    CHECK(contains(same.out, "delta: 0 "));

    const std::string s = tmp.file("s10.json");
    CHECK(invoke({"transfer", in, "--to", "sphere", "--out", s}).code == kExitOk);
    CHECK(invoke({"verify", s}).code == kExitOk);
    CHECK(invoke({"transfer", s, "--to", "lebesgue", "--out", out}).code == kExitOk);
    CHECK(invoke({"verify", out}).code == kExitOk);
    CHECK(invoke({"transfer", in, "--k", "3"}).code == kExitPrecondition);
  }

  TEST_CASE("sphere rules") {
    TempDir tmp;
    const std::string f = tmp.file("s.json");
    const Result r = invoke({"sphere", "--degree", "5", "--dim", "10", "--source", "simplex", "--out", f});
    CHECK(r.code == kExitOk);
    CHECK(contains(r.out, "points: 132"));
    CHECK(invoke({"verify", f}).code == kExitOk);
    CHECK(contains(invoke({"sphere", "--degree", "5", "--dim", "10", "--source", "projected"}).out, "points: 200"));
    CHECK(contains(invoke({"sphere", "--degree", "7", "--dim", "6", "--source", "product"}).out, "points: 232"));
    CHECK(invoke({"sphere", "--degree", "7", "--dim", "6", "--out", f}).code == kExitOk);
    CHECK(invoke({"verify", f}).code == kExitOk);
    CHECK(invoke({"sphere", "--degree", "5", "--dim", "3"}).code == kExitPrecondition);
  }

  TEST_CASE("condition of a positive constant-exact rule") {
    TempDir tmp;
    const std::string f = tmp.file("s5.json");
    REQUIRE(invoke({"sphere", "--degree", "5", "--dim", "5", "--out", f}).code == kExitOk);
    CHECK(contains(invoke({"condition", f}).out, "condition: 1\n"));
  }
}

TEST_SUITE("documents") {
  TEST_CASE("round trip is bit exact") {
    const CubatureFormula rule = build_deg7(Weight1D::gaussian(), 6);
    const CubatureFormula back = from_document(Json::parse(to_document(rule).dump()));
    const CubatureFormula sorted = sorted_points(rule);
    REQUIRE(back.size() == sorted.size());
    CHECK(back.points.coords() == sorted.points.coords());
    CHECK(back.weights == sorted.weights);
    CHECK(back.degree == rule.degree);
    CHECK(std::get<ProductTarget>(back.target).weight == std::get<ProductTarget>(rule.target).weight);
    CHECK(back.provenance.construction == rule.provenance.construction);
    CHECK(back.provenance.raw_count == rule.provenance.raw_count);
  }

  TEST_CASE("custom and scaled weights round trip") {
    const Weight1D custom = Weight1D::from_moments("c", kInfinity, {1.0, 0.5, 0.75});
    CHECK(weight_from_json(weight_to_json(custom)) == custom);
    CHECK(weight_to_json(custom)["half_width"].is_null());
    const Weight1D scaled = Weight1D::gaussian().scaled(0.5);
    CHECK(weight_from_json(weight_to_json(scaled)) == scaled);
    const Weight1D both = custom.scaled(3.0);
    CHECK(weight_from_json(weight_to_json(both)) == both);
  }

  TEST_CASE("identical commands write identical bytes") {
    TempDir tmp;
    const std::string a = tmp.file("a.json");
    const std::string b = tmp.file("b.json");
    REQUIRE(invoke({"build", "--degree", "5", "--dim", "9", "--weight", "gaussian", "--out", a}).code == kExitOk);
    REQUIRE(invoke({"build", "--degree", "5", "--dim", "9", "--weight", "gaussian", "--out", b}).code == kExitOk);
    CHECK(slurp(a) == slurp(b));
    const Json doc = Json::parse(slurp(a));
    CHECK(doc["counts"]["merged"] == 9 * 9 + 7 * 9 + 1);
    CHECK(doc["target"]["kind"] == "product");
    CHECK(doc["weight"]["factors"].size() == 1);
  }

  TEST_CASE("points are sorted by norm, then coordinates") {
    const CubatureFormula s = sorted_points(build_deg5(Weight1D::lebesgue(), 5));
    for (std::size_t i = 1; i < s.size(); ++i) {
      double a = 0.0;
      double b = 0.0;
      for (std::size_t j = 0; j < s.dim(); ++j) {
        a += s.points[i - 1][j] * s.points[i - 1][j];
        b += s.points[i][j] * s.points[i][j];
      }
      CHECK(a <= b);
    }
  }
}
