#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "opclass/matrix_io.hpp"
#include "opclass/serialize.hpp"
#include "support.hpp"

using namespace opclass;
using namespace testing_support;

namespace fs = std::filesystem;

namespace {

const Complex I{0, 1};

fs::path scratch_dir() {
  const auto dir = fs::temp_directory_path() / "opclass_test_io";
  fs::create_directories(dir);
  return dir;
}

Matrix from_mm(const std::string& text) {
  std::istringstream in(text);
  return parse_matrix_market(in);
}

}  // namespace

TEST_CASE("json matrix parsing") {
  const Matrix t = parse_json_matrix(R"({"dim": 2, "entries": [[0,0],[1,0],[0,0],[0,0]]})");
  CHECK(t == j2());
  const Matrix c = parse_json_matrix(R"({"dim": 1, "entries": [[1.5,-2]]})");
  CHECK(c(0, 0) == Complex(1.5, -2));

  CHECK(error_code([] { parse_json_matrix(R"({"dim": 2, "entries": [[0,0],[1,0],[0,0]]})"); }) == ErrorCode::ParseError);
  CHECK(error_code([] { parse_json_matrix(R"({"dim": 2, "entries": [[0,0],[1,0],[0,0],[0]]})"); }) ==
        ErrorCode::ParseError);
  CHECK(error_code([] { parse_json_matrix("not json"); }) == ErrorCode::ParseError);
  CHECK(error_code([] { parse_json_matrix(R"({"entries": []})"); }) == ErrorCode::ParseError);
  CHECK(error_code([] { parse_json_matrix(R"({"dim": 0, "entries": []})"); }) == ErrorCode::ParseError);
}

TEST_CASE("matrix market parsing") {
  const Matrix coord = from_mm(
      "%%MatrixMarket matrix coordinate complex general\n"
      "% J2 scaled\n"
      "2 2 1\n"
      "1 2 3.0 -1.0\n");
  CHECK(coord == mat({{0, Complex(3, -1)}, {0, 0}}));

  // array layout is column-major
  const Matrix arr = from_mm(
      "%%MatrixMarket matrix array complex general\n"
      "2 2\n"
      "1 0\n"
      "2 0\n"
      "3 0\n"
      "0 1\n");
  CHECK(arr == mat({{1, 3}, {2, I}}));

  CHECK(error_code([] { from_mm("%%MatrixMarket matrix coordinate complex general\n2 3 0\n"); }) ==
        ErrorCode::ParseError);
  CHECK(error_code([] { from_mm("%%MatrixMarket matrix array complex general\n2 3\n"); }) == ErrorCode::ParseError);
  CHECK(error_code([] { from_mm("%%MatrixMarket matrix coordinate complex general\n2 2 1\n3 1 1 0\n"); }) ==
        ErrorCode::ParseError);
  CHECK(error_code([] { from_mm("garbage\n"); }) == ErrorCode::ParseError);
  CHECK(error_code([] { from_mm("%%MatrixMarket matrix array complex general\n2 2\n1 0\n"); }) ==
        ErrorCode::ParseError);
}

TEST_CASE("format detection") {
  CHECK(format_from_path("a.mtx") == MatrixFormat::MatrixMarket);
  CHECK(format_from_path("a.mm") == MatrixFormat::MatrixMarket);
  CHECK(format_from_path("a.json") == MatrixFormat::Json);
  CHECK(parse_format("json") == MatrixFormat::Json);
  CHECK(parse_format("matrix-market") == MatrixFormat::MatrixMarket);
  CHECK(error_code([] { parse_format("csv"); }).has_value());
}

TEST_CASE("file round trip is exact") {
  Matrix t(3, 3);
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j) t(i, j) = Complex(1.0 / (1 + i + 2 * j), std::sqrt(2.0) * (i - j));
  const auto dir = scratch_dir();
  for (const char* name : {"t.json", "t.mtx"}) {
    const auto path = dir / name;
    write_matrix(path, t);
    CHECK(read_matrix(path) == t);
  }
  const auto forced = dir / "forced.txt";
  write_matrix(forced, t, MatrixFormat::MatrixMarket);
  CHECK(read_matrix(forced, MatrixFormat::MatrixMarket) == t);
  CHECK(error_code([&] { read_matrix(dir / "missing.json"); }).has_value());

  write_file_atomic(dir / "atomic.txt", "hello");
  std::ifstream in(dir / "atomic.txt");
  std::string s;
  in >> s;
  CHECK(s == "hello");
  fs::remove_all(dir);
}

TEST_CASE("verdict json") {
  const auto c = classify_all(j2(), {1});
  const Json j = to_json(c);
  REQUIRE(j.contains("verdicts"));
  const auto& v = j["verdicts"]["KQuasiParanormal(1)"];
  CHECK(v["status"] == "Member");
  CHECK(v["class"] == "KQuasiParanormal");
  for (const char* key : {"class", "params", "status", "defect", "witness", "oracle", "seed"}) CHECK(v.contains(key));
  CHECK(j["verdicts"]["Normal"]["status"] == "NonMember");
  CHECK(j["chain_violations"].empty());
}

TEST_CASE("decomposition json") {
  const Matrix t = direct_sum(Matrix(diag({5})), j2());
  const auto d = normal_pure_split(t);
  const Json j = to_json(d);
  for (const char* key : {"Q", "block_dims", "labels", "blocks", "residuals"}) CHECK(j.contains(key));
  CHECK(j["block_dims"] == Json::array({1, 2}));
  CHECK(j["labels"] == Json::array({"NormalPart", "PurePart"}));
  CHECK(matrix_from_json(j["Q"]) == d.change_of_basis);
  for (const char* key : {"reassembly", "normality", "nilpotency"}) CHECK(j["residuals"].contains(key));
}

TEST_CASE("matrix and gen spec json round trip") {
  const Matrix t = mat({{1, I}, {-0.25, Complex(1e-300, 3e200)}});
  CHECK(matrix_from_json(matrix_to_json(t)) == t);

  GenSpec spec{.kind = "normal", .dim = 2, .seed = 99, .params = {{"k", 2}}, .eigenvalues = {1, I}};
  const GenSpec back = gen_spec_from_json(to_json(spec));
  CHECK(back.kind == spec.kind);
  CHECK(back.dim == spec.dim);
  CHECK(back.seed == spec.seed);
  CHECK(back.params == spec.params);
  CHECK(back.eigenvalues == spec.eigenvalues);
  GenSpec root{.kind = "scalar-root", .dim = 3, .seed = 1, .params = {{"n", 3}}, .lambda = Complex(8, -1)};
  CHECK(gen_spec_from_json(to_json(root)).lambda == root.lambda);
  CHECK(error_code([] { gen_spec_from_json(Json::parse(R"({"dim": 2})")); }) == ErrorCode::InvalidSpec);
}

TEST_CASE("report json") {
  const auto r = verify_fuglede_putnam(3, 4, 1);
  const Json j = to_json(r);
  for (const char* key : {"theorem_id", "trials", "passes", "skips", "failures", "tolerances", "wall_time_ms"})
    CHECK(j.contains(key));
  CHECK(j["theorem_id"] == "fuglede-putnam");
  CHECK(j["trials"] == 3);
  CHECK(j["tolerances"]["decision"] == 1e-8);
}
