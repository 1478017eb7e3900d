#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "eigenorient/errors.hpp"
#include "eigenorient/io.hpp"
#include "eigenorient/synth.hpp"

using namespace eigenorient;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const char* name) {
  const fs::path dir = fs::temp_directory_path() / "eigenorient_io_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("matrix CSV: bitwise round trip at full precision") {
  const fs::path dir = temp_dir("roundtrip");
  const Matrix m = random_orthonormal(6, 17);
  write_matrix_csv(dir / "m.csv", m);
  const Matrix back = read_matrix_csv(dir / "m.csv");
  REQUIRE(back.rows() == 6);
  REQUIRE(back.cols() == 6);
  CHECK(max_abs_diff(m, back) == 0.0);

  const std::string once = matrix_to_csv(m);
  const std::string twice = matrix_to_csv(back);
  CHECK(once == twice);
}

TEST_CASE("matrix CSV: parse errors carry line and column") {
  const fs::path dir = temp_dir("parse");
  {
    std::ofstream out(dir / "bad.csv");
    out << "1.0,2.0\n3.0,oops\n";
  }
  try {
    read_matrix_csv(dir / "bad.csv");
    FAIL("expected a ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 2);
  }

  {
    std::ofstream out(dir / "ragged.csv");
    out << "1.0,2.0\n3.0\n";
  }
  CHECK_THROWS_AS(read_matrix_csv(dir / "ragged.csv"), ParseError);
  CHECK_THROWS_AS(read_matrix_csv(dir / "missing.csv"), std::invalid_argument);
}

TEST_CASE("series bundle: directory round trip") {
  const fs::path dir = temp_dir("series");
  SeriesBundle bundle;
  bundle.dim = 4;
  bundle.timestamps = {0.0, 1.0, 2.0};
  for (int t = 0; t < 3; ++t) {
    bundle.bases.push_back(random_orthonormal(4, 100 + static_cast<std::uint64_t>(t)));
    bundle.eigenvalues.push_back({4.0, 3.0, 2.0, 1.0});
  }
  bundle.method = "arctan2";
  bundle.records = 250;
  write_series(dir, bundle);

  const SeriesBundle back = read_series(dir);
  CHECK(back.dim == 4);
  CHECK(back.timestamps == bundle.timestamps);
  CHECK(back.eigenvalues == bundle.eigenvalues);
  REQUIRE(back.bases.size() == 3);
  for (size_t t = 0; t < 3; ++t) CHECK(max_abs_diff(back.bases[t], bundle.bases[t]) == 0.0);
  CHECK(back.method.value() == "arctan2");
  CHECK(back.records.value() == 250);
  CHECK_FALSE(back.has_orientation());
}

TEST_CASE("series bundle: inconsistent manifests are rejected") {
  const fs::path dir = temp_dir("badseries");
  SeriesBundle bundle;
  bundle.dim = 3;
  bundle.timestamps = {0.0};
  bundle.eigenvalues = {{3.0, 2.0, 1.0}};
  bundle.bases.push_back(Matrix::identity(3));
  write_series(dir, bundle);

  // Corrupt the manifest: drop a timestamp.
  {
    std::ofstream out(dir / "manifest.json");
    out << R"({"dim":3,"timestamps":[],"eigenvalues":[[3.0,2.0,1.0]],"bases":["basis_0000.csv"]})";
  }
  CHECK_THROWS_AS(read_series(dir), ParseError);
}

TEST_CASE("atomic_write_text: no stale temp file survives") {
  const fs::path dir = temp_dir("atomic");
  atomic_write_text(dir / "out.txt", "payload");
  CHECK(fs::exists(dir / "out.txt"));
  CHECK_FALSE(fs::exists(dir / "out.txt.tmp"));
  std::ifstream in(dir / "out.txt");
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(content == "payload");
}

TEST_CASE("format_double: round-trippable decimals") {
  for (double x : {1.0 / 3.0, 2.0, -1e-17, 3.141592653589793, 0.1}) {
    const std::string s = format_double(x);
    CHECK(std::stod(s) == x);
  }
}
