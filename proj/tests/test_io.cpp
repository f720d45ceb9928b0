#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

#include "blochsim/io.hpp"

using namespace blochsim;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "blochsim_io_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("scientific formatting is full precision") {
  CHECK(format_sci(1.0) == "1.0000000000000000e+00");
  CHECK(format_sci(0.1) == "1.0000000000000001e-01");
  CHECK(format_sci(-2.5e-15) == "-2.5000000000000000e-15");
  // 17 significant digits round-trip any double
  const double v = 0.123456789012345678;
  CHECK(std::stod(format_sci(v)) == v);
}

TEST_CASE("atomic writes create parents and leave no temp files") {
  const fs::path p = temp_file("deep/nested/file.txt");
  fs::remove_all(p.parent_path().parent_path());
  atomic_write_file(p, "payload");
  CHECK(slurp(p) == "payload");
  int entries = 0;
  for (const auto& e : fs::directory_iterator(p.parent_path())) {
    (void)e;
    ++entries;
  }
  CHECK(entries == 1);

  atomic_write_file(p, "replaced");
  CHECK(slurp(p) == "replaced");
}

TEST_CASE("matrix CSV round trip") {
  RealMat m(2, 3);
  m(0, 0) = 1.5;
  m(0, 1) = -2.25;
  m(0, 2) = 1e-300;
  m(1, 0) = 0.0;
  m(1, 1) = 3.141592653589793;
  m(1, 2) = -1.0;
  const std::string csv = matrix_csv(m, "demo matrix");
  CHECK(csv.rfind("# demo matrix\n", 0) == 0);

  const fs::path p = temp_file("roundtrip.csv");
  atomic_write_file(p, csv);
  const RealMat back = read_matrix_csv(p);
  REQUIRE(back.rows() == 2);
  REQUIRE(back.cols() == 3);
  CHECK(max_abs_diff(m, back) == 0.0);
}

TEST_CASE("counts CSV uses exact integers") {
  Mat<std::int64_t> c(2, 2);
  c(0, 0) = 0;
  c(0, 1) = 123456789012345;
  c(1, 0) = 123456789012345;
  c(1, 1) = 7;
  const std::string csv = counts_csv(c, "counts");
  CHECK(csv.find("123456789012345") != std::string::npos);
  CHECK(csv.find("e+") == std::string::npos);
}

TEST_CASE("violation cells at or below zero are blank") {
  RealMat v(2, 2);
  v(0, 0) = -0.5;
  v(0, 1) = 0.25;
  v(1, 0) = 0.0;
  v(1, 1) = 1.0;
  const std::string csv = violations_csv(v, "v");
  std::istringstream ss(csv);
  std::string header, row0, row1;
  std::getline(ss, header);
  std::getline(ss, row0);
  std::getline(ss, row1);
  CHECK(row0 == "," + format_sci(0.25));
  CHECK(row1 == "," + format_sci(1.0));
}

TEST_CASE("undefined significance cells are blank") {
  RealMat s(1, 3);
  s(0, 0) = 2.0;
  s(0, 1) = std::numeric_limits<double>::quiet_NaN();
  s(0, 2) = -1.0;
  const std::string csv = significance_csv(s, "sig");
  std::istringstream ss(csv);
  std::string header, row;
  std::getline(ss, header);
  std::getline(ss, row);
  CHECK(row == format_sci(2.0) + "," + "," + format_sci(-1.0));
}

TEST_CASE("CSV reader tolerates comments, CRLF, and blanks") {
  const fs::path p = temp_file("tolerant.csv");
  atomic_write_file(p, "# first comment\r\n1.0,,3\r\n# interior comment\n4,5,6\n");
  const RealMat m = read_matrix_csv(p);
  REQUIRE(m.rows() == 2);
  REQUIRE(m.cols() == 3);
  CHECK(m(0, 0) == 1.0);
  CHECK(m(0, 1) == 0.0);  // blank reads as zero
  CHECK(m(1, 2) == 6.0);
}

TEST_CASE("CSV reader reports structural errors") {
  const fs::path ragged = temp_file("ragged.csv");
  atomic_write_file(ragged, "1,2,3\n4,5\n");
  CHECK_THROWS_WITH_AS(read_matrix_csv(ragged), doctest::Contains("row 2"), std::runtime_error);

  const fs::path bad = temp_file("badnum.csv");
  atomic_write_file(bad, "1,oops\n");
  CHECK_THROWS_AS(read_matrix_csv(bad), std::runtime_error);

  CHECK_THROWS_AS(read_matrix_csv(temp_file("missing.csv")), std::runtime_error);

  const fs::path empty = temp_file("empty.csv");
  atomic_write_file(empty, "# only a comment\n");
  CHECK_THROWS_AS(read_matrix_csv(empty), std::runtime_error);
}

TEST_CASE("grayscale pixmap renders blocks against the matrix maximum") {
  RealMat m(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = 1.0;
  const int block = 4;
  const std::string pix = pixmap_heatmap(m, block, false);

  CHECK(pix.rfind("P5\n", 0) == 0);
  CHECK(pix.find("# max=" + format_sci(1.0)) != std::string::npos);
  CHECK(pix.find("\n8 8\n255\n") != std::string::npos);

  const std::size_t data_start = pix.find("\n255\n") + 5;
  REQUIRE(pix.size() - data_start == 64);  // 8x8 single-byte pixels
  const unsigned char first = pix[data_start];
  const unsigned char last = pix[pix.size() - 1];
  const unsigned char off_block = pix[data_start + 7];  // row 0, column 7: zero cell
  CHECK(first == 255);
  CHECK(last == 255);
  CHECK(off_block == 0);
}

TEST_CASE("all-zero pixmap notes a zero maximum") {
  const RealMat zero(3, 3);
  const std::string pix = pixmap_heatmap(zero, 2, false);
  CHECK(pix.find("# max=" + format_sci(0.0)) != std::string::npos);
  const std::size_t data_start = pix.find("\n255\n") + 5;
  for (std::size_t i = data_start; i < pix.size(); ++i) CHECK(pix[i] == '\0');
}

TEST_CASE("palette pixmap is three channels") {
  RealMat m(2, 2);
  m(0, 1) = 2.0;
  const std::string pix = pixmap_heatmap(m, 3, true);
  CHECK(pix.rfind("P6\n", 0) == 0);
  const std::size_t data_start = pix.find("\n255\n") + 5;
  CHECK(pix.size() - data_start == 6u * 6u * 3u);
}

}  // TEST_SUITE
