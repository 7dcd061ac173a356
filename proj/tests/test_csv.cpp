#include <cstdio>
#include <fstream>
#include <string>

#include "doctest.h"
#include "ensnap/csv.hpp"
#include "ensnap/datagen.hpp"
#include "ensnap/dataset.hpp"

using namespace ensnap;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name, const std::string& text)
      : path("csvtest_" + name) {
    std::ofstream out(path);
    out << text;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("rows with missing fields are dropped") {
  TempFile f("missing.csv", "a,b,c\n1,2,3\n4,,6\n7,8,9\n");
  const auto data = load_csv(f.path, 2);
  REQUIRE(data.rows == 2);
  CHECK(data.cols == 2);
  CHECK(data.targets[0] == 3.0);
  CHECK(data.targets[1] == 9.0);
  CHECK(data.input(1, 0) == 7.0);

  TempFile g("markers.csv", "1,2,3\nNA,2,3\n4,?,6\n");
  CHECK(load_csv(g.path, 2).rows == 1);
}

TEST_CASE("numeric first line is data, not header") {
  TempFile f("nohdr.csv", "1,2\n3,4\n");
  CHECK(load_csv(f.path, 1).rows == 2);
}

TEST_CASE("unparsable rows are reported with their line number") {
  TempFile f("bad.csv", "a,b\n1,2\n3,zork\n");
  try {
    load_csv(f.path, 1);
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("csv error cases") {
  TempFile f("small.csv", "1,2\n3,4\n");
  CHECK_THROWS_AS(load_csv(f.path, 5), std::out_of_range);
  CHECK_THROWS(load_csv("does_not_exist.csv", 0));
  TempFile g("empty.csv", "\n\n");
  CHECK_THROWS(load_csv(g.path, 0));
  TempFile h("ragged.csv", "1,2,3\n4,5\n");
  CHECK_THROWS(load_csv(h.path, 0));
}

TEST_CASE("standardized inputs have zero mean and unit variance") {
  TempFile f("std.csv", "1,10,0\n2,20,0\n3,30,0\n4,44,0\n");
  const auto data = load_csv(f.path, 2, true);
  for (std::size_t c = 0; c < data.cols; ++c) {
    double mean = 0.0;
    for (std::size_t r = 0; r < data.rows; ++r) mean += data.input(r, c);
    mean /= static_cast<double>(data.rows);
    double var = 0.0;
    for (std::size_t r = 0; r < data.rows; ++r) {
      const double d = data.input(r, c) - mean;
      var += d * d;
    }
    var /= static_cast<double>(data.rows);
    CHECK(std::abs(mean) <= 1e-12);
    CHECK(std::abs(var - 1.0) <= 1e-12);
  }
}

TEST_CASE("save and load round-trip is exact") {
  const auto data = gen_friedman1(50, NoiseSpec::gaussian_sigma(1.0), 3);
  const std::string path = "csvtest_roundtrip.csv";
  save_csv(data, path);
  const auto back = load_csv(path, data.cols);
  std::remove(path.c_str());
  REQUIRE(back.rows == data.rows);
  REQUIRE(back.cols == data.cols);
  CHECK(back.inputs == data.inputs);
  CHECK(back.targets == data.targets);
}

TEST_CASE("split_csv_line trims fields") {
  const auto fields = split_csv_line(" 1 , 2.5 ,,x ");
  REQUIRE(fields.size() == 4);
  CHECK(fields[0] == "1");
  CHECK(fields[1] == "2.5");
  CHECK(fields[2] == "");
  CHECK(fields[3] == "x");
}

TEST_CASE("dataset statistics and gather") {
  RegressionDataset data;
  data.rows = 4;
  data.cols = 2;
  data.inputs = {1, 5, 2, 5, 3, 5, 4, 5};  // second column is constant
  data.targets = {10, 20, 30, 40};

  const auto stats = compute_stats(data);
  CHECK(stats.input_mean[0] == 2.5);
  CHECK(stats.input_std[1] == 1.0);  // zero-variance guard
  CHECK(stats.target_mean == 25.0);

  RegressionDataset copy = data;
  apply_stats(copy, stats);
  CHECK(std::abs(mean_of(copy.targets)) <= 1e-12);
  CHECK(std::abs(variance_of(copy.targets) - 1.0) <= 1e-12);
  CHECK(copy.input(0, 1) == 0.0);

  const std::vector<std::size_t> picks{3, 0, 3};
  const auto sub = data.gather(picks);
  REQUIRE(sub.rows == 3);
  CHECK(sub.targets[0] == 40.0);
  CHECK(sub.targets[1] == 10.0);
  CHECK(sub.targets[2] == 40.0);
  CHECK(sub.input(0, 0) == 4.0);

  CHECK(variance_of(std::vector<double>{1, 2, 3, 4}) == 1.25);

  RegressionDataset broken = data;
  broken.targets[1] = std::nan("");
  CHECK_THROWS_AS(broken.validate(), std::invalid_argument);
  broken = data;
  broken.targets.pop_back();
  CHECK_THROWS_AS(broken.validate(), std::invalid_argument);
}
