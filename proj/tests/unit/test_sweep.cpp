#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "corrsense/errors.hpp"
#include "corrsense/sweep.hpp"

using namespace corrsense;
using doctest::Approx;

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

TEST_CASE("number formatting") {
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
}

TEST_CASE("sweep spec validation and energy grid") {
  SweepSpec spec;
  spec.detector_counts = {2};
  CHECK_NOTHROW(spec.validate());
  const auto grid = spec.energies();
  CHECK(grid.size() == 60);
  CHECK(grid.front() == Approx(1e-4));
  CHECK(grid.back() == Approx(10.0));
  CHECK(grid[1] / grid[0] == Approx(grid[59] / grid[58]));

  spec.energy_points = 1;
  CHECK_THROWS_AS(spec.validate(), UsageError);
  spec.energy_min = spec.energy_max = 0.3;
  CHECK_NOTHROW(spec.validate());
  CHECK(spec.energies() == std::vector<double>{0.3});

  SweepSpec bad;
  CHECK_THROWS(bad.validate());
  bad.detector_counts = {0};
  CHECK_THROWS(bad.validate());
}

TEST_CASE("sweep CSV layout") {
  SweepSpec spec;
  spec.detector_counts = {2, 4, 8};
  const auto rows = run_sweep(spec);
  REQUIRE(rows.size() == 180);
  CHECK(rows[0].detectors == 2);
  CHECK(rows[60].detectors == 4);
  std::ostringstream out;
  write_sweep_csv(out, rows, spec.outputs);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "K,E,quantum,heterodyne,homodyne,photon,ratio_q_het");
  int count = 0;
  while (std::getline(in, line)) {
    const auto cells = split(line, ',');
    REQUIRE(cells.size() == 7);
    const double q = std::stod(cells[2]);
    const double ph = std::stod(cells[5]);
    CHECK(q >= ph);
    CHECK(ph >= 0.0);
    ++count;
  }
  CHECK(count == 180);
}

TEST_CASE("sweep CSV leaves unselected columns empty") {
  SweepSpec spec;
  spec.detector_counts = {1};
  spec.energy_min = spec.energy_max = 0.5;
  spec.energy_points = 1;
  spec.outputs = {ExponentKind::heterodyne};
  std::ostringstream out;
  write_sweep_csv(out, run_sweep(spec), spec.outputs);
  CHECK(out.str() == "K,E,quantum,heterodyne,homodyne,photon,ratio_q_het\n1,0.5,,0,,,\n");

  // K = 1: every exponent vanishes, so the ratio is 0/0.
  spec.outputs = {kAllExponentKinds.begin(), kAllExponentKinds.end()};
  std::ostringstream all;
  write_sweep_csv(all, run_sweep(spec), spec.outputs);
  CHECK(all.str().ends_with(",nan\n"));
}
