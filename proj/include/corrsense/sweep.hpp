#pragma once

#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "corrsense/detection_sim.hpp"
#include "corrsense/exponents.hpp"

namespace corrsense {

/// Grid of detector counts and log-spaced energies.
struct SweepSpec {
  std::vector<int> detector_counts;
  double energy_min = 1e-4;
  double energy_max = 10.0;
  int energy_points = 60;
  LogBase base = LogBase::bits;
  std::set<ExponentKind> outputs{kAllExponentKinds.begin(), kAllExponentKinds.end()};

  /// Throws UsageError unless energy_min > 0, points >= 2 and max > min
  /// (a single point is allowed when min == max and points == 1).
  void validate() const;
  std::vector<double> energies() const;
};

/// One report per (K, E), K outer and E ascending.
std::vector<ExponentReport> run_sweep(const SweepSpec& spec);

/// Fixed 12-significant-digit, locale-independent formatting.
std::string format_number(double value);

/// Header `K,E,quantum,heterodyne,homodyne,photon,ratio_q_het`; columns not
/// listed in `outputs` are left empty.
void write_sweep_csv(std::ostream& out, const std::vector<ExponentReport>& rows,
                     const std::set<ExponentKind>& outputs);

/// Header `n,alpha_hat,beta_hat,exponent_hat,ci_low,ci_high`.
void write_outcome_csv(std::ostream& out, const std::vector<TestOutcome>& outcomes);

}  // namespace corrsense
