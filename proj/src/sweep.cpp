#include "corrsense/sweep.hpp"

#include <array>
#include <charconv>
#include <cmath>

#include "corrsense/errors.hpp"
#include "corrsense/parallel.hpp"

namespace corrsense {

void SweepSpec::validate() const {
  if (detector_counts.empty()) throw UsageError("sweep: no detector counts given");
  for (int k : detector_counts) {
    if (k < 1) throw UsageError("sweep: detector counts must be >= 1");
  }
  if (!(energy_min > 0.0) || !std::isfinite(energy_max)) {
    throw UsageError("sweep: energy grid needs 0 < e-min and a finite e-max");
  }
  const bool single = energy_points == 1 && energy_min == energy_max;
  if (!single && (energy_points < 2 || !(energy_max > energy_min))) {
    throw UsageError("sweep: need e-points >= 2 and e-max > e-min");
  }
}

std::vector<double> SweepSpec::energies() const {
  validate();
  if (energy_points == 1) return {energy_min};
  std::vector<double> grid(energy_points);
  const double lo = std::log10(energy_min);
  const double hi = std::log10(energy_max);
  for (int i = 0; i < energy_points; ++i) {
    grid[i] = std::pow(10.0, lo + (hi - lo) * i / (energy_points - 1));
  }
  grid.front() = energy_min;
  grid.back() = energy_max;
  return grid;
}

std::vector<ExponentReport> run_sweep(const SweepSpec& spec) {
  const std::vector<double> grid = spec.energies();
  const std::size_t per_k = grid.size();
  std::vector<ExponentReport> rows(spec.detector_counts.size() * per_k);
  parallel_for(rows.size(), [&](std::size_t i) {
    rows[i] = exponent_report(EnergyParams(spec.detector_counts[i / per_k], grid[i % per_k]),
                              spec.base);
  });
  return rows;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto res =
      std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 12);
  return std::string(buf.data(), res.ptr);
}

void write_sweep_csv(std::ostream& out, const std::vector<ExponentReport>& rows,
                     const std::set<ExponentKind>& outputs) {
  out << "K,E,quantum,heterodyne,homodyne,photon,ratio_q_het\n";
  auto cell = [&](ExponentKind kind, double v) {
    return outputs.contains(kind) ? format_number(v) : std::string();
  };
  const bool ratio = outputs.contains(ExponentKind::quantum) &&
                     outputs.contains(ExponentKind::heterodyne);
  for (const auto& r : rows) {
    out << r.detectors << ',' << format_number(r.energy) << ','
        << cell(ExponentKind::quantum, r.quantum) << ','
        << cell(ExponentKind::heterodyne, r.heterodyne) << ','
        << cell(ExponentKind::homodyne, r.homodyne) << ',' << cell(ExponentKind::photon, r.photon)
        << ',' << (ratio ? format_number(r.ratio_quantum_heterodyne()) : std::string()) << '\n';
  }
}

void write_outcome_csv(std::ostream& out, const std::vector<TestOutcome>& outcomes) {
  out << "n,alpha_hat,beta_hat,exponent_hat,ci_low,ci_high\n";
  for (const auto& o : outcomes) {
    out << o.n << ',' << format_number(o.alpha_hat) << ',' << format_number(o.beta_hat) << ','
        << format_number(o.exponent_hat) << ',' << format_number(o.ci_low) << ','
        << format_number(o.ci_high) << '\n';
  }
}

}  // namespace corrsense
