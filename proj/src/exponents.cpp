#include "corrsense/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "corrsense/classical_exponents.hpp"
#include "corrsense/errors.hpp"
#include "corrsense/quantum_exponents.hpp"

namespace corrsense {

std::string_view to_string(ExponentKind kind) noexcept {
  switch (kind) {
    case ExponentKind::quantum:
      return "quantum";
    case ExponentKind::heterodyne:
      return "heterodyne";
    case ExponentKind::homodyne:
      return "homodyne";
    case ExponentKind::photon:
      return "photon";
  }
  return "unknown";
}

ExponentKind parse_exponent_kind(std::string_view text) {
  for (ExponentKind kind : kAllExponentKinds) {
    if (text == to_string(kind)) return kind;
  }
  if (text == "het") return ExponentKind::heterodyne;
  if (text == "hom") return ExponentKind::homodyne;
  throw UsageError("unknown exponent '" + std::string(text) + "'");
}

double exponent(ExponentKind kind, const EnergyParams& params, LogBase base) {
  switch (kind) {
    case ExponentKind::quantum:
      return quantum_exponent(params, base);
    case ExponentKind::heterodyne:
      return het_exponent(params, base);
    case ExponentKind::homodyne:
      return hom_exponent(params, base);
    case ExponentKind::photon:
      return photon_counting_exponent(params, base);
  }
  throw UsageError("unknown exponent kind");
}

namespace {

double safe_ratio(double num, double den) {
  if (den == 0.0) {
    return num == 0.0 ? std::numeric_limits<double>::quiet_NaN()
                      : std::numeric_limits<double>::infinity();
  }
  return num / den;
}

}  // namespace

double ExponentReport::ratio_quantum_heterodyne() const noexcept {
  return safe_ratio(quantum, heterodyne);
}

double ExponentReport::ratio_quantum_homodyne() const noexcept {
  return safe_ratio(quantum, homodyne);
}

ExponentReport exponent_report(const EnergyParams& params, LogBase base) {
  ExponentReport report;
  report.detectors = params.detectors();
  report.energy = params.energy();
  report.base = base;
  report.quantum = quantum_exponent(params, base);
  report.heterodyne = het_exponent(params, base);
  report.homodyne = hom_exponent(params, base);
  report.photon = photon_counting_exponent(params, base);
  return report;
}

double taylor_coefficient(ExponentKind kind, int detectors, int order, LogBase base) {
  if (order != 1 && order != 2) throw UsageError("taylor_coefficient: order must be 1 or 2");
  constexpr std::array<double, 3> energies = {1e-3, 5e-4, 2.5e-4};
  std::array<double, 3> scaled{};
  for (std::size_t i = 0; i < energies.size(); ++i) {
    const double e = energies[i];
    scaled[i] = exponent(kind, EnergyParams(detectors, e)) / std::pow(e, order);
  }
  // Halving steps: first level removes the O(E) term, second the O(E^2) term.
  const double r1_coarse = 2.0 * scaled[1] - scaled[0];
  const double r1_fine = 2.0 * scaled[2] - scaled[1];
  const double r2 = (4.0 * r1_fine - r1_coarse) / 3.0;
  const double spread = std::abs(r2 - r1_fine);
  // Scale by the raw ratios too, so a vanishing coefficient (e.g. the
  // first-order heterodyne term) converges to ~0 instead of failing.
  const double magnitude = std::max({std::abs(r2), std::abs(scaled[0]), std::abs(scaled[2]), 1e-300});
  if (spread > 1e-3 * magnitude) {
    throw NumericalInstabilityError("taylor_coefficient: Richardson extrapolation of " +
                                    std::string(to_string(kind)) + " did not converge (spread " +
                                    std::to_string(spread) + ")");
  }
  return from_nats(r2, base);
}

}  // namespace corrsense
