#pragma once

#include <array>
#include <string_view>

#include "corrsense/scalar_funcs.hpp"

namespace corrsense {

enum class ExponentKind { quantum, heterodyne, homodyne, photon };

inline constexpr std::array<ExponentKind, 4> kAllExponentKinds = {
    ExponentKind::quantum, ExponentKind::heterodyne, ExponentKind::homodyne,
    ExponentKind::photon};

std::string_view to_string(ExponentKind kind) noexcept;
ExponentKind parse_exponent_kind(std::string_view text);

/// Dispatches to the closed form of the named exponent.
double exponent(ExponentKind kind, const EnergyParams& params, LogBase base = LogBase::nats);

/// The four exponents at one (K, E) in a single base.
struct ExponentReport {
  int detectors = 1;
  double energy = 0.0;
  LogBase base = LogBase::nats;
  double quantum = 0.0;
  double heterodyne = 0.0;
  double homodyne = 0.0;
  double photon = 0.0;

  /// quantum / heterodyne; NaN when both vanish, +inf when only the
  /// denominator does.
  double ratio_quantum_heterodyne() const noexcept;
  double ratio_quantum_homodyne() const noexcept;
};

ExponentReport exponent_report(const EnergyParams& params, LogBase base = LogBase::nats);

/// Leading small-E Taylor coefficient c in D(E) = c E^order + ...,
/// extracted by Richardson extrapolation of D(E)/E^order over
/// E in {1e-3, 5e-4, 2.5e-4}. Throws NumericalInstabilityError when the
/// last two extrapolation levels differ by more than 1e-3 relative.
double taylor_coefficient(ExponentKind kind, int detectors, int order,
                          LogBase base = LogBase::nats);

}  // namespace corrsense
