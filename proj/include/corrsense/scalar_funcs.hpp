#pragma once

#include <numbers>
#include <span>

namespace corrsense {

/// Logarithm base used for reported quantities. Everything is computed in
/// nats; conversion happens only when a value leaves the library.
enum class LogBase { bits, nats };

const char* to_string(LogBase base) noexcept;
LogBase parse_log_base(const char* text);

/// Converts a quantity measured in nats into `base`.
constexpr double from_nats(double nats, LogBase base) noexcept {
  return base == LogBase::bits ? nats / std::numbers::ln2 : nats;
}

/// Detector count K and mean photon number per detector E.
class EnergyParams {
 public:
  /// Throws DomainError unless detectors >= 1 and energy is finite and >= 0.
  EnergyParams(int detectors, double energy);

  int detectors() const noexcept { return detectors_; }
  double energy() const noexcept { return energy_; }

 private:
  int detectors_;
  double energy_;
};

/// x log x with the continuous extension 0 log 0 = 0 (nats).
double xlogx(double x) noexcept;

/// Entropy of a thermal state with mean photon number x:
/// (x+1) log(x+1) - x log x, with g(0) = 0.
double gordon_g(double x, LogBase base = LogBase::nats);

/// Entropy contribution of a symplectic eigenvalue x >= 1:
/// (x+1)/2 log((x+1)/2) - (x-1)/2 log((x-1)/2), with f(1) = 0.
double func_f(double x, LogBase base = LogBase::nats);

// Incomplete gamma family. The regularized forms are accurate over the
// whole working range; the unregularized ones overflow once Gamma(a) does
// (a > ~171), in which case use the log form.
double regularized_gamma_p(double a, double z);
double regularized_gamma_q(double a, double z);
double log_incomplete_gamma_lower(double a, double z);
double incomplete_gamma_lower(double a, double z);
double incomplete_gamma_upper(double a, double z);

/// Binary relative entropy d(p || q) between Bernoulli laws given by their
/// probability of outcome 0. Returns +infinity when p is not absolutely
/// continuous with respect to q.
double binary_kl(double p0, double q0, LogBase base = LogBase::nats);

/// Sum of binary_kl over paired modes. Throws UsageError on length mismatch.
double bernoulli_product_kl(std::span<const double> p0, std::span<const double> q0,
                            LogBase base = LogBase::nats);

}  // namespace corrsense
