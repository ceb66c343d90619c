#pragma once

#include <Eigen/Core>
#include <vector>

#include "corrsense/scalar_funcs.hpp"

namespace corrsense {

/// Covariance matrix of a K-mode Gaussian state in quadrature ordering
/// (q1, p1, q2, p2, ...), normalized so the vacuum is the identity.
class QuantumCov {
 public:
  /// Throws UsageError unless `entries` is 2K x 2K, DomainError unless
  /// symmetric to 1e-12.
  explicit QuantumCov(Eigen::MatrixXd entries);

  int modes() const noexcept { return static_cast<int>(entries_.rows() / 2); }
  const Eigen::MatrixXd& matrix() const noexcept { return entries_; }

  /// Uncertainty relation: every symplectic eigenvalue >= 1 - 1e-10.
  bool is_physical() const;

 private:
  Eigen::MatrixXd entries_;
};

/// Symplectic eigenvalues, descending.
struct SymplecticSpectrum {
  std::vector<double> values;
};

/// Omega = diag(omega, ..., omega), omega = [[0, 1], [-1, 0]].
Eigen::MatrixXd symplectic_form(int modes);

/// Covariance of the correlated K-detector state: 1+2E on the diagonal, 2E
/// between like quadratures of different modes, 0 between q and p.
QuantumCov build_quantum_cov(const EnergyParams& params);

/// Moduli of the eigenvalues of i Omega V. Computed in real arithmetic from
/// the symmetric matrix V^{1/2} Omega^T V Omega V^{1/2}, whose spectrum is
/// {nu_k^2} with each value repeated twice. Throws DomainError if V is not
/// positive definite.
SymplecticSpectrum symplectic_eigenvalues(const QuantumCov& cov);

/// Von Neumann entropy sum_k f(nu_k) of a Gaussian state with this covariance.
double gaussian_entropy(const QuantumCov& cov, LogBase base = LogBase::nats);

/// Quantum relative-entropy bound K g(E) - f(1 + 2KE).
double quantum_exponent(const EnergyParams& params, LogBase base = LogBase::nats);

/// Same quantity as K g(E) - sum_k f(nu_k) using the numerical spectrum.
double quantum_exponent_from_spectrum(const EnergyParams& params, LogBase base = LogBase::nats);

/// Click/no-click probabilities of each output port after the Hadamard
/// interferometer, as probability of "no click" per mode.
std::vector<double> photon_no_click_correlated(const EnergyParams& params);
std::vector<double> photon_no_click_uncorrelated(const EnergyParams& params);

/// Relative entropy between the two on/off photon-counting distributions.
double photon_counting_exponent(const EnergyParams& params, LogBase base = LogBase::nats);

}  // namespace corrsense
