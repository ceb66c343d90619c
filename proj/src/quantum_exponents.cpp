#include "corrsense/quantum_exponents.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <functional>

#include "corrsense/errors.hpp"

namespace corrsense {

QuantumCov::QuantumCov(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() == 0 || entries_.rows() % 2 != 0) {
    throw UsageError("QuantumCov: expected a 2K x 2K matrix");
  }
  const double scale = std::max(1.0, entries_.cwiseAbs().maxCoeff());
  if ((entries_ - entries_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw DomainError("QuantumCov: matrix is not symmetric");
  }
}

bool QuantumCov::is_physical() const {
  try {
    const auto spectrum = symplectic_eigenvalues(*this);
    return spectrum.values.back() >= 1.0 - 1e-10;
  } catch (const DomainError&) {
    return false;
  }
}

Eigen::MatrixXd symplectic_form(int modes) {
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
  for (int k = 0; k < modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

QuantumCov build_quantum_cov(const EnergyParams& params) {
  const int k = params.detectors();
  const double e = params.energy();
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(2 * k, 2 * k);
  for (int i = 0; i < 2 * k; ++i) {
    for (int j = 0; j < 2 * k; ++j) {
      if (i == j) {
        v(i, j) = 1.0 + 2.0 * e;
      } else if ((i - j) % 2 == 0) {
        v(i, j) = 2.0 * e;
      }
    }
  }
  return QuantumCov(std::move(v));
}

SymplecticSpectrum symplectic_eigenvalues(const QuantumCov& cov) {
  const Eigen::MatrixXd& v = cov.matrix();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> root(v);
  if (root.info() != Eigen::Success || root.eigenvalues().minCoeff() <= 0.0) {
    throw DomainError("symplectic_eigenvalues: covariance is not positive definite");
  }
  const Eigen::MatrixXd sqrt_v = root.operatorSqrt();
  const Eigen::MatrixXd omega = symplectic_form(cov.modes());
  Eigen::MatrixXd sym = sqrt_v * omega.transpose() * v * omega * sqrt_v;
  sym = 0.5 * (sym + sym.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalInstabilityError("symplectic_eigenvalues: eigensolver failed");
  }
  // Ascending, each nu^2 twice.
  const Eigen::VectorXd& squares = solver.eigenvalues();
  SymplecticSpectrum spectrum;
  spectrum.values.reserve(cov.modes());
  for (int k = 0; k < cov.modes(); ++k) {
    const double pair = 0.5 * (squares[2 * k] + squares[2 * k + 1]);
    spectrum.values.push_back(std::sqrt(std::max(pair, 0.0)));
  }
  std::sort(spectrum.values.begin(), spectrum.values.end(), std::greater<>());
  return spectrum;
}

double gaussian_entropy(const QuantumCov& cov, LogBase base) {
  double total = 0.0;
  for (double nu : symplectic_eigenvalues(cov).values) {
    // Round-off can push a pure-state eigenvalue marginally below 1.
    total += func_f(std::max(nu, 1.0));
  }
  return from_nats(total, base);
}

double quantum_exponent(const EnergyParams& params, LogBase base) {
  const double k = params.detectors();
  const double e = params.energy();
  return from_nats(k * gordon_g(e) - func_f(1.0 + 2.0 * k * e), base);
}

double quantum_exponent_from_spectrum(const EnergyParams& params, LogBase base) {
  const double k = params.detectors();
  const double correlated_entropy = gaussian_entropy(build_quantum_cov(params));
  return from_nats(k * gordon_g(params.energy()) - correlated_entropy, base);
}

std::vector<double> photon_no_click_correlated(const EnergyParams& params) {
  std::vector<double> p0(params.detectors(), 1.0);
  p0[0] = 1.0 / (1.0 + params.detectors() * params.energy());
  return p0;
}

std::vector<double> photon_no_click_uncorrelated(const EnergyParams& params) {
  return std::vector<double>(params.detectors(), 1.0 / (1.0 + params.energy()));
}

double photon_counting_exponent(const EnergyParams& params, LogBase base) {
  return bernoulli_product_kl(photon_no_click_correlated(params),
                              photon_no_click_uncorrelated(params), base);
}

}  // namespace corrsense
