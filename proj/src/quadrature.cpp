#include "corrsense/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <string>

#include "corrsense/errors.hpp"

namespace corrsense {

namespace {

// Golub-Welsch: nodes are eigenvalues of the Jacobi matrix. Weights come from
// the orthonormal three-term recurrence, w_i = 1 / sum_k p_k(x_i)^2, which
// keeps full relative accuracy for the tiny weights far out in the tail
// (eigenvector components only carry absolute accuracy).
QuadratureRule golub_welsch(const Eigen::VectorXd& diag, const Eigen::VectorXd& offdiag,
                            double mu0) {
  const Eigen::Index n = diag.size();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, offdiag, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalInstabilityError("Golub-Welsch eigenvalue solve failed");
  }
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = solver.eigenvalues()[i];
    double prev = 0.0;
    double cur = 1.0 / std::sqrt(mu0);
    double sum = cur * cur;
    double log_scale = 0.0;  // true p_k = stored p_k * exp(log_scale)
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
      const double b_prev = k == 0 ? 0.0 : offdiag[k - 1];
      const double next = ((x - diag[k]) * cur - b_prev * prev) / offdiag[k];
      prev = cur;
      cur = next;
      sum += cur * cur;
      if (std::abs(cur) > 1e100) {
        prev *= 1e-100;
        cur *= 1e-100;
        sum *= 1e-200;
        log_scale += 100.0 * std::numbers::ln10;
      }
    }
    rule.nodes[i] = x;
    rule.weights[i] = std::exp(-std::log(sum) - 2.0 * log_scale);
  }
  return rule;
}

void check_order(int n, const char* name) {
  if (n < 1) throw DomainError(std::string(name) + ": rule order must be >= 1");
}

}  // namespace

QuadratureRule gauss_hermite(int n) {
  check_order(n, "gauss_hermite");
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd off(std::max(n - 1, 0));
  for (int k = 1; k < n; ++k) off[k - 1] = std::sqrt(0.5 * k);
  return golub_welsch(diag, off, std::sqrt(std::numbers::pi));
}

QuadratureRule gauss_laguerre(int n) {
  check_order(n, "gauss_laguerre");
  Eigen::VectorXd diag(n);
  Eigen::VectorXd off(std::max(n - 1, 0));
  for (int k = 0; k < n; ++k) diag[k] = 2.0 * k + 1.0;
  for (int k = 1; k < n; ++k) off[k - 1] = k;
  return golub_welsch(diag, off, 1.0);
}

}  // namespace corrsense
