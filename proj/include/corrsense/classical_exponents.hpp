#pragma once

#include <Eigen/Core>
#include <span>

#include "corrsense/scalar_funcs.hpp"

namespace corrsense {

/// Symmetric real covariance matrix. Construction checks symmetry to 1e-12.
class CovMatrix {
 public:
  explicit CovMatrix(Eigen::MatrixXd entries);

  Eigen::Index dim() const noexcept { return entries_.rows(); }
  const Eigen::MatrixXd& matrix() const noexcept { return entries_; }
  bool is_positive_definite() const;

 private:
  Eigen::MatrixXd entries_;
};

/// n x n matrix (a - b) I + b J with diagonal a and constant off-diagonal b.
struct ExchangeableMatrix {
  int n = 1;
  double diag = 1.0;
  double offdiag = 0.0;

  Eigen::MatrixXd dense() const;
  /// Eigenvalue of the all-ones direction, a + (n-1) b.
  double principal_eigenvalue() const noexcept { return diag + (n - 1) * offdiag; }
  /// Eigenvalue of the (n-1)-dimensional complement, a - b.
  double residual_eigenvalue() const noexcept { return diag - offdiag; }
  /// x^T A x in O(n).
  double quadratic_form(std::span<const double> x) const;
};

/// Closed-form inverse: diagonal (a + (n-2) b) / C, off-diagonal -b / C with
/// C = a^2 + (n-2) a b - (n-1) b^2. Throws SingularityError when either
/// eigenvalue vanishes (|.| < 1e-14).
ExchangeableMatrix exchangeable_inverse(const ExchangeableMatrix& m);

/// (a - b)^(n-1) (a + (n-1) b).
double exchangeable_det(const ExchangeableMatrix& m);

/// Natural log of |det|, computed from the two eigenvalues.
double exchangeable_log_det(const ExchangeableMatrix& m);

/// Per-quadrature covariance of K heterodyne outcomes under the correlated
/// source: (1+E) on the diagonal, E elsewhere. The matching density is
/// proportional to exp(-t^T Sigma^{-1} t), so the statistical covariance is
/// half of this matrix; relative entropies are unaffected by the common factor.
ExchangeableMatrix het_covariance_structured(const EnergyParams& params);
CovMatrix het_covariance(const EnergyParams& params);

/// Same quantity under the product hypothesis: (1+E) I.
ExchangeableMatrix het_product_covariance_structured(const EnergyParams& params);
CovMatrix het_product_covariance(const EnergyParams& params);

/// Homodyne outcomes behave like one heterodyne quadrature at energy 2E.
ExchangeableMatrix hom_covariance_structured(const EnergyParams& params);
ExchangeableMatrix hom_product_covariance_structured(const EnergyParams& params);

/// Relative entropy D(N(mean1, cov1) || N(mean2, cov2)) =
/// (ln det cov2 - ln det cov1 + M + T) / 2.
/// Throws UsageError on dimension mismatch and SingularityError when cov2 is
/// not positive definite.
double gaussian_kl(const Eigen::VectorXd& mean1, const CovMatrix& cov1,
                   const Eigen::VectorXd& mean2, const CovMatrix& cov2,
                   LogBase base = LogBase::nats);

/// Heterodyne exponent log((1+E)^K / (1+KE)).
double het_exponent(const EnergyParams& params, LogBase base = LogBase::nats);

/// Homodyne exponent (1/2) log((1+2E)^K / (1+2KE)).
double hom_exponent(const EnergyParams& params, LogBase base = LogBase::nats);

/// Heterodyne exponent assembled as twice the dense per-quadrature Gaussian KL.
double het_exponent_via_gaussian_kl(const EnergyParams& params, LogBase base = LogBase::nats);

/// Homodyne exponent as the single-quadrature Gaussian KL at energy 2E.
double hom_exponent_via_gaussian_kl(const EnergyParams& params, LogBase base = LogBase::nats);

enum class Detection { heterodyne, homodyne };

/// Density of one real quadrature of K heterodyne outcomes, evaluated from its
/// defining integral over the common coherent amplitude
///   (pi^{K+1} E)^{-1/2} int exp(-a^2/E - sum_i (a - t_i)^2) da
/// by adaptive Gauss-Hermite quadrature. For homodyne, (a - t_i) becomes
/// (sqrt(2) a - t_i) with the same normalization. Requires E > 0.
double outcome_density(Detection kind, std::span<const double> t, double energy,
                       int nodes = 64);

/// D(p^(K) || p^{x K}) by tensor-product Gauss-Hermite quadrature of
/// p log(p/q) with both densities taken from outcome_density. For
/// heterodyne the two independent quadratures are counted. Requires E > 0
/// and K <= 4 (cost grows as nodes^K).
double exponent_by_quadrature(Detection kind, const EnergyParams& params, int nodes = 64,
                              LogBase base = LogBase::nats);

}  // namespace corrsense
