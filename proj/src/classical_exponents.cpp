#include "corrsense/classical_exponents.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "corrsense/errors.hpp"
#include "corrsense/quadrature.hpp"

namespace corrsense {

namespace {

constexpr double kSingularTol = 1e-14;
constexpr double kSymmetryTol = 1e-12;

}  // namespace

CovMatrix::CovMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() == 0) {
    throw UsageError("CovMatrix: expected a non-empty square matrix");
  }
  const double scale = std::max(1.0, entries_.cwiseAbs().maxCoeff());
  if ((entries_ - entries_.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol * scale) {
    throw DomainError("CovMatrix: matrix is not symmetric");
  }
}

bool CovMatrix::is_positive_definite() const {
  Eigen::LLT<Eigen::MatrixXd> llt(entries_);
  return llt.info() == Eigen::Success;
}

Eigen::MatrixXd ExchangeableMatrix::dense() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Constant(n, n, offdiag);
  m.diagonal().setConstant(diag);
  return m;
}

double ExchangeableMatrix::quadratic_form(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != n) throw UsageError("quadratic_form: dimension mismatch");
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double v : x) {
    sum += v;
    sum_sq += v * v;
  }
  return (diag - offdiag) * sum_sq + offdiag * sum * sum;
}

ExchangeableMatrix exchangeable_inverse(const ExchangeableMatrix& m) {
  if (m.n < 1) throw UsageError("exchangeable_inverse: n must be >= 1");
  const double lambda_rest = m.residual_eigenvalue();
  const double lambda_ones = m.principal_eigenvalue();
  const bool rest_singular = m.n > 1 && std::abs(lambda_rest) < kSingularTol;
  if (rest_singular || std::abs(lambda_ones) < kSingularTol) {
    throw SingularityError("exchangeable_inverse: matrix is singular");
  }
  const double a = m.diag;
  const double b = m.offdiag;
  const double n = m.n;
  // C = (a - b)(a + (n-1) b); using the factored form keeps precision.
  const double c = lambda_rest * lambda_ones;
  if (m.n == 1) return {1, 1.0 / a, 0.0};
  return {m.n, (a + (n - 2.0) * b) / c, -b / c};
}

double exchangeable_det(const ExchangeableMatrix& m) {
  return std::pow(m.residual_eigenvalue(), m.n - 1) * m.principal_eigenvalue();
}

double exchangeable_log_det(const ExchangeableMatrix& m) {
  return (m.n - 1) * std::log(std::abs(m.residual_eigenvalue())) +
         std::log(std::abs(m.principal_eigenvalue()));
}

ExchangeableMatrix het_covariance_structured(const EnergyParams& params) {
  const double e = params.energy();
  return {params.detectors(), 1.0 + e, e};
}

CovMatrix het_covariance(const EnergyParams& params) {
  return CovMatrix(het_covariance_structured(params).dense());
}

ExchangeableMatrix het_product_covariance_structured(const EnergyParams& params) {
  return {params.detectors(), 1.0 + params.energy(), 0.0};
}

CovMatrix het_product_covariance(const EnergyParams& params) {
  return CovMatrix(het_product_covariance_structured(params).dense());
}

ExchangeableMatrix hom_covariance_structured(const EnergyParams& params) {
  return het_covariance_structured(EnergyParams(params.detectors(), 2.0 * params.energy()));
}

ExchangeableMatrix hom_product_covariance_structured(const EnergyParams& params) {
  return het_product_covariance_structured(
      EnergyParams(params.detectors(), 2.0 * params.energy()));
}

double gaussian_kl(const Eigen::VectorXd& mean1, const CovMatrix& cov1,
                   const Eigen::VectorXd& mean2, const CovMatrix& cov2, LogBase base) {
  const Eigen::Index n = cov1.dim();
  if (cov2.dim() != n || mean1.size() != n || mean2.size() != n) {
    throw UsageError("gaussian_kl: dimension mismatch");
  }
  Eigen::LLT<Eigen::MatrixXd> llt2(cov2.matrix());
  if (llt2.info() != Eigen::Success) {
    throw SingularityError("gaussian_kl: second covariance is not positive definite");
  }
  Eigen::LLT<Eigen::MatrixXd> llt1(cov1.matrix());
  if (llt1.info() != Eigen::Success) {
    throw DomainError("gaussian_kl: first covariance is not positive definite");
  }
  auto log_det = [](const Eigen::LLT<Eigen::MatrixXd>& llt) {
    return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  };
  const double d = log_det(llt2) - log_det(llt1);
  const Eigen::VectorXd diff = mean2 - mean1;
  const double m = diff.dot(llt2.solve(diff));
  const double t = llt2.solve(cov1.matrix()).trace() - static_cast<double>(n);
  return from_nats(0.5 * (d + m + t), base);
}

double het_exponent(const EnergyParams& params, LogBase base) {
  const double k = params.detectors();
  const double e = params.energy();
  return from_nats(k * std::log1p(e) - std::log1p(k * e), base);
}

double hom_exponent(const EnergyParams& params, LogBase base) {
  const double k = params.detectors();
  const double e = params.energy();
  return from_nats(0.5 * (k * std::log1p(2.0 * e) - std::log1p(2.0 * k * e)), base);
}

double het_exponent_via_gaussian_kl(const EnergyParams& params, LogBase base) {
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(params.detectors());
  return 2.0 * gaussian_kl(zero, het_covariance(params), zero, het_product_covariance(params), base);
}

double hom_exponent_via_gaussian_kl(const EnergyParams& params, LogBase base) {
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(params.detectors());
  const CovMatrix correlated(hom_covariance_structured(params).dense());
  const CovMatrix product(hom_product_covariance_structured(params).dense());
  return gaussian_kl(zero, correlated, zero, product, base);
}

namespace {

double coupling(Detection kind) { return kind == Detection::heterodyne ? 1.0 : std::numbers::sqrt2; }

// log of (pi^{K+1} E)^{-1/2} int exp(phi(a)) da with
// phi(a) = -a^2/E - sum_i (c a - t_i)^2. Gauss-Hermite nodes are centred at
// the mode of phi and scaled by its curvature.
double log_outcome_density(double c, std::span<const double> t, double energy,
                           const QuadratureRule& rule) {
  const double k = static_cast<double>(t.size());
  double sum_t = 0.0;
  for (double v : t) sum_t += v;
  const double curvature = 1.0 / energy + k * c * c;
  const double mode = c * sum_t / curvature;
  const double width = 1.0 / std::sqrt(curvature);
  auto phi = [&](double a) {
    double acc = -a * a / energy;
    for (double v : t) {
      const double r = c * a - v;
      acc -= r * r;
    }
    return acc;
  };
  const double phi_mode = phi(mode);
  double integral = 0.0;
  for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
    const double y = rule.nodes[j];
    integral += rule.weights[j] * std::exp(phi(mode + width * y) - phi_mode + y * y);
  }
  const double log_prefactor = -0.5 * ((k + 1.0) * std::log(std::numbers::pi) + std::log(energy));
  return log_prefactor + std::log(width) + phi_mode + std::log(integral);
}

}  // namespace

double outcome_density(Detection kind, std::span<const double> t, double energy, int nodes) {
  if (!(energy > 0.0)) throw DomainError("outcome_density: energy must be > 0");
  if (t.empty()) throw UsageError("outcome_density: empty outcome vector");
  return std::exp(log_outcome_density(coupling(kind), t, energy, gauss_hermite(nodes)));
}

double exponent_by_quadrature(Detection kind, const EnergyParams& params, int nodes,
                              LogBase base) {
  const int k = params.detectors();
  const double e = params.energy();
  if (!(e > 0.0)) throw DomainError("exponent_by_quadrature: energy must be > 0");
  if (k > 4) throw ResourceError("exponent_by_quadrature: K > 4 is too expensive");
  const double c = coupling(kind);
  const QuadratureRule rule = gauss_hermite(nodes);

  // Reference Gaussian exp(-|z|^2) with t = sqrt(2) s z, where s^2 is the
  // outcome variance along the all-ones direction, the broadest one.
  const double signal_variance = 0.5 * c * c * e;
  const double s = std::sqrt(0.5 + k * signal_variance);
  const double scale = std::numbers::sqrt2 * s;

  std::vector<double> log_marginal(rule.nodes.size());
  for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
    const double tj = scale * rule.nodes[j];
    log_marginal[j] = log_outcome_density(c, std::span<const double>(&tj, 1), e, rule);
  }

  const std::size_t m = rule.nodes.size();
  std::vector<std::size_t> index(k, 0);
  std::vector<double> t(k);
  double total = 0.0;
  for (;;) {
    double weight = 1.0;
    double z_sq = 0.0;
    double log_q = 0.0;
    for (int i = 0; i < k; ++i) {
      const double z = rule.nodes[index[i]];
      weight *= rule.weights[index[i]];
      z_sq += z * z;
      t[i] = scale * z;
      log_q += log_marginal[index[i]];
    }
    const double log_p = log_outcome_density(c, t, e, rule);
    total += weight * std::exp(log_p + z_sq) * (log_p - log_q);

    int pos = 0;
    while (pos < k && ++index[pos] == m) index[pos++] = 0;
    if (pos == k) break;
  }
  const double per_quadrature = total * std::pow(scale, k);
  const double quadratures = kind == Detection::heterodyne ? 2.0 : 1.0;
  return from_nats(quadratures * per_quadrature, base);
}

}  // namespace corrsense
