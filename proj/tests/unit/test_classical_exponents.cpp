#include <doctest.h>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "corrsense/classical_exponents.hpp"
#include "corrsense/errors.hpp"

using namespace corrsense;
using doctest::Approx;

namespace {

// Random exchangeable matrices with both eigenvalues bounded away from 0.
ExchangeableMatrix random_exchangeable(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dim(1, 64);
  std::uniform_real_distribution<double> coef(-3.0, 3.0);
  for (;;) {
    ExchangeableMatrix m{dim(rng), coef(rng), coef(rng)};
    if (std::abs(m.diag - m.offdiag) > 1e-3 && std::abs(m.principal_eigenvalue()) > 1e-3) {
      return m;
    }
  }
}

}  // namespace

TEST_CASE("exchangeable inverse small cases") {
  const auto inv2 = exchangeable_inverse({2, 2.0, 1.0});
  CHECK(inv2.diag == Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(inv2.offdiag == Approx(-1.0 / 3.0).epsilon(1e-15));
  CHECK(exchangeable_det({2, 2.0, 1.0}) == Approx(3.0).epsilon(1e-15));

  const auto inv3 = exchangeable_inverse({3, 2.0, -0.5});
  CHECK(inv3.diag == Approx(0.6).epsilon(1e-14));
  CHECK(inv3.offdiag == Approx(0.2).epsilon(1e-14));

  CHECK(exchangeable_det({4, 1.25, 0.25}) == Approx(2.0).epsilon(1e-14));
  CHECK(exchangeable_inverse({1, 4.0, 123.0}).diag == Approx(0.25));
}

TEST_CASE("exchangeable inverse rejects singular matrices") {
  CHECK_THROWS_AS(exchangeable_inverse({3, 1.0, 1.0}), SingularityError);
  CHECK_THROWS_AS(exchangeable_inverse({3, 1.0, -0.5}), SingularityError);
}

TEST_CASE("exchangeable closed forms agree with LU on random instances") {
  std::mt19937_64 rng(20260);
  for (int trial = 0; trial < 300; ++trial) {
    const ExchangeableMatrix m = random_exchangeable(rng);
    const Eigen::MatrixXd dense = m.dense();
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(dense);
    const Eigen::MatrixXd ref = lu.inverse();
    const Eigen::MatrixXd closed = exchangeable_inverse(m).dense();
    CHECK((closed - ref).cwiseAbs().maxCoeff() <= 1e-10 * std::max(1.0, ref.cwiseAbs().maxCoeff()));
    const double det = lu.determinant();
    CHECK(exchangeable_det(m) == Approx(det).epsilon(1e-10));
    if (det > 0) CHECK(exchangeable_log_det(m) == Approx(std::log(det)).epsilon(1e-10));
  }
}

TEST_CASE("quadratic form in O(n) matches dense product") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> z;
  for (int trial = 0; trial < 20; ++trial) {
    const ExchangeableMatrix m = random_exchangeable(rng);
    Eigen::VectorXd x(m.n);
    for (int i = 0; i < m.n; ++i) x[i] = z(rng);
    const double dense = x.dot(m.dense() * x);
    CHECK(m.quadratic_form(std::span<const double>(x.data(), m.n)) ==
          Approx(dense).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("covariance builders") {
  const EnergyParams p(3, 0.4);
  const auto het = het_covariance(p).matrix();
  CHECK(het(0, 0) == Approx(1.4));
  CHECK(het(0, 2) == Approx(0.4));
  CHECK(het_product_covariance(p).matrix()(1, 2) == 0.0);
  const auto hom = hom_covariance_structured(p);
  CHECK(hom.diag == Approx(1.8));
  CHECK(hom.offdiag == Approx(0.8));
  CHECK(het_covariance(p).is_positive_definite());
  CHECK_THROWS_AS(CovMatrix(Eigen::MatrixXd{{1.0, 0.5}, {0.4, 1.0}}), DomainError);
}

TEST_CASE("gaussian_kl") {
  const CovMatrix one(Eigen::MatrixXd{{1.0}});
  const CovMatrix two(Eigen::MatrixXd{{2.0}});
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(1);
  CHECK(gaussian_kl(zero, one, zero, one) == 0.0);
  CHECK(gaussian_kl(zero, one, zero, two, LogBase::bits) ==
        Approx(0.13932623977775914816).epsilon(1e-13));
  // Mean shift term.
  const Eigen::VectorXd shifted = Eigen::VectorXd::Constant(1, 2.0);
  CHECK(gaussian_kl(zero, one, shifted, one) == Approx(2.0).epsilon(1e-14));
  const CovMatrix singular(Eigen::MatrixXd{{1.0, 1.0}, {1.0, 1.0}});
  const CovMatrix id2(Eigen::MatrixXd::Identity(2, 2));
  const Eigen::VectorXd zero2 = Eigen::VectorXd::Zero(2);
  CHECK_THROWS_AS(gaussian_kl(zero2, id2, zero2, singular), SingularityError);
  CHECK_THROWS_AS(gaussian_kl(zero, one, zero2, id2), UsageError);
}

TEST_CASE("closed-form exponents") {
  CHECK(het_exponent(EnergyParams(2, 1.0), LogBase::bits) ==
        Approx(std::log2(4.0 / 3.0)).epsilon(1e-14));
  CHECK(hom_exponent(EnergyParams(3, 0.5), LogBase::bits) == Approx(0.5).epsilon(1e-14));
  CHECK(hom_exponent(EnergyParams(3, 0.5)) == Approx(0.34657359027997265471).epsilon(1e-14));
  CHECK(het_exponent(EnergyParams(1, 3.0)) == 0.0);
  CHECK(hom_exponent(EnergyParams(1, 3.0)) == 0.0);
  CHECK(het_exponent(EnergyParams(5, 0.0)) == 0.0);
  CHECK(hom_exponent(EnergyParams(5, 0.0)) == 0.0);
}

TEST_CASE("closed forms equal assembled Gaussian KL") {
  for (int k = 1; k <= 8; ++k) {
    for (double e : {0.01, 0.1, 1.0, 10.0}) {
      const EnergyParams p(k, e);
      const double het = het_exponent(p);
      const double hom = hom_exponent(p);
      CHECK(std::abs(het_exponent_via_gaussian_kl(p) - het) <= 1e-10 * std::max(het, 1e-5));
      CHECK(std::abs(hom_exponent_via_gaussian_kl(p) - hom) <= 1e-10 * std::max(hom, 1e-5));
    }
  }
}

TEST_CASE("exponents are nondecreasing in E and K; het-hom sign recorded") {
  int het_larger = 0, hom_larger = 0;
  for (int k = 1; k <= 8; ++k) {
    double prev_het = 0.0, prev_hom = 0.0;
    for (double e = 1e-3; e <= 10.0; e *= 1.5) {
      const EnergyParams p(k, e);
      CHECK(het_exponent(p) >= prev_het - 1e-15);
      CHECK(hom_exponent(p) >= prev_hom - 1e-15);
      prev_het = het_exponent(p);
      prev_hom = hom_exponent(p);
      if (k < 8) {
        CHECK(het_exponent(EnergyParams(k + 1, e)) >= prev_het);
        CHECK(hom_exponent(EnergyParams(k + 1, e)) >= prev_hom);
      }
      if (k >= 2) (prev_het > prev_hom ? het_larger : hom_larger)++;
    }
  }
  MESSAGE("het > hom at " << het_larger << " grid points, hom >= het at " << hom_larger);
  CHECK(het_larger + hom_larger > 0);
}

TEST_CASE("Gaussian integral identity over the coherent amplitude") {
  // int exp(-a^2/E - sum_i (a - t_i)^2) da
  //   = C exp(-sum t_i^2 + (sum t_i)^2 E / (1 + K E)),  C = sqrt(pi E / (1 + K E)).
  using boost::math::quadrature::gauss_kronrod;
  std::mt19937_64 rng(11);
  std::normal_distribution<double> z;
  for (int k = 1; k <= 3; ++k) {
    for (double e : {0.1, 1.0, 4.0}) {
      for (int trial = 0; trial < 5; ++trial) {
        std::vector<double> t(k);
        double sum = 0.0, sum_sq = 0.0;
        for (double& ti : t) {
          ti = z(rng);
          sum += ti;
          sum_sq += ti * ti;
        }
        auto integrand = [&](double a) {
          double s = a * a / e;
          for (double ti : t) s += (a - ti) * (a - ti);
          return std::exp(-s);
        };
        const double lhs = gauss_kronrod<double, 61>::integrate(
            integrand, -std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity(), 15, 1e-13);
        const double c = std::sqrt(std::numbers::pi * e / (1.0 + k * e));
        const double rhs = c * std::exp(-sum_sq + sum * sum * e / (1.0 + k * e));
        CHECK(lhs == Approx(rhs).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("outcome density is normalized") {
  // Fixed 61-point Kronrod rule per axis on [-12, 12]; the densities are negligible outside.
  using boost::math::quadrature::gauss_kronrod;
  for (auto kind : {Detection::heterodyne, Detection::homodyne}) {
    const double mass = gauss_kronrod<double, 61>::integrate(
        [&](double x) {
          return gauss_kronrod<double, 61>::integrate(
              [&](double y) {
                const double t[2] = {x, y};
                return outcome_density(kind, t, 0.7, 32);
              },
              -12.0, 12.0, 0);
        },
        -12.0, 12.0, 0);
    CHECK(mass == Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("KL quadrature reproduces closed forms") {
  for (int k : {2, 3}) {
    for (double e : {0.1, 1.0}) {
      const EnergyParams p(k, e);
      CHECK(exponent_by_quadrature(Detection::heterodyne, p) ==
            Approx(het_exponent(p)).epsilon(1e-6));
      CHECK(exponent_by_quadrature(Detection::homodyne, p) ==
            Approx(hom_exponent(p)).epsilon(1e-6));
    }
  }
  CHECK_THROWS_AS(exponent_by_quadrature(Detection::heterodyne, EnergyParams(5, 0.1)),
                  ResourceError);
}
