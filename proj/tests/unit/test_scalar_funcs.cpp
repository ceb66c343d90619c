#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/multiprecision/cpp_dec_float.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "corrsense/errors.hpp"
#include "corrsense/scalar_funcs.hpp"

using namespace corrsense;
using doctest::Approx;
using mp = boost::multiprecision::cpp_dec_float_50;

namespace {

mp mp_g(mp x) {
  using boost::multiprecision::log;
  return x == 0 ? mp(0) : (x + 1) * log(x + 1) - x * log(x);
}

}  // namespace

TEST_CASE("log base parsing and conversion") {
  CHECK(parse_log_base("bits") == LogBase::bits);
  CHECK(parse_log_base("nats") == LogBase::nats);
  CHECK_THROWS_AS(parse_log_base("dits"), UsageError);
  CHECK(from_nats(std::numbers::ln2, LogBase::bits) == Approx(1.0).epsilon(1e-15));
  CHECK(std::string(to_string(LogBase::nats)) == "nats");
}

TEST_CASE("EnergyParams rejects invalid input") {
  CHECK_NOTHROW(EnergyParams(1, 0.0));
  CHECK_THROWS_AS(EnergyParams(0, 1.0), DomainError);
  CHECK_THROWS_AS(EnergyParams(2, -0.1), DomainError);
  CHECK_THROWS_AS(EnergyParams(2, std::numeric_limits<double>::quiet_NaN()), DomainError);
  CHECK_THROWS_AS(EnergyParams(2, std::numeric_limits<double>::infinity()), DomainError);
}

TEST_CASE("gordon_g values") {
  CHECK(gordon_g(0.0) == 0.0);
  CHECK(gordon_g(1.0, LogBase::bits) == Approx(2.0).epsilon(1e-14));
  CHECK(gordon_g(0.5) == Approx(0.95477125244221922767).epsilon(1e-14));
  CHECK(gordon_g(0.5, LogBase::bits) == Approx(1.37744375108173427218).epsilon(1e-14));
  CHECK_THROWS_AS(gordon_g(-1e-3), DomainError);
}

TEST_CASE("gordon_g agrees with 50-digit arithmetic across scales") {
  for (double x : {1e-12, 1e-6, 1e-3, 0.1, 1.0, 7.5, 1e3, 1e8}) {
    const double expected = static_cast<double>(mp_g(mp(x)));
    CHECK(gordon_g(x) == Approx(expected).epsilon(1e-13));
  }
}

TEST_CASE("func_f values and domain") {
  CHECK(func_f(1.0) == 0.0);
  CHECK(func_f(3.0, LogBase::bits) == Approx(2.0).epsilon(1e-14));
  CHECK(func_f(2.2) == Approx(1.05850118105277129576).epsilon(1e-14));
  CHECK(func_f(2.2, LogBase::bits) == Approx(1.52709440467994394326).epsilon(1e-14));
  CHECK_THROWS_AS(func_f(0.999), DomainError);
}

TEST_CASE("f(1+2x) equals g(x)") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-8.0, 4.0);
  for (int i = 0; i < 500; ++i) {
    const double x = std::pow(10.0, u(rng));
    CHECK(func_f(1.0 + 2.0 * x) == Approx(gordon_g(x)).epsilon(1e-12));
  }
}

TEST_CASE("incomplete gamma against quadrature and Boost") {
  CHECK(incomplete_gamma_lower(1.0, 3.0) == Approx(1.0 - std::exp(-3.0)).epsilon(1e-14));
  CHECK(incomplete_gamma_lower(3.0, 2.0) == Approx(0.64664716763387308106).epsilon(1e-13));

  using boost::math::quadrature::gauss_kronrod;
  const double integral = gauss_kronrod<double, 61>::integrate(
      [](double t) { return t * t * std::exp(-t); }, 0.0, 2.0, 10, 1e-14);
  CHECK(incomplete_gamma_lower(3.0, 2.0) == Approx(integral).epsilon(1e-12));

  CHECK(incomplete_gamma_lower(5.0, 0.0) == 0.0);
  CHECK(incomplete_gamma_lower(5.0, 1e9) == Approx(24.0).epsilon(1e-14));
  CHECK_THROWS_AS(incomplete_gamma_lower(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(incomplete_gamma_lower(1.0, -1.0), DomainError);
}

TEST_CASE("regularized gamma P + Q = 1 and matches 50-digit series") {
  for (double a : {0.5, 1.0, 3.0, 17.0, 65.0}) {
    for (double z : {0.01, 0.7, 3.0, 20.0, 80.0}) {
      const double p = regularized_gamma_p(a, z);
      const double q = regularized_gamma_q(a, z);
      CHECK(p + q == Approx(1.0).epsilon(1e-13));
      CHECK(p >= 0.0);
      CHECK(q >= 0.0);
    }
  }
  // Integer a: Q(n, z) = e^{-z} sum_{k<n} z^k/k!.
  for (int n : {1, 4, 31, 60}) {
    for (double z : {0.5, 2.0, 30.0}) {
      mp sum = 0, term = 1;
      for (int k = 0; k < n; ++k) {
        if (k > 0) term *= mp(z) / k;
        sum += term;
      }
      const double q = static_cast<double>(boost::multiprecision::exp(mp(-z)) * sum);
      CHECK(regularized_gamma_q(n, z) == Approx(q).epsilon(1e-12));
    }
  }
}

TEST_CASE("log incomplete gamma stays finite where the plain form overflows") {
  const double lg = log_incomplete_gamma_lower(300.0, 310.0);
  CHECK(std::isfinite(lg));
  CHECK(lg == Approx(std::lgamma(300.0) + std::log(regularized_gamma_p(300.0, 310.0)))
                  .epsilon(1e-12));
}

TEST_CASE("binary_kl") {
  CHECK(binary_kl(0.3, 0.3) == 0.0);
  CHECK(binary_kl(1.0 / 1.2, 1.0 / 1.1) == Approx(0.028513153103694452068).epsilon(1e-13));
  CHECK(std::isinf(binary_kl(0.5, 1.0)));
  CHECK(std::isinf(binary_kl(0.5, 0.0)));
  CHECK(binary_kl(1.0, 0.5, LogBase::bits) == Approx(1.0).epsilon(1e-15));
  CHECK(binary_kl(0.0, 0.25) == Approx(-std::log(0.75)).epsilon(1e-15));
  CHECK_THROWS_AS(binary_kl(1.1, 0.5), DomainError);
}

TEST_CASE("bernoulli_product_kl sums coordinates") {
  const std::vector<double> p{0.2, 0.9, 0.5};
  const std::vector<double> q{0.4, 0.8, 0.5};
  const double expected = binary_kl(0.2, 0.4) + binary_kl(0.9, 0.8);
  CHECK(bernoulli_product_kl(p, q) == Approx(expected).epsilon(1e-15));
  const std::vector<double> shorter{0.1};
  CHECK_THROWS_AS(bernoulli_product_kl(p, shorter), UsageError);
}
