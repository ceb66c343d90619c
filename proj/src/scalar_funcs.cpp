#include "corrsense/scalar_funcs.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <string>

#include "corrsense/errors.hpp"

namespace corrsense {

namespace {

constexpr int kMaxIterations = 10000;
constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;

void check_gamma_args(double a, double z) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw DomainError("incomplete gamma: a must be positive, got " + std::to_string(a));
  }
  if (!(z >= 0.0) || std::isnan(z)) {
    throw DomainError("incomplete gamma: z must be non-negative, got " + std::to_string(z));
  }
}

// log of  sum_{n>=0} z^n / ((a+1)...(a+n)); P(a,z) = exp(-z + a ln z - lgamma(a+1)) * sum.
double log_series_sum(double a, double z) {
  double term = 1.0;
  double sum = 1.0;
  double ap = a;
  for (int i = 0; i < kMaxIterations; ++i) {
    ap += 1.0;
    term *= z / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) return std::log(sum);
  }
  throw NumericalInstabilityError("incomplete gamma series did not converge");
}

// Modified Lentz evaluation of the continued fraction for Q(a,z), z >= a+1.
double log_continued_fraction(double a, double z) {
  double b = z + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) return std::log(h);
  }
  throw NumericalInstabilityError("incomplete gamma continued fraction did not converge");
}

bool use_series(double a, double z) { return z < a + 1.0; }

}  // namespace

const char* to_string(LogBase base) noexcept { return base == LogBase::bits ? "bits" : "nats"; }

LogBase parse_log_base(const char* text) {
  if (std::strcmp(text, "bits") == 0) return LogBase::bits;
  if (std::strcmp(text, "nats") == 0) return LogBase::nats;
  throw UsageError(std::string("unknown log base '") + text + "' (expected bits or nats)");
}

EnergyParams::EnergyParams(int detectors, double energy) : detectors_(detectors), energy_(energy) {
  if (detectors < 1) {
    throw DomainError("detector count K must be >= 1, got " + std::to_string(detectors));
  }
  if (!std::isfinite(energy) || energy < 0.0) {
    throw DomainError("energy E must be finite and >= 0, got " + std::to_string(energy));
  }
}

double xlogx(double x) noexcept { return x == 0.0 ? 0.0 : x * std::log(x); }

double gordon_g(double x, LogBase base) {
  if (!(x >= 0.0)) throw DomainError("gordon_g: x must be >= 0, got " + std::to_string(x));
  if (x == 0.0) return 0.0;
  // (x+1) ln(x+1) - x ln x regrouped to avoid cancellation at large x.
  const double nats = std::log1p(x) + x * std::log1p(1.0 / x);
  return from_nats(nats, base);
}

double func_f(double x, LogBase base) {
  if (!(x >= 1.0)) throw DomainError("func_f: x must be >= 1, got " + std::to_string(x));
  // f(x) = g((x - 1) / 2).
  return gordon_g(0.5 * (x - 1.0), base);
}

double regularized_gamma_p(double a, double z) {
  check_gamma_args(a, z);
  if (z == 0.0) return 0.0;
  const double log_prefix = -z + a * std::log(z) - std::lgamma(a);
  if (use_series(a, z)) {
    return std::exp(log_prefix - std::log(a) + log_series_sum(a, z));
  }
  return 1.0 - std::exp(log_prefix + log_continued_fraction(a, z));
}

double regularized_gamma_q(double a, double z) {
  check_gamma_args(a, z);
  if (z == 0.0) return 1.0;
  const double log_prefix = -z + a * std::log(z) - std::lgamma(a);
  if (use_series(a, z)) {
    return 1.0 - std::exp(log_prefix - std::log(a) + log_series_sum(a, z));
  }
  return std::exp(log_prefix + log_continued_fraction(a, z));
}

double log_incomplete_gamma_lower(double a, double z) {
  check_gamma_args(a, z);
  if (z == 0.0) return -std::numeric_limits<double>::infinity();
  if (use_series(a, z)) {
    return -z + a * std::log(z) - std::log(a) + log_series_sum(a, z);
  }
  return std::log(regularized_gamma_p(a, z)) + std::lgamma(a);
}

double incomplete_gamma_lower(double a, double z) {
  return std::exp(log_incomplete_gamma_lower(a, z));
}

double incomplete_gamma_upper(double a, double z) {
  check_gamma_args(a, z);
  if (z == 0.0) return std::tgamma(a);
  if (use_series(a, z)) return regularized_gamma_q(a, z) * std::tgamma(a);
  return std::exp(-z + a * std::log(z) + log_continued_fraction(a, z));
}

double binary_kl(double p0, double q0, LogBase base) {
  if (!(p0 >= 0.0 && p0 <= 1.0) || !(q0 >= 0.0 && q0 <= 1.0)) {
    throw DomainError("binary_kl: probabilities must lie in [0, 1]");
  }
  auto term = [](double p, double q) {
    if (p == 0.0) return 0.0;
    if (q == 0.0) return std::numeric_limits<double>::infinity();
    return p * std::log(p / q);
  };
  return from_nats(term(p0, q0) + term(1.0 - p0, 1.0 - q0), base);
}

double bernoulli_product_kl(std::span<const double> p0, std::span<const double> q0, LogBase base) {
  if (p0.size() != q0.size()) {
    throw UsageError("bernoulli_product_kl: length mismatch (" + std::to_string(p0.size()) +
                     " vs " + std::to_string(q0.size()) + ")");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < p0.size(); ++i) total += binary_kl(p0[i], q0[i]);
  return from_nats(total, base);
}

}  // namespace corrsense
