#include "corrsense/detection_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "corrsense/classical_exponents.hpp"
#include "corrsense/errors.hpp"
#include "corrsense/parallel.hpp"
#include "corrsense/quantum_exponents.hpp"

namespace corrsense {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double normal(std::mt19937_64& rng, double variance) {
  if (variance == 0.0) return 0.0;
  return std::normal_distribution<double>(0.0, std::sqrt(variance))(rng);
}

// Per-quadrature Gaussian model in the exp(-t^T Sigma^{-1} t) convention.
struct GaussianModel {
  ExchangeableMatrix correlated_precision;
  ExchangeableMatrix product_precision;
  double half_log_det_ratio;  // (ln det Sigma_c - ln det Sigma_u) / 2
};

GaussianModel gaussian_model(const Strategy& s) {
  const ExchangeableMatrix corr = s.kind == DetectionKind::heterodyne
                                      ? het_covariance_structured(s.params)
                                      : hom_covariance_structured(s.params);
  const ExchangeableMatrix prod = s.kind == DetectionKind::heterodyne
                                      ? het_product_covariance_structured(s.params)
                                      : hom_product_covariance_structured(s.params);
  return {exchangeable_inverse(corr), exchangeable_inverse(prod),
          0.5 * (exchangeable_log_det(corr) - exchangeable_log_det(prod))};
}

double gaussian_llr(const GaussianModel& model, int k, int quadratures, const SampleBlock& block) {
  double total = 0.0;
  std::vector<double> t(k);
  for (Eigen::Index row = 0; row < block.rows(); ++row) {
    for (int q = 0; q < quadratures; ++q) {
      for (int i = 0; i < k; ++i) t[i] = block(row, q * k + i);
      total -= model.correlated_precision.quadratic_form(t) -
               model.product_precision.quadratic_form(t) + model.half_log_det_ratio;
    }
  }
  return total;
}

double photon_llr(const EnergyParams& params, const SampleBlock& block) {
  const auto corr = photon_no_click_correlated(params);
  const auto prod = photon_no_click_uncorrelated(params);
  const int k = params.detectors();
  // Tally per mode first so equal outcome counts give bit-identical LLRs.
  std::vector<long> clicks(k, 0);
  for (Eigen::Index row = 0; row < block.rows(); ++row) {
    for (int i = 0; i < k; ++i) clicks[i] += block(row, i) != 0.0;
  }
  double total = 0.0;
  for (int i = 0; i < k; ++i) {
    const long on = clicks[i];
    const long off = static_cast<long>(block.rows()) - on;
    if (off > 0) {
      if (prod[i] == 0.0) throw DomainError("photon LLR: outcome impossible under both hypotheses");
      total += off * std::log(corr[i] / prod[i]);
    }
    if (on > 0) {
      if (prod[i] == 1.0) throw DomainError("photon LLR: outcome impossible under both hypotheses");
      if (corr[i] == 1.0) return kNegInf;
      total += on * std::log((1.0 - corr[i]) / (1.0 - prod[i]));
    }
  }
  return total;
}

struct Threshold {
  double tau = 0.0;
  double gamma = 0.0;  // probability of declaring "uncorrelated" at L == tau
};

Threshold calibrate(std::vector<double> llr, double epsilon) {
  std::sort(llr.begin(), llr.end());
  const double target = epsilon * static_cast<double>(llr.size());
  const auto k = static_cast<std::size_t>(std::floor(target));
  Threshold th;
  th.tau = llr[std::min(k, llr.size() - 1)];
  const auto lo = std::lower_bound(llr.begin(), llr.end(), th.tau);
  const auto hi = std::upper_bound(llr.begin(), llr.end(), th.tau);
  const double below = static_cast<double>(lo - llr.begin());
  const double at = static_cast<double>(hi - lo);
  th.gamma = std::clamp((target - below) / at, 0.0, 1.0);
  return th;
}

// Probability that the randomized test declares "correlated".
double accept(const Threshold& th, double llr) {
  if (llr > th.tau) return 1.0;
  if (llr == th.tau) return 1.0 - th.gamma;
  return 0.0;
}

std::vector<double> llr_batch(const Strategy& s, Hypothesis h, int n, int shots,
                              std::uint64_t seed, std::uint64_t grid_index, std::uint64_t stream) {
  std::vector<double> out(shots);
  parallel_for(static_cast<std::size_t>(shots), [&](std::size_t b) {
    const SampleBlock block = sample_block(s, h, n, derive_seed(seed, grid_index, stream, b));
    out[b] = log_likelihood_ratio(s, block);
  });
  return out;
}

void wilson(double p, double trials, double& low, double& high) {
  const double z = 1.959963984540054;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / trials;
  const double centre = (p + z2 / (2.0 * trials)) / denom;
  const double half =
      z * std::sqrt(p * (1.0 - p) / trials + z2 / (4.0 * trials * trials)) / denom;
  low = std::max(0.0, centre - half);
  high = std::min(1.0, centre + half);
}

}  // namespace

std::string_view to_string(DetectionKind kind) noexcept {
  switch (kind) {
    case DetectionKind::heterodyne:
      return "heterodyne";
    case DetectionKind::homodyne:
      return "homodyne";
    case DetectionKind::photon_counting:
      return "photon_counting";
  }
  return "unknown";
}

DetectionKind parse_detection_kind(std::string_view text) {
  if (text == "heterodyne" || text == "het") return DetectionKind::heterodyne;
  if (text == "homodyne" || text == "hom") return DetectionKind::homodyne;
  if (text == "photon_counting" || text == "photon") return DetectionKind::photon_counting;
  throw UsageError("unknown strategy '" + std::string(text) + "'");
}

std::string_view to_string(BetaEstimator estimator) noexcept {
  return estimator == BetaEstimator::counting ? "counting" : "weighted";
}

BetaEstimator parse_beta_estimator(std::string_view text) {
  if (text == "counting") return BetaEstimator::counting;
  if (text == "weighted" || text == "likelihood_weighted") return BetaEstimator::likelihood_weighted;
  throw UsageError("unknown estimator '" + std::string(text) + "'");
}

int Strategy::shot_width() const noexcept {
  return kind == DetectionKind::heterodyne ? 2 * params.detectors() : params.detectors();
}

double Strategy::analytic_exponent(LogBase base) const {
  switch (kind) {
    case DetectionKind::heterodyne:
      return het_exponent(params, base);
    case DetectionKind::homodyne:
      return hom_exponent(params, base);
    case DetectionKind::photon_counting:
      return photon_counting_exponent(params, base);
  }
  return 0.0;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ a);
  h = splitmix64(h ^ b);
  return splitmix64(h ^ c);
}

SampleBlock sample_block(const Strategy& strategy, Hypothesis hypothesis, int n,
                         std::uint64_t seed) {
  if (n < 1) throw DomainError("sample_block: n must be >= 1");
  const int k = strategy.params.detectors();
  const double e = strategy.params.energy();
  const bool correlated = hypothesis == Hypothesis::correlated;
  std::mt19937_64 rng(seed);
  SampleBlock block(n, strategy.shot_width());

  switch (strategy.kind) {
    case DetectionKind::heterodyne:
      for (int row = 0; row < n; ++row) {
        double re = normal(rng, 0.5 * e);
        double im = normal(rng, 0.5 * e);
        for (int i = 0; i < k; ++i) {
          if (!correlated && i > 0) {
            re = normal(rng, 0.5 * e);
            im = normal(rng, 0.5 * e);
          }
          block(row, i) = re + normal(rng, 0.5);
          block(row, k + i) = im + normal(rng, 0.5);
        }
      }
      break;
    case DetectionKind::homodyne:
      for (int row = 0; row < n; ++row) {
        double re = normal(rng, 0.5 * e);
        for (int i = 0; i < k; ++i) {
          if (!correlated && i > 0) re = normal(rng, 0.5 * e);
          block(row, i) = std::numbers::sqrt2 * re + normal(rng, 0.5);
        }
      }
      break;
    case DetectionKind::photon_counting: {
      const auto no_click = correlated ? photon_no_click_correlated(strategy.params)
                                       : photon_no_click_uncorrelated(strategy.params);
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      for (int row = 0; row < n; ++row) {
        for (int i = 0; i < k; ++i) block(row, i) = unit(rng) >= no_click[i] ? 1.0 : 0.0;
      }
      break;
    }
  }
  return block;
}

double log_likelihood_ratio(const Strategy& strategy, const SampleBlock& block, LogBase base) {
  if (block.rows() == 0) return 0.0;
  if (block.cols() != strategy.shot_width()) {
    throw UsageError("log_likelihood_ratio: block width does not match the strategy");
  }
  const int k = strategy.params.detectors();
  double nats = 0.0;
  switch (strategy.kind) {
    case DetectionKind::heterodyne:
      nats = gaussian_llr(gaussian_model(strategy), k, 2, block);
      break;
    case DetectionKind::homodyne:
      nats = gaussian_llr(gaussian_model(strategy), k, 1, block);
      break;
    case DetectionKind::photon_counting:
      nats = photon_llr(strategy.params, block);
      break;
  }
  return from_nats(nats, base);
}

bool counting_feasible(const Strategy& strategy, int shots, int n) {
  const double resolvable = -std::log(3.0 / shots) / n;
  return resolvable >= 1.5 * strategy.analytic_exponent();
}

std::vector<TestOutcome> estimate_exponent(const Strategy& strategy, const EstimateConfig& config) {
  if (!(config.epsilon > 0.0 && config.epsilon < 1.0)) {
    throw DomainError("estimate_exponent: epsilon must lie in (0, 1)");
  }
  if (config.shots < 1000) throw DomainError("estimate_exponent: shots must be >= 1000");
  if (config.n_grid.empty()) throw DomainError("estimate_exponent: empty n grid");
  for (int n : config.n_grid) {
    if (n < 1) throw DomainError("estimate_exponent: block lengths must be >= 1");
  }

  enum Stream : std::uint64_t { kCalibration = 0, kCorrelated = 1, kUncorrelated = 2 };
  const double shots = config.shots;
  std::vector<TestOutcome> outcomes;
  outcomes.reserve(config.n_grid.size());

  for (std::size_t j = 0; j < config.n_grid.size(); ++j) {
    const int n = config.n_grid[j];
    const Threshold th = calibrate(
        llr_batch(strategy, Hypothesis::correlated, n, config.shots, config.seed, j, kCalibration),
        config.epsilon);
    const std::vector<double> corr =
        llr_batch(strategy, Hypothesis::correlated, n, config.shots, config.seed, j, kCorrelated);

    TestOutcome out;
    out.n = n;
    out.correlated_trials = 2 * config.shots;
    double rejected = 0.0;
    for (double l : corr) rejected += 1.0 - accept(th, l);
    out.alpha_hat = rejected / shots;

    double log_beta = 0.0;
    if (config.estimator == BetaEstimator::counting) {
      const std::vector<double> prod = llr_batch(strategy, Hypothesis::uncorrelated, n,
                                                 config.shots, config.seed, j, kUncorrelated);
      out.uncorrelated_trials = config.shots;
      double accepted = 0.0;
      for (double l : prod) accepted += accept(th, l);
      if (accepted == 0.0) {
        out.beta_upper_bound_only = true;
        out.beta_hat = 3.0 / shots;
        out.ci_low = 0.0;
        out.ci_high = out.beta_hat;
      } else {
        out.beta_hat = accepted / shots;
        wilson(out.beta_hat, shots, out.ci_low, out.ci_high);
      }
      log_beta = std::log(out.beta_hat);
    } else {
      // Terms phi(L) exp(-L), rescaled by their largest exponent.
      double peak = kNegInf;
      for (double l : corr) {
        if (accept(th, l) > 0.0) peak = std::max(peak, -l);
      }
      double sum = 0.0;
      double sum_sq = 0.0;
      for (double l : corr) {
        const double phi = accept(th, l);
        if (phi == 0.0) continue;
        const double term = phi * std::exp(-l - peak);
        sum += term;
        sum_sq += term * term;
      }
      const double mean = sum / shots;
      const double var = std::max(0.0, sum_sq / shots - mean * mean);
      const double se = std::sqrt(var / shots);
      const double scale = std::exp(peak);
      log_beta = peak + std::log(mean);
      out.beta_hat = std::exp(log_beta);
      out.ci_low = std::max(0.0, (mean - 1.959963984540054 * se) * scale);
      out.ci_high = std::min(1.0, (mean + 1.959963984540054 * se) * scale);
    }
    out.exponent_hat = from_nats(-log_beta / n, config.base);
    outcomes.push_back(out);
  }
  return outcomes;
}

}  // namespace corrsense
