#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string_view>
#include <vector>

#include "corrsense/scalar_funcs.hpp"

namespace corrsense {

enum class DetectionKind { heterodyne, homodyne, photon_counting };
enum class Hypothesis { correlated, uncorrelated };

std::string_view to_string(DetectionKind kind) noexcept;
DetectionKind parse_detection_kind(std::string_view text);

struct Strategy {
  DetectionKind kind;
  EnergyParams params;

  /// Reals per shot: 2K (heterodyne, real parts then imaginary parts),
  /// K (homodyne), K click indicators (photon counting).
  int shot_width() const noexcept;

  /// Closed-form Stein exponent of this strategy.
  double analytic_exponent(LogBase base = LogBase::nats) const;
};

/// One row per shot.
using SampleBlock = Eigen::MatrixXd;

/// n i.i.d. shots under `hypothesis`, deterministic in `seed`.
///
/// Gaussian strategies draw a common amplitude alpha with per-axis variance
/// E/2 for the correlated source (one independent alpha per detector
/// otherwise). Heterodyne adds complex noise with per-axis variance 1/2;
/// homodyne reports sqrt(2) Re(alpha) plus real noise of variance 1/2.
/// Photon counting draws the on/off pattern after the Hadamard interferometer.
SampleBlock sample_block(const Strategy& strategy, Hypothesis hypothesis, int n,
                         std::uint64_t seed);

/// sum over shots of log p_correlated(x) - log p_uncorrelated(x). Gaussian
/// densities use the closed-form exchangeable inverse and determinant.
/// Returns -infinity for a photon pattern the correlated source cannot emit.
double log_likelihood_ratio(const Strategy& strategy, const SampleBlock& block,
                            LogBase base = LogBase::nats);

enum class BetaEstimator {
  /// Fraction of uncorrelated blocks the test accepts as correlated, with a
  /// Wilson interval. Resolves type-II errors down to roughly 3/shots.
  counting,
  /// Change of measure through the exact likelihood ratio:
  /// beta = E_correlated[phi(L) exp(-L)], estimated on correlated blocks.
  /// Resolves arbitrarily small type-II errors.
  likelihood_weighted,
};

std::string_view to_string(BetaEstimator estimator) noexcept;
BetaEstimator parse_beta_estimator(std::string_view text);

struct EstimateConfig {
  double epsilon = 0.1;
  std::vector<int> n_grid;
  int shots = 10000;
  std::uint64_t seed = 1;
  BetaEstimator estimator = BetaEstimator::likelihood_weighted;
  LogBase base = LogBase::bits;
};

struct TestOutcome {
  int n = 0;
  double alpha_hat = 0.0;
  double beta_hat = 0.0;
  /// -log(beta_hat) / n in the configured base; computed in log space so it
  /// stays finite when beta_hat underflows.
  double exponent_hat = 0.0;
  int correlated_trials = 0;
  int uncorrelated_trials = 0;
  /// 95% interval for beta_hat (Wilson for counting, normal for weighted).
  double ci_low = 0.0;
  double ci_high = 0.0;
  /// No type-II error was observed; beta_hat is the rule-of-three bound 3/shots.
  bool beta_upper_bound_only = false;
};

/// For each n: the Neyman-Pearson threshold is the epsilon-quantile of the
/// LLR over `shots` correlated calibration blocks (randomized on ties so the
/// type-I error is exactly epsilon). alpha_hat and beta_hat are then
/// estimated on independent seed streams.
///
/// Throws DomainError unless 0 < epsilon < 1, shots >= 1000 and every n >= 1.
std::vector<TestOutcome> estimate_exponent(const Strategy& strategy,
                                           const EstimateConfig& config);

/// Whether direct counting can resolve 1.5x the analytic exponent at block
/// length n: -log(3/shots) / n >= 1.5 D.
bool counting_feasible(const Strategy& strategy, int shots, int n);

/// Deterministic seed for (seed, a, b, c) via splitmix64 mixing.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c);

}  // namespace corrsense
