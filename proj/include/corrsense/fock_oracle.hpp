#pragma once

#include <Eigen/Core>
#include <complex>
#include <filesystem>
#include <span>
#include <vector>

#include "corrsense/scalar_funcs.hpp"

namespace corrsense {

/// Upper bound on the truncated Hilbert-space dimension (N+1)^K accepted by
/// the Fock constructors.
inline constexpr Eigen::Index kMaxFockDimension = 4096;

/// Dense operator on K modes, each truncated to photon numbers 0..N.
/// Basis index: sum_i n_i (N+1)^(K-1-i), mode 0 most significant.
class FockOperator {
 public:
  FockOperator(int modes, int cutoff);
  FockOperator(int modes, int cutoff, Eigen::MatrixXcd matrix);

  int modes() const noexcept { return modes_; }
  int cutoff() const noexcept { return cutoff_; }
  Eigen::Index dimension() const noexcept { return matrix_.rows(); }

  const Eigen::MatrixXcd& matrix() const noexcept { return matrix_; }
  Eigen::MatrixXcd& matrix() noexcept { return matrix_; }

  /// Probability mass lost to truncation (1 minus the analytic mass inside
  /// the box), recorded when the state was renormalized.
  double discarded_mass() const noexcept { return discarded_mass_; }
  void set_discarded_mass(double mass) noexcept { discarded_mass_ = mass; }

  double trace() const;
  bool is_hermitian(double tol = 1e-12) const;

  std::vector<int> occupation(Eigen::Index index) const;
  Eigen::Index index_of(std::span<const int> occupation) const;

  static Eigen::Index dimension_for(int modes, int cutoff);

 private:
  int modes_;
  int cutoff_;
  Eigen::MatrixXcd matrix_;
  double discarded_mass_ = 0.0;
};

struct CoherentAmplitude {
  std::complex<double> alpha;
};

struct CoherentKet {
  Eigen::VectorXcd coefficients;
  /// |alpha|^2 > N: the truncation discards a noticeable share of the state.
  bool severe_truncation = false;
};

/// c_n = exp(-|alpha|^2/2) alpha^n / sqrt(n!) for n = 0..N via the
/// recurrence c_{n+1} = c_n alpha / sqrt(n+1).
CoherentKet coherent_ket(CoherentAmplitude amplitude, int cutoff);

/// Diagonal state with entries E^n / (1+E)^{n+1}, n = 0..N. Not renormalized.
FockOperator thermal_state(double energy, int cutoff);

/// Kronecker product a (x) b; both operands must share the cutoff.
FockOperator tensor_product(const FockOperator& a, const FockOperator& b);
FockOperator tensor_power(const FockOperator& op, int copies);

/// The correlated state (1/(pi E)) int exp(-|a|^2/E) |a><a|^{(x)K} d^2a,
/// integrated numerically: Gauss-Laguerre in u = |a|^2/E times the phase
/// average. Phase averaging removes every element whose total photon
/// numbers differ, so only equal-total blocks are accumulated. The trace is
/// rescaled to the analytic mass inside the truncation box.
///
/// Throws ResourceError if (N+1)^K > 4096, DomainError if quad_nodes < 20,
/// NumericalInstabilityError if doubling the node count moves the entropy by
/// more than 1e-6 (only when check_convergence is set).
FockOperator correlated_state(const EnergyParams& params, int cutoff, int quad_nodes = 48,
                              bool check_convergence = true);

/// Probability that every mode of the correlated state holds at most N
/// photons; the total photon number is geometric with mean KE and splits
/// multinomially with equal weights across modes.
double correlated_truncated_mass(const EnergyParams& params, int cutoff);

/// Eigenvalues of a Hermitian operator, exploiting any block structure
/// visible in its sparsity pattern.
std::vector<double> hermitian_spectrum(const Eigen::MatrixXcd& matrix);

/// -sum lambda log lambda over eigenvalues >= 1e-14 after normalizing to
/// unit trace. Throws DomainError if the operator is not Hermitian, has an
/// eigenvalue below -1e-10, or its trace is more than 1e-6 away from 1.
double von_neumann_entropy(const FockOperator& op, LogBase base = LogBase::nats);

struct RelativeEntropy {
  double value = 0.0;
  /// rho has weight outside the support of sigma; value is +infinity.
  bool infinite = false;
};

/// tr rho (log rho - log sigma) from eigendecompositions.
RelativeEntropy quantum_relative_entropy(const FockOperator& rho, const FockOperator& sigma,
                                         LogBase base = LogBase::nats);

/// tr(n_mode rho) for a unit-trace operator.
double mean_photon_number(const FockOperator& op, int mode);

/// The operator with modes i and j exchanged.
FockOperator swap_modes(const FockOperator& op, int i, int j);

struct CoherentTail {
  /// 1 - tr T_N |alpha><alpha| = gamma(N+1, |alpha|^2) / N!.
  double exact = 0.0;
  /// max{2, |alpha|^2}^N / N!.
  double bound = 0.0;
};

CoherentTail truncation_tail_coherent(std::complex<double> alpha, int cutoff);

struct ThermalTail {
  /// (E / (1+E))^{N+1}.
  double exact = 0.0;
  /// 1 - exact >= 1 - 2^{-N}.
  bool meets_bound = false;
};

ThermalTail truncation_tail_thermal(double energy, int cutoff);

/// Little-endian dump: magic "FOCKOP01", uint32 modes, uint32 cutoff,
/// uint64 dimension, then dimension^2 (real, imag) double pairs row-major.
void write_fock_dump(const FockOperator& op, const std::filesystem::path& path);
FockOperator read_fock_dump(const std::filesystem::path& path);

}  // namespace corrsense
