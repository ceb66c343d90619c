#include "corrsense/fock_oracle.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numeric>
#include <string>

#include "corrsense/errors.hpp"
#include "corrsense/quadrature.hpp"

namespace corrsense {

namespace {

constexpr double kZeroEigenvalue = 1e-14;

void require_valid_shape(int modes, int cutoff) {
  if (modes < 1) throw DomainError("FockOperator: modes must be >= 1");
  if (cutoff < 1) throw DomainError("FockOperator: cutoff must be >= 1");
}

// Groups basis indices into connected components of the nonzero pattern.
std::vector<std::vector<Eigen::Index>> pattern_components(
    std::initializer_list<const Eigen::MatrixXcd*> matrices) {
  const Eigen::Index n = (*matrices.begin())->rows();
  std::vector<Eigen::Index> parent(n);
  std::iota(parent.begin(), parent.end(), Eigen::Index{0});
  auto find = [&](Eigen::Index x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const Eigen::MatrixXcd* m : matrices) {
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index i = 0; i < j; ++i) {
        if ((*m)(i, j) != 0.0 || (*m)(j, i) != 0.0) {
          const Eigen::Index ri = find(i);
          const Eigen::Index rj = find(j);
          if (ri != rj) parent[std::max(ri, rj)] = std::min(ri, rj);
        }
      }
    }
  }
  std::vector<std::vector<Eigen::Index>> groups(n);
  for (Eigen::Index i = 0; i < n; ++i) groups[find(i)].push_back(i);
  std::erase_if(groups, [](const auto& g) { return g.empty(); });
  return groups;
}

Eigen::MatrixXcd gather(const Eigen::MatrixXcd& m, const std::vector<Eigen::Index>& idx) {
  const Eigen::Index b = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXcd block(b, b);
  for (Eigen::Index i = 0; i < b; ++i) {
    for (Eigen::Index j = 0; j < b; ++j) block(i, j) = m(idx[i], idx[j]);
  }
  return block;
}

// Validates a density operator and returns its trace.
double check_density(const FockOperator& op, const char* who) {
  if (!op.is_hermitian()) throw DomainError(std::string(who) + ": operator is not Hermitian");
  const double tr = op.trace();
  if (std::abs(tr - 1.0) > 1e-6) {
    throw DomainError(std::string(who) + ": trace " + std::to_string(tr) +
                      " is more than 1e-6 away from 1");
  }
  return tr;
}

void check_psd(const std::vector<double>& spectrum, const char* who) {
  if (!spectrum.empty() && *std::min_element(spectrum.begin(), spectrum.end()) < -1e-10) {
    throw DomainError(std::string(who) + ": operator is not positive semidefinite");
  }
}

double log_factorial(int n) { return std::lgamma(n + 1.0); }

struct BasisInfo {
  std::vector<int> total;            // total photon number per basis index
  std::vector<double> log_fact_sum;  // sum_i log n_i!
};

BasisInfo basis_info(int modes, int cutoff) {
  const Eigen::Index dim = FockOperator::dimension_for(modes, cutoff);
  BasisInfo info;
  info.total.resize(dim);
  info.log_fact_sum.resize(dim);
  std::vector<int> occ(modes, 0);
  for (Eigen::Index idx = 0; idx < dim; ++idx) {
    int s = 0;
    double lf = 0.0;
    for (int n : occ) {
      s += n;
      lf += log_factorial(n);
    }
    info.total[idx] = s;
    info.log_fact_sum[idx] = lf;
    for (int pos = modes - 1; pos >= 0; --pos) {
      if (++occ[pos] <= cutoff) break;
      occ[pos] = 0;
    }
  }
  return info;
}

FockOperator vacuum(int modes, int cutoff) {
  FockOperator op(modes, cutoff);
  op.matrix()(0, 0) = 1.0;
  return op;
}

// Unnormalized quadrature construction of the correlated state.
FockOperator build_correlated(const EnergyParams& params, int cutoff, int nodes) {
  const int k = params.detectors();
  const double e = params.energy();
  const BasisInfo info = basis_info(k, cutoff);
  const QuadratureRule rule = gauss_laguerre(nodes);

  std::vector<std::vector<Eigen::Index>> blocks(static_cast<std::size_t>(k) * cutoff + 1);
  for (Eigen::Index idx = 0; idx < static_cast<Eigen::Index>(info.total.size()); ++idx) {
    blocks[info.total[idx]].push_back(idx);
  }

  FockOperator op(k, cutoff);
  for (std::size_t s = 0; s < blocks.size(); ++s) {
    const auto& idx = blocks[s];
    // Row n, column j: sqrt(w_j) <n|a_j>^{(x)K} with the phase averaged out:
    // exp(-K r^2 / 2) r^S / sqrt(prod n_i!), r^2 = E u_j.
    Eigen::MatrixXd amplitudes(static_cast<Eigen::Index>(idx.size()), nodes);
    for (int j = 0; j < nodes; ++j) {
      const double r2 = e * rule.nodes[j];
      const double log_common =
          0.5 * (std::log(rule.weights[j]) - k * r2 + static_cast<double>(s) * std::log(r2));
      for (std::size_t a = 0; a < idx.size(); ++a) {
        amplitudes(static_cast<Eigen::Index>(a), j) =
            std::exp(log_common - 0.5 * info.log_fact_sum[idx[a]]);
      }
    }
    const Eigen::MatrixXd block = amplitudes * amplitudes.transpose();
    for (std::size_t a = 0; a < idx.size(); ++a) {
      for (std::size_t b = 0; b < idx.size(); ++b) {
        op.matrix()(idx[a], idx[b]) = block(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      }
    }
  }
  return op;
}

void put_u32(std::ostream& out, std::uint32_t v) {
  std::array<char, 4> b{};
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(b.data(), b.size());
}

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> b{};
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(b.data(), b.size());
}

void put_f64(std::ostream& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

std::uint64_t get_u64(std::istream& in) {
  std::array<unsigned char, 8> b{};
  in.read(reinterpret_cast<char*>(b.data()), b.size());
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

std::uint32_t get_u32(std::istream& in) {
  std::array<unsigned char, 4> b{};
  in.read(reinterpret_cast<char*>(b.data()), b.size());
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

constexpr char kDumpMagic[8] = {'F', 'O', 'C', 'K', 'O', 'P', '0', '1'};

}  // namespace

FockOperator::FockOperator(int modes, int cutoff) : modes_(modes), cutoff_(cutoff) {
  require_valid_shape(modes, cutoff);
  const Eigen::Index dim = dimension_for(modes, cutoff);
  matrix_ = Eigen::MatrixXcd::Zero(dim, dim);
}

FockOperator::FockOperator(int modes, int cutoff, Eigen::MatrixXcd matrix)
    : modes_(modes), cutoff_(cutoff), matrix_(std::move(matrix)) {
  require_valid_shape(modes, cutoff);
  const Eigen::Index dim = dimension_for(modes, cutoff);
  if (matrix_.rows() != dim || matrix_.cols() != dim) {
    throw UsageError("FockOperator: matrix size does not match (N+1)^K");
  }
}

Eigen::Index FockOperator::dimension_for(int modes, int cutoff) {
  Eigen::Index dim = 1;
  for (int i = 0; i < modes; ++i) {
    dim *= cutoff + 1;
    if (dim > (Eigen::Index{1} << 40)) throw ResourceError("Fock dimension overflow");
  }
  return dim;
}

double FockOperator::trace() const { return matrix_.trace().real(); }

bool FockOperator::is_hermitian(double tol) const {
  const double scale = std::max(1.0, matrix_.cwiseAbs().maxCoeff());
  return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

std::vector<int> FockOperator::occupation(Eigen::Index index) const {
  std::vector<int> occ(modes_);
  for (int pos = modes_ - 1; pos >= 0; --pos) {
    occ[pos] = static_cast<int>(index % (cutoff_ + 1));
    index /= cutoff_ + 1;
  }
  return occ;
}

Eigen::Index FockOperator::index_of(std::span<const int> occupation) const {
  if (static_cast<int>(occupation.size()) != modes_) throw UsageError("index_of: wrong mode count");
  Eigen::Index idx = 0;
  for (int n : occupation) {
    if (n < 0 || n > cutoff_) throw DomainError("index_of: occupation outside cutoff");
    idx = idx * (cutoff_ + 1) + n;
  }
  return idx;
}

CoherentKet coherent_ket(CoherentAmplitude amplitude, int cutoff) {
  if (cutoff < 1) throw DomainError("coherent_ket: cutoff must be >= 1");
  const std::complex<double> alpha = amplitude.alpha;
  CoherentKet ket;
  ket.coefficients.resize(cutoff + 1);
  ket.coefficients[0] = std::exp(-0.5 * std::norm(alpha));
  for (int n = 0; n < cutoff; ++n) {
    ket.coefficients[n + 1] = ket.coefficients[n] * alpha / std::sqrt(n + 1.0);
  }
  ket.severe_truncation = std::norm(alpha) > cutoff;
  return ket;
}

FockOperator thermal_state(double energy, int cutoff) {
  if (!(energy >= 0.0) || !std::isfinite(energy)) {
    throw DomainError("thermal_state: energy must be finite and >= 0");
  }
  FockOperator op(1, cutoff);
  if (energy == 0.0) {
    op.matrix()(0, 0) = 1.0;
    return op;
  }
  const double ratio = energy / (1.0 + energy);
  double p = 1.0 / (1.0 + energy);
  for (int n = 0; n <= cutoff; ++n) {
    op.matrix()(n, n) = p;
    p *= ratio;
  }
  op.set_discarded_mass(std::pow(ratio, cutoff + 1));
  return op;
}

FockOperator tensor_product(const FockOperator& a, const FockOperator& b) {
  if (a.cutoff() != b.cutoff()) throw UsageError("tensor_product: cutoffs differ");
  const int modes = a.modes() + b.modes();
  if (FockOperator::dimension_for(modes, a.cutoff()) > kMaxFockDimension) {
    throw ResourceError("tensor_product: dimension exceeds guard");
  }
  const Eigen::Index db = b.dimension();
  Eigen::MatrixXcd m(a.dimension() * db, a.dimension() * db);
  for (Eigen::Index i = 0; i < a.dimension(); ++i) {
    for (Eigen::Index j = 0; j < a.dimension(); ++j) {
      m.block(i * db, j * db, db, db) = a.matrix()(i, j) * b.matrix();
    }
  }
  FockOperator out(modes, a.cutoff(), std::move(m));
  out.set_discarded_mass(1.0 - (1.0 - a.discarded_mass()) * (1.0 - b.discarded_mass()));
  return out;
}

FockOperator tensor_power(const FockOperator& op, int copies) {
  if (copies < 1) throw DomainError("tensor_power: copies must be >= 1");
  FockOperator out = op;
  for (int i = 1; i < copies; ++i) out = tensor_product(out, op);
  return out;
}

double correlated_truncated_mass(const EnergyParams& params, int cutoff) {
  const int k = params.detectors();
  const double e = params.energy();
  if (e == 0.0) return 1.0;
  const BasisInfo info = basis_info(k, cutoff);
  const double log_e = std::log(e);
  const double log_den = std::log1p(k * e);
  double mass = 0.0;
  for (std::size_t idx = 0; idx < info.total.size(); ++idx) {
    const int s = info.total[idx];
    mass += std::exp(log_factorial(s) - info.log_fact_sum[idx] + s * log_e - (s + 1) * log_den);
  }
  return mass;
}

FockOperator correlated_state(const EnergyParams& params, int cutoff, int quad_nodes,
                              bool check_convergence) {
  const int k = params.detectors();
  if (cutoff < 1) throw DomainError("correlated_state: cutoff must be >= 1");
  if (FockOperator::dimension_for(k, cutoff) > kMaxFockDimension) {
    throw ResourceError("correlated_state: (N+1)^K = " +
                        std::to_string(FockOperator::dimension_for(k, cutoff)) +
                        " exceeds the guard of " + std::to_string(kMaxFockDimension));
  }
  if (quad_nodes < 20) throw DomainError("correlated_state: quad_nodes must be >= 20");
  if (params.energy() == 0.0) return vacuum(k, cutoff);

  const double mass = correlated_truncated_mass(params, cutoff);
  auto normalized = [&](int nodes) {
    FockOperator op = build_correlated(params, cutoff, nodes);
    op.matrix() *= mass / op.trace();
    op.set_discarded_mass(1.0 - mass);
    return op;
  };

  FockOperator op = normalized(quad_nodes);
  if (check_convergence) {
    // Entropy is taken after rescaling to unit trace so that the comparison
    // isolates the quadrature error.
    auto entropy_of = [](const FockOperator& state) {
      FockOperator unit = state;
      unit.matrix() /= unit.trace();
      return von_neumann_entropy(unit);
    };
    const double coarse = entropy_of(op);
    const double fine = entropy_of(normalized(2 * quad_nodes));
    if (std::abs(coarse - fine) > 1e-6) {
      throw NumericalInstabilityError("correlated_state: quadrature not converged (entropy moved " +
                                      std::to_string(std::abs(coarse - fine)) + ")");
    }
  }
  return op;
}

std::vector<double> hermitian_spectrum(const Eigen::MatrixXcd& matrix) {
  std::vector<double> values;
  values.reserve(matrix.rows());
  for (const auto& idx : pattern_components({&matrix})) {
    if (idx.size() == 1) {
      values.push_back(matrix(idx[0], idx[0]).real());
      continue;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(gather(matrix, idx),
                                                           Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
      throw NumericalInstabilityError("hermitian_spectrum: eigensolver failed");
    }
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
      values.push_back(solver.eigenvalues()[i]);
    }
  }
  return values;
}

double von_neumann_entropy(const FockOperator& op, LogBase base) {
  const double tr = check_density(op, "von_neumann_entropy");
  const std::vector<double> spectrum = hermitian_spectrum(op.matrix());
  check_psd(spectrum, "von_neumann_entropy");
  double entropy = 0.0;
  for (double lambda : spectrum) {
    const double p = lambda / tr;
    if (p >= kZeroEigenvalue) entropy -= p * std::log(p);
  }
  return from_nats(entropy, base);
}

RelativeEntropy quantum_relative_entropy(const FockOperator& rho, const FockOperator& sigma,
                                         LogBase base) {
  if (rho.dimension() != sigma.dimension()) {
    throw UsageError("quantum_relative_entropy: dimension mismatch");
  }
  const double tr_rho = check_density(rho, "quantum_relative_entropy");
  const double tr_sigma = check_density(sigma, "quantum_relative_entropy");

  double rho_log_rho = 0.0;
  double rho_log_sigma = 0.0;
  for (const auto& idx : pattern_components({&rho.matrix(), &sigma.matrix()})) {
    const Eigen::MatrixXcd r = gather(rho.matrix(), idx) / tr_rho;
    const Eigen::MatrixXcd s = gather(sigma.matrix(), idx) / tr_sigma;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> rho_solver(r, Eigen::EigenvaluesOnly);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> sigma_solver(s);
    if (rho_solver.info() != Eigen::Success || sigma_solver.info() != Eigen::Success) {
      throw NumericalInstabilityError("quantum_relative_entropy: eigensolver failed");
    }
    for (Eigen::Index i = 0; i < rho_solver.eigenvalues().size(); ++i) {
      const double p = rho_solver.eigenvalues()[i];
      if (p < -1e-10) throw DomainError("quantum_relative_entropy: rho is not PSD");
      if (p >= kZeroEigenvalue) rho_log_rho += p * std::log(p);
    }
    // tr rho log sigma = sum_k <k|rho|k> log mu_k in sigma's eigenbasis.
    const Eigen::MatrixXcd& vecs = sigma_solver.eigenvectors();
    for (Eigen::Index kidx = 0; kidx < vecs.cols(); ++kidx) {
      const double mu = sigma_solver.eigenvalues()[kidx];
      if (mu < -1e-10) throw DomainError("quantum_relative_entropy: sigma is not PSD");
      const double weight = (vecs.col(kidx).adjoint() * r * vecs.col(kidx))(0, 0).real();
      if (mu > 0.0) {
        rho_log_sigma += weight * std::log(mu);
      } else if (weight > 1e-12) {
        return {std::numeric_limits<double>::infinity(), true};
      }
    }
  }
  return {from_nats(rho_log_rho - rho_log_sigma, base), false};
}

double mean_photon_number(const FockOperator& op, int mode) {
  if (mode < 0 || mode >= op.modes()) throw UsageError("mean_photon_number: mode out of range");
  double total = 0.0;
  for (Eigen::Index idx = 0; idx < op.dimension(); ++idx) {
    total += op.occupation(idx)[mode] * op.matrix()(idx, idx).real();
  }
  return total / op.trace();
}

FockOperator swap_modes(const FockOperator& op, int i, int j) {
  if (i < 0 || j < 0 || i >= op.modes() || j >= op.modes()) {
    throw UsageError("swap_modes: mode out of range");
  }
  std::vector<Eigen::Index> perm(op.dimension());
  for (Eigen::Index idx = 0; idx < op.dimension(); ++idx) {
    std::vector<int> occ = op.occupation(idx);
    std::swap(occ[i], occ[j]);
    perm[idx] = op.index_of(occ);
  }
  FockOperator out(op.modes(), op.cutoff());
  for (Eigen::Index a = 0; a < op.dimension(); ++a) {
    for (Eigen::Index b = 0; b < op.dimension(); ++b) {
      out.matrix()(perm[a], perm[b]) = op.matrix()(a, b);
    }
  }
  out.set_discarded_mass(op.discarded_mass());
  return out;
}

CoherentTail truncation_tail_coherent(std::complex<double> alpha, int cutoff) {
  if (cutoff < 1) throw DomainError("truncation_tail_coherent: N must be >= 1");
  const double z = std::norm(alpha);
  CoherentTail tail;
  // sum_{n<=N} e^{-z} z^n / n! = Q(N+1, z), so the tail is P(N+1, z).
  tail.exact = z == 0.0 ? 0.0 : regularized_gamma_p(cutoff + 1.0, z);
  const double m = std::max(2.0, z);
  tail.bound = std::exp(cutoff * std::log(m) - log_factorial(cutoff));
  return tail;
}

ThermalTail truncation_tail_thermal(double energy, int cutoff) {
  if (!(energy >= 0.0)) throw DomainError("truncation_tail_thermal: energy must be >= 0");
  if (cutoff < 1) throw DomainError("truncation_tail_thermal: N must be >= 1");
  ThermalTail tail;
  tail.exact = energy == 0.0 ? 0.0 : std::pow(energy / (1.0 + energy), cutoff + 1);
  tail.meets_bound = tail.exact <= std::ldexp(1.0, -cutoff);
  return tail;
}

void write_fock_dump(const FockOperator& op, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(kDumpMagic, sizeof(kDumpMagic));
  put_u32(out, static_cast<std::uint32_t>(op.modes()));
  put_u32(out, static_cast<std::uint32_t>(op.cutoff()));
  put_u64(out, static_cast<std::uint64_t>(op.dimension()));
  for (Eigen::Index i = 0; i < op.dimension(); ++i) {
    for (Eigen::Index j = 0; j < op.dimension(); ++j) {
      put_f64(out, op.matrix()(i, j).real());
      put_f64(out, op.matrix()(i, j).imag());
    }
  }
  if (!out) throw IoError("failed writing " + path.string());
}

FockOperator read_fock_dump(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  char magic[sizeof(kDumpMagic)];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kDumpMagic, sizeof(magic)) != 0) {
    throw IoError(path.string() + ": not a Fock operator dump");
  }
  const auto modes = static_cast<int>(get_u32(in));
  const auto cutoff = static_cast<int>(get_u32(in));
  const auto dim = static_cast<Eigen::Index>(get_u64(in));
  if (!in || modes < 1 || cutoff < 1 || FockOperator::dimension_for(modes, cutoff) != dim) {
    throw IoError(path.string() + ": inconsistent header");
  }
  Eigen::MatrixXcd m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      const double re = std::bit_cast<double>(get_u64(in));
      const double im = std::bit_cast<double>(get_u64(in));
      m(i, j) = {re, im};
    }
  }
  if (!in) throw IoError(path.string() + ": truncated payload");
  return FockOperator(modes, cutoff, std::move(m));
}

}  // namespace corrsense
