#pragma once

#include <vector>

namespace corrsense {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Hermite rule for weight exp(-x^2) on the real line.
QuadratureRule gauss_hermite(int n);

/// Gauss-Laguerre rule for weight exp(-x) on [0, inf).
QuadratureRule gauss_laguerre(int n);

}  // namespace corrsense
