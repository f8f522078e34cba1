#pragma once

#include <vector>

namespace fracop {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point rule, computed once per n and cached (thread-safe).
const GaussRule& gauss_legendre(int n);

}  // namespace fracop
