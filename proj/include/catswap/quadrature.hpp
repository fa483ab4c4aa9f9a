#pragma once

#include <utility>
#include <vector>

namespace catswap {

enum class QuadRule { GaussLegendre };

// Quadrature resolution for window integrals. count in [2, 4096].
struct QuadratureNodes {
  int count = 32;
  QuadRule rule = QuadRule::GaussLegendre;
};

// Gauss-Legendre rule on [-1, 1]; cached per order, thread-safe.
struct GaussLegendreRule {
  std::vector<double> x;
  std::vector<double> w;
};

const GaussLegendreRule& gauss_legendre(int n);

// Nodes/weights mapped onto [a, b].
std::vector<std::pair<double, double>> gauss_legendre_on(double a, double b,
                                                         int n);

}  // namespace catswap
