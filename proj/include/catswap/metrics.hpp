#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "catswap/protocol.hpp"

namespace catswap {

enum class BellSign { Plus, Minus };

// Target Bell-like vector on (A, C), basis |00>,|01>,|10>,|11>:
//   (1/sqrt(2)) * ( e^{-i alpha^2} |00> +/- e^{+i alpha^2} |11> ).
Eigen::Vector4cd bell_state(double alpha, BellSign sign);

// <target| rho |target>, clamped into [0, 1] at the 1e-12 level.
double fidelity(const QubitDensity& rho, const Eigen::Vector4cd& target);

// (1/2) * tr |a - b|  for Hermitian 4x4 matrices.
double trace_distance(const Eigen::Matrix4cd& a, const Eigen::Matrix4cd& b);

// Probability that the first output port is found in vacuum (fixed mismatch
// params.upsilon; homodyne settings in params are irrelevant here).
double vacuum_success_probability(const ProtocolParams& params);

// Probability that the pi/4 quadrature of the surviving port falls inside the
// width-dx acceptance around either of the two peaks (+x0 and -x0), evaluated
// on the normalized vacuum-selected state. Overlapping windows are merged so
// the result never exceeds 1. params.bandwidth must be set. When `loss` is
// given, the probability is averaged over the mismatch distribution.
double homodyne_success_probability(
    const ProtocolParams& params,
    const std::optional<GaussianLossSpec>& loss = std::nullopt);

// Normalized pi/4-quadrature density of the surviving port after vacuum
// selection, sampled on x_grid. Returns (x, density) pairs.
std::vector<std::pair<double, double>> quadrature_distribution(
    const ProtocolParams& params, const std::vector<double>& x_grid);

}  // namespace catswap
