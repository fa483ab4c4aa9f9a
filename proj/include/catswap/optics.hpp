#pragma once

#include <vector>

#include "catswap/quadrature.hpp"
#include "catswap/states.hpp"

namespace catswap {

// Homodyne acceptance window at phase theta: [x0 - dx/2, x0 + dx/2].
// theta in [0, 2*pi), dx >= 0.
struct HomodyneWindow {
  double theta = 0.0;
  double x0 = 0.0;
  double dx = 0.0;

  void validate() const;
};

// Two-port loss: signal amplitude beta -> sqrt(T)*beta, with sqrt(1-T)*beta
// deposited in `env`. Every term must have `env` in vacuum.
PureState apply_lossy_bs(const PureState& s, const ModeId& signal,
                         const ModeId& env, double T);

// Balanced mixing: (b_i, b_j) -> ((b_i - b_j)/sqrt(2), (b_i + b_j)/sqrt(2)).
PureState apply_balanced_bs(const PureState& s, const ModeId& i,
                            const ModeId& j);

struct VacuumProjection {
  PureState state;  // mode removed, NOT renormalized
  double prob;      // squared norm of `state` (heralding probability for
                    // normalized input)
};

// Projects mode m onto vacuum: coeff *= <0|amp>, mode removed from registry.
VacuumProjection project_vacuum(const PureState& s, const ModeId& m);

// <x_theta|alpha> for quadrature x_theta = (a e^{-i theta} + h.c.)/2 with
// vacuum variance 1/4:
//   (2/pi)^{1/4} exp(-x^2 + 2 b x - b^2/2 - |alpha|^2/2),  b = alpha e^{-i theta}.
cx homodyne_amplitude(double x, double theta, cx alpha);

// Projects mode m onto the point quadrature outcome x (density-amplitude
// weighting; result is NOT renormalized).
PureState project_homodyne_point(const PureState& s, const ModeId& m,
                                 double theta, double x);

struct BandedProjection {
  std::vector<double> weights;    // quadrature weights over the window
  std::vector<PureState> states;  // point projections at the nodes
  double prob;                    // integral of ||P(x) s||^2 over the window
};

// Finite-width homodyne acceptance: incoherent mixture of point projections
// across the window, discretized on Gauss-Legendre nodes.
BandedProjection project_homodyne_banded(const PureState& s, const ModeId& m,
                                         const HomodyneWindow& w,
                                         QuadratureNodes nodes);

// Comparison-only alternative reading that sums point-projection amplitudes
// coherently across the window (single unnormalized state). Not used by the
// protocol pipeline; kept for side-by-side studies of the two readings.
PureState project_homodyne_window_coherent(const PureState& s, const ModeId& m,
                                           const HomodyneWindow& w,
                                           QuadratureNodes nodes);

}  // namespace catswap
