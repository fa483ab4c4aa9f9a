#pragma once

#include <vector>

#include "catswap/protocol.hpp"

// Independent cross-check of the closed-form engine in a truncated Fock
// basis. Everything here works with photon-number amplitudes and dense linear
// algebra; it deliberately calls none of the coherent-label transforms in
// optics.hpp / states.hpp (only parameter and result containers are shared).
namespace catswap::fock {

struct OracleConfig {
  int n_max = 40;        // per-mode Fock truncation
  double x_min = -10.0;  // quadrature grid range for integrals
  double x_max = 10.0;
  double x_step = 0.005;  // target step of banded-window integration
};

// Fock amplitudes of |beta| up to n_max: e^{-|b|^2/2} b^n / sqrt(n!).
Eigen::VectorXcd coherent_fock(cx beta, int n_max);

// Per-total-photon-number blocks of U = exp(theta (a b^dag - a^dag b)) on the
// truncated two-mode space. Block n acts on span{|k, n-k>}, k in
// [max(0, n - n_max), min(n, n_max)]; exact (orthogonal) for n <= n_max.
std::vector<Eigen::MatrixXd> bs_sector_blocks(int n_max, double theta);

// Applies the beam splitter with cos(theta) = sqrt(T) to a two-mode vector
// flattened as idx = n_a * (n_max + 1) + n_b. T = 0.5 is the balanced mixer.
Eigen::VectorXcd bs_unitary_apply(const Eigen::VectorXcd& two_mode, int n_max,
                                  double T);

// <x_theta|n> = psi_n(x) e^{-i n theta} with
// psi_n(x) = (2/pi)^{1/4} (2^n n!)^{-1/2} H_n(sqrt(2) x) e^{-x^2}
// (same quadrature scaling as homodyne_amplitude: vacuum variance 1/4).
cx quadrature_wavefunction(int n, double x, double theta);

// Full protocol in the truncated Fock basis (fixed mismatch only).
HeraldedOutcome oracle_run_es(const ProtocolParams& params,
                              const OracleConfig& config);

}  // namespace catswap::fock
