#pragma once

#include <optional>

#include "catswap/optics.hpp"
#include "catswap/states.hpp"

namespace catswap {

// Which heralding quadrature window(s) to condition on: the one centered at
// +x0, at -x0, or the incoherent combination of both.
enum class Peak { Plus, Minus, Both };

// Parameters of one protocol run. `bandwidth` empty means ideal (point)
// homodyne readout; a value dx > 0 means a finite acceptance window of that
// width centered on the peak quadrature value.
struct ProtocolParams {
  double alpha = 1.0;    // cat amplitude, in [0, 6]
  double T = 1.0;        // transmission of the first lossy channel, in [0, 1]
  double upsilon = 0.0;  // transmission mismatch; second channel sees T - upsilon
  std::optional<double> bandwidth;  // homodyne window width dx (empty = ideal)
  Peak peak = Peak::Plus;
  QuadratureNodes nodes{};  // window discretization (banded runs)

  void validate() const;  // throws std::invalid_argument
};

// One-sided Gaussian model for the unequal-loss mismatch upsilon >= 0.
struct GaussianLossSpec {
  double Upsilon = 0.05;  // spread of the mismatch distribution
  int node_count = 32;    // quadrature nodes over [0, upsilon_max], >= 8
  std::optional<double> upsilon_max;  // default min(6*Upsilon, T)
};

// Density of the one-sided Gaussian: sqrt(2/(pi*Upsilon^2)) *
// exp(-upsilon^2 / (2*Upsilon^2)) for upsilon >= 0.
double gaussian_weight(double upsilon, double Upsilon);

struct HeraldedOutcome {
  QubitDensity rho;                   // two-qubit state on (A, C)
  double p_vacuum = 0.0;              // vacuum-port heralding probability
  std::optional<double> p_homodyne;   // window probability (empty for ideal)
};

// Unnormalized variant: rho_raw carries the heralding weight on its trace so
// outcomes can be mixed (e.g. averaged over loss mismatch) before normalizing.
struct RawHeralded {
  Eigen::Matrix4cd rho_raw;
  double p_vacuum = 0.0;
  std::optional<double> p_homodyne;
};

// Canonical mode wiring of the two-pair circuit.
const ModeId& mode_A();   // DV half of pair 1
const ModeId& mode_B();   // CV half of pair 1 (propagates)
const ModeId& mode_C();   // DV half of pair 2
const ModeId& mode_D();   // CV half of pair 2 (propagates)
const ModeId& mode_EB();  // loss environment of B
const ModeId& mode_ED();  // loss environment of D

// Hadamard on a DV mode: |0> -> (|0>+|1>)/sqrt(2), |1> -> (|0>-|1>)/sqrt(2).
PureState apply_hadamard(const PureState& s, const ModeId& dv);

// Phase-space rotation of a CV mode conditioned on a DV bit being 1:
// |1>|beta> -> |1>|e^{i angle} beta>.
PureState apply_controlled_rotation(const PureState& s, const ModeId& dv,
                                    const ModeId& cv, double angle);

// Hybrid DV-CV pair built by circuit: even cat (|alpha>+|-alpha>) on `cv`
// times |0> on `dv`, then Hadamard on `dv`, then a controlled pi/2 rotation.
// Result (normalized):
//   N/sqrt(2) * [ |0>(|alpha>+|-alpha>) + |1>(|i alpha>+|-i alpha>) ].
PureState prepare_hybrid_pair(double alpha, const ModeId& dv,
                              const ModeId& cv);

// Heralding window center: x0 = (sqrt(T_b) + sqrt(T_d)) * alpha / 2 at
// readout phase pi/4.
double homodyne_center(double T_b, double T_d, double alpha);

// Acceptance interval(s) [x0 -/+ dx/2] of the chosen peak(s); the +x0 and -x0
// windows are merged when they overlap so probability is never double-counted.
std::vector<std::pair<double, double>> heralding_intervals(Peak peak,
                                                           double x0,
                                                           double dx);

struct VacuumSelected {
  PureState state;  // normalized; registry {A, C, D, EB, ED}
  double p_vacuum;
};

// Runs the circuit up to and including the vacuum selection on the first
// output port: pair preparation, loss channels (T and T - upsilon), balanced
// mixing, vacuum projection.
VacuumSelected vacuum_selected_state(double alpha, double T, double upsilon);

// Full protocol at fixed mismatch params.upsilon.
HeraldedOutcome run_es_fixed(const ProtocolParams& params);
RawHeralded run_es_raw(const ProtocolParams& params);

// Averages the heralded (unnormalized) outcome over the one-sided Gaussian
// mismatch distribution, then normalizes once. params.upsilon must be 0 (the
// quadrature nodes supply it). Throws std::invalid_argument when
// spec.Upsilon <= 1e-4 (use run_es_fixed in that regime).
HeraldedOutcome run_es_averaged(const ProtocolParams& params,
                                const GaussianLossSpec& spec);

// Channel geometry helpers.
double db_to_transmission(double loss_db);     // 10^(-loss_db/10)
double transmission_to_db(double T);           // -10*log10(T)
// One-arm fiber length sustaining transmission T at a given attenuation.
double distance_for_T(double T, double atten_db_per_km);

}  // namespace catswap
