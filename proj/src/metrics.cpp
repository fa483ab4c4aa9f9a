#include "catswap/metrics.hpp"

#include <cmath>

#include "catswap/quadrature.hpp"

namespace catswap {

namespace {
constexpr double kPi = 3.14159265358979323846264338328;
constexpr double kReadoutTheta = kPi / 4.0;
}  // namespace

Eigen::Vector4cd bell_state(double alpha, BellSign sign) {
  const double inv_sqrt2 = 0.70710678118654752440;
  const cx lead = std::exp(cx{0.0, -alpha * alpha}) * inv_sqrt2;
  const cx tail = std::exp(cx{0.0, alpha * alpha}) * inv_sqrt2;
  Eigen::Vector4cd v;
  v << lead, cx{0.0, 0.0}, cx{0.0, 0.0},
      (sign == BellSign::Plus ? tail : -tail);
  return v;
}

double fidelity(const QubitDensity& rho, const Eigen::Vector4cd& target) {
  const double f = (target.adjoint() * rho.matrix() * target)(0, 0).real();
  if (f < -1e-9 || f > 1.0 + 1e-9) {
    throw numerical_error("fidelity: value escapes [0, 1]");
  }
  return std::min(1.0, std::max(0.0, f));
}

double trace_distance(const Eigen::Matrix4cd& a, const Eigen::Matrix4cd& b) {
  const Eigen::Matrix4cd d = a - b;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(
      Eigen::Matrix4cd(0.5 * (d + d.adjoint())), Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double vacuum_success_probability(const ProtocolParams& params) {
  params.validate();
  return vacuum_selected_state(params.alpha, params.T, params.upsilon)
      .p_vacuum;
}

namespace {

// Window probability of the chosen acceptance width on the normalized
// vacuum-selected state at fixed mismatch, both peaks merged.
double window_probability_fixed(const ProtocolParams& params, double upsilon) {
  const VacuumSelected vs =
      vacuum_selected_state(params.alpha, params.T, upsilon);
  const double x0 =
      homodyne_center(params.T, params.T - upsilon, params.alpha);
  double prob = 0.0;
  for (const auto& [lo, hi] :
       heralding_intervals(Peak::Both, x0, *params.bandwidth)) {
    for (const auto& [x, w] : gauss_legendre_on(lo, hi, params.nodes.count)) {
      prob += w * squared_norm(project_homodyne_point(vs.state, mode_D(),
                                                      kReadoutTheta, x));
    }
  }
  return prob;
}

}  // namespace

double homodyne_success_probability(
    const ProtocolParams& params, const std::optional<GaussianLossSpec>& loss) {
  params.validate();
  if (!params.bandwidth.has_value()) {
    throw std::invalid_argument(
        "homodyne_success_probability: bandwidth required (ideal readout has "
        "no window)");
  }
  if (!loss.has_value()) {
    return window_probability_fixed(params, params.upsilon);
  }
  if (params.upsilon != 0.0) {
    throw std::invalid_argument(
        "homodyne_success_probability: params.upsilon must be 0 when "
        "averaging");
  }
  const GaussianLossSpec& spec = *loss;
  if (!(spec.Upsilon > 1e-4)) {
    throw std::invalid_argument("homodyne_success_probability: Upsilon too small");
  }
  const double upsilon_max =
      spec.upsilon_max.value_or(std::min(6.0 * spec.Upsilon, params.T));
  double weight_acc = 0.0;
  double prob_acc = 0.0;
  for (const auto& [ups, w] :
       gauss_legendre_on(0.0, upsilon_max, spec.node_count)) {
    const double f = w * gaussian_weight(ups, spec.Upsilon);
    weight_acc += f;
    prob_acc += f * window_probability_fixed(params, ups);
  }
  if (!(weight_acc > 1e-300)) {
    throw numerical_error("homodyne_success_probability: weight underflow");
  }
  return prob_acc / weight_acc;
}

std::vector<std::pair<double, double>> quadrature_distribution(
    const ProtocolParams& params, const std::vector<double>& x_grid) {
  params.validate();
  const VacuumSelected vs =
      vacuum_selected_state(params.alpha, params.T, params.upsilon);
  std::vector<std::pair<double, double>> out;
  out.reserve(x_grid.size());
  for (double x : x_grid) {
    out.emplace_back(x, squared_norm(project_homodyne_point(
                            vs.state, mode_D(), kReadoutTheta, x)));
  }
  return out;
}

}  // namespace catswap
