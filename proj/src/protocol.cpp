#include "catswap/protocol.hpp"

#include <cmath>

#include "catswap/quadrature.hpp"

namespace catswap {

namespace {

constexpr double kPi = 3.14159265358979323846264338328;
constexpr double kReadoutTheta = kPi / 4.0;

void check_range(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

void ProtocolParams::validate() const {
  check_range(alpha >= 0.0 && alpha <= 6.0,
              "ProtocolParams: alpha must be in [0, 6]");
  check_range(T >= 0.0 && T <= 1.0, "ProtocolParams: T must be in [0, 1]");
  check_range(upsilon >= 0.0, "ProtocolParams: upsilon must be >= 0");
  check_range(T - upsilon >= 0.0,
              "ProtocolParams: mismatch exceeds transmission (T - upsilon < 0)");
  if (bandwidth.has_value()) {
    check_range(*bandwidth > 0.0, "ProtocolParams: bandwidth must be > 0");
  }
  check_range(nodes.count >= 2 && nodes.count <= 4096,
              "ProtocolParams: nodes.count must be in [2, 4096]");
}

double gaussian_weight(double upsilon, double Upsilon) {
  check_range(Upsilon > 0.0, "gaussian_weight: Upsilon must be > 0");
  check_range(upsilon >= 0.0, "gaussian_weight: upsilon must be >= 0");
  return std::sqrt(2.0 / (kPi * Upsilon * Upsilon)) *
         std::exp(-upsilon * upsilon / (2.0 * Upsilon * Upsilon));
}

const ModeId& mode_A() {
  static const ModeId m = dv_mode("A");
  return m;
}
const ModeId& mode_B() {
  static const ModeId m = cv_mode("B");
  return m;
}
const ModeId& mode_C() {
  static const ModeId m = dv_mode("C");
  return m;
}
const ModeId& mode_D() {
  static const ModeId m = cv_mode("D");
  return m;
}
const ModeId& mode_EB() {
  static const ModeId m = cv_mode("EB");
  return m;
}
const ModeId& mode_ED() {
  static const ModeId m = cv_mode("ED");
  return m;
}

PureState apply_hadamard(const PureState& s, const ModeId& dv) {
  if (dv.kind != ModeKind::DV) {
    throw std::invalid_argument("apply_hadamard: mode is not DV");
  }
  const std::size_t idx = s.dv_index(dv);
  const double inv_sqrt2 = 0.70710678118654752440;
  std::vector<CoherentTerm> terms;
  terms.reserve(2 * s.terms().size());
  for (const CoherentTerm& t : s.terms()) {
    CoherentTerm t0 = t;
    t0.dv_bits[idx] = 0;
    t0.coeff *= inv_sqrt2;
    CoherentTerm t1 = t;
    t1.dv_bits[idx] = 1;
    t1.coeff *= (t.dv_bits[idx] ? -inv_sqrt2 : inv_sqrt2);
    terms.push_back(std::move(t0));
    terms.push_back(std::move(t1));
  }
  return PureState(s.registry(), std::move(terms));
}

PureState apply_controlled_rotation(const PureState& s, const ModeId& dv,
                                    const ModeId& cv, double angle) {
  if (dv.kind != ModeKind::DV || cv.kind != ModeKind::CV) {
    throw std::invalid_argument("apply_controlled_rotation: bad mode kinds");
  }
  const std::size_t idv = s.dv_index(dv);
  const std::size_t icv = s.cv_index(cv);
  const cx phase = std::exp(cx{0.0, angle});
  std::vector<CoherentTerm> terms = s.terms();
  for (CoherentTerm& t : terms) {
    if (t.dv_bits[idv]) t.cv_amps[icv] *= phase;
  }
  return PureState(s.registry(), std::move(terms));
}

PureState prepare_hybrid_pair(double alpha, const ModeId& dv,
                              const ModeId& cv) {
  check_range(alpha >= 0.0 && alpha <= 6.0,
              "prepare_hybrid_pair: alpha must be in [0, 6]");
  if (dv.kind != ModeKind::DV || cv.kind != ModeKind::CV) {
    throw std::invalid_argument("prepare_hybrid_pair: bad mode kinds");
  }
  const double n_cat = 1.0 / std::sqrt(2.0 + 2.0 * std::exp(-2.0 * alpha * alpha));
  std::vector<CoherentTerm> terms(2);
  terms[0] = {{0}, {cx{alpha, 0.0}}, cx{n_cat, 0.0}};
  terms[1] = {{0}, {cx{-alpha, 0.0}}, cx{n_cat, 0.0}};
  PureState s({dv, cv}, std::move(terms));
  s = apply_hadamard(s, dv);
  return apply_controlled_rotation(s, dv, cv, kPi / 2.0);
}

double homodyne_center(double T_b, double T_d, double alpha) {
  check_range(T_b >= 0.0 && T_b <= 1.0 && T_d >= 0.0 && T_d <= 1.0,
              "homodyne_center: transmissions must be in [0, 1]");
  return 0.5 * (std::sqrt(T_b) + std::sqrt(T_d)) * std::abs(alpha);
}

VacuumSelected vacuum_selected_state(double alpha, double T, double upsilon) {
  check_range(T >= 0.0 && T <= 1.0 && upsilon >= 0.0 && T - upsilon >= 0.0,
              "vacuum_selected_state: need 0 <= T - upsilon and T <= 1");
  PureState s = tensor(prepare_hybrid_pair(alpha, mode_A(), mode_B()),
                       prepare_hybrid_pair(alpha, mode_C(), mode_D()));
  s = with_vacuum_mode(s, mode_EB());
  s = with_vacuum_mode(s, mode_ED());
  s = apply_lossy_bs(s, mode_B(), mode_EB(), T);
  s = apply_lossy_bs(s, mode_D(), mode_ED(), T - upsilon);
  s = apply_balanced_bs(s, mode_B(), mode_D());
  VacuumProjection vac = project_vacuum(s, mode_B());
  return {normalize(vac.state), vac.prob};
}

std::vector<std::pair<double, double>> heralding_intervals(Peak peak,
                                                           double x0,
                                                           double dx) {
  const double h = 0.5 * dx;
  switch (peak) {
    case Peak::Plus:
      return {{x0 - h, x0 + h}};
    case Peak::Minus:
      return {{-x0 - h, -x0 + h}};
    case Peak::Both:
      if (x0 - h <= -x0 + h) return {{-x0 - h, x0 + h}};
      return {{-x0 - h, -x0 + h}, {x0 - h, x0 + h}};
  }
  throw std::logic_error("heralding_intervals: bad peak");
}

namespace {
std::vector<ModeId> env_drop_list() { return {mode_EB(), mode_ED()}; }
}  // namespace

RawHeralded run_es_raw(const ProtocolParams& params) {
  params.validate();
  // Keep the unnormalized post-selection state: its squared norm carries the
  // heralding weight, which mixture averaging must preserve.
  PureState s = tensor(prepare_hybrid_pair(params.alpha, mode_A(), mode_B()),
                       prepare_hybrid_pair(params.alpha, mode_C(), mode_D()));
  s = with_vacuum_mode(s, mode_EB());
  s = with_vacuum_mode(s, mode_ED());
  s = apply_lossy_bs(s, mode_B(), mode_EB(), params.T);
  s = apply_lossy_bs(s, mode_D(), mode_ED(), params.T - params.upsilon);
  s = apply_balanced_bs(s, mode_B(), mode_D());
  VacuumProjection vac = project_vacuum(s, mode_B());
  if (!(vac.prob > 1e-300)) {
    throw numerical_error("run_es: vacuum heralding weight underflow");
  }

  const double x0 =
      homodyne_center(params.T, params.T - params.upsilon, params.alpha);
  const std::vector<ModeId> drop = env_drop_list();

  RawHeralded out;
  out.p_vacuum = vac.prob;
  out.rho_raw = Eigen::Matrix4cd::Zero();

  if (!params.bandwidth.has_value()) {
    const bool plus = params.peak != Peak::Minus;
    const bool minus = params.peak != Peak::Plus;
    if (plus) {
      out.rho_raw += trace_to_qubits_raw(
          project_homodyne_point(vac.state, mode_D(), kReadoutTheta, x0),
          mode_A(), mode_C(), drop);
    }
    if (minus) {
      out.rho_raw += trace_to_qubits_raw(
          project_homodyne_point(vac.state, mode_D(), kReadoutTheta, -x0),
          mode_A(), mode_C(), drop);
    }
    return out;
  }

  double raw_window_weight = 0.0;
  for (const auto& [lo, hi] :
       heralding_intervals(params.peak, x0, *params.bandwidth)) {
    for (const auto& [x, w] : gauss_legendre_on(lo, hi, params.nodes.count)) {
      PureState p = project_homodyne_point(vac.state, mode_D(), kReadoutTheta, x);
      raw_window_weight += w * squared_norm(p);
      out.rho_raw += w * trace_to_qubits_raw(p, mode_A(), mode_C(), drop);
    }
  }
  out.p_homodyne = raw_window_weight / vac.prob;
  return out;
}

HeraldedOutcome run_es_fixed(const ProtocolParams& params) {
  RawHeralded raw = run_es_raw(params);
  return {QubitDensity(raw.rho_raw), raw.p_vacuum, raw.p_homodyne};
}

HeraldedOutcome run_es_averaged(const ProtocolParams& params,
                                const GaussianLossSpec& spec) {
  params.validate();
  check_range(params.upsilon == 0.0,
              "run_es_averaged: params.upsilon must be 0 (averaging supplies it)");
  check_range(spec.Upsilon > 1e-4,
              "run_es_averaged: Upsilon too small to resolve; use run_es_fixed");
  check_range(spec.node_count >= 8 && spec.node_count <= 4096,
              "run_es_averaged: node_count must be in [8, 4096]");
  const double upsilon_max =
      spec.upsilon_max.value_or(std::min(6.0 * spec.Upsilon, params.T));
  check_range(upsilon_max > 0.0 && upsilon_max <= params.T,
              "run_es_averaged: upsilon_max must be in (0, T]");

  Eigen::Matrix4cd rho_acc = Eigen::Matrix4cd::Zero();
  double weight_acc = 0.0;
  double p_vac_acc = 0.0;
  double p_hom_acc = 0.0;
  for (const auto& [ups, w] :
       gauss_legendre_on(0.0, upsilon_max, spec.node_count)) {
    ProtocolParams node_params = params;
    node_params.upsilon = ups;
    const RawHeralded raw = run_es_raw(node_params);
    const double f = w * gaussian_weight(ups, spec.Upsilon);
    weight_acc += f;
    rho_acc += f * raw.rho_raw;
    p_vac_acc += f * raw.p_vacuum;
    p_hom_acc += f * raw.p_homodyne.value_or(0.0);
  }
  if (!(weight_acc > 1e-300)) {
    throw numerical_error("run_es_averaged: mismatch distribution underflow");
  }
  std::optional<double> p_hom;
  if (params.bandwidth.has_value()) p_hom = p_hom_acc / weight_acc;
  return {QubitDensity(rho_acc), p_vac_acc / weight_acc, p_hom};
}

double db_to_transmission(double loss_db) {
  return std::pow(10.0, -loss_db / 10.0);
}

double transmission_to_db(double T) {
  check_range(T > 0.0 && T <= 1.0, "transmission_to_db: T must be in (0, 1]");
  return -10.0 * std::log10(T);
}

double distance_for_T(double T, double atten_db_per_km) {
  check_range(atten_db_per_km > 0.0,
              "distance_for_T: attenuation must be > 0");
  return transmission_to_db(T) / atten_db_per_km;
}

}  // namespace catswap
