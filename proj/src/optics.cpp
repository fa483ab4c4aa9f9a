#include "catswap/optics.hpp"

#include <cmath>

namespace catswap {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

void require_cv(const PureState& s, const ModeId& m, const char* op) {
  if (m.kind != ModeKind::CV || !s.has_mode(m)) {
    throw std::invalid_argument(std::string(op) + ": no CV mode named " +
                                m.name);
  }
}

void check_nodes(QuadratureNodes nodes) {
  if (nodes.count < 2 || nodes.count > 4096) {
    throw std::invalid_argument("quadrature nodes must be in [2, 4096]");
  }
}

}  // namespace

void HomodyneWindow::validate() const {
  if (!(theta >= 0.0) || theta >= kTwoPi) {
    throw std::invalid_argument("HomodyneWindow: theta must be in [0, 2*pi)");
  }
  if (!(dx >= 0.0)) {
    throw std::invalid_argument("HomodyneWindow: dx must be >= 0");
  }
  if (!std::isfinite(x0)) {
    throw std::invalid_argument("HomodyneWindow: x0 must be finite");
  }
}

PureState apply_lossy_bs(const PureState& s, const ModeId& signal,
                         const ModeId& env, double T) {
  require_cv(s, signal, "apply_lossy_bs");
  require_cv(s, env, "apply_lossy_bs");
  if (signal == env) {
    throw std::invalid_argument("apply_lossy_bs: signal and env coincide");
  }
  if (!(T >= 0.0 && T <= 1.0)) {
    throw std::invalid_argument("apply_lossy_bs: T must be in [0, 1]");
  }
  const std::size_t is = s.cv_index(signal);
  const std::size_t ie = s.cv_index(env);
  const double ct = std::sqrt(T);
  const double st = std::sqrt(1.0 - T);
  std::vector<CoherentTerm> terms = s.terms();
  for (CoherentTerm& t : terms) {
    if (std::abs(t.cv_amps[ie]) > 1e-15) {
      throw std::invalid_argument(
          "apply_lossy_bs: env mode must be vacuum in every term");
    }
    const cx beta = t.cv_amps[is];
    t.cv_amps[is] = ct * beta;
    t.cv_amps[ie] = st * beta;
  }
  return PureState(s.registry(), std::move(terms));
}

PureState apply_balanced_bs(const PureState& s, const ModeId& i,
                            const ModeId& j) {
  require_cv(s, i, "apply_balanced_bs");
  require_cv(s, j, "apply_balanced_bs");
  if (i == j) {
    throw std::invalid_argument("apply_balanced_bs: ports coincide");
  }
  const std::size_t ii = s.cv_index(i);
  const std::size_t ij = s.cv_index(j);
  const double inv_sqrt2 = 0.70710678118654752440;
  std::vector<CoherentTerm> terms = s.terms();
  for (CoherentTerm& t : terms) {
    const cx bi = t.cv_amps[ii];
    const cx bj = t.cv_amps[ij];
    t.cv_amps[ii] = (bi - bj) * inv_sqrt2;
    t.cv_amps[ij] = (bi + bj) * inv_sqrt2;
  }
  return PureState(s.registry(), std::move(terms));
}

namespace {

// Removes CV mode at sublist position `idx`, multiplying each term's coeff by
// weight(amp_at_idx).
template <typename WeightFn>
PureState strip_cv_mode(const PureState& s, const ModeId& m, WeightFn weight) {
  const std::size_t idx = s.cv_index(m);
  std::vector<ModeId> registry;
  registry.reserve(s.registry().size() - 1);
  for (const ModeId& r : s.registry()) {
    if (!(r == m)) registry.push_back(r);
  }
  std::vector<CoherentTerm> terms = s.terms();
  for (CoherentTerm& t : terms) {
    t.coeff *= weight(t.cv_amps[idx]);
    t.cv_amps.erase(t.cv_amps.begin() + static_cast<std::ptrdiff_t>(idx));
  }
  return PureState(std::move(registry), std::move(terms));
}

}  // namespace

VacuumProjection project_vacuum(const PureState& s, const ModeId& m) {
  require_cv(s, m, "project_vacuum");
  PureState projected = strip_cv_mode(
      s, m, [](cx amp) { return std::exp(cx{-0.5 * std::norm(amp), 0.0}); });
  const double prob = squared_norm(projected);
  return {std::move(projected), prob};
}

cx homodyne_amplitude(double x, double theta, cx alpha) {
  const cx b = alpha * std::exp(cx{0.0, -theta});
  static const double quartic_root_2_over_pi =
      std::pow(2.0 / std::acos(-1.0), 0.25);
  return quartic_root_2_over_pi *
         std::exp(-x * x + 2.0 * b * x - 0.5 * b * b -
                  cx{0.5 * std::norm(alpha), 0.0});
}

PureState project_homodyne_point(const PureState& s, const ModeId& m,
                                 double theta, double x) {
  require_cv(s, m, "project_homodyne_point");
  return strip_cv_mode(
      s, m, [&](cx amp) { return homodyne_amplitude(x, theta, amp); });
}

BandedProjection project_homodyne_banded(const PureState& s, const ModeId& m,
                                         const HomodyneWindow& w,
                                         QuadratureNodes nodes) {
  require_cv(s, m, "project_homodyne_banded");
  w.validate();
  check_nodes(nodes);
  BandedProjection out;
  out.prob = 0.0;
  const auto grid =
      gauss_legendre_on(w.x0 - 0.5 * w.dx, w.x0 + 0.5 * w.dx, nodes.count);
  out.weights.reserve(grid.size());
  out.states.reserve(grid.size());
  for (const auto& [x, weight] : grid) {
    PureState p = project_homodyne_point(s, m, w.theta, x);
    out.prob += weight * squared_norm(p);
    out.weights.push_back(weight);
    out.states.push_back(std::move(p));
  }
  return out;
}

PureState project_homodyne_window_coherent(const PureState& s, const ModeId& m,
                                           const HomodyneWindow& w,
                                           QuadratureNodes nodes) {
  require_cv(s, m, "project_homodyne_window_coherent");
  w.validate();
  check_nodes(nodes);
  const auto grid =
      gauss_legendre_on(w.x0 - 0.5 * w.dx, w.x0 + 0.5 * w.dx, nodes.count);
  return strip_cv_mode(s, m, [&](cx amp) {
    cx acc{0.0, 0.0};
    for (const auto& [x, weight] : grid) {
      acc += weight * homodyne_amplitude(x, w.theta, amp);
    }
    return acc;
  });
}

}  // namespace catswap
