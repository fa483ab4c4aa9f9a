#include "catswap/states.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace catswap {

PureState::PureState(std::vector<ModeId> registry,
                     std::vector<CoherentTerm> terms)
    : registry_(std::move(registry)), terms_(std::move(terms)) {
  std::unordered_set<std::string> names;
  for (const ModeId& m : registry_) {
    if (!names.insert(m.name).second) {
      throw std::invalid_argument("PureState: duplicate mode name " + m.name);
    }
    (m.kind == ModeKind::DV ? dv_count_ : cv_count_)++;
  }
  for (const CoherentTerm& t : terms_) {
    if (t.dv_bits.size() != dv_count_ || t.cv_amps.size() != cv_count_) {
      throw std::invalid_argument(
          "PureState: term labels do not match the registry");
    }
    for (std::uint8_t b : t.dv_bits) {
      if (b > 1) throw std::invalid_argument("PureState: DV bit must be 0/1");
    }
  }
}

std::size_t PureState::dv_index(const ModeId& m) const {
  std::size_t idx = 0;
  for (const ModeId& r : registry_) {
    if (r == m) {
      if (r.kind != ModeKind::DV) break;
      return idx;
    }
    if (r.kind == ModeKind::DV) ++idx;
  }
  throw std::invalid_argument("PureState: no DV mode named " + m.name);
}

std::size_t PureState::cv_index(const ModeId& m) const {
  std::size_t idx = 0;
  for (const ModeId& r : registry_) {
    if (r == m) {
      if (r.kind != ModeKind::CV) break;
      return idx;
    }
    if (r.kind == ModeKind::CV) ++idx;
  }
  throw std::invalid_argument("PureState: no CV mode named " + m.name);
}

bool PureState::has_mode(const ModeId& m) const {
  return std::find(registry_.begin(), registry_.end(), m) != registry_.end();
}

cx coherent_overlap(cx beta, cx gamma) {
  return std::exp(-0.5 * std::norm(beta) - 0.5 * std::norm(gamma) +
                  std::conj(beta) * gamma);
}

cx inner_product(const PureState& a, const PureState& b) {
  if (a.registry() != b.registry()) {
    throw std::invalid_argument("inner_product: registries differ");
  }
  cx acc{0.0, 0.0};
  for (const CoherentTerm& ta : a.terms()) {
    for (const CoherentTerm& tb : b.terms()) {
      if (ta.dv_bits != tb.dv_bits) continue;
      cx factor = std::conj(ta.coeff) * tb.coeff;
      for (std::size_t m = 0; m < ta.cv_amps.size(); ++m) {
        factor *= coherent_overlap(ta.cv_amps[m], tb.cv_amps[m]);
      }
      acc += factor;
    }
  }
  return acc;
}

double squared_norm(const PureState& s) {
  return std::real(inner_product(s, s));
}

PureState normalize(const PureState& s) {
  const double n2 = squared_norm(s);
  if (!(n2 > 1e-300)) {
    throw numerical_error("normalize: state norm underflow");
  }
  return scale(s, cx{1.0 / std::sqrt(n2), 0.0});
}

PureState scale(const PureState& s, cx factor) {
  std::vector<CoherentTerm> terms = s.terms();
  for (CoherentTerm& t : terms) t.coeff *= factor;
  return PureState(s.registry(), std::move(terms));
}

PureState tensor(const PureState& a, const PureState& b) {
  std::vector<ModeId> registry = a.registry();
  for (const ModeId& m : b.registry()) {
    registry.push_back(m);
  }
  std::vector<CoherentTerm> terms;
  terms.reserve(a.terms().size() * b.terms().size());
  for (const CoherentTerm& ta : a.terms()) {
    for (const CoherentTerm& tb : b.terms()) {
      CoherentTerm t;
      t.coeff = ta.coeff * tb.coeff;
      t.dv_bits = ta.dv_bits;
      t.dv_bits.insert(t.dv_bits.end(), tb.dv_bits.begin(), tb.dv_bits.end());
      t.cv_amps = ta.cv_amps;
      t.cv_amps.insert(t.cv_amps.end(), tb.cv_amps.begin(), tb.cv_amps.end());
      terms.push_back(std::move(t));
    }
  }
  return PureState(std::move(registry), std::move(terms));
}

PureState with_vacuum_mode(const PureState& s, const ModeId& m) {
  std::vector<ModeId> registry = s.registry();
  registry.push_back(m);
  std::vector<CoherentTerm> terms = s.terms();
  for (CoherentTerm& t : terms) {
    if (m.kind == ModeKind::DV) {
      t.dv_bits.push_back(0);
    } else {
      t.cv_amps.push_back(cx{0.0, 0.0});
    }
  }
  return PureState(std::move(registry), std::move(terms));
}

PureState compact(const PureState& s, double tolerance) {
  std::vector<CoherentTerm> merged;
  for (const CoherentTerm& t : s.terms()) {
    bool absorbed = false;
    for (CoherentTerm& m : merged) {
      if (m.dv_bits != t.dv_bits) continue;
      bool close = true;
      for (std::size_t k = 0; k < m.cv_amps.size() && close; ++k) {
        close = std::abs(m.cv_amps[k] - t.cv_amps[k]) <= tolerance;
      }
      if (close) {
        m.coeff += t.coeff;
        absorbed = true;
        break;
      }
    }
    if (!absorbed) merged.push_back(t);
  }
  merged.erase(std::remove_if(merged.begin(), merged.end(),
                              [&](const CoherentTerm& t) {
                                return std::abs(t.coeff) <= tolerance;
                              }),
               merged.end());
  return PureState(s.registry(), std::move(merged));
}

QubitDensity::QubitDensity(const Eigen::Matrix4cd& raw) {
  const Eigen::Matrix4cd herm = 0.5 * (raw + raw.adjoint());
  const double scale = std::max(1.0, herm.cwiseAbs().maxCoeff());
  if ((raw - raw.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw numerical_error("QubitDensity: input is not Hermitian");
  }
  const double tr = herm.trace().real();
  if (!(tr > 1e-300)) {
    throw numerical_error("QubitDensity: zero trace (no heralding weight)");
  }
  m_ = herm / tr;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(m_,
                                                     Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-9) {
    throw numerical_error("QubitDensity: negative eigenvalue beyond tolerance");
  }
}

Eigen::Matrix4cd trace_to_qubits_raw(const PureState& s, const ModeId& keep_a,
                                     const ModeId& keep_c,
                                     const std::vector<ModeId>& drop) {
  if (s.dv_count() != 2 || keep_a.kind != ModeKind::DV ||
      keep_c.kind != ModeKind::DV) {
    throw std::invalid_argument(
        "trace_to_qubits: exactly two DV modes must be kept");
  }
  std::unordered_set<std::string> drop_names;
  for (const ModeId& m : drop) {
    if (m.kind != ModeKind::CV || !s.has_mode(m) ||
        !drop_names.insert(m.name).second) {
      throw std::invalid_argument("trace_to_qubits: bad drop mode " + m.name);
    }
  }
  if (drop_names.size() != s.cv_count()) {
    throw std::invalid_argument(
        "trace_to_qubits: drop list must cover every CV mode");
  }
  const std::size_t ia = s.dv_index(keep_a);
  const std::size_t ic = s.dv_index(keep_c);
  if (ia == ic) {
    throw std::invalid_argument("trace_to_qubits: keep modes must differ");
  }

  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  const auto& terms = s.terms();
  for (const CoherentTerm& ti : terms) {
    const int qi = 2 * ti.dv_bits[ia] + ti.dv_bits[ic];
    for (const CoherentTerm& tj : terms) {
      const int qj = 2 * tj.dv_bits[ia] + tj.dv_bits[ic];
      cx w = ti.coeff * std::conj(tj.coeff);
      for (std::size_t m = 0; m < ti.cv_amps.size(); ++m) {
        w *= coherent_overlap(tj.cv_amps[m], ti.cv_amps[m]);
      }
      rho(qi, qj) += w;
    }
  }
  return rho;
}

QubitDensity trace_to_qubits(const PureState& s, const ModeId& keep_a,
                             const ModeId& keep_c,
                             const std::vector<ModeId>& drop) {
  return QubitDensity(trace_to_qubits_raw(s, keep_a, keep_c, drop));
}

}  // namespace catswap
