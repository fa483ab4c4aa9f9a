#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace catswap {

using cx = std::complex<double>;

// Thrown when a numerical invariant breaks (non-positive trace, negative
// eigenvalue beyond tolerance, vanishing norm, heralding weight underflow).
struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown by config-file / parameter parsing (maps to CLI exit code 2).
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ModeKind { DV, CV };

// A named bosonic register. DV modes carry a qubit bit; CV modes carry a
// coherent amplitude.
struct ModeId {
  std::string name;
  ModeKind kind = ModeKind::CV;

  friend bool operator==(const ModeId& a, const ModeId& b) {
    return a.name == b.name && a.kind == b.kind;
  }
  friend bool operator!=(const ModeId& a, const ModeId& b) { return !(a == b); }
};

inline ModeId dv_mode(std::string name) { return {std::move(name), ModeKind::DV}; }
inline ModeId cv_mode(std::string name) { return {std::move(name), ModeKind::CV}; }

// One product term  coeff * |dv_bits> (x) |cv_amps>.
// dv_bits aligns with the registry's DV modes in registry order; cv_amps with
// its CV modes in registry order.
struct CoherentTerm {
  std::vector<std::uint8_t> dv_bits;
  std::vector<cx> cv_amps;
  cx coeff{0.0, 0.0};
};

// Finite superposition of qubit (x) multimode-coherent product terms.
// Immutable value type: every operation returns a new state. Terms with equal
// labels are never merged implicitly; see compact(). An empty term list is the
// zero state.
class PureState {
 public:
  PureState() = default;
  PureState(std::vector<ModeId> registry, std::vector<CoherentTerm> terms);

  const std::vector<ModeId>& registry() const { return registry_; }
  const std::vector<CoherentTerm>& terms() const { return terms_; }

  std::size_t dv_count() const { return dv_count_; }
  std::size_t cv_count() const { return cv_count_; }

  // Position of `m` within the DV (resp. CV) sublist of the registry.
  // Throws std::invalid_argument if absent.
  std::size_t dv_index(const ModeId& m) const;
  std::size_t cv_index(const ModeId& m) const;
  bool has_mode(const ModeId& m) const;

 private:
  std::vector<ModeId> registry_;
  std::vector<CoherentTerm> terms_;
  std::size_t dv_count_ = 0;
  std::size_t cv_count_ = 0;
};

// <beta|gamma> = exp(-|beta|^2/2 - |gamma|^2/2 + conj(beta)*gamma).
cx coherent_overlap(cx beta, cx gamma);

// <a|b>. Registries must match exactly (same modes, same order).
cx inner_product(const PureState& a, const PureState& b);

double squared_norm(const PureState& s);

// Returns s scaled by a single real factor so that ||s|| = 1.
// Throws numerical_error when the squared norm is below 1e-300.
PureState normalize(const PureState& s);

PureState scale(const PureState& s, cx factor);

// Tensor product; registries must be disjoint by mode name.
PureState tensor(const PureState& a, const PureState& b);

// Appends `m` to the registry with every term in that mode's ground state
// (bit 0 for DV, amplitude 0 for CV).
PureState with_vacuum_mode(const PureState& s, const ModeId& m);

// Merges terms whose labels agree within `tolerance` (component-wise on bits
// and amplitudes) and drops terms with |coeff| <= tolerance. Opt-in only.
PureState compact(const PureState& s, double tolerance);

// Two-qubit density on (keep_a, keep_c), basis order |00>,|01>,|10>,|11> with
// keep_a the most significant bit. Hermitian within 1e-12, unit trace within
// 1e-10, eigenvalues >= -1e-9; construction enforces all three.
class QubitDensity {
 public:
  // Accepts an unnormalized accumulation; hermitizes and divides by the trace.
  explicit QubitDensity(const Eigen::Matrix4cd& raw);
  const Eigen::Matrix4cd& matrix() const { return m_; }

 private:
  Eigen::Matrix4cd m_;
};

// Unnormalized two-qubit reduction of |s><s|: all CV modes (exactly the `drop`
// list) are traced out via coherent overlaps. The registry's DV modes must be
// exactly {keep_a, keep_c}.
Eigen::Matrix4cd trace_to_qubits_raw(const PureState& s, const ModeId& keep_a,
                                     const ModeId& keep_c,
                                     const std::vector<ModeId>& drop);

// Normalized version of the above (throws numerical_error on zero trace).
QubitDensity trace_to_qubits(const PureState& s, const ModeId& keep_a,
                             const ModeId& keep_c,
                             const std::vector<ModeId>& drop);

}  // namespace catswap
