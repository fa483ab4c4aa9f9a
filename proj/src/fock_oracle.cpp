#include "catswap/fock_oracle.hpp"

#include <array>
#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace catswap::fock {

namespace {

constexpr double kPi = 3.14159265358979323846264338328;
constexpr double kReadoutTheta = kPi / 4.0;

// psi_n(x) for n = 0..n_max via the stable three-term recurrence
// psi_{n+1} = (2 x / sqrt(n+1)) psi_n - sqrt(n/(n+1)) psi_{n-1}.
Eigen::VectorXd quadrature_wavefunctions(int n_max, double x) {
  Eigen::VectorXd psi(n_max + 1);
  static const double c0 = std::pow(2.0 / kPi, 0.25);
  psi[0] = c0 * std::exp(-x * x);
  if (n_max >= 1) psi[1] = 2.0 * x * psi[0];
  for (int n = 1; n < n_max; ++n) {
    psi[n + 1] = (2.0 * x / std::sqrt(n + 1.0)) * psi[n] -
                 std::sqrt(n / (n + 1.0)) * psi[n - 1];
  }
  return psi;
}

}  // namespace

Eigen::VectorXcd coherent_fock(cx beta, int n_max) {
  if (n_max < 0) throw std::invalid_argument("coherent_fock: n_max < 0");
  Eigen::VectorXcd v(n_max + 1);
  v[0] = std::exp(cx{-0.5 * std::norm(beta), 0.0});
  for (int n = 1; n <= n_max; ++n) {
    v[n] = v[n - 1] * beta / std::sqrt(static_cast<double>(n));
  }
  return v;
}

std::vector<Eigen::MatrixXd> bs_sector_blocks(int n_max, double theta) {
  if (n_max < 0) throw std::invalid_argument("bs_sector_blocks: n_max < 0");
  std::vector<Eigen::MatrixXd> blocks;
  blocks.reserve(2 * n_max + 1);
  for (int n = 0; n <= 2 * n_max; ++n) {
    const int k0 = std::max(0, n - n_max);
    const int k1 = std::min(n, n_max);
    const int d = k1 - k0 + 1;
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(d, d);
    for (int k = k0; k <= k1; ++k) {
      // (a b^dag - a^dag b)|k, n-k> picks up these two neighbors.
      if (k - 1 >= k0) {
        g(k - 1 - k0, k - k0) +=
            std::sqrt(static_cast<double>(k) * (n - k + 1.0));
      }
      if (k + 1 <= k1) {
        g(k + 1 - k0, k - k0) -=
            std::sqrt((k + 1.0) * static_cast<double>(n - k));
      }
    }
    blocks.push_back(Eigen::MatrixXd((theta * g).exp()));
  }
  return blocks;
}

Eigen::VectorXcd bs_unitary_apply(const Eigen::VectorXcd& two_mode, int n_max,
                                  double T) {
  if (!(T >= 0.0 && T <= 1.0)) {
    throw std::invalid_argument("bs_unitary_apply: T must be in [0, 1]");
  }
  const int dim = n_max + 1;
  if (two_mode.size() != static_cast<Eigen::Index>(dim) * dim) {
    throw std::invalid_argument(
        "bs_unitary_apply: vector must have (n_max+1)^2 entries");
  }
  const double theta = std::atan2(std::sqrt(1.0 - T), std::sqrt(T));
  const auto blocks = bs_sector_blocks(n_max, theta);
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(two_mode.size());
  for (int n = 0; n <= 2 * n_max; ++n) {
    const int k0 = std::max(0, n - n_max);
    const int k1 = std::min(n, n_max);
    const Eigen::MatrixXd& e = blocks[n];
    for (int ko = k0; ko <= k1; ++ko) {
      cx acc{0.0, 0.0};
      for (int ki = k0; ki <= k1; ++ki) {
        acc += e(ko - k0, ki - k0) * two_mode[ki * dim + (n - ki)];
      }
      out[ko * dim + (n - ko)] = acc;
    }
  }
  return out;
}

cx quadrature_wavefunction(int n, double x, double theta) {
  if (n < 0) throw std::invalid_argument("quadrature_wavefunction: n < 0");
  const Eigen::VectorXd psi = quadrature_wavefunctions(n, x);
  return psi[n] * std::exp(cx{0.0, -n * theta});
}

namespace {

// Amplitude matrix of one lossy hybrid pair: rows indexed by (qubit bit,
// environment photons), columns by surviving-port photons.
Eigen::MatrixXcd lossy_pair_matrix(double alpha, double T, int n_max) {
  const int dim = n_max + 1;
  const double n_cat =
      1.0 / std::sqrt(2.0 + 2.0 * std::exp(-2.0 * alpha * alpha));
  const double inv_sqrt2 = 0.70710678118654752440;
  const cx ia{0.0, alpha};
  std::array<Eigen::VectorXcd, 2> cat;
  cat[0] = (n_cat * inv_sqrt2) *
           (coherent_fock(cx{alpha, 0.0}, n_max) +
            coherent_fock(cx{-alpha, 0.0}, n_max));
  cat[1] = (n_cat * inv_sqrt2) *
           (coherent_fock(ia, n_max) + coherent_fock(-ia, n_max));

  const double tail =
      std::abs(1.0 - (cat[0].squaredNorm() + cat[1].squaredNorm()));
  if (tail > 1e-8) {
    throw numerical_error("fock oracle: n_max too small for this alpha");
  }

  const double theta = std::atan2(std::sqrt(1.0 - T), std::sqrt(T));
  const auto blocks = bs_sector_blocks(n_max, theta);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2 * dim, dim);
  for (int a = 0; a < 2; ++a) {
    for (int n = 0; n <= n_max; ++n) {
      const cx amp = cat[a][n];
      if (amp == cx{0.0, 0.0}) continue;
      const Eigen::MatrixXd& e = blocks[n];  // sector n <= n_max: k0 = 0
      for (int bp = 0; bp <= n; ++bp) {
        m(a * dim + (n - bp), bp) += e(bp, n) * amp;
      }
    }
  }
  return m;
}

Eigen::Matrix4cd rho_from_joint(const Eigen::MatrixXcd& y, int dim) {
  Eigen::Matrix4cd rho;
  for (int a = 0; a < 2; ++a) {
    for (int c = 0; c < 2; ++c) {
      const auto block_ac = y.block(a * dim, c * dim, dim, dim);
      for (int ap = 0; ap < 2; ++ap) {
        for (int cp = 0; cp < 2; ++cp) {
          const auto block_pp = y.block(ap * dim, cp * dim, dim, dim);
          rho(2 * a + c, 2 * ap + cp) =
              (block_ac.array() * block_pp.array().conjugate()).sum();
        }
      }
    }
  }
  return rho;
}

}  // namespace

HeraldedOutcome oracle_run_es(const ProtocolParams& params,
                              const OracleConfig& config) {
  params.validate();
  if (config.n_max < 4) {
    throw std::invalid_argument("oracle_run_es: n_max too small");
  }
  if (!(config.x_step > 0.0)) {
    throw std::invalid_argument("oracle_run_es: x_step must be > 0");
  }
  const int dim = config.n_max + 1;

  const Eigen::MatrixXcd m1 =
      lossy_pair_matrix(params.alpha, params.T, config.n_max);
  const Eigen::MatrixXcd m2 = lossy_pair_matrix(
      params.alpha, params.T - params.upsilon, config.n_max);

  // Vacuum port: only the first row of each balanced-mixer sector survives.
  const auto half = bs_sector_blocks(config.n_max, kPi / 4.0);
  std::vector<Eigen::MatrixXcd> joint(
      dim, Eigen::MatrixXcd::Zero(2 * dim, 2 * dim));
  double p_vac = 0.0;
  for (int dp = 0; dp <= config.n_max; ++dp) {
    const Eigen::MatrixXd& e = half[dp];  // sector dp <= n_max: k0 = 0
    for (int b = 0; b <= dp; ++b) {
      const double w = e(0, b);
      if (w == 0.0) continue;
      joint[dp].noalias() += w * (m1.col(b) * m2.col(dp - b).transpose());
    }
    p_vac += joint[dp].squaredNorm();
  }
  if (!(p_vac > 1e-300)) {
    throw numerical_error("oracle_run_es: vacuum heralding weight underflow");
  }

  const auto y_at = [&](double x) {
    const Eigen::VectorXd psi = quadrature_wavefunctions(config.n_max, x);
    Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(2 * dim, 2 * dim);
    for (int dp = 0; dp <= config.n_max; ++dp) {
      y += (psi[dp] * std::exp(cx{0.0, -dp * kReadoutTheta})) * joint[dp];
    }
    return y;
  };

  const double x0 =
      homodyne_center(params.T, params.T - params.upsilon, params.alpha);

  Eigen::Matrix4cd rho_raw = Eigen::Matrix4cd::Zero();
  std::optional<double> p_hom;
  if (!params.bandwidth.has_value()) {
    if (params.peak != Peak::Minus) rho_raw += rho_from_joint(y_at(x0), dim);
    if (params.peak != Peak::Plus) rho_raw += rho_from_joint(y_at(-x0), dim);
  } else {
    double raw_weight = 0.0;
    for (const auto& [lo, hi] :
         heralding_intervals(params.peak, x0, *params.bandwidth)) {
      // Composite Simpson rule on an even number of segments.
      int segments =
          std::max(8, static_cast<int>(std::ceil((hi - lo) / config.x_step)));
      if (segments % 2) ++segments;
      const double h = (hi - lo) / segments;
      for (int i = 0; i <= segments; ++i) {
        const double w =
            (h / 3.0) *
            ((i == 0 || i == segments) ? 1.0 : (i % 2 ? 4.0 : 2.0));
        const Eigen::MatrixXcd y = y_at(lo + i * h);
        raw_weight += w * y.squaredNorm();
        rho_raw += w * rho_from_joint(y, dim);
      }
    }
    p_hom = raw_weight / p_vac;
  }

  return {QubitDensity(rho_raw), p_vac, p_hom};
}

}  // namespace catswap::fock
