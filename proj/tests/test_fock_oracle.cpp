#include "doctest.h"

#include <cmath>
#include <complex>

#include "catswap/fock_oracle.hpp"
#include "catswap/metrics.hpp"
#include "catswap/optics.hpp"

using namespace catswap;

TEST_CASE("coherent fock amplitudes") {
  cx b{1.0, 0.5};
  Eigen::VectorXcd v = fock::coherent_fock(b, 40);
  REQUIRE(v.size() == 41);
  CHECK(std::abs(v.squaredNorm() - 1.0) < 1e-12);
  CHECK(std::abs(v(0) - std::exp(cx(-std::norm(b) / 2.0, 0))) < 1e-14);
  // photon-number overlap reproduces the coherent overlap
  cx g{-0.3, 0.2};
  Eigen::VectorXcd u = fock::coherent_fock(g, 40);
  CHECK(std::abs(u.dot(v) - coherent_overlap(g, b)) < 1e-10);
}

TEST_CASE("beam splitter sector blocks are orthogonal") {
  auto blocks = fock::bs_sector_blocks(12, 0.3);
  REQUIRE(blocks.size() == 25);  // one block per total photon number, 0 .. 2 n_max
  for (const auto& m : blocks) {
    Eigen::MatrixXd gram = m.transpose() * m;
    CHECK((gram - Eigen::MatrixXd::Identity(m.cols(), m.cols())).cwiseAbs().maxCoeff() <
          1e-12);
  }
}

TEST_CASE("beam splitter maps coherent pairs to coherent pairs") {
  int n_max = 30;
  cx b{1.0, 0.0};
  Eigen::VectorXcd in(Eigen::VectorXcd::Zero((n_max + 1) * (n_max + 1)));
  Eigen::VectorXcd cb = fock::coherent_fock(b, n_max);
  Eigen::VectorXcd cv = fock::coherent_fock(cx(0, 0), n_max);
  for (int i = 0; i <= n_max; ++i)
    for (int j = 0; j <= n_max; ++j) in(i * (n_max + 1) + j) = cb(i) * cv(j);

  Eigen::VectorXcd out = fock::bs_unitary_apply(in, n_max, 0.64);
  // expected |0.8, 0.6> for unit input at T = 0.64
  Eigen::VectorXcd e1 = fock::coherent_fock(cx(0.8, 0), n_max);
  Eigen::VectorXcd e2 = fock::coherent_fock(cx(0.6, 0), n_max);
  Eigen::VectorXcd expect(in.size());
  for (int i = 0; i <= n_max; ++i)
    for (int j = 0; j <= n_max; ++j) expect(i * (n_max + 1) + j) = e1(i) * e2(j);
  CHECK((out - expect).norm() < 1e-9);

  // T = 1 is the identity
  Eigen::VectorXcd same = fock::bs_unitary_apply(in, n_max, 1.0);
  CHECK((same - in).norm() < 1e-12);

  // unitarity on an arbitrary vector
  Eigen::VectorXcd rnd = Eigen::VectorXcd::Random(in.size());
  CHECK(std::abs(fock::bs_unitary_apply(rnd, n_max, 0.5).squaredNorm() -
                 rnd.squaredNorm()) < 1e-10 * rnd.squaredNorm());
}

TEST_CASE("quadrature wavefunctions are orthonormal") {
  // Simpson integration of psi_m psi_n over [-8, 8]
  const int pts = 3201;
  const double lo = -8.0, hi = 8.0, h = (hi - lo) / (pts - 1);
  for (int m = 0; m <= 10; m += 2) {
    for (int n = m; n <= 10; n += 3) {
      double s = 0.0;
      for (int k = 0; k < pts; ++k) {
        double x = lo + k * h;
        double w = (k == 0 || k == pts - 1) ? 1.0 : (k % 2 ? 4.0 : 2.0);
        s += w * (fock::quadrature_wavefunction(m, x, 0.0) *
                  fock::quadrature_wavefunction(n, x, 0.0))
                     .real();
      }
      s *= h / 3.0;
      CHECK(std::abs(s - (m == n ? 1.0 : 0.0)) < 1e-8);
    }
  }
}

TEST_CASE("quadrature wavefunction series matches the coherent amplitude") {
  // sum_n <x_theta|n><n|beta> = <x_theta|beta>
  double x = 0.3, theta = std::acos(-1.0) / 4.0;
  cx beta{0.7, 0.2};
  Eigen::VectorXcd cb = fock::coherent_fock(beta, 60);
  cx s{0, 0};
  for (int n = 0; n <= 60; ++n) s += fock::quadrature_wavefunction(n, x, theta) * cb(n);
  CHECK(std::abs(s - homodyne_amplitude(x, theta, beta)) < 1e-10);
}

TEST_CASE("oracle reproduces the heralding probability") {
  ProtocolParams p;
  p.alpha = 1.0;
  fock::OracleConfig cfg;
  HeraldedOutcome o = fock::oracle_run_es(p, cfg);
  CHECK(o.p_vacuum == doctest::Approx(0.573735430114).epsilon(1e-8));
  CHECK(!o.p_homodyne.has_value());
}

TEST_CASE("oracle agrees with the exact engine on one lossy banded cell") {
  ProtocolParams p;
  p.alpha = 1.0;
  p.T = 0.95;
  p.upsilon = 0.05;
  p.bandwidth = 0.5;
  p.nodes.count = 32;
  HeraldedOutcome exact = run_es_fixed(p);
  HeraldedOutcome oracle = fock::oracle_run_es(p, fock::OracleConfig{});
  CHECK(trace_distance(exact.rho.matrix(), oracle.rho.matrix()) < 1e-6);
  CHECK(std::abs(exact.p_vacuum - oracle.p_vacuum) < 1e-8);
  REQUIRE(oracle.p_homodyne.has_value());
  CHECK(std::abs(*exact.p_homodyne - *oracle.p_homodyne) < 1e-6);
}

TEST_CASE("oracle is stable against deeper truncation") {
  ProtocolParams p;
  p.alpha = 2.5;
  p.T = 0.95;
  double p40 = fock::oracle_run_es(p, fock::OracleConfig{40, -10, 10, 0.005}).p_vacuum;
  double p80 = fock::oracle_run_es(p, fock::OracleConfig{80, -10, 10, 0.005}).p_vacuum;
  CHECK(std::abs(p40 - p80) < 1e-9);
}

TEST_CASE("oracle rejects truncations that clip the cat") {
  ProtocolParams p;
  p.alpha = 4.0;
  CHECK_THROWS_AS(fock::oracle_run_es(p, fock::OracleConfig{6, -10, 10, 0.005}),
                  numerical_error);
}
