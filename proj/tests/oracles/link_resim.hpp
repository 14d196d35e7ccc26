// SPDX-License-Identifier: Apache-2.0
// Straight-line downlink simulation for reciprocal i.i.d. channels: uplink
// LMMSE training, ZF, statistical effective gain, block SINR. Written out
// loop by loop with its own random engine.
#pragma once

#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Dense>

namespace oracle {

struct LinkSetup {
  int N = 100;
  int K = 20;
  int tau_u = 20;
  double rho_u = 1.0;   // linear
  double rho_d = 100.0;  // linear
  int symbols = 230;
  int gain_draws = 400;
  int blocks = 200;
  unsigned seed = 12345;
};

inline double ReciprocalZfMeanLog(const LinkSetup& s) {
  using cd = std::complex<double>;
  using CMatrix = Eigen::MatrixXcd;
  std::mt19937 eng(s.seed);
  std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
  auto cn = [&] { return cd(nd(eng), nd(eng)); };

  // One realisation: returns beta * H * U (K x K) for a fresh channel.
  auto draw = [&]() {
    CMatrix G(s.N, s.K);
    CMatrix G_hat(s.N, s.K);
    const double snr = s.rho_u * s.tau_u;
    for (int n = 0; n < s.N; ++n) {
      for (int k = 0; k < s.K; ++k) {
        G(n, k) = cn();
        const cd y = std::sqrt(snr) * G(n, k) + cn();
        G_hat(n, k) = std::sqrt(snr) / (1.0 + snr) * y;
      }
    }
    const CMatrix H = G.transpose();
    const CMatrix Hh = G_hat.transpose();
    const CMatrix gram = Hh * Hh.adjoint();
    const CMatrix U = Hh.adjoint() * gram.inverse();
    double power = 0.0;
    for (int n = 0; n < s.N; ++n) {
      for (int k = 0; k < s.K; ++k) power += std::norm(U(n, k));
    }
    return CMatrix(H * U / std::sqrt(power));
  };

  Eigen::VectorXcd alpha = Eigen::VectorXcd::Zero(s.K);
  for (int i = 0; i < s.gain_draws; ++i) alpha += draw().diagonal();
  alpha /= static_cast<double>(s.gain_draws);

  const double a = 1.0 / std::sqrt(2.0);
  double acc = 0.0;
  for (int b = 0; b < s.blocks; ++b) {
    const CMatrix E = draw();
    Eigen::VectorXd resid = Eigen::VectorXd::Zero(s.K);
    for (int t = 0; t < s.symbols; ++t) {
      Eigen::VectorXcd x(s.K);
      for (int k = 0; k < s.K; ++k) {
        x(k) = cd(eng() & 1 ? a : -a, eng() & 1 ? a : -a);
      }
      const Eigen::VectorXcd r = std::sqrt(s.rho_d) * (E * x);
      for (int k = 0; k < s.K; ++k) {
        const cd rk = r(k) + cn();
        resid(k) += std::norm(rk - std::sqrt(s.rho_d) * alpha(k) * x(k));
      }
    }
    for (int k = 0; k < s.K; ++k) {
      const double sinr = s.rho_d * std::norm(alpha(k)) / (resid(k) / s.symbols);
      acc += std::log2(1.0 + sinr);
    }
  }
  return acc / (static_cast<double>(s.blocks) * s.K);
}

}  // namespace oracle
