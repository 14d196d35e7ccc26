// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <vector>

#include "nrc/random.hpp"
#include "nrc/types.hpp"

namespace nrc {

// Planar array of parallel thin half-wave dipoles. All lengths in wavelengths.
struct ArrayGeometry {
  int rows = 0;
  int cols = 0;
  double spacing = 0.5;
  double carrier_freq_hz = 3.5e9;
  std::vector<std::array<double, 2>> positions;  // row-major antenna order

  static ArrayGeometry Rectangular(int rows, int cols, double spacing = 0.5,
                                   double carrier_freq_hz = 3.5e9);
  // Single row of n elements.
  static ArrayGeometry Linear(int n, double spacing = 0.5);

  int size() const { return static_cast<int>(positions.size()); }
  double Distance(int i, int j) const;
};

// Rows of B that are estimated for every column. The threshold is measured in
// units of half a wavelength, so D = 1 picks the nearest grid neighbours at
// lambda/2 spacing and D = sqrt(2) adds the diagonal ones.
class SparsitySupport {
 public:
  static SparsitySupport FromGeometry(const ArrayGeometry& geometry, double D);
  static SparsitySupport Diagonal(int n);
  static SparsitySupport Full(int n);

  int size() const { return static_cast<int>(support_.size()); }
  double threshold() const { return threshold_; }

  // Sorted row indices of column j, j included.
  const std::vector<int>& Rows(int j) const { return support_[j]; }
  std::vector<int> Neighbors(int j) const;
  int R(int j) const { return static_cast<int>(support_[j].size()); }
  int RMax() const { return r_max_; }
  bool Contains(int i, int j) const;

 private:
  SparsitySupport(double threshold, std::vector<std::vector<int>> support);

  double threshold_ = 0.0;
  std::vector<std::vector<int>> support_;
  int r_max_ = 0;
};

// Induced-EMF impedances of side-by-side half-wave dipoles, in ohms.
cd SelfImpedance();
cd MutualImpedance(double distance_wavelengths);
CMatrix ArrayImpedance(const ArrayGeometry& geometry);

inline constexpr double kReferenceImpedance = 50.0;

CMatrix GenPhysicalChannel(int N, int K, Rng& rng);

// diag(1 + e_i), e_i ~ CN(0, sigma2); near-zero entries are redrawn.
CDiagonal GenFrMismatch(int size, double sigma2, Rng& rng);

struct CouplingDraw {
  CMatrix M;
  CVector reflections;  // gamma_i used for the terminations
};

// M = (Z_self + Z_ref) (Z + diag(z_i))^-1 with z_i = Z_ref (1 + g_i)/(1 - g_i)
// and g_i ~ CN(0, sigma_M2). Z_self is taken from Z(0, 0).
CouplingDraw GenCouplingMatrix(const CMatrix& Z, double sigma_M2, Rng& rng,
                               double z_ref = kReferenceImpedance);
CouplingDraw GenCouplingMatrix(const ArrayGeometry& geometry, double sigma_M2,
                               Rng& rng);

struct NrcRealization {
  CDiagonal F_t, F_r;  // UE
  CDiagonal L_t, L_r;  // BS
  CMatrix M_t, M_r;
  double sigma_F2 = 0.0;
  double sigma_L2 = 0.0;
  double sigma_M2 = 0.0;
  CVector gamma_t, gamma_r;

  CDiagonal A;  // F_r F_t^-1
  CMatrix B;    // L_r^-1 (M_r^T)^-1 M_t L_t

  int N() const { return static_cast<int>(B.rows()); }
  int K() const { return static_cast<int>(A.rows()); }
  CMatrix E_t() const { return M_t * L_t; }
  CMatrix E_r() const { return L_r * M_r; }
  CMatrix A_dev() const;
  CMatrix B_dev() const;

  static NrcRealization Identity(int N, int K);
};

// Fills A and B from the mismatch matrices.
NrcRealization MakeNrc(CDiagonal F_t, CDiagonal F_r, CDiagonal L_t,
                       CDiagonal L_r, CMatrix M_t, CMatrix M_r);

struct NrcVariances {
  double sigma_F2 = 0.0;
  double sigma_L2 = 0.0;
  double sigma_M2 = 0.0;
};

// One realisation with independent TX and RX coupling draws. Z is the array
// impedance matrix, precomputed because it is shared by every draw.
NrcRealization DrawNrc(const CMatrix& Z, int K, const NrcVariances& var,
                       Rng& rng);

struct ChannelSet {
  CMatrix P;  // N x K
  CMatrix G;  // N x K, uplink
  CMatrix H;  // K x N, downlink
  int subcarrier_index = 0;
};

ChannelSet AssembleChannels(const CMatrix& P, const NrcRealization& nrc,
                            int subcarrier_index = 0);

}  // namespace nrc
