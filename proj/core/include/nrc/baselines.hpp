// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <utility>
#include <vector>

#include "nrc/channel_model.hpp"
#include "nrc/precoding.hpp"
#include "nrc/random.hpp"
#include "nrc/types.hpp"

namespace nrc {

inline constexpr double kDefaultCouplingSnrDb = 80.0;

// One bidirectional exchange between antennas i and j over the array's own
// coupling channel. forward: i transmits, j receives; reverse: j to i.
struct CouplingObservation {
  int i = 0;
  int j = 0;
  cd forward;
  cd reverse;
};

struct CouplingMeasurement {
  std::vector<CouplingObservation> pairs;
  double coupling_snr_db = kDefaultCouplingSnrDb;
};

// Symmetric inter-antenna channel with zero diagonal, proportional to the
// mutual-impedance magnitude and scaled so that the strongest pair sees coupling_snr_db
// against unit-variance noise.
CMatrix CouplingChannel(const CMatrix& Z, double coupling_snr_db);

std::vector<std::pair<int, int>> StarPairs(int n, int reference = 0);
std::vector<std::pair<int, int>> NeighborPairs(const ArrayGeometry& geometry,
                                               double radius);

// Observations of E_r C E_t + noise for the requested pairs.
CouplingMeasurement MeasureCoupling(const NrcRealization& nrc, const CMatrix& C,
                                    const std::vector<std::pair<int, int>>& pairs,
                                    double coupling_snr_db, Rng& rng,
                                    bool noise = true);

struct CalibrationResult {
  CMatrix B_hat;              // diagonal, b_0 = 1
  std::vector<int> excluded;  // antennas left at 1 because of a dead link
};

// Direct-path ratios against antenna `reference` (b_reference = 1).
CalibrationResult ArgosCalibrate(const CouplingMeasurement& m, int n,
                                 int reference = 0);

// Joint LS over all pairs: min sum |x_i f_ij - x_j r_ij|^2 with x_0 = 1,
// b = 1/x.
CalibrationResult NeighborLsCalibrate(const CouplingMeasurement& m, int n);

// Orthogonal downlink pilots through the beamformed channel and a per-user
// LMMSE estimate of beta h_k^T u_k around the prior (mean, variance).
// tau_d pilots of DFT rows; noise_variance = 0 gives the exact gains.
CVector DlPilotCsi(const CMatrix& H, const Precoder& p, int tau_d, double rho_d,
                   const CVector& prior_mean, const RVector& prior_variance,
                   Rng& rng, double noise_variance = 1.0);

}  // namespace nrc
