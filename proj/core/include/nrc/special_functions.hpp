// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace nrc {

inline constexpr double kEulerGamma = 0.57721566490153286061;

struct SineCosineIntegral {
  double si = 0.0;  // Si(x) = int_0^x sin(t)/t dt
  double ci = 0.0;  // Ci(x) = gamma + ln x + int_0^x (cos t - 1)/t dt
};

// Sine and cosine integrals for x > 0. Power series below x = 2, continued
// fraction for E1(ix) above; both accurate to a few ulps of double precision.
SineCosineIntegral SineCosine(double x);

}  // namespace nrc
