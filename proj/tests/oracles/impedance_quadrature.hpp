// SPDX-License-Identifier: Apache-2.0
// Induced-EMF impedances of side-by-side half-wave dipoles by direct numerical
// integration of the near-field kernel, independent of any Si/Ci closed form.
#pragma once

#include <cmath>
#include <complex>
#include <algorithm>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace oracle {

namespace detail {

template <typename F>
double Integrate(F f, double a, double b) {
  using boost::math::quadrature::gauss_kronrod;
  double err = 0.0;
  return gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-12, &err);
}

}  // namespace detail

// Z_21 = j 30 Int_{-h}^{h} [exp(-jkR1)/R1 + exp(-jkR2)/R2] sin(k(h - |z|)) dz
// with h = lambda/4, k = 2 pi, R1,2 = sqrt(d^2 + (z -+ h)^2). A tiny d gives the
// thin-wire self impedance.
inline std::complex<double> DipoleImpedanceQuadrature(double d) {
  constexpr double k = 2.0 * std::numbers::pi;
  constexpr double h = 0.25;
  auto kernel = [=](double z) {
    const double r1 = std::sqrt(d * d + (z - h) * (z - h));
    const double r2 = std::sqrt(d * d + (z + h) * (z + h));
    const std::complex<double> j(0.0, 1.0);
    return j * 30.0 *
           (std::exp(-j * k * r1) / r1 + std::exp(-j * k * r2) / r2) *
           std::sin(k * (h - std::abs(z)));
  };
  // The |z| kink sits at 0; near +-h the kernel varies on the scale of d, so
  // panels shrink geometrically towards the ends.
  std::vector<double> ends{0.0};
  for (double g = 0.1; g > 0.1 * d; g *= 0.1) ends.push_back(h - g);
  ends.push_back(h);
  double re = 0.0;
  double im = 0.0;
  for (int sign : {-1, 1}) {
    for (std::size_t s = 0; s + 1 < ends.size(); ++s) {
      const double lo = std::min(sign * ends[s], sign * ends[s + 1]);
      const double hi = std::max(sign * ends[s], sign * ends[s + 1]);
      re += detail::Integrate([&](double z) { return kernel(z).real(); }, lo, hi);
      im += detail::Integrate([&](double z) { return kernel(z).imag(); }, lo, hi);
    }
  }
  return {re, im};
}

// Radiation resistance of a half-wave dipole from the far-field power
// integral, 60 Int_0^pi cos^2(pi/2 cos t)/sin t dt.
inline double HalfWaveRadiationResistance() {
  auto f = [](double t) {
    const double s = std::sin(t);
    if (s < 1e-300) return 0.0;
    const double c = std::cos(0.5 * std::numbers::pi * std::cos(t));
    return c * c / s;
  };
  return 60.0 * detail::Integrate(f, 0.0, std::numbers::pi);
}

}  // namespace oracle
