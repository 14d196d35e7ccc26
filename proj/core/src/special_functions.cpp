// SPDX-License-Identifier: Apache-2.0

#include "nrc/special_functions.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace nrc {
namespace {

constexpr int kMaxIterations = 200;
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = std::numeric_limits<double>::min() / kEps;
constexpr double kSeriesLimit = 2.0;

SineCosineIntegral Series(double x) {
  double si = x;
  double ci = 0.0;
  double term = x;  // (-1)^k x^(2k+1) / (2k+1)!
  for (int k = 1; k < kMaxIterations; ++k) {
    // Advance to the even-power term x^(2k) / (2k)!.
    term *= x / (2.0 * k);
    const double ci_term = -term / (2.0 * k);
    term *= -x / (2.0 * k + 1.0);
    const double si_term = term / (2.0 * k + 1.0);
    ci += ci_term;
    si += si_term;
    if (std::abs(si_term) < kEps * std::abs(si) &&
        std::abs(ci_term) < kEps * std::abs(ci)) {
      break;
    }
  }
  return {si, kEulerGamma + std::log(x) + ci};
}

SineCosineIntegral ContinuedFraction(double x) {
  // Modified Lentz evaluation of E1(ix) = -Ci(x) + i (Si(x) - pi/2).
  using C = std::complex<double>;
  C b(1.0, x);
  C c(1.0 / kTiny, 0.0);
  C d = 1.0 / b;
  C h = d;
  int i = 2;
  for (; i < kMaxIterations; ++i) {
    const double a = -static_cast<double>((i - 1) * (i - 1));
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    const C del = c * d;
    h *= del;
    if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < kEps) break;
  }
  if (i >= kMaxIterations) {
    throw std::runtime_error("SineCosine: continued fraction did not converge");
  }
  h *= C(std::cos(x), -std::sin(x));
  return {std::numbers::pi / 2.0 + h.imag(), -h.real()};
}

}  // namespace

SineCosineIntegral SineCosine(double x) {
  if (!(x > 0.0)) {
    throw std::domain_error("SineCosine: argument must be positive");
  }
  return x < kSeriesLimit ? Series(x) : ContinuedFraction(x);
}

}  // namespace nrc
