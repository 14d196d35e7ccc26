// SPDX-License-Identifier: Apache-2.0

#include "nrc/random.hpp"

#include <cmath>

namespace nrc {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed) : engine_(SplitMix64(seed)) {}

namespace {

template <class Range>
std::uint64_t HashPath(std::uint64_t seed, const Range& path) {
  std::uint64_t h = SplitMix64(seed);
  for (std::uint64_t p : path) {
    h = SplitMix64(h ^ SplitMix64(p + 0x632be59bd9b4e019ULL));
  }
  return h;
}

}  // namespace

Rng Rng::Derive(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
  return Rng(HashPath(seed, path));
}

Rng Rng::Derive(std::uint64_t seed, const std::vector<std::uint64_t>& path) {
  return Rng(HashPath(seed, path));
}

cd Rng::ComplexNormal(double variance) {
  const double s = std::sqrt(0.5 * variance);
  const double re = normal_(engine_);
  const double im = normal_(engine_);
  return {s * re, s * im};
}

CMatrix Rng::ComplexNormalMatrix(Eigen::Index rows, Eigen::Index cols,
                                 double variance) {
  CMatrix m(rows, cols);
  // Column-major fill order is part of the reproducibility contract.
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      m(i, j) = ComplexNormal(variance);
    }
  }
  return m;
}

}  // namespace nrc
