// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

#include "nrc/types.hpp"

namespace nrc {

// Seeded pseudo-random stream. Streams for independent simulation stages are
// derived from (seed, path) so that the draws of one stage never depend on
// how many numbers another stage consumed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  static Rng Derive(std::uint64_t seed, std::initializer_list<std::uint64_t> path);
  static Rng Derive(std::uint64_t seed, const std::vector<std::uint64_t>& path);

  double Normal() { return normal_(engine_); }
  double Uniform() { return uniform_(engine_); }

  // Circularly-symmetric complex Gaussian with E|x|^2 = variance.
  cd ComplexNormal(double variance = 1.0);
  CMatrix ComplexNormalMatrix(Eigen::Index rows, Eigen::Index cols,
                              double variance = 1.0);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

std::uint64_t SplitMix64(std::uint64_t x);

}  // namespace nrc
