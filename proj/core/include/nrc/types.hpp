// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace nrc {

using cd = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using CDiagonal = Eigen::DiagonalMatrix<cd, Eigen::Dynamic>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Matrix shapes that do not compose.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Out-of-domain scalar parameters (negative variances, zero distances, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Fewer pilot symbols than users.
class PilotBudgetError : public Error {
 public:
  using Error::Error;
};

// A matrix that has to be inverted is singular or numerically close to it.
class SingularityError : public Error {
 public:
  using Error::Error;
};

// Invalid scenario configuration, preset or sweep parameter.
class ConfigError : public Error {
 public:
  using Error::Error;
};

inline double DbToLinear(double db) { return std::pow(10.0, db / 10.0); }
inline double LinearToDb(double x) { return 10.0 * std::log10(x); }

inline void RequireShape(const CMatrix& m, Eigen::Index rows, Eigen::Index cols,
                         const char* what) {
  if (m.rows() != rows || m.cols() != cols) {
    throw DimensionError(std::string(what) + ": expected " +
                         std::to_string(rows) + "x" + std::to_string(cols) +
                         ", got " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()));
  }
}

}  // namespace nrc
