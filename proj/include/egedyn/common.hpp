#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace ege {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

// Invalid argument or configuration (CLI exit code 2).
struct ArgumentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Numerically degenerate spectrum: overlaps blow up as gap^-2, so we refuse
// to continue rather than propagate noise (CLI exit code 3).
struct DegeneracyError : std::runtime_error {
  double min_gap;
  double t;
  DegeneracyError(const std::string& msg, double gap, double time)
      : std::runtime_error(msg), min_gap(gap), t(time) {}
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw ArgumentError(msg);
}

}  // namespace ege
