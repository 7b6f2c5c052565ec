#pragma once

#include <Eigen/Dense>
#include <cmath>

namespace uniparser {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Overflow-safe logistic; exact for |x| <= 50 and beyond.
inline double logistic(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

inline double logistic_derivative_from_value(double s) { return s * (1.0 - s); }

}  // namespace uniparser
