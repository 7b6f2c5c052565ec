#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "uniparser/linalg.hpp"

namespace uniparser {

// Named contiguous segment of a packed parameter vector.
struct TensorSpan {
  std::string name;
  std::size_t offset = 0;
  std::size_t size = 0;
};

struct GradCheckReport {
  double worst_rel_error = 0.0;
  std::string worst_tensor;
  std::size_t worst_coordinate = 0;
  std::size_t coordinates_checked = 0;

  bool within(double tolerance) const { return worst_rel_error < tolerance; }
};

// Symmetric relative error; treats a pair of negligible magnitudes as exact.
inline double relative_error(double a, double b) {
  const double denom = std::abs(a) + std::abs(b);
  if (denom < 1e-12) return 0.0;
  return std::abs(a - b) / denom;
}

// Central-difference comparison of an analytic gradient against a pure loss
// functional over the packed parameter vector. When max_coords_per_tensor
// is positive, a seeded random subset of coordinates is checked per tensor;
// otherwise every coordinate is.
inline GradCheckReport grad_check(const std::function<double(const Vector&)>& loss,
                                  const Vector& params, const Vector& analytic_grad,
                                  double step = 1e-5,
                                  const std::vector<TensorSpan>& spans = {},
                                  std::size_t max_coords_per_tensor = 0,
                                  std::uint64_t subset_seed = 0) {
  std::vector<TensorSpan> effective = spans;
  if (effective.empty())
    effective.push_back({"params", 0, static_cast<std::size_t>(params.size())});

  GradCheckReport report;
  std::mt19937_64 rng(subset_seed);
  Vector perturbed = params;
  for (const TensorSpan& span : effective) {
    std::vector<std::size_t> coords(span.size);
    std::iota(coords.begin(), coords.end(), span.offset);
    if (max_coords_per_tensor > 0 && coords.size() > max_coords_per_tensor) {
      std::shuffle(coords.begin(), coords.end(), rng);
      coords.resize(max_coords_per_tensor);
    }
    for (std::size_t c : coords) {
      const double saved = perturbed[c];
      perturbed[c] = saved + step;
      const double up = loss(perturbed);
      perturbed[c] = saved - step;
      const double down = loss(perturbed);
      perturbed[c] = saved;
      const double numeric = (up - down) / (2.0 * step);
      const double err = relative_error(analytic_grad[c], numeric);
      ++report.coordinates_checked;
      if (err > report.worst_rel_error) {
        report.worst_rel_error = err;
        report.worst_tensor = span.name;
        report.worst_coordinate = c - span.offset;
      }
    }
  }
  return report;
}

}  // namespace uniparser
