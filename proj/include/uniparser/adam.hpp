#pragma once

#include <cmath>
#include <string>

#include "uniparser/common.hpp"
#include "uniparser/linalg.hpp"

namespace uniparser {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// One bias-corrected Adam update for a single tensor. step_t is the
// 1-based step counter shared by all tensors of the parameter set.
template <typename T>
inline void adam_update(T& param, const T& grad, T& mom1, T& mom2, long step_t, double lr,
                        const AdamConfig& cfg, const std::string& name) {
  if (!grad.allFinite()) throw NumericError("non-finite gradient in tensor " + name);
  mom1 = cfg.beta1 * mom1 + (1.0 - cfg.beta1) * grad;
  mom2.array() = cfg.beta2 * mom2.array() + (1.0 - cfg.beta2) * grad.array().square();
  const double corr1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step_t));
  const double corr2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step_t));
  param.array() -=
      lr * (mom1.array() / corr1) / ((mom2.array() / corr2).sqrt() + cfg.epsilon);
}

}  // namespace uniparser
