#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ligen {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Bias-corrected Adam. Moments are allocated lazily on the first step to the
// shapes of the parameter tensors and must keep those shapes afterwards.
struct AdamState {
  AdamConfig config;
  std::vector<std::vector<double>> first_moment;
  std::vector<std::vector<double>> second_moment;
  std::size_t step_count = 0;

  AdamState() = default;
  explicit AdamState(AdamConfig cfg) : config(cfg) {}
};

void adam_step(std::span<const std::span<double>> params,
               std::span<const std::span<double>> grads, AdamState& state);

}  // namespace ligen
