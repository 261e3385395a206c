#pragma once

#include <cstddef>

#include "ligen/numerics/matrix.hpp"
#include "ligen/numerics/mlp.hpp"

namespace ligen {

enum class CheckLoss { mse, bce_after_sigmoid };

struct GradientCheckReport {
  double max_relative_error = 0.0;
  std::size_t parameters_checked = 0;
  bool dropout_disabled = false;  // true when the input net had dropout > 0
};

// Compares backward() against central differences for every trainable scalar.
// The net is taken by value: dropout is forced to zero and it runs in train
// mode. Relative error is |a - n| / max(|a|, |n|, 1e-12).
GradientCheckReport gradient_check(MlpNet net, const Matrix& batch, const Matrix& target,
                                   CheckLoss loss, double eps = 1e-6);

}  // namespace ligen
