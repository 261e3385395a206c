#pragma once

#include "ligen/numerics/matrix.hpp"

namespace ligen {

struct LossResult {
  double value = 0.0;
  Matrix grad;  // d value / d prediction, same shape as the prediction
};

// Mean over rows of the squared Euclidean residual; gradient 2(pred-target)/N.
LossResult mse_loss(const Matrix& pred, const Matrix& target);

inline constexpr double kBceClamp = 1e-7;

// Mean binary cross-entropy with probabilities clamped to
// [kBceClamp, 1 - kBceClamp] before the logarithm. Gradient is taken at the
// clamped probability.
LossResult bce_loss(const Matrix& prob, const Matrix& label);

}  // namespace ligen
