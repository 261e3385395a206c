#include "ligen/numerics/loss.hpp"

#include <algorithm>
#include <cmath>

#include "ligen/common/errors.hpp"

namespace ligen {

LossResult mse_loss(const Matrix& pred, const Matrix& target) {
  if (pred.rows() != target.rows() || pred.cols() != target.cols())
    throw ContractViolation("mse_loss: prediction and target shapes differ");
  if (pred.rows() == 0) throw EmptyInputError("mse_loss: no samples");
  const double n = static_cast<double>(pred.rows());
  LossResult out{0.0, Matrix(pred.rows(), pred.cols())};
  auto p = pred.values();
  auto t = target.values();
  auto g = out.grad.values();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double r = p[i] - t[i];
    out.value += r * r;
    g[i] = 2.0 * r / n;
  }
  out.value /= n;
  return out;
}

LossResult bce_loss(const Matrix& prob, const Matrix& label) {
  if (prob.rows() != label.rows() || prob.cols() != label.cols())
    throw ContractViolation("bce_loss: probability and label shapes differ");
  if (prob.rows() == 0) throw EmptyInputError("bce_loss: no samples");
  const double n = static_cast<double>(prob.rows());
  LossResult out{0.0, Matrix(prob.rows(), prob.cols())};
  auto p = prob.values();
  auto y = label.values();
  auto g = out.grad.values();
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (y[i] != 0.0 && y[i] != 1.0)
      throw ContractViolation("bce_loss: labels must be 0 or 1");
    if (!(p[i] >= 0.0 && p[i] <= 1.0))
      throw ContractViolation("bce_loss: probabilities must lie in [0, 1]");
    const double pc = std::clamp(p[i], kBceClamp, 1.0 - kBceClamp);
    out.value -= y[i] * std::log(pc) + (1.0 - y[i]) * std::log(1.0 - pc);
    g[i] = (pc - y[i]) / (pc * (1.0 - pc) * n);
  }
  out.value /= n;
  return out;
}

}  // namespace ligen
