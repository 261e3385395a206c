#include "ligen/numerics/gradient_check.hpp"

#include <algorithm>
#include <cmath>

#include "ligen/common/errors.hpp"
#include "ligen/numerics/loss.hpp"

namespace ligen {
namespace {

LossResult evaluate(CheckLoss loss, const Matrix& out, const Matrix& target) {
  return loss == CheckLoss::mse ? mse_loss(out, target) : bce_loss(out, target);
}

}  // namespace

GradientCheckReport gradient_check(MlpNet net, const Matrix& batch, const Matrix& target,
                                   CheckLoss loss, double eps) {
  if (!(eps >= 1e-6 && eps <= 1e-4))
    throw ContractViolation("gradient_check: eps must lie in [1e-6, 1e-4]");
  if (loss == CheckLoss::bce_after_sigmoid &&
      net.layers().back().spec.activation != Activation::sigmoid)
    throw ContractViolation("gradient_check: BCE check needs a sigmoid output layer");

  GradientCheckReport report;
  for (DenseLayer& l : net.layers()) {
    if (l.spec.dropout_rate > 0.0) {
      report.dropout_disabled = true;
      l.spec.dropout_rate = 0.0;
    }
  }
  net.set_mode(Mode::train);

  ForwardCache cache;
  const Matrix out = net.forward(batch, nullptr, &cache);
  const LossResult base = evaluate(loss, out, target);
  Gradients grads = net.backward(cache, base.grad);

  auto params = net.parameters();
  auto analytic = gradient_views(grads);
  for (std::size_t t = 0; t < params.size(); ++t) {
    for (std::size_t i = 0; i < params[t].size(); ++i) {
      const double saved = params[t][i];
      params[t][i] = saved + eps;
      const double up = evaluate(loss, net.forward(batch), target).value;
      params[t][i] = saved - eps;
      const double down = evaluate(loss, net.forward(batch), target).value;
      params[t][i] = saved;
      const double numeric = (up - down) / (2.0 * eps);
      const double a = analytic[t][i];
      const double denom = std::max({std::abs(a), std::abs(numeric), 1e-12});
      report.max_relative_error = std::max(report.max_relative_error, std::abs(a - numeric) / denom);
      ++report.parameters_checked;
    }
  }
  return report;
}

}  // namespace ligen
