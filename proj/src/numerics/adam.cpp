#include "ligen/numerics/adam.hpp"

#include <cmath>

#include "ligen/common/errors.hpp"

namespace ligen {

void adam_step(std::span<const std::span<double>> params,
               std::span<const std::span<double>> grads, AdamState& state) {
  const AdamConfig& cfg = state.config;
  if (!(cfg.beta1 > 0.0 && cfg.beta1 < 1.0 && cfg.beta2 > 0.0 && cfg.beta2 < 1.0))
    throw ContractViolation("adam_step: betas must lie in (0, 1)");
  if (!(cfg.learning_rate > 0.0) || !(cfg.epsilon > 0.0))
    throw ContractViolation("adam_step: learning rate and epsilon must be positive");
  if (params.size() != grads.size())
    throw ContractViolation("adam_step: parameter/gradient tensor count mismatch");
  for (std::size_t t = 0; t < params.size(); ++t)
    if (params[t].size() != grads[t].size())
      throw ContractViolation("adam_step: parameter/gradient shape mismatch");

  if (state.step_count == 0 && state.first_moment.empty()) {
    for (const auto& p : params) {
      state.first_moment.emplace_back(p.size(), 0.0);
      state.second_moment.emplace_back(p.size(), 0.0);
    }
  }
  if (state.first_moment.size() != params.size())
    throw ContractViolation("adam_step: moment tensor count changed between steps");
  for (std::size_t t = 0; t < params.size(); ++t)
    if (state.first_moment[t].size() != params[t].size())
      throw ContractViolation("adam_step: moment shape changed between steps");

  state.step_count += 1;
  const double k = static_cast<double>(state.step_count);
  const double correction1 = 1.0 - std::pow(cfg.beta1, k);
  const double correction2 = 1.0 - std::pow(cfg.beta2, k);
  for (std::size_t t = 0; t < params.size(); ++t) {
    auto p = params[t];
    auto g = grads[t];
    auto& m = state.first_moment[t];
    auto& v = state.second_moment[t];
    for (std::size_t i = 0; i < p.size(); ++i) {
      m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g[i];
      v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
      const double m_hat = m[i] / correction1;
      const double v_hat = v[i] / correction2;
      p[i] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
    }
  }
}

}  // namespace ligen
