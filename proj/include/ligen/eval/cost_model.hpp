#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace ligen {

struct LocConfig;

enum class CostKind { mlp_fwd, mlp_epoch, gan_iter, gan_epoch, wlm_label, total, infer };

CostKind parse_cost_kind(std::string_view s);

// Sizes for the multiply-accumulate model. L counts dense layers (hidden
// layers + output layer). Unset fields are only an error when the requested
// quantity needs them.
struct CostModel {
  std::optional<std::uint64_t> d, H, L, B, E, z, N, N_aug, N_free;
  std::optional<std::uint64_t> H_wlm, L_wlm, E_gan;
  // Explicit GAN hidden widths; when absent both nets use two layers of width H.
  std::optional<std::vector<std::uint64_t>> gen_hidden, disc_hidden;
  bool conditional = true;  // PointGAN feeds 2 coordinates to both nets

  static CostModel for_localizer(std::uint64_t d, const LocConfig& cfg);
};

// Exact MAC counts of the implemented networks:
//   mlp_fwd   d*H + (L-2)*H^2 + 2*H per sample (2*d when L = 1)
//   mlp_epoch 3 * (N + N_aug) * mlp_fwd (forward, weight gradient, input gradient)
//   gan_iter  N * (9*C_d + 3*C_g): G runs forward once on N rows, D runs
//             forward+backward on 2N real/fake rows, then forward+backward on
//             the N fakes, and G backpropagates once
//   gan_epoch gan_iter (GANs train full batch)
//   wlm_label N_free * C_WLM,fwd
//   total     E_gan * gan_epoch + E * mlp_epoch + wlm_label
//   infer     mlp_fwd
std::uint64_t estimate_cost(const CostModel& model, CostKind which);

// Per-sample forward MACs of the discriminator and generator.
std::uint64_t discriminator_fwd(const CostModel& model);
std::uint64_t generator_fwd(const CostModel& model);

}  // namespace ligen
