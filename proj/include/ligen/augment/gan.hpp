#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "ligen/common/json_fields.hpp"
#include "ligen/datamodel/dataset.hpp"
#include "ligen/datamodel/normalizer.hpp"
#include "ligen/numerics/adam.hpp"
#include "ligen/numerics/mlp.hpp"

namespace ligen {

enum class GanKind { pointgan, freegan };

std::string_view to_string(GanKind kind) noexcept;
GanKind parse_gan_kind(std::string_view s);
Origin origin_of(GanKind kind) noexcept;

struct GanConfig {
  std::size_t noise_dim = 32;
  std::size_t epochs = 5000;
  double learning_rate = 1e-4;
  double beta1 = 0.5;
  double beta2 = 0.999;
  std::vector<std::size_t> gen_hidden{128, 256};
  std::vector<std::size_t> disc_hidden{256, 128};

  friend bool operator==(const GanConfig&, const GanConfig&) = default;
};

void validate(const GanConfig& cfg);
Json to_json(const GanConfig& cfg);
GanConfig gan_config_from_json(const Json& doc, const std::string& path, const GanConfig& base = {});

// Generator and discriminator plus the normalization of the real training
// data they were fit to. Generator outputs live in normalized [0, 1] space.
struct GanBundle {
  GanKind kind = GanKind::pointgan;
  Modality modality = Modality::spectral;
  Extent extent;
  GanConfig config;
  NormStats norm;
  MlpNet generator;
  MlpNet discriminator;
};

// PointGAN: G (z, c) -> f with ReLU hidden layers, D (c, f) -> p with ReLU.
// FreeGAN: G z -> f with batch norm + LeakyReLU(0.2), D f -> p with LeakyReLU(0.2).
std::vector<LayerSpec> generator_layers(GanKind kind, std::size_t fingerprint_dim, const GanConfig& cfg);
std::vector<LayerSpec> discriminator_layers(GanKind kind, std::size_t fingerprint_dim, const GanConfig& cfg);

struct GanTraces {
  std::vector<double> discriminator_loss;  // per epoch
  std::vector<double> generator_loss;
};

struct GanTrainingResult {
  GanBundle bundle;
  GanTraces traces;
};

// Full-batch adversarial training over every real training sample. Each
// step: one discriminator update (real = 1, fake = 0, BCE) followed by one
// non-saturating generator update (BCE of D(G(z)) against 1), both with
// the same fake batch.
class GanTrainer {
 public:
  GanTrainer(GanKind kind, const Dataset& train, const GanConfig& cfg, std::uint64_t seed);

  struct StepLosses {
    double discriminator = 0.0;
    double generator = 0.0;
  };
  StepLosses step();

  std::size_t steps_taken() const noexcept { return steps_; }
  const GanBundle& bundle() const noexcept { return bundle_; }
  // Discriminator inputs and labels of the most recent discriminator update.
  const Matrix& last_discriminator_input() const noexcept { return last_input_; }
  const Matrix& last_discriminator_labels() const noexcept { return last_labels_; }

  GanBundle finish();

 private:
  GanBundle bundle_;
  Matrix real_features_;  // normalized
  Matrix real_conditions_;  // normalized, PointGAN only
  Rng noise_rng_;
  AdamState gen_adam_;
  AdamState disc_adam_;
  Matrix last_input_;
  Matrix last_labels_;
  std::size_t steps_ = 0;
};

GanTrainingResult train_gan(GanKind kind, const Dataset& train, const GanConfig& cfg, std::uint64_t seed);
inline GanTrainingResult train_pointgan(const Dataset& train, const GanConfig& cfg, std::uint64_t seed) {
  return train_gan(GanKind::pointgan, train, cfg, seed);
}
inline GanTrainingResult train_freegan(const Dataset& train, const GanConfig& cfg, std::uint64_t seed) {
  return train_gan(GanKind::freegan, train, cfg, seed);
}

Matrix standard_normal(std::size_t rows, std::size_t cols, Rng& rng);

}  // namespace ligen
