#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ligen/common/json_fields.hpp"
#include "ligen/datamodel/dataset.hpp"
#include "ligen/datamodel/normalizer.hpp"
#include "ligen/numerics/mlp.hpp"

namespace ligen {

// Defaults describe a plain MLP (no dropout); searched configs draw dropout
// from [0.1, 0.5].
struct LocConfig {
  std::size_t hidden_size = 256;
  std::size_t n_hidden = 4;
  double dropout_rate = 0.0;
  double learning_rate = 1e-3;
  std::size_t epochs = 700;
  std::size_t batch_size = 4096;
  double beta1 = 0.9;
  double beta2 = 0.999;

  friend bool operator==(const LocConfig&, const LocConfig&) = default;
};

void validate(const LocConfig& cfg);
Json to_json(const LocConfig& cfg);
// Missing keys keep the values of `base`.
LocConfig loc_config_from_json(const Json& doc, const std::string& path, const LocConfig& base = {});

struct LossPoint {
  std::size_t epoch = 0;  // 1-based
  double mse = 0.0;       // in normalized coordinate units
  friend bool operator==(const LossPoint&, const LossPoint&) = default;
};

struct TrainedLocalizer {
  Modality modality = Modality::spectral;
  MlpNet net;
  NormStats norm;
  LocConfig config;
  std::vector<LossPoint> loss_curve;
  std::size_t optimizer_steps = 0;
};

// d -> hidden x n_hidden (ReLU, dropout) -> 2 (identity).
std::vector<LayerSpec> localizer_layers(std::size_t in_dim, const LocConfig& cfg);

// Trains on min-max normalized features and coordinates with MSE and Adam.
// Full batch when the data fits in one batch, otherwise reshuffled
// mini-batches every epoch.
TrainedLocalizer train_localizer(const Dataset& data, const LocConfig& cfg, std::uint64_t seed);

Coordinate predict(const TrainedLocalizer& model, std::span<const double> fingerprint);
// Rows of raw (unnormalized) fingerprints.
std::vector<Coordinate> predict_batch(const TrainedLocalizer& model, const Matrix& fingerprints);
std::vector<Coordinate> predict_dataset(const TrainedLocalizer& model, const Dataset& data);

// Weak localization model used for pseudo-labelling: width 128, dropout 0.1,
// lr 1e-3. `epochs` exists for reduced-budget runs.
LocConfig weak_config(std::size_t epochs = 700);
TrainedLocalizer train_weak_model(const Dataset& data, std::uint64_t seed, std::size_t epochs = 700);

}  // namespace ligen
