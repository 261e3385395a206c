#include "ligen/locmodel/localizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ligen/common/errors.hpp"
#include "ligen/numerics/adam.hpp"
#include "ligen/numerics/loss.hpp"

namespace ligen {

void validate(const LocConfig& cfg) {
  if (cfg.hidden_size == 0) throw ContractViolation("LocConfig: hidden_size must be >= 1");
  if (cfg.n_hidden == 0) throw ContractViolation("LocConfig: n_hidden must be >= 1");
  if (!(cfg.dropout_rate >= 0.0 && cfg.dropout_rate < 1.0))
    throw ContractViolation("LocConfig: dropout_rate must lie in [0, 1)");
  if (!(cfg.learning_rate > 0.0)) throw ContractViolation("LocConfig: learning_rate must be positive");
  if (cfg.epochs == 0) throw ContractViolation("LocConfig: epochs must be >= 1");
  if (cfg.batch_size == 0) throw ContractViolation("LocConfig: batch_size must be >= 1");
  if (!(cfg.beta1 >= 0.0 && cfg.beta1 < 1.0 && cfg.beta2 >= 0.0 && cfg.beta2 < 1.0))
    throw ContractViolation("LocConfig: Adam betas must lie in [0, 1)");
}

Json to_json(const LocConfig& cfg) {
  return {{"hidden_size", cfg.hidden_size},   {"n_hidden", cfg.n_hidden}, {"dropout_rate", cfg.dropout_rate},
          {"learning_rate", cfg.learning_rate}, {"epochs", cfg.epochs},     {"batch_size", cfg.batch_size},
          {"beta1", cfg.beta1},               {"beta2", cfg.beta2}};
}

LocConfig loc_config_from_json(const Json& doc, const std::string& path, const LocConfig& base) {
  json_reject_unknown(doc,
                      {"hidden_size", "n_hidden", "dropout_rate", "learning_rate", "epochs", "batch_size", "beta1",
                       "beta2"},
                      path);
  LocConfig cfg = base;
  cfg.hidden_size = json_get_or(doc, "hidden_size", cfg.hidden_size, path);
  cfg.n_hidden = json_get_or(doc, "n_hidden", cfg.n_hidden, path);
  cfg.dropout_rate = json_get_or(doc, "dropout_rate", cfg.dropout_rate, path);
  cfg.learning_rate = json_get_or(doc, "learning_rate", cfg.learning_rate, path);
  cfg.epochs = json_get_or(doc, "epochs", cfg.epochs, path);
  cfg.batch_size = json_get_or(doc, "batch_size", cfg.batch_size, path);
  cfg.beta1 = json_get_or(doc, "beta1", cfg.beta1, path);
  cfg.beta2 = json_get_or(doc, "beta2", cfg.beta2, path);
  try {
    validate(cfg);
  } catch (const ContractViolation& e) {
    throw ConfigError("field '" + path + "': " + e.what());
  }
  return cfg;
}

std::vector<LayerSpec> localizer_layers(std::size_t in_dim, const LocConfig& cfg) {
  std::vector<LayerSpec> specs;
  std::size_t width = in_dim;
  for (std::size_t i = 0; i < cfg.n_hidden; ++i) {
    specs.push_back({width, cfg.hidden_size, Activation::relu, 0.2, cfg.dropout_rate, false});
    width = cfg.hidden_size;
  }
  specs.push_back({width, 2, Activation::identity, 0.2, 0.0, false});
  return specs;
}

TrainedLocalizer train_localizer(const Dataset& data, const LocConfig& cfg, std::uint64_t seed) {
  validate(cfg);
  if (data.empty()) throw EmptyInputError("train_localizer: empty training set");

  TrainedLocalizer model;
  model.modality = data.modality();
  model.config = cfg;
  model.norm = fit_normalizer(data);
  Rng init_rng = make_rng(seed, "localizer/init");
  Rng shuffle_rng = make_rng(seed, "localizer/shuffle");
  Rng dropout_rng = make_rng(seed, "localizer/dropout");
  model.net = MlpNet(localizer_layers(feature_dim(data.modality()), cfg), init_rng);

  const Matrix x = normalize_features(model.norm, data.feature_matrix());
  const Matrix y = normalize_locations(model.norm, data.location_matrix());
  const std::size_t n = data.size();
  const bool full_batch = n <= cfg.batch_size;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  AdamState adam(AdamConfig{cfg.learning_rate, cfg.beta1, cfg.beta2, 1e-8});
  model.net.set_mode(Mode::train);
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    if (!full_batch) std::shuffle(order.begin(), order.end(), shuffle_rng);
    double weighted = 0.0;
    for (std::size_t start = 0; start < n; start += cfg.batch_size) {
      const std::size_t count = std::min(cfg.batch_size, n - start);
      ForwardCache cache;
      Matrix out;
      LossResult loss;
      try {
        if (full_batch) {
          out = model.net.forward(x, &dropout_rng, &cache);
          loss = mse_loss(out, y);
        } else {
          const std::span<const std::size_t> idx(order.data() + start, count);
          out = model.net.forward(x.gather_rows(idx), &dropout_rng, &cache);
          loss = mse_loss(out, y.gather_rows(idx));
        }
      } catch (const NumericOverflowError&) {
        throw DivergenceError("train_localizer: non-finite forward pass", epoch);
      }
      if (!std::isfinite(loss.value)) throw DivergenceError("train_localizer: non-finite loss", epoch);
      Gradients grads = model.net.backward(cache, loss.grad);
      const auto params = model.net.parameters();
      const auto views = gradient_views(grads);
      adam_step(params, views, adam);
      ++model.optimizer_steps;
      weighted += loss.value * static_cast<double>(count);
    }
    const double epoch_loss = weighted / static_cast<double>(n);
    if (!std::isfinite(epoch_loss)) throw DivergenceError("train_localizer: non-finite loss", epoch);
    model.loss_curve.push_back({epoch, epoch_loss});
  }
  model.net.set_mode(Mode::eval);
  return model;
}

std::vector<Coordinate> predict_batch(const TrainedLocalizer& model, const Matrix& fingerprints) {
  if (fingerprints.cols() != model.net.in_dim())
    throw ContractViolation("predict: fingerprint has " + std::to_string(fingerprints.cols()) +
                            " channels, model expects " + std::to_string(model.net.in_dim()));
  if (fingerprints.rows() == 0) return {};
  const Matrix out = denormalize_locations(model.norm, model.net.predict(normalize_features(model.norm, fingerprints)));
  std::vector<Coordinate> coords(out.rows());
  for (std::size_t i = 0; i < out.rows(); ++i) coords[i] = {out(i, 0), out(i, 1)};
  return coords;
}

Coordinate predict(const TrainedLocalizer& model, std::span<const double> fingerprint) {
  return predict_batch(model, Matrix(1, fingerprint.size(), std::vector<double>(fingerprint.begin(), fingerprint.end())))
      .front();
}

std::vector<Coordinate> predict_dataset(const TrainedLocalizer& model, const Dataset& data) {
  if (data.modality() != model.modality) throw ContractViolation("predict: dataset modality differs from the model's");
  return predict_batch(model, data.feature_matrix());
}

LocConfig weak_config(std::size_t epochs) {
  LocConfig cfg;
  cfg.hidden_size = 128;
  cfg.dropout_rate = 0.1;
  cfg.learning_rate = 1e-3;
  cfg.epochs = epochs;
  return cfg;
}

TrainedLocalizer train_weak_model(const Dataset& data, std::uint64_t seed, std::size_t epochs) {
  if (!data.only_real()) throw ContractViolation("train_weak_model: training data must contain only real samples");
  return train_localizer(data, weak_config(epochs), seed);
}

}  // namespace ligen
