#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ligen/common/seeding.hpp"
#include "ligen/numerics/matrix.hpp"

namespace ligen {

enum class Activation { identity, relu, leaky_relu, sigmoid };

struct LayerSpec {
  std::size_t in_dim = 0;
  std::size_t out_dim = 0;
  Activation activation = Activation::identity;
  double leaky_slope = 0.2;   // LeakyReLU only; must lie in (0, 1)
  double dropout_rate = 0.0;  // applied after the activation, in [0, 1)
  bool batch_norm = false;    // normalizes the affine output before activation
};

void validate(const LayerSpec& spec);

// Batch-norm parameters and running statistics for one layer. The batch
// variance is the biased (population) estimator; running statistics are
// exponential averages with the given momentum.
struct BatchNormState {
  std::vector<double> gamma;
  std::vector<double> beta;
  std::vector<double> running_mean;
  std::vector<double> running_var;
  double momentum = 0.1;
  double epsilon = 1e-5;

  static BatchNormState identity(std::size_t features);
};

// A fully connected layer. With batch norm the affine bias is dropped (beta
// takes its place), so `bias` is empty.
struct DenseLayer {
  LayerSpec spec;
  Matrix weight;  // out_dim x in_dim
  std::vector<double> bias;
  std::optional<BatchNormState> bn;
};

enum class Mode { train, eval };

struct LayerCache {
  Matrix input;
  Matrix normalized;  // batch-norm x-hat, before gamma/beta
  std::vector<double> inv_std;
  Matrix pre_activation;
  Matrix activated;  // sigmoid output before dropout (sigmoid layers only)
  Matrix mask;       // inverted-dropout multipliers, empty when unused
};

struct ForwardCache {
  Mode mode = Mode::eval;
  std::vector<LayerCache> layers;
};

struct LayerGradients {
  Matrix weight;
  std::vector<double> bias;
  std::vector<double> gamma;
  std::vector<double> beta;
};

struct Gradients {
  std::vector<LayerGradients> layers;
  Matrix input;  // d loss / d batch
};

class MlpNet {
 public:
  MlpNet() = default;
  // Glorot-uniform weights, zero biases, identity batch-norm.
  MlpNet(const std::vector<LayerSpec>& specs, Rng& rng);
  explicit MlpNet(std::vector<DenseLayer> layers);

  std::size_t in_dim() const;
  std::size_t out_dim() const;
  std::size_t depth() const noexcept { return layers_.size(); }

  const std::vector<DenseLayer>& layers() const noexcept { return layers_; }
  std::vector<DenseLayer>& layers() noexcept { return layers_; }

  Mode mode() const noexcept { return mode_; }
  void set_mode(Mode mode) noexcept { mode_ = mode; }

  // Runs the net in its current mode. Train mode needs `rng` whenever a
  // layer has dropout, and updates batch-norm running statistics. When
  // `cache` is given it receives everything backward() needs.
  Matrix forward(const Matrix& batch, Rng* rng = nullptr, ForwardCache* cache = nullptr);

  // Eval-mode forward regardless of the current mode.
  Matrix predict(const Matrix& batch) const;

  // Backpropagates `upstream` (d loss / d output) through a train-mode cache.
  Gradients backward(const ForwardCache& cache, const Matrix& upstream) const;

  // Trainable tensors in a fixed order: per layer weight, bias (if any),
  // gamma, beta (if batch norm).
  std::vector<std::span<double>> parameters();
  std::size_t parameter_count() const;

 private:
  Matrix run(const Matrix& batch, Mode mode, Rng* rng, ForwardCache* cache,
             bool update_running);

  std::vector<DenseLayer> layers_;
  Mode mode_ = Mode::train;
};

// Views over gradient tensors in the same order as MlpNet::parameters().
std::vector<std::span<double>> gradient_views(Gradients& grads);

}  // namespace ligen
