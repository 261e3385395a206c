#include "ligen/numerics/mlp.hpp"

#include <cmath>
#include <string>

#include "ligen/common/errors.hpp"

namespace ligen {
namespace {

double activate(Activation a, double slope, double z) {
  switch (a) {
    case Activation::identity: return z;
    case Activation::relu: return z > 0.0 ? z : 0.0;
    case Activation::leaky_relu: return z > 0.0 ? z : slope * z;
    case Activation::sigmoid:
      if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
      else {
        const double e = std::exp(z);
        return e / (1.0 + e);
      }
  }
  return z;
}

// Derivative expressed through the pre-activation z and output a.
double activate_grad(Activation act, double slope, double z, double a) {
  switch (act) {
    case Activation::identity: return 1.0;
    case Activation::relu: return z > 0.0 ? 1.0 : 0.0;
    case Activation::leaky_relu: return z > 0.0 ? 1.0 : slope;
    case Activation::sigmoid: return a * (1.0 - a);
  }
  return 1.0;
}

Matrix forward_layers(const std::vector<DenseLayer>& layers, const Matrix& batch, Mode mode,
                      Rng* rng, ForwardCache* cache, std::vector<DenseLayer>* running_sink) {
  if (layers.empty()) throw ContractViolation("mlp_forward: empty network");
  if (batch.cols() != layers.front().spec.in_dim)
    throw ContractViolation("mlp_forward: batch has " + std::to_string(batch.cols()) +
                            " columns, network expects " +
                            std::to_string(layers.front().spec.in_dim));
  if (cache) {
    cache->mode = mode;
    cache->layers.assign(layers.size(), LayerCache{});
  }
  const std::size_t n = batch.rows();
  Matrix x = batch;
  for (std::size_t li = 0; li < layers.size(); ++li) {
    const DenseLayer& layer = layers[li];
    const LayerSpec& spec = layer.spec;
    Matrix z = matmul_nt(x, layer.weight);
    if (!layer.bias.empty()) {
      for (std::size_t r = 0; r < n; ++r) {
        auto row = z.row(r);
        for (std::size_t c = 0; c < spec.out_dim; ++c) row[c] += layer.bias[c];
      }
    }

    Matrix normalized;
    std::vector<double> inv_std;
    if (layer.bn) {
      const BatchNormState& bn = *layer.bn;
      normalized = Matrix(n, spec.out_dim);
      inv_std.assign(spec.out_dim, 0.0);
      std::vector<double> mean(spec.out_dim, 0.0), var(spec.out_dim, 0.0);
      if (mode == Mode::train) {
        if (n == 0) throw ContractViolation("mlp_forward: batch norm needs a non-empty batch");
        for (std::size_t r = 0; r < n; ++r)
          for (std::size_t c = 0; c < spec.out_dim; ++c) mean[c] += z(r, c);
        for (double& m : mean) m /= static_cast<double>(n);
        for (std::size_t r = 0; r < n; ++r)
          for (std::size_t c = 0; c < spec.out_dim; ++c) {
            const double d = z(r, c) - mean[c];
            var[c] += d * d;
          }
        for (double& v : var) v /= static_cast<double>(n);
        if (running_sink) {
          BatchNormState& sink = *(*running_sink)[li].bn;
          for (std::size_t c = 0; c < spec.out_dim; ++c) {
            sink.running_mean[c] = (1.0 - sink.momentum) * sink.running_mean[c] + sink.momentum * mean[c];
            sink.running_var[c] = (1.0 - sink.momentum) * sink.running_var[c] + sink.momentum * var[c];
          }
        }
      } else {
        mean = bn.running_mean;
        var = bn.running_var;
      }
      for (std::size_t c = 0; c < spec.out_dim; ++c) inv_std[c] = 1.0 / std::sqrt(var[c] + bn.epsilon);
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < spec.out_dim; ++c) {
          const double xh = (z(r, c) - mean[c]) * inv_std[c];
          normalized(r, c) = xh;
          z(r, c) = bn.gamma[c] * xh + bn.beta[c];
        }
    }

    Matrix a(n, spec.out_dim);
    {
      auto zv = z.values();
      auto av = a.values();
      for (std::size_t i = 0; i < zv.size(); ++i)
        av[i] = activate(spec.activation, spec.leaky_slope, zv[i]);
    }

    Matrix mask;
    const bool keep_activated = cache && spec.activation == Activation::sigmoid;
    Matrix out;
    if (keep_activated)
      out = a;
    else
      out = std::move(a);
    if (mode == Mode::train && spec.dropout_rate > 0.0) {
      if (!rng) throw ContractViolation("mlp_forward: train-mode dropout needs a seeded stream");
      mask = Matrix(n, spec.out_dim);
      std::bernoulli_distribution keep(1.0 - spec.dropout_rate);
      const double scale = 1.0 / (1.0 - spec.dropout_rate);
      auto mv = mask.values();
      auto ov = out.values();
      for (std::size_t i = 0; i < mv.size(); ++i) {
        mv[i] = keep(*rng) ? scale : 0.0;
        ov[i] *= mv[i];
      }
    }

    if (cache) {
      LayerCache& lc = cache->layers[li];
      lc.input = std::move(x);
      lc.normalized = std::move(normalized);
      lc.inv_std = std::move(inv_std);
      lc.pre_activation = std::move(z);
      if (keep_activated) lc.activated = std::move(a);
      lc.mask = std::move(mask);
    }
    x = std::move(out);
  }
  if (!x.all_finite()) throw NumericOverflowError("mlp_forward: non-finite output");
  return x;
}

}  // namespace

void validate(const LayerSpec& spec) {
  if (spec.in_dim == 0 || spec.out_dim == 0)
    throw ContractViolation("LayerSpec: dimensions must be positive");
  if (!(spec.dropout_rate >= 0.0 && spec.dropout_rate < 1.0))
    throw ContractViolation("LayerSpec: dropout_rate must lie in [0, 1)");
  if (spec.activation == Activation::leaky_relu &&
      !(spec.leaky_slope > 0.0 && spec.leaky_slope < 1.0))
    throw ContractViolation("LayerSpec: LeakyReLU slope must lie in (0, 1)");
}

BatchNormState BatchNormState::identity(std::size_t features) {
  BatchNormState s;
  s.gamma.assign(features, 1.0);
  s.beta.assign(features, 0.0);
  s.running_mean.assign(features, 0.0);
  s.running_var.assign(features, 1.0);
  return s;
}

MlpNet::MlpNet(const std::vector<LayerSpec>& specs, Rng& rng) {
  layers_.reserve(specs.size());
  for (const LayerSpec& spec : specs) {
    validate(spec);
    DenseLayer layer;
    layer.spec = spec;
    layer.weight = Matrix(spec.out_dim, spec.in_dim);
    const double limit = std::sqrt(6.0 / static_cast<double>(spec.in_dim + spec.out_dim));
    std::uniform_real_distribution<double> u(-limit, limit);
    for (double& w : layer.weight.values()) w = u(rng);
    if (spec.batch_norm)
      layer.bn = BatchNormState::identity(spec.out_dim);
    else
      layer.bias.assign(spec.out_dim, 0.0);
    layers_.push_back(std::move(layer));
  }
  MlpNet check(layers_);  // dimension chain validation
}

MlpNet::MlpNet(std::vector<DenseLayer> layers) : layers_(std::move(layers)) {
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const DenseLayer& l = layers_[i];
    validate(l.spec);
    if (l.weight.rows() != l.spec.out_dim || l.weight.cols() != l.spec.in_dim)
      throw ContractViolation("MlpNet: weight shape does not match layer spec");
    if (l.spec.batch_norm != l.bn.has_value())
      throw ContractViolation("MlpNet: batch-norm state does not match layer spec");
    if (l.bn) {
      const auto d = l.spec.out_dim;
      if (l.bn->gamma.size() != d || l.bn->beta.size() != d || l.bn->running_mean.size() != d ||
          l.bn->running_var.size() != d || !l.bias.empty())
        throw ContractViolation("MlpNet: batch-norm vectors have wrong length");
    } else if (l.bias.size() != l.spec.out_dim) {
      throw ContractViolation("MlpNet: bias length does not match layer spec");
    }
    if (i + 1 < layers_.size() && l.spec.out_dim != layers_[i + 1].spec.in_dim)
      throw ContractViolation("MlpNet: layer " + std::to_string(i) + " out_dim " +
                              std::to_string(l.spec.out_dim) + " != layer " +
                              std::to_string(i + 1) + " in_dim");
  }
}

std::size_t MlpNet::in_dim() const {
  if (layers_.empty()) throw ContractViolation("MlpNet: empty network");
  return layers_.front().spec.in_dim;
}

std::size_t MlpNet::out_dim() const {
  if (layers_.empty()) throw ContractViolation("MlpNet: empty network");
  return layers_.back().spec.out_dim;
}

Matrix MlpNet::forward(const Matrix& batch, Rng* rng, ForwardCache* cache) {
  return run(batch, mode_, rng, cache, mode_ == Mode::train);
}

Matrix MlpNet::run(const Matrix& batch, Mode mode, Rng* rng, ForwardCache* cache,
                   bool update_running) {
  return forward_layers(layers_, batch, mode, rng, cache, update_running ? &layers_ : nullptr);
}

Matrix MlpNet::predict(const Matrix& batch) const {
  return forward_layers(layers_, batch, Mode::eval, nullptr, nullptr, nullptr);
}

Gradients MlpNet::backward(const ForwardCache& cache, const Matrix& upstream) const {
  if (cache.mode != Mode::train)
    throw ContractViolation("mlp_backward: cache must come from a train-mode forward");
  if (cache.layers.size() != layers_.size())
    throw ContractViolation("mlp_backward: cache depth does not match network");
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const auto& lc = cache.layers[i];
    if (lc.input.cols() != layers_[i].spec.in_dim ||
        lc.pre_activation.cols() != layers_[i].spec.out_dim)
      throw ContractViolation("mlp_backward: cache shapes do not match network");
  }
  const std::size_t n = cache.layers.front().input.rows();
  if (upstream.rows() != n || upstream.cols() != out_dim())
    throw ContractViolation("mlp_backward: upstream gradient shape mismatch");

  Gradients grads;
  grads.layers.resize(layers_.size());
  Matrix g = upstream;
  for (std::size_t li = layers_.size(); li-- > 0;) {
    const DenseLayer& layer = layers_[li];
    const LayerCache& lc = cache.layers[li];
    const LayerSpec& spec = layer.spec;
    LayerGradients& lg = grads.layers[li];

    auto gv = g.values();
    if (!lc.mask.empty()) {
      auto mv = lc.mask.values();
      for (std::size_t i = 0; i < gv.size(); ++i) gv[i] *= mv[i];
    }
    {
      auto zv = lc.pre_activation.values();
      if (spec.activation == Activation::sigmoid) {
        auto av = lc.activated.values();
        for (std::size_t i = 0; i < gv.size(); ++i) gv[i] *= av[i] * (1.0 - av[i]);
      } else {
        for (std::size_t i = 0; i < gv.size(); ++i)
          gv[i] *= activate_grad(spec.activation, spec.leaky_slope, zv[i], 0.0);
      }
    }

    if (layer.bn) {
      const BatchNormState& bn = *layer.bn;
      const std::size_t d = spec.out_dim;
      lg.gamma.assign(d, 0.0);
      lg.beta.assign(d, 0.0);
      std::vector<double> sum_dxh(d, 0.0), sum_dxh_xh(d, 0.0);
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < d; ++c) {
          const double dy = g(r, c);
          const double xh = lc.normalized(r, c);
          lg.gamma[c] += dy * xh;
          lg.beta[c] += dy;
          const double dxh = dy * bn.gamma[c];
          sum_dxh[c] += dxh;
          sum_dxh_xh[c] += dxh * xh;
        }
      const double inv_n = 1.0 / static_cast<double>(n);
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < d; ++c) {
          const double dxh = g(r, c) * bn.gamma[c];
          const double xh = lc.normalized(r, c);
          g(r, c) = lc.inv_std[c] * inv_n *
                    (static_cast<double>(n) * dxh - sum_dxh[c] - xh * sum_dxh_xh[c]);
        }
    } else {
      lg.bias.assign(spec.out_dim, 0.0);
      for (std::size_t r = 0; r < n; ++r) {
        auto row = g.row(r);
        for (std::size_t c = 0; c < spec.out_dim; ++c) lg.bias[c] += row[c];
      }
    }

    lg.weight = matmul_tn(g, lc.input);
    g = matmul_nn(g, layer.weight);
  }
  grads.input = std::move(g);
  return grads;
}

std::vector<std::span<double>> MlpNet::parameters() {
  std::vector<std::span<double>> out;
  for (DenseLayer& l : layers_) {
    out.emplace_back(l.weight.values());
    if (!l.bias.empty()) out.emplace_back(l.bias);
    if (l.bn) {
      out.emplace_back(l.bn->gamma);
      out.emplace_back(l.bn->beta);
    }
  }
  return out;
}

std::size_t MlpNet::parameter_count() const {
  std::size_t n = 0;
  for (const DenseLayer& l : layers_) {
    n += l.weight.size() + l.bias.size();
    if (l.bn) n += l.bn->gamma.size() + l.bn->beta.size();
  }
  return n;
}

std::vector<std::span<double>> gradient_views(Gradients& grads) {
  std::vector<std::span<double>> out;
  for (LayerGradients& l : grads.layers) {
    out.emplace_back(l.weight.values());
    if (!l.bias.empty()) out.emplace_back(l.bias);
    if (!l.gamma.empty()) {
      out.emplace_back(l.gamma);
      out.emplace_back(l.beta);
    }
  }
  return out;
}

}  // namespace ligen
