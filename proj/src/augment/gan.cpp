#include "ligen/augment/gan.hpp"

#include <cmath>
#include <random>

#include "ligen/common/errors.hpp"
#include "ligen/numerics/loss.hpp"

namespace ligen {

std::string_view to_string(GanKind kind) noexcept {
  return kind == GanKind::pointgan ? "pointgan" : "freegan";
}

GanKind parse_gan_kind(std::string_view s) {
  if (s == "pointgan") return GanKind::pointgan;
  if (s == "freegan") return GanKind::freegan;
  throw ContractViolation("unknown GAN kind '" + std::string(s) + "'");
}

Origin origin_of(GanKind kind) noexcept { return kind == GanKind::pointgan ? Origin::pointgan : Origin::freegan; }

void validate(const GanConfig& cfg) {
  if (cfg.noise_dim == 0) throw ContractViolation("GanConfig: noise_dim must be >= 1");
  if (cfg.epochs == 0) throw ContractViolation("GanConfig: epochs must be >= 1");
  if (!(cfg.learning_rate > 0.0)) throw ContractViolation("GanConfig: learning_rate must be positive");
  if (!(cfg.beta1 >= 0.0 && cfg.beta1 < 1.0 && cfg.beta2 >= 0.0 && cfg.beta2 < 1.0))
    throw ContractViolation("GanConfig: Adam betas must lie in [0, 1)");
  if (cfg.gen_hidden.empty() || cfg.disc_hidden.empty())
    throw ContractViolation("GanConfig: hidden layer lists must not be empty");
  for (auto h : cfg.gen_hidden)
    if (h == 0) throw ContractViolation("GanConfig: hidden widths must be >= 1");
  for (auto h : cfg.disc_hidden)
    if (h == 0) throw ContractViolation("GanConfig: hidden widths must be >= 1");
}

Json to_json(const GanConfig& cfg) {
  return {{"noise_dim", cfg.noise_dim}, {"epochs", cfg.epochs},           {"learning_rate", cfg.learning_rate},
          {"beta1", cfg.beta1},         {"beta2", cfg.beta2},             {"gen_hidden", cfg.gen_hidden},
          {"disc_hidden", cfg.disc_hidden}};
}

GanConfig gan_config_from_json(const Json& doc, const std::string& path, const GanConfig& base) {
  json_reject_unknown(doc, {"noise_dim", "epochs", "learning_rate", "beta1", "beta2", "gen_hidden", "disc_hidden"},
                      path);
  GanConfig cfg = base;
  cfg.noise_dim = json_get_or(doc, "noise_dim", cfg.noise_dim, path);
  cfg.epochs = json_get_or(doc, "epochs", cfg.epochs, path);
  cfg.learning_rate = json_get_or(doc, "learning_rate", cfg.learning_rate, path);
  cfg.beta1 = json_get_or(doc, "beta1", cfg.beta1, path);
  cfg.beta2 = json_get_or(doc, "beta2", cfg.beta2, path);
  cfg.gen_hidden = json_get_or(doc, "gen_hidden", cfg.gen_hidden, path);
  cfg.disc_hidden = json_get_or(doc, "disc_hidden", cfg.disc_hidden, path);
  try {
    validate(cfg);
  } catch (const ContractViolation& e) {
    throw ConfigError("field '" + path + "': " + e.what());
  }
  return cfg;
}

std::vector<LayerSpec> generator_layers(GanKind kind, std::size_t fingerprint_dim, const GanConfig& cfg) {
  const bool free = kind == GanKind::freegan;
  std::vector<LayerSpec> specs;
  std::size_t width = cfg.noise_dim + (free ? 0 : 2);
  for (std::size_t h : cfg.gen_hidden) {
    specs.push_back({width, h, free ? Activation::leaky_relu : Activation::relu, 0.2, 0.0, free});
    width = h;
  }
  specs.push_back({width, fingerprint_dim, Activation::sigmoid, 0.2, 0.0, false});
  return specs;
}

std::vector<LayerSpec> discriminator_layers(GanKind kind, std::size_t fingerprint_dim, const GanConfig& cfg) {
  const bool free = kind == GanKind::freegan;
  std::vector<LayerSpec> specs;
  std::size_t width = fingerprint_dim + (free ? 0 : 2);
  for (std::size_t h : cfg.disc_hidden) {
    specs.push_back({width, h, free ? Activation::leaky_relu : Activation::relu, 0.2, 0.0, false});
    width = h;
  }
  specs.push_back({width, 1, Activation::sigmoid, 0.2, 0.0, false});
  return specs;
}

Matrix standard_normal(std::size_t rows, std::size_t cols, Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix m(rows, cols);
  for (double& v : m.values()) v = n(rng);
  return m;
}

GanTrainer::GanTrainer(GanKind kind, const Dataset& train, const GanConfig& cfg, std::uint64_t seed)
    : noise_rng_(make_rng(seed, "gan/noise")),
      gen_adam_(AdamConfig{cfg.learning_rate, cfg.beta1, cfg.beta2, 1e-8}),
      disc_adam_(AdamConfig{cfg.learning_rate, cfg.beta1, cfg.beta2, 1e-8}) {
  validate(cfg);
  if (train.empty()) throw EmptyInputError("train_gan: empty training set");
  if (!train.only_real()) throw ContractViolation("train_gan: training data must contain only real samples");
  const std::size_t d = feature_dim(train.modality());
  bundle_.kind = kind;
  bundle_.modality = train.modality();
  bundle_.extent = train.extent();
  bundle_.config = cfg;
  bundle_.norm = fit_normalizer(train);
  Rng g_init = make_rng(seed, "gan/generator-init");
  Rng d_init = make_rng(seed, "gan/discriminator-init");
  bundle_.generator = MlpNet(generator_layers(kind, d, cfg), g_init);
  bundle_.discriminator = MlpNet(discriminator_layers(kind, d, cfg), d_init);
  bundle_.generator.set_mode(Mode::train);
  bundle_.discriminator.set_mode(Mode::train);
  real_features_ = normalize_features(bundle_.norm, train.feature_matrix());
  if (kind == GanKind::pointgan) real_conditions_ = normalize_locations(bundle_.norm, train.location_matrix());
}

GanTrainer::StepLosses GanTrainer::step() {
  const bool conditional = bundle_.kind == GanKind::pointgan;
  const std::size_t n = real_features_.rows();
  const std::size_t d = real_features_.cols();
  const std::size_t epoch = steps_ + 1;
  StepLosses out;
  try {
    Matrix z = standard_normal(n, bundle_.config.noise_dim, noise_rng_);
    if (conditional) z = hstack(z, real_conditions_);
    ForwardCache g_cache;
    const Matrix fake = bundle_.generator.forward(z, nullptr, &g_cache);

    // Discriminator: real rows labelled 1, fake rows labelled 0.
    Matrix real_in = conditional ? hstack(real_conditions_, real_features_) : real_features_;
    Matrix fake_in = conditional ? hstack(real_conditions_, fake) : fake;
    last_input_ = Matrix(2 * n, real_in.cols());
    std::copy(real_in.values().begin(), real_in.values().end(), last_input_.values().begin());
    std::copy(fake_in.values().begin(), fake_in.values().end(), last_input_.values().begin() + real_in.size());
    last_labels_ = Matrix(2 * n, 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) last_labels_(i, 0) = 1.0;
    ForwardCache d_cache;
    const Matrix d_out = bundle_.discriminator.forward(last_input_, nullptr, &d_cache);
    const LossResult d_loss = bce_loss(d_out, last_labels_);
    if (!std::isfinite(d_loss.value)) throw DivergenceError("train_gan: non-finite discriminator loss", epoch);
    Gradients d_grads = bundle_.discriminator.backward(d_cache, d_loss.grad);
    adam_step(bundle_.discriminator.parameters(), gradient_views(d_grads), disc_adam_);
    out.discriminator = d_loss.value;

    // Generator: non-saturating loss, fakes labelled 1 through the updated D.
    ForwardCache dg_cache;
    const Matrix dg_out = bundle_.discriminator.forward(fake_in, nullptr, &dg_cache);
    const LossResult g_loss = bce_loss(dg_out, Matrix(n, 1, 1.0));
    if (!std::isfinite(g_loss.value)) throw DivergenceError("train_gan: non-finite generator loss", epoch);
    const Gradients through_d = bundle_.discriminator.backward(dg_cache, g_loss.grad);
    const Matrix upstream = conditional ? through_d.input.col_block(2, d) : through_d.input;
    Gradients g_grads = bundle_.generator.backward(g_cache, upstream);
    adam_step(bundle_.generator.parameters(), gradient_views(g_grads), gen_adam_);
    out.generator = g_loss.value;
  } catch (const NumericOverflowError&) {
    throw DivergenceError("train_gan: non-finite forward pass", epoch);
  }
  ++steps_;
  return out;
}

GanBundle GanTrainer::finish() {
  GanBundle b = bundle_;
  b.generator.set_mode(Mode::eval);
  b.discriminator.set_mode(Mode::eval);
  return b;
}

GanTrainingResult train_gan(GanKind kind, const Dataset& train, const GanConfig& cfg, std::uint64_t seed) {
  GanTrainer trainer(kind, train, cfg, seed);
  GanTrainingResult result;
  result.traces.discriminator_loss.reserve(cfg.epochs);
  result.traces.generator_loss.reserve(cfg.epochs);
  for (std::size_t e = 0; e < cfg.epochs; ++e) {
    const auto losses = trainer.step();
    result.traces.discriminator_loss.push_back(losses.discriminator);
    result.traces.generator_loss.push_back(losses.generator);
  }
  result.bundle = trainer.finish();
  return result;
}

}  // namespace ligen
