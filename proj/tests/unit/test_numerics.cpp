#include <cmath>
#include <numeric>

#include "doctest.h"
#include "ligen/common/errors.hpp"
#include "ligen/numerics/adam.hpp"
#include "ligen/numerics/gradient_check.hpp"
#include "ligen/numerics/loss.hpp"
#include "ligen/numerics/mlp.hpp"

using namespace ligen;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, Rng& rng, double lo = -1.0, double hi = 1.0) {
  Matrix m(r, c);
  std::uniform_real_distribution<double> u(lo, hi);
  for (double& v : m.values()) v = u(rng);
  return m;
}

// 2 -> 3 -> 1, ReLU then identity, fixed weights.
MlpNet hand_net() {
  DenseLayer l1{{2, 3, Activation::relu}, Matrix{{0.5, -1.0}, {1.0, 1.0}, {-0.5, 0.25}}, {0.1, 0.0, -0.2}, {}};
  DenseLayer l2{{3, 1, Activation::identity}, Matrix{{1.0, -2.0, 0.5}}, {0.3}, {}};
  return MlpNet({l1, l2});
}

}  // namespace

TEST_CASE("forward: zero weights give the bias on every row") {
  Rng rng(3);
  MlpNet net({{4, 3, Activation::identity}}, rng);
  for (double& w : net.layers()[0].weight.values()) w = 0.0;
  net.layers()[0].bias = {0.25, -1.5, 2.0};
  net.set_mode(Mode::eval);
  const Matrix out = net.forward(random_matrix(5, 4, rng));
  for (std::size_t r = 0; r < 5; ++r) {
    CHECK(out(r, 0) == 0.25);
    CHECK(out(r, 1) == -1.5);
    CHECK(out(r, 2) == 2.0);
  }
}

TEST_CASE("forward: identity layer reproduces its input") {
  DenseLayer l{{3, 3, Activation::identity}, Matrix{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, {0, 0, 0}, {}};
  MlpNet net({l});
  Rng rng(1);
  const Matrix x = random_matrix(4, 3, rng);
  CHECK(net.predict(x) == x);
}

TEST_CASE("forward: hand-evaluated 2-3-1 network") {
  // x=(1,2): z1=(-1.4, 3, -0.2) -> relu (0,3,0) -> -6 + 0.3 = -5.7
  // x=(-1,0.5): z1=(-0.9,-0.5,0.425) -> relu (0,0,0.425) -> 0.2125 + 0.3 = 0.5125
  const Matrix out = hand_net().predict(Matrix{{1.0, 2.0}, {-1.0, 0.5}});
  CHECK(std::abs(out(0, 0) - (-5.7)) < 1e-12);
  CHECK(std::abs(out(1, 0) - 0.5125) < 1e-12);
}

TEST_CASE("forward: dimension mismatch and overflow errors") {
  MlpNet net = hand_net();
  CHECK_THROWS_AS(net.predict(Matrix(2, 3)), ContractViolation);
  CHECK_THROWS_AS(net.predict(Matrix{{1e308, 1e308}}), NumericOverflowError);
  Rng rng(0);
  CHECK_THROWS_AS(MlpNet({{2, 3, Activation::relu}, {4, 1, Activation::identity}}, rng),
                  ContractViolation);
  CHECK_THROWS_AS(MlpNet({{2, 3, Activation::relu, 0.2, 1.0}}, rng), ContractViolation);
  CHECK_THROWS_AS(MlpNet({{2, 3, Activation::leaky_relu, 1.5}}, rng), ContractViolation);
}

TEST_CASE("backward: zero upstream gives zero gradients") {
  Rng rng(7);
  MlpNet net({{3, 5, Activation::relu, 0.2, 0.0, true}, {5, 2, Activation::sigmoid}}, rng);
  ForwardCache cache;
  const Matrix out = net.forward(random_matrix(6, 3, rng), &rng, &cache);
  Gradients g = net.backward(cache, Matrix(out.rows(), out.cols()));
  for (auto view : gradient_views(g))
    for (double v : view) CHECK(v == 0.0);
}

TEST_CASE("backward: single linear layer matches closed-form regression gradient") {
  DenseLayer l{{3, 2, Activation::identity}, Matrix{{0.2, -0.1, 0.4}, {0.3, 0.5, -0.2}}, {0.05, -0.05}, {}};
  MlpNet net({l});
  const Matrix x{{1.0, -2.0, 0.5}};
  const Matrix t{{0.7, -0.3}};
  ForwardCache cache;
  const Matrix pred = net.forward(x, nullptr, &cache);
  const LossResult loss = mse_loss(pred, t);
  const Gradients g = net.backward(cache, loss.grad);
  // dW = 2 (pred - t) / N  outer  x, N = 1
  for (std::size_t o = 0; o < 2; ++o) {
    const double residual = 2.0 * (pred(0, o) - t(0, o));
    CHECK(std::abs(g.layers[0].bias[o] - residual) < 1e-14);
    for (std::size_t i = 0; i < 3; ++i)
      CHECK(std::abs(g.layers[0].weight(o, i) - residual * x(0, i)) < 1e-14);
  }
}

TEST_CASE("backward: cache mismatch is rejected") {
  Rng rng(2);
  MlpNet a({{2, 3, Activation::relu}, {3, 1, Activation::identity}}, rng);
  MlpNet b({{2, 3, Activation::relu}}, rng);
  ForwardCache cache;
  b.forward(Matrix(2, 2, 0.5), nullptr, &cache);
  CHECK_THROWS_AS(a.backward(cache, Matrix(2, 1)), ContractViolation);
  ForwardCache eval_cache;
  a.set_mode(Mode::eval);
  a.forward(Matrix(2, 2, 0.5), nullptr, &eval_cache);
  CHECK_THROWS_AS(a.backward(eval_cache, Matrix(2, 1)), ContractViolation);
}

TEST_CASE("backward: random nets agree with finite differences") {
  Rng rng(11);
  const std::vector<Activation> acts{Activation::relu, Activation::leaky_relu, Activation::sigmoid,
                                     Activation::identity};
  for (int trial = 0; trial < 24; ++trial) {
    const bool bn = trial % 3 == 0;
    // A batch-normed layer fed by one input (or normalizing a batch of two)
    // is invariant to its weight up to epsilon, so its gradient vanishes;
    // keep widths >= 2 and batches >= 4 there.
    std::uniform_int_distribution<std::size_t> depth_d(1, 4), width_d(bn ? 2 : 1, 6),
        batch_d(bn ? 4 : 2, 8);
    const std::size_t depth = depth_d(rng);
    std::vector<LayerSpec> specs;
    std::size_t in = width_d(rng);
    const std::size_t in0 = in;
    for (std::size_t l = 0; l < depth; ++l) {
      const bool last = l + 1 == depth;
      const std::size_t out = last ? 2 : width_d(rng);
      // identity -> batch norm -> batch norm makes beta a pure shift that the
      // next normalization removes (zero gradient); use nonlinear hidden units there.
      const Activation hidden = acts[(trial + l) % (bn ? acts.size() - 1 : acts.size())];
      LayerSpec s{in, out, last ? Activation::identity : hidden};
      s.batch_norm = !last && bn;
      specs.push_back(s);
      in = out;
    }
    MlpNet net(specs, rng);
    // Non-zero biases keep pre-activations of dead units off the ReLU kink.
    // Batch-norm beta stays at 0: a unit that is active on the whole batch
    // and feeds another batch-norm layer has an exactly-zero beta gradient.
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (auto& layer : net.layers())
      for (double& b : layer.bias) b = u(rng);
    const std::size_t b = batch_d(rng);
    const auto report = gradient_check(net, random_matrix(b, in0, rng), random_matrix(b, 2, rng),
                                       CheckLoss::mse, 1e-5);
    INFO("trial " << trial << " depth " << depth << " batch " << b);
    CHECK(report.max_relative_error < 1e-4);
  }
}

TEST_CASE("adam: zero gradient on a fresh state is a no-op") {
  std::vector<double> p{1.0, -2.0, 3.5};
  std::vector<double> g(3, 0.0);
  AdamState st(AdamConfig{1e-3, 0.9, 0.999, 1e-8});
  std::vector<std::span<double>> ps{p}, gs{g};
  adam_step(ps, gs, st);
  CHECK(p == std::vector<double>{1.0, -2.0, 3.5});
  CHECK(st.step_count == 1);
}

TEST_CASE("adam: first step moves each parameter by -lr * sign(g)") {
  std::vector<double> p{0.0, 1.0, -1.0};
  std::vector<double> g{0.3, -2.0, 5e-3};
  AdamState st(AdamConfig{0.01, 0.9, 0.999, 1e-12});
  std::vector<std::span<double>> ps{p}, gs{g};
  adam_step(ps, gs, st);
  CHECK(std::abs(p[0] - (0.0 - 0.01)) < 1e-10);
  CHECK(std::abs(p[1] - (1.0 + 0.01)) < 1e-10);
  CHECK(std::abs(p[2] - (-1.0 - 0.01)) < 1e-10);
}

TEST_CASE("adam: GAN configuration, step count and moment shapes") {
  std::vector<double> a(4, 0.5), b(2, 0.1);
  std::vector<double> ga{0.1, -0.2, 0.3, -0.4}, gb{1.0, -1.0};
  AdamState st(AdamConfig{1e-4, 0.5, 0.999, 1e-8});
  std::vector<std::span<double>> ps{a, b}, gs{ga, gb};
  for (std::size_t k = 1; k <= 5; ++k) {
    adam_step(ps, gs, st);
    CHECK(st.step_count == k);
    REQUIRE(st.first_moment.size() == 2);
    CHECK(st.first_moment[0].size() == 4);
    CHECK(st.second_moment[1].size() == 2);
  }
  std::vector<double> wrong(3);
  std::vector<std::span<double>> bad{wrong, b};
  CHECK_THROWS_AS(adam_step(bad, gs, st), ContractViolation);
}

TEST_CASE("mse_loss examples") {
  const Matrix p{{1.0, 2.0}, {3.0, -1.0}};
  const LossResult same = mse_loss(p, p);
  CHECK(same.value == 0.0);
  for (double v : same.grad.values()) CHECK(v == 0.0);

  CHECK(mse_loss(Matrix{{3.0, 4.0}}, Matrix{{0.0, 0.0}}).value == doctest::Approx(25.0).epsilon(1e-15));
  CHECK_THROWS_AS(mse_loss(Matrix(0, 2), Matrix(0, 2)), EmptyInputError);

  Rng rng(5);
  Matrix pred = random_matrix(4, 2, rng);
  const Matrix target = random_matrix(4, 2, rng);
  const LossResult base = mse_loss(pred, target);
  const double eps = 1e-6;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double saved = pred.values()[i];
    pred.values()[i] = saved + eps;
    const double up = mse_loss(pred, target).value;
    pred.values()[i] = saved - eps;
    const double down = mse_loss(pred, target).value;
    pred.values()[i] = saved;
    CHECK(std::abs((up - down) / (2 * eps) - base.grad.values()[i]) < 1e-8);
  }
}

TEST_CASE("bce_loss examples") {
  const Matrix half{{0.5}, {0.5}, {0.5}};
  CHECK(std::abs(bce_loss(half, Matrix{{1.0}, {0.0}, {1.0}}).value - std::log(2.0)) < 1e-15);

  const Matrix labels{{1.0}, {0.0}};
  CHECK(bce_loss(labels, labels).value < 1e-6);

  const LossResult clamped = bce_loss(Matrix{{0.0}}, Matrix{{1.0}});
  CHECK(std::isfinite(clamped.value));
  CHECK(std::abs(clamped.value + std::log(1e-7)) < 1e-12);
  CHECK(clamped.grad.all_finite());

  CHECK_THROWS_AS(bce_loss(half, Matrix{{0.5}, {0.0}, {1.0}}), ContractViolation);
}

TEST_CASE("gradient_check examples") {
  Rng rng(21);
  SUBCASE("linear 2->2 with MSE is exact") {
    MlpNet net({{2, 2, Activation::identity}}, rng);
    const auto r = gradient_check(net, random_matrix(4, 2, rng), random_matrix(4, 2, rng),
                                  CheckLoss::mse, 1e-5);
    CHECK(r.max_relative_error < 1e-7);
    CHECK(r.parameters_checked == 6);
    CHECK_FALSE(r.dropout_disabled);
  }
  SUBCASE("3-layer ReLU with batch norm, batch 8") {
    MlpNet net({{4, 6, Activation::relu, 0.2, 0.0, true},
                {6, 5, Activation::relu, 0.2, 0.0, true},
                {5, 2, Activation::identity}},
               rng);
    const auto r = gradient_check(net, random_matrix(8, 4, rng), random_matrix(8, 2, rng),
                                  CheckLoss::mse, 1e-5);
    CHECK(r.max_relative_error < 1e-4);
  }
  SUBCASE("dropout is forced off and reported") {
    MlpNet net({{3, 4, Activation::relu, 0.2, 0.5}, {4, 1, Activation::sigmoid}}, rng);
    Matrix labels(6, 1);
    for (std::size_t i = 0; i < 6; i += 2) labels(i, 0) = 1.0;
    const auto r = gradient_check(net, random_matrix(6, 3, rng), labels,
                                  CheckLoss::bce_after_sigmoid, 1e-5);
    CHECK(r.dropout_disabled);
    CHECK(r.max_relative_error < 1e-4);
    CHECK(net.layers()[0].spec.dropout_rate == 0.5);
  }
  SUBCASE("eps outside the sanctioned range") {
    MlpNet net({{2, 2, Activation::identity}}, rng);
    CHECK_THROWS_AS(gradient_check(net, Matrix(2, 2), Matrix(2, 2), CheckLoss::mse, 1e-2),
                    ContractViolation);
  }
}

TEST_CASE("property: identical seeds give bitwise-identical forward, backward and Adam") {
  auto run = [] {
    Rng rng(99);
    MlpNet net({{5, 8, Activation::relu, 0.2, 0.3, true}, {8, 2, Activation::identity}}, rng);
    const Matrix x = random_matrix(7, 5, rng);
    ForwardCache cache;
    const Matrix out = net.forward(x, &rng, &cache);
    Gradients g = net.backward(cache, mse_loss(out, Matrix(7, 2)).grad);
    AdamState st;
    auto ps = net.parameters();
    auto gs = gradient_views(g);
    adam_step(ps, gs, st);
    std::vector<double> flat(out.values().begin(), out.values().end());
    for (auto p : net.parameters()) flat.insert(flat.end(), p.begin(), p.end());
    return flat;
  };
  CHECK(run() == run());
}

TEST_CASE("property: train-mode batch norm output is standardized per feature") {
  Rng rng(4);
  MlpNet net({{6, 9, Activation::relu, 0.2, 0.0, true}}, rng);
  ForwardCache cache;
  // Pre-activation variance is far above epsilon, so var(x-hat) = v / (v + 1e-5) is within 1e-6 of 1.
  net.forward(random_matrix(32, 6, rng, -300.0, 500.0), nullptr, &cache);
  const Matrix& xh = cache.layers[0].normalized;
  for (std::size_t c = 0; c < xh.cols(); ++c) {
    double mean = 0.0, var = 0.0;
    for (std::size_t r = 0; r < xh.rows(); ++r) mean += xh(r, c);
    mean /= static_cast<double>(xh.rows());
    for (std::size_t r = 0; r < xh.rows(); ++r) var += (xh(r, c) - mean) * (xh(r, c) - mean);
    var /= static_cast<double>(xh.rows());
    CHECK(std::abs(mean) < 1e-9);
    CHECK(std::abs(var - 1.0) < 1e-6);
  }
}

TEST_CASE("property: inverted dropout preserves the expected activation") {
  Rng rng(8);
  MlpNet net({{4, 6, Activation::relu, 0.2, 0.4}}, rng);
  const Matrix x = random_matrix(1, 4, rng, 0.0, 1.0);
  const Matrix expected = net.predict(x);
  const std::size_t draws = 20000;
  std::vector<double> sum(6, 0.0), sum_sq(6, 0.0);
  for (std::size_t k = 0; k < draws; ++k) {
    const Matrix y = net.forward(x, &rng);
    for (std::size_t c = 0; c < 6; ++c) {
      sum[c] += y(0, c);
      sum_sq[c] += y(0, c) * y(0, c);
    }
  }
  for (std::size_t c = 0; c < 6; ++c) {
    const double n = static_cast<double>(draws);
    const double mean = sum[c] / n;
    const double sd = std::sqrt(std::max(0.0, sum_sq[c] / n - mean * mean));
    CHECK(std::abs(mean - expected(0, c)) <= 3.0 * sd / std::sqrt(n) + 1e-15);
  }
}

TEST_CASE("mac counter counts dense multiply-accumulates") {
  Rng rng(1);
  MlpNet net({{10, 7, Activation::relu}, {7, 2, Activation::identity}}, rng);
  reset_mac_count();
  net.predict(Matrix(3, 10, 0.1));
  CHECK(mac_count() == 3u * (10 * 7 + 7 * 2));
}
