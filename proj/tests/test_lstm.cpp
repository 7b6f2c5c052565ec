#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "uniparser/adam.hpp"
#include "uniparser/lstm.hpp"

using namespace uniparser;

namespace {

LstmCellParams random_params(int E, int H, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 0.4);
  LstmCellParams p = LstmCellParams::zeros(E, H);
  for (int r = 0; r < p.w_input.rows(); ++r)
    for (int c = 0; c < p.w_input.cols(); ++c) p.w_input(r, c) = dist(rng);
  for (int r = 0; r < p.w_hidden.rows(); ++r)
    for (int c = 0; c < p.w_hidden.cols(); ++c) p.w_hidden(r, c) = dist(rng);
  for (int r = 0; r < p.bias.size(); ++r) p.bias(r) = dist(rng);
  return p;
}

std::vector<Matrix> random_inputs(int E, int B, int steps, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  std::vector<Matrix> xs;
  for (int t = 0; t < steps; ++t) {
    Matrix x(E, B);
    for (int r = 0; r < E; ++r)
      for (int c = 0; c < B; ++c) x(r, c) = dist(rng);
    xs.push_back(x);
  }
  return xs;
}

// Plain scalar re-derivation of the recurrence, one lane at a time.
std::vector<Matrix> scalar_lstm(const LstmCellParams& p, const std::vector<Matrix>& inputs) {
  const int H = p.hidden_dim();
  const int E = p.input_dim();
  const int B = static_cast<int>(inputs.front().cols());
  const auto sigmoid = [](double v) { return 1.0 / (1.0 + std::exp(-v)); };
  std::vector<Matrix> out(inputs.size(), Matrix::Zero(H, B));
  for (int b = 0; b < B; ++b) {
    std::vector<double> h(H, 0.0), c(H, 0.0);
    for (std::size_t t = 0; t < inputs.size(); ++t) {
      std::vector<double> h_next(H), c_next(H);
      for (int j = 0; j < H; ++j) {
        double pre[4];
        for (int g = 0; g < 4; ++g) {
          double acc = p.bias(g * H + j);
          for (int e = 0; e < E; ++e) acc += p.w_input(g * H + j, e) * inputs[t](e, b);
          for (int k = 0; k < H; ++k) acc += p.w_hidden(g * H + j, k) * h[k];
          pre[g] = acc;
        }
        const double gi = sigmoid(pre[0]);
        const double gf = sigmoid(pre[1]);
        const double gg = std::tanh(pre[2]);
        const double go = sigmoid(pre[3]);
        c_next[j] = gf * c[j] + gi * gg;
        h_next[j] = go * std::tanh(c_next[j]);
        out[t](j, b) = h_next[j];
      }
      h = h_next;
      c = c_next;
    }
  }
  return out;
}

}  // namespace

TEST_CASE("batched scan matches a scalar re-derivation of the recurrence") {
  const auto p = random_params(3, 4, 11);
  const auto xs = random_inputs(3, 5, 6, 12);
  const auto fast = lstm_scan(p, xs);
  const auto slow = scalar_lstm(p, xs);
  REQUIRE(fast.size() == slow.size());
  for (std::size_t t = 0; t < fast.size(); ++t)
    CHECK((fast[t] - slow[t]).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("first hidden state depends only on the first input") {
  const auto p = random_params(3, 4, 21);
  auto xs = random_inputs(3, 2, 5, 22);
  const auto base = lstm_scan(p, xs);
  xs.back().setConstant(9.0);
  xs[2].setConstant(-7.0);
  const auto perturbed = lstm_scan(p, xs);
  CHECK((base[0] - perturbed[0]).cwiseAbs().maxCoeff() == 0.0);
  CHECK((base[1] - perturbed[1]).cwiseAbs().maxCoeff() == 0.0);
  CHECK((base[4] - perturbed[4]).cwiseAbs().maxCoeff() > 1e-6);
}

TEST_CASE("backward direction scans right to left with aligned outputs") {
  const auto p = random_params(3, 4, 31);
  std::vector<Vector> xs;
  for (const Matrix& m : random_inputs(3, 1, 5, 32)) xs.push_back(m.col(0));

  const auto bwd = lstm_forward(p, xs, ScanDirection::Backward);
  std::vector<Vector> reversed(xs.rbegin(), xs.rend());
  const auto fwd_on_reversed = lstm_forward(p, reversed, ScanDirection::Forward);
  REQUIRE(bwd.size() == xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    CHECK((bwd[i] - fwd_on_reversed[xs.size() - 1 - i]).cwiseAbs().maxCoeff() < 1e-14);

  // and the last backward state only sees the last input
  auto xs2 = xs;
  xs2[0].setConstant(5.0);
  const auto bwd2 = lstm_forward(p, xs2, ScanDirection::Backward);
  CHECK((bwd[xs.size() - 1] - bwd2[xs.size() - 1]).cwiseAbs().maxCoeff() == 0.0);
  CHECK((bwd[0] - bwd2[0]).cwiseAbs().maxCoeff() > 1e-6);
}

TEST_CASE("scan backward gradients match central differences") {
  const int E = 3, H = 4, B = 2, steps = 4;
  const auto p0 = random_params(E, H, 41);
  const auto xs0 = random_inputs(E, B, steps, 42);
  // fixed projection so the scalar loss exercises every output
  const auto proj = random_inputs(H, B, steps, 43);

  const auto loss = [&](const LstmCellParams& p, const std::vector<Matrix>& xs) {
    const auto hs = lstm_scan(p, xs);
    double acc = 0.0;
    for (int t = 0; t < steps; ++t) acc += hs[t].cwiseProduct(proj[t]).sum();
    return acc;
  };

  LstmCache cache;
  lstm_scan(p0, xs0, &cache);
  LstmGradients grads = LstmGradients::zeros(E, H);
  const auto d_inputs = lstm_scan_backward(p0, cache, proj, grads);

  const double eps = 1e-6;
  const auto check = [&](double analytic, double numeric) {
    const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
    CHECK(std::abs(analytic - numeric) / denom < 1e-5);
  };

  for (int r = 0; r < 4 * H; ++r)
    for (int c = 0; c < E; ++c) {
      auto p = p0;
      p.w_input(r, c) = p0.w_input(r, c) + eps;
      const double up = loss(p, xs0);
      p.w_input(r, c) = p0.w_input(r, c) - eps;
      const double dn = loss(p, xs0);
      check(grads.w_input(r, c), (up - dn) / (2 * eps));
    }
  for (int r = 0; r < 4 * H; ++r)
    for (int c = 0; c < H; ++c) {
      auto p = p0;
      p.w_hidden(r, c) = p0.w_hidden(r, c) + eps;
      const double up = loss(p, xs0);
      p.w_hidden(r, c) = p0.w_hidden(r, c) - eps;
      const double dn = loss(p, xs0);
      check(grads.w_hidden(r, c), (up - dn) / (2 * eps));
    }
  for (int r = 0; r < 4 * H; ++r) {
    auto p = p0;
    p.bias(r) = p0.bias(r) + eps;
    const double up = loss(p, xs0);
    p.bias(r) = p0.bias(r) - eps;
    const double dn = loss(p, xs0);
    check(grads.bias(r), (up - dn) / (2 * eps));
  }
  for (int t = 0; t < steps; ++t)
    for (int r = 0; r < E; ++r)
      for (int c = 0; c < B; ++c) {
        auto xs = xs0;
        xs[t](r, c) = xs0[t](r, c) + eps;
        const double up = loss(p0, xs);
        xs[t](r, c) = xs0[t](r, c) - eps;
        const double dn = loss(p0, xs);
        check(d_inputs[t](r, c), (up - dn) / (2 * eps));
      }
}

TEST_CASE("single-sequence backward matches finite differences too") {
  const int E = 2, H = 3, steps = 4;
  const auto p = random_params(E, H, 51);
  std::vector<Vector> xs, up;
  for (const Matrix& m : random_inputs(E, 1, steps, 52)) xs.push_back(m.col(0));
  for (const Matrix& m : random_inputs(H, 1, steps, 53)) up.push_back(m.col(0));

  const auto loss = [&](const std::vector<Vector>& inputs) {
    const auto hs = lstm_forward(p, inputs, ScanDirection::Backward);
    double acc = 0.0;
    for (int t = 0; t < steps; ++t) acc += hs[t].dot(up[t]);
    return acc;
  };

  const auto [grads, dx] = lstm_backward(p, xs, ScanDirection::Backward, up);
  (void)grads;
  const double eps = 1e-6;
  for (int t = 0; t < steps; ++t)
    for (int r = 0; r < E; ++r) {
      auto xs2 = xs;
      xs2[t](r) += eps;
      const double upv = loss(xs2);
      xs2[t](r) -= 2 * eps;
      const double dnv = loss(xs2);
      const double numeric = (upv - dnv) / (2 * eps);
      CHECK(std::abs(dx[t](r) - numeric) < 1e-6 * std::max(1.0, std::abs(numeric)));
    }
}

TEST_CASE("adam performs the textbook bias-corrected update") {
  Vector param(1), grad(1), m1 = Vector::Zero(1), m2 = Vector::Zero(1);
  param << 1.0;
  grad << 0.5;
  const AdamConfig cfg;
  const double lr = 0.1;

  adam_update(param, grad, m1, m2, 1, lr, cfg, "p");
  // re-derive by hand
  double em = 0.1 * 0.5;
  double ev = 0.001 * 0.25;
  double mh = em / (1 - 0.9);
  double vh = ev / (1 - 0.999);
  double expected = 1.0 - lr * mh / (std::sqrt(vh) + 1e-8);
  CHECK(param(0) == Catch::Approx(expected).epsilon(1e-12));
  CHECK(m1(0) == Catch::Approx(em).epsilon(1e-12));
  CHECK(m2(0) == Catch::Approx(ev).epsilon(1e-12));

  adam_update(param, grad, m1, m2, 2, lr, cfg, "p");
  em = 0.9 * em + 0.1 * 0.5;
  ev = 0.999 * ev + 0.001 * 0.25;
  mh = em / (1 - 0.9 * 0.9);
  vh = ev / (1 - 0.999 * 0.999);
  expected -= lr * mh / (std::sqrt(vh) + 1e-8);
  CHECK(param(0) == Catch::Approx(expected).epsilon(1e-12));

  // constant gradient keeps the step near lr * sign(grad)
  CHECK(std::abs((1.0 - param(0)) / 2 - lr) < 1e-6);
}

TEST_CASE("adam rejects non-finite gradients with the tensor name") {
  Vector param = Vector::Zero(2), grad = Vector::Zero(2);
  Vector m1 = Vector::Zero(2), m2 = Vector::Zero(2);
  grad(1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(adam_update(param, grad, m1, m2, 1, 0.01, AdamConfig{}, "classifier.weight"),
                  NumericError);
  grad(1) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_WITH(adam_update(param, grad, m1, m2, 1, 0.01, AdamConfig{}, "classifier.weight"),
                    Catch::Matchers::ContainsSubstring("classifier.weight"));
}
