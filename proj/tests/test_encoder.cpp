#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "uniparser/encoder.hpp"
#include "uniparser/model.hpp"
#include "uniparser/synthetic.hpp"
#include "uniparser/tokenizer.hpp"

using namespace uniparser;

namespace {

const Architecture kTiny{4, 3, 2};

double max_abs_diff(const Vector& a, const Vector& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("masking hides the target token from its own context") {
  const ModelParameters p = init_model(kTiny, 1);
  const TokenizedMessage a = tokenize("alpha beta gamma delta");
  const TokenizedMessage b = tokenize("alpha XXXXXXX gamma delta");
  const Vector ctx_a = encode_context(p, a, 1, 2);
  const Vector ctx_b = encode_context(p, b, 1, 2);
  CHECK(max_abs_diff(ctx_a, ctx_b) == 0.0);
  // while the token vector itself of course differs
  CHECK(std::abs(predict_token(p, a, 1, 2) - predict_token(p, b, 1, 2)) > 0.0);
}

TEST_CASE("identical windows give identical contexts even across messages") {
  const ModelParameters p = init_model(kTiny, 2);
  // target at position 0 with radius 2: window is [pad, pad, mask, next, pad]
  const Vector ctx1 = encode_context(p, tokenize("a b"), 0, 2);
  const Vector ctx2 = encode_context(p, tokenize("x b"), 0, 2);
  CHECK(max_abs_diff(ctx1, ctx2) == 0.0);
  // a third token enters the window and breaks the tie
  const Vector ctx3 = encode_context(p, tokenize("x b c"), 0, 2);
  CHECK(max_abs_diff(ctx1, ctx3) > 1e-9);
}

TEST_CASE("tokens beyond the window radius cannot influence the context") {
  const ModelParameters p = init_model(kTiny, 3);
  const TokenizedMessage base = tokenize("t0 t1 t2 t3 t4 t5 t6 t7 t8");
  const int target = 4, k = 2;
  const Vector ctx = encode_context(p, base, target, k);

  const Vector far = encode_context(p, tokenize("ZZ t1 t2 t3 t4 t5 t6 t7 QQ"), target, k);
  CHECK(max_abs_diff(ctx, far) == 0.0);
  const Vector near = encode_context(p, tokenize("t0 t1 XX t3 t4 t5 t6 t7 t8"), target, k);
  CHECK(max_abs_diff(ctx, near) > 1e-9);
}

TEST_CASE("the context encoder is order-sensitive, not a bag of tokens") {
  const ModelParameters p = init_model(kTiny, 4);
  const Vector ab = encode_context(p, tokenize("aa bb TARGET cc dd"), 2, 2);
  const Vector ba = encode_context(p, tokenize("bb aa TARGET cc dd"), 2, 2);
  CHECK(max_abs_diff(ab, ba) > 1e-9);
}

TEST_CASE("batched forward agrees with one-at-a-time evaluation") {
  const ModelParameters p = init_model(kTiny, 5);
  const auto rows = make_rows(benchmark_sources()[0].patterns, 8, 44);
  std::vector<TokenizedMessage> msgs;
  for (const auto& r : rows) msgs.push_back(tokenize(r.content));

  std::vector<ContextQuery> queries;
  for (const auto& m : msgs)
    for (int t = 0; t < static_cast<int>(m.size()); t += 2) queries.push_back({&m, t});

  EncoderBatch batch;
  batch.forward(p, queries, 2, false);
  const auto out = classifier_forward(p, batch.target_vectors(), batch.context());
  REQUIRE(batch.context().cols() == static_cast<int>(queries.size()));
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const Vector single = encode_context(p, *queries[i].message, queries[i].target, 2);
    CHECK(max_abs_diff(batch.context().col(i), single) < 1e-12);
    const double prob = predict_token(p, *queries[i].message, queries[i].target, 2);
    CHECK(out.probs(i) == Catch::Approx(prob).margin(1e-12));
  }
}

TEST_CASE("encoder rejects malformed queries") {
  const ModelParameters p = init_model(kTiny, 6);
  const TokenizedMessage m = tokenize("a b c");
  EncoderBatch batch;
  CHECK_THROWS_AS(batch.forward(p, {{&m, 0}}, 0, false), DataError);
  CHECK_THROWS_AS(batch.forward(p, {{&m, 3}}, 2, false), DataError);
  CHECK_THROWS_AS(batch.forward(p, {{&m, -1}}, 2, false), DataError);
  CHECK_THROWS_AS(batch.forward(p, {{nullptr, 0}}, 2, false), DataError);
}

TEST_CASE("classifier output matches the explicit affine form") {
  const ModelParameters p = init_model(kTiny, 7);
  std::mt19937_64 rng(8);
  std::normal_distribution<double> dist(0.0, 1.0);
  Matrix tok(kTiny.d_emb, 3), ctx(2 * kTiny.d_h, 3);
  for (int c = 0; c < 3; ++c) {
    for (int r = 0; r < tok.rows(); ++r) tok(r, c) = dist(rng);
    for (int r = 0; r < ctx.rows(); ++r) ctx(r, c) = dist(rng);
  }
  const auto out = classifier_forward(p, tok, ctx);
  for (int c = 0; c < 3; ++c) {
    Vector joint(kTiny.classifier_input_dim());
    joint << tok.col(c), ctx.col(c);
    const double z = p.classifier_weight.dot(joint) + p.classifier_bias(0);
    CHECK(out.logits(c) == Catch::Approx(z).margin(1e-12));
    CHECK(out.probs(c) == Catch::Approx(1.0 / (1.0 + std::exp(-z))).margin(1e-12));
  }
  CHECK_THROWS_AS(classifier_forward(p, tok, ctx.topRows(3)), DataError);
}

namespace {

// Shared fixture: a handful of queries with overlapping token texts so the
// dedup registry actually shares columns.
struct GradFixture {
  std::vector<TokenizedMessage> msgs;
  std::vector<ContextQuery> queries;
  std::vector<TokenLabel> labels;

  GradFixture() {
    for (const char* raw :
         {"open file /tmp/a size 42", "close file /tmp/a size 7", "open pipe now"}) {
      msgs.emplace_back(tokenize(raw));
    }
    for (const auto& m : msgs)
      for (int t = 0; t < static_cast<int>(m.size()); ++t) {
        queries.push_back({&m, t});
        labels.push_back(t % 2 ? TokenLabel::Parameter : TokenLabel::Template);
      }
  }
};

}  // namespace

TEST_CASE("classification path gradients match finite differences everywhere") {
  const GradFixture fix;
  const int k = 2;
  const ModelParameters p0 = init_model(kTiny, 9);

  const auto loss_fn = [&](const Vector& flat) {
    ModelParameters p = ModelParameters::zeros(kTiny);
    unpack_tensors(flat, p);
    EncoderBatch enc;
    enc.forward(p, fix.queries, k, false);
    const auto out = classifier_forward(p, enc.target_vectors(), enc.context());
    std::vector<double> probs(out.probs.begin(), out.probs.end());
    return classification_loss(probs, fix.labels);
  };

  // analytic gradient through the real backward path
  EncoderBatch enc;
  enc.forward(p0, fix.queries, k, true);
  const auto out = classifier_forward(p0, enc.target_vectors(), enc.context());
  std::vector<double> probs(out.probs.begin(), out.probs.end());
  std::vector<double> d_prob;
  classification_loss(probs, fix.labels, &d_prob);
  Eigen::RowVectorXd d_logits(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i)
    d_logits(i) = d_prob[i] * probs[i] * (1.0 - probs[i]);
  ModelParameters grads = ModelParameters::zeros(kTiny);
  Matrix d_target, d_context;
  classifier_backward(p0, enc.target_vectors(), enc.context(), d_logits, grads, d_target,
                      d_context);
  enc.backward(p0, d_context, d_target, grads);

  const auto report =
      grad_check(loss_fn, pack_tensors(p0), pack_tensors(grads), 1e-5, tensor_spans(p0));
  INFO("worst " << report.worst_tensor << "[" << report.worst_coordinate << "] rel "
                << report.worst_rel_error);
  CHECK(report.within(1e-4));
  CHECK(report.coordinates_checked == static_cast<std::size_t>(pack_tensors(p0).size()));
}

TEST_CASE("context-only gradients flow with an empty target slot") {
  const GradFixture fix;
  const int k = 2;
  const ModelParameters p0 = init_model(kTiny, 10);
  // fixed projection onto the context block alone
  std::mt19937_64 rng(11);
  std::normal_distribution<double> dist(0.0, 1.0);
  Matrix W(2 * kTiny.d_h, fix.queries.size());
  for (int r = 0; r < W.rows(); ++r)
    for (int c = 0; c < W.cols(); ++c) W(r, c) = dist(rng);

  const auto loss_fn = [&](const Vector& flat) {
    ModelParameters p = ModelParameters::zeros(kTiny);
    unpack_tensors(flat, p);
    EncoderBatch enc;
    enc.forward(p, fix.queries, k, false);
    return enc.context().cwiseProduct(W).sum();
  };

  EncoderBatch enc;
  enc.forward(p0, fix.queries, k, true);
  ModelParameters grads = ModelParameters::zeros(kTiny);
  enc.backward(p0, W, Matrix(), grads);
  // the classifier never ran, so its gradient stays zero
  CHECK(grads.classifier_weight.cwiseAbs().maxCoeff() == 0.0);

  const auto report =
      grad_check(loss_fn, pack_tensors(p0), pack_tensors(grads), 1e-5, tensor_spans(p0));
  INFO("worst " << report.worst_tensor << "[" << report.worst_coordinate << "] rel "
                << report.worst_rel_error);
  CHECK(report.within(1e-4));
}
