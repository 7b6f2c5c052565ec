#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "uniparser/common.hpp"
#include "uniparser/gradcheck.hpp"
#include "uniparser/labels.hpp"
#include "uniparser/linalg.hpp"
#include "uniparser/lstm.hpp"
#include "uniparser/vocab.hpp"

namespace uniparser {

struct Architecture {
  int d_emb = 64;
  int d_h = 64;
  int k = 3;

  int classifier_input_dim() const { return d_emb + 2 * d_h; }
  bool operator==(const Architecture&) const = default;
};

// All trainable tensors. The same struct doubles as gradient storage and
// Adam moment storage.
struct ModelParameters {
  Architecture arch;
  Matrix embedding;        // (96, d_emb), one row per vocabulary slot
  Vector mask_vector;      // (d_emb), stands in for the masked target token
  Vector pad_vector;       // (d_emb), stands in for out-of-range positions
  LstmCellParams forward_lstm;
  LstmCellParams backward_lstm;
  Vector classifier_weight;  // (d_emb + 2*d_h)
  Vector classifier_bias;    // (1)

  static ModelParameters zeros(const Architecture& arch) {
    ModelParameters p;
    p.arch = arch;
    p.embedding = Matrix::Zero(CharVocabulary::kSize, arch.d_emb);
    p.mask_vector = Vector::Zero(arch.d_emb);
    p.pad_vector = Vector::Zero(arch.d_emb);
    p.forward_lstm = LstmCellParams::zeros(arch.d_emb, arch.d_h);
    p.backward_lstm = LstmCellParams::zeros(arch.d_emb, arch.d_h);
    p.classifier_weight = Vector::Zero(arch.classifier_input_dim());
    p.classifier_bias = Vector::Zero(1);
    return p;
  }
};

// Fixed tensor visitation order; serialization, packing, Adam and the
// gradient checker all rely on it.
template <typename Params, typename F>
inline void visit_tensors(Params& p, F&& f) {
  f("embedding", p.embedding);
  f("mask", p.mask_vector);
  f("pad", p.pad_vector);
  f("lstm_forward.w_input", p.forward_lstm.w_input);
  f("lstm_forward.w_hidden", p.forward_lstm.w_hidden);
  f("lstm_forward.bias", p.forward_lstm.bias);
  f("lstm_backward.w_input", p.backward_lstm.w_input);
  f("lstm_backward.w_hidden", p.backward_lstm.w_hidden);
  f("lstm_backward.bias", p.backward_lstm.bias);
  f("classifier.weight", p.classifier_weight);
  f("classifier.bias", p.classifier_bias);
}

// Parallel walk over parameters, gradients and the two Adam moments. Must
// mirror visit_tensors exactly.
template <typename F>
inline void visit_tensors(ModelParameters& p, const ModelParameters& g, ModelParameters& m1,
                          ModelParameters& m2, F&& f) {
  f("embedding", p.embedding, g.embedding, m1.embedding, m2.embedding);
  f("mask", p.mask_vector, g.mask_vector, m1.mask_vector, m2.mask_vector);
  f("pad", p.pad_vector, g.pad_vector, m1.pad_vector, m2.pad_vector);
  f("lstm_forward.w_input", p.forward_lstm.w_input, g.forward_lstm.w_input,
    m1.forward_lstm.w_input, m2.forward_lstm.w_input);
  f("lstm_forward.w_hidden", p.forward_lstm.w_hidden, g.forward_lstm.w_hidden,
    m1.forward_lstm.w_hidden, m2.forward_lstm.w_hidden);
  f("lstm_forward.bias", p.forward_lstm.bias, g.forward_lstm.bias, m1.forward_lstm.bias,
    m2.forward_lstm.bias);
  f("lstm_backward.w_input", p.backward_lstm.w_input, g.backward_lstm.w_input,
    m1.backward_lstm.w_input, m2.backward_lstm.w_input);
  f("lstm_backward.w_hidden", p.backward_lstm.w_hidden, g.backward_lstm.w_hidden,
    m1.backward_lstm.w_hidden, m2.backward_lstm.w_hidden);
  f("lstm_backward.bias", p.backward_lstm.bias, g.backward_lstm.bias, m1.backward_lstm.bias,
    m2.backward_lstm.bias);
  f("classifier.weight", p.classifier_weight, g.classifier_weight, m1.classifier_weight,
    m2.classifier_weight);
  f("classifier.bias", p.classifier_bias, g.classifier_bias, m1.classifier_bias,
    m2.classifier_bias);
}

inline Vector pack_tensors(const ModelParameters& p) {
  std::size_t total = 0;
  visit_tensors(p, [&](const char*, const auto& t) { total += t.size(); });
  Vector out(total);
  std::size_t at = 0;
  visit_tensors(p, [&](const char*, const auto& t) {
    for (Eigen::Index i = 0; i < t.size(); ++i) out[at++] = t.reshaped()[i];
  });
  return out;
}

inline void unpack_tensors(const Vector& flat, ModelParameters& p) {
  std::size_t at = 0;
  visit_tensors(p, [&](const char*, auto& t) {
    for (Eigen::Index i = 0; i < t.size(); ++i) t.reshaped()[i] = flat[at++];
  });
  if (at != static_cast<std::size_t>(flat.size()))
    throw DataError("unpack_tensors: size mismatch");
}

// Glorot-uniform init for matrices and embedding-like vectors, zero biases
// except the LSTM forget block at 1. The paper gives no initialization.
inline ModelParameters init_model(const Architecture& arch, std::uint64_t seed) {
  ModelParameters p = ModelParameters::zeros(arch);
  std::mt19937_64 rng(seed);
  auto fill_uniform = [&rng](auto& tensor, double fan_in, double fan_out) {
    const double a = std::sqrt(6.0 / (fan_in + fan_out));
    std::uniform_real_distribution<double> dist(-a, a);
    for (Eigen::Index i = 0; i < tensor.size(); ++i) tensor.reshaped()[i] = dist(rng);
  };
  fill_uniform(p.embedding, CharVocabulary::kSize, arch.d_emb);
  fill_uniform(p.mask_vector, CharVocabulary::kSize, arch.d_emb);
  fill_uniform(p.pad_vector, CharVocabulary::kSize, arch.d_emb);
  for (LstmCellParams* lstm : {&p.forward_lstm, &p.backward_lstm}) {
    fill_uniform(lstm->w_input, lstm->w_input.cols(), lstm->w_input.rows());
    fill_uniform(lstm->w_hidden, lstm->w_hidden.cols(), lstm->w_hidden.rows());
    lstm->bias.setZero();
    lstm->bias.segment(arch.d_h, arch.d_h).setConstant(1.0);  // forget gate
  }
  fill_uniform(p.classifier_weight, arch.classifier_input_dim(), 1.0);
  p.classifier_bias.setZero();
  return p;
}

// Sum of char-level embedding rows; bytes outside printable ASCII hit the
// OOV row. Order-invariant by construction.
inline Vector encode_token(const ModelParameters& p, std::string_view token) {
  if (token.empty()) throw DataError("encode_token: empty token");
  Vector v = Vector::Zero(p.arch.d_emb);
  for (char c : token) v += p.embedding.row(CharVocabulary::index_of(c)).transpose();
  return v;
}

// ---------------------------------------------------------------------------
// Losses

constexpr double kProbClamp = 1e-7;

inline double clamp_prob(double p) {
  return std::min(1.0 - kProbClamp, std::max(kProbClamp, p));
}

// Mean binary cross-entropy over a batch of token probabilities.
// d_prob, when given, receives dLoss/d(raw probability); it is zero where
// the clamp is active.
inline double classification_loss(const std::vector<double>& probs,
                                  const std::vector<TokenLabel>& labels,
                                  std::vector<double>* d_prob = nullptr) {
  if (probs.size() != labels.size()) throw DataError("classification_loss: length mismatch");
  if (probs.empty()) throw DataError("classification_loss: empty batch");
  const double n = static_cast<double>(probs.size());
  if (d_prob) d_prob->assign(probs.size(), 0.0);
  double loss = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const double y = labels[i] == TokenLabel::Parameter ? 1.0 : 0.0;
    const double pc = clamp_prob(probs[i]);
    loss -= y * std::log(pc) + (1.0 - y) * std::log(1.0 - pc);
    if (d_prob && probs[i] > kProbClamp && probs[i] < 1.0 - kProbClamp)
      (*d_prob)[i] = (pc - y) / (pc * (1.0 - pc)) / n;
  }
  return loss / n;
}

struct ContrastiveSample {
  Vector anchor;                   // v
  Vector similar;                  // v_s
  std::vector<Vector> dissimilar;  // V_d
};

struct ContrastiveGradients {
  Vector d_anchor;
  Vector d_similar;
  std::vector<Vector> d_dissimilar;
};

// -log( exp(v.v_s) / sum_d exp(v.v_d) ), log-sum-exp stabilized. The
// denominator holds only the dissimilar terms unless
// include_positive_in_denominator is set; the plain form can be negative.
inline double contrastive_loss(const ContrastiveSample& s,
                               bool include_positive_in_denominator = false,
                               ContrastiveGradients* grads = nullptr) {
  if (s.dissimilar.empty()) throw DataError("contrastive_loss: empty dissimilar set");
  const double pos = s.anchor.dot(s.similar);
  std::vector<double> logits;
  logits.reserve(s.dissimilar.size() + 1);
  if (include_positive_in_denominator) logits.push_back(pos);
  for (const Vector& d : s.dissimilar) logits.push_back(s.anchor.dot(d));

  double max_logit = logits.front();
  for (double l : logits) max_logit = std::max(max_logit, l);
  double sum = 0.0;
  for (double l : logits) sum += std::exp(l - max_logit);
  const double lse = max_logit + std::log(sum);
  const double loss = -pos + lse;

  if (grads) {
    grads->d_anchor = -s.similar;
    grads->d_similar = -s.anchor;
    grads->d_dissimilar.assign(s.dissimilar.size(), Vector::Zero(s.anchor.size()));
    std::size_t at = 0;
    if (include_positive_in_denominator) {
      const double w = std::exp(logits[at++] - lse);
      grads->d_anchor += w * s.similar;
      grads->d_similar += w * s.anchor;
    }
    for (std::size_t i = 0; i < s.dissimilar.size(); ++i) {
      const double w = std::exp(logits[at++] - lse);
      grads->d_anchor += w * s.dissimilar[i];
      grads->d_dissimilar[i] = w * s.anchor;
    }
  }
  return loss;
}

inline double total_loss(double cls, double contrast, double lambda) {
  return cls + lambda * contrast;
}

// Named coordinate ranges of the packed vector, in visitation order.
inline std::vector<TensorSpan> tensor_spans(const ModelParameters& p) {
  std::vector<TensorSpan> spans;
  std::size_t at = 0;
  visit_tensors(p, [&](const char* name, const auto& t) {
    spans.push_back({name, at, static_cast<std::size_t>(t.size())});
    at += t.size();
  });
  return spans;
}

}  // namespace uniparser
