#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "uniparser/common.hpp"
#include "uniparser/linalg.hpp"
#include "uniparser/lstm.hpp"
#include "uniparser/model.hpp"
#include "uniparser/tokenizer.hpp"
#include "uniparser/vocab.hpp"

namespace uniparser {

// One token-classification example: the token at `target` inside `message`.
struct ContextQuery {
  const TokenizedMessage* message = nullptr;
  int target = 0;
};

namespace detail {

enum class CellKind : uint8_t { Token, Mask, Pad };

struct Cell {
  CellKind kind = CellKind::Pad;
  int token_id = -1;  // registry index when kind == Token
};

}  // namespace detail

// Windowed BiLSTM context encoder evaluated for a whole batch of queries at
// once. Each query contributes one column; every LSTM step is a single GEMM
// across the batch, which is where essentially all parse/train time goes.
//
// Window layout for radius k: positions target-k .. target+k. The target
// slot always carries the mask vector, positions outside the message carry
// the pad vector, everything else the sum of its characters' embeddings.
class EncoderBatch {
 public:
  // with_cache keeps per-step activations so backward() can run.
  void forward(const ModelParameters& params, const std::vector<ContextQuery>& queries,
               int k, bool with_cache) {
    if (k < 1) throw DataError("context radius k must be >= 1");
    const Architecture& arch = params.arch;
    const int window = 2 * k + 1;
    const int batch = static_cast<int>(queries.size());
    window_ = window;

    // Dedup token texts so each distinct token is embedded once per batch.
    registry_.clear();
    texts_.clear();
    cells_.assign(window, std::vector<detail::Cell>(batch));
    target_ids_.resize(batch);
    for (int b = 0; b < batch; ++b) {
      const ContextQuery& q = queries[b];
      if (q.message == nullptr) throw DataError("context query without message");
      const int n = static_cast<int>(q.message->size());
      if (q.target < 0 || q.target >= n)
        throw DataError("target index " + std::to_string(q.target) +
                        " out of range for message with " + std::to_string(n) + " tokens");
      for (int t = 0; t < window; ++t) {
        const int pos = q.target - k + t;
        detail::Cell& cell = cells_[t][b];
        if (pos == q.target) {
          cell.kind = detail::CellKind::Mask;
        } else if (pos < 0 || pos >= n) {
          cell.kind = detail::CellKind::Pad;
        } else {
          cell.kind = detail::CellKind::Token;
          cell.token_id = intern(q.message->tokens[pos].text);
        }
      }
      target_ids_[b] = intern(q.message->tokens[q.target].text);
    }

    // Embed the registry: one column per distinct token text.
    const int n_unique = static_cast<int>(texts_.size());
    token_vecs_ = Matrix::Zero(arch.d_emb, n_unique);
    for (int id = 0; id < n_unique; ++id) {
      for (const char c : texts_[id])
        token_vecs_.col(id) += params.embedding.row(CharVocabulary::index_of(c)).transpose();
    }

    // Assemble window step matrices and scan both directions.
    std::vector<Matrix> steps(window);
    for (int t = 0; t < window; ++t) {
      Matrix& x = steps[t];
      x.resize(arch.d_emb, batch);
      for (int b = 0; b < batch; ++b) {
        const detail::Cell& cell = cells_[t][b];
        switch (cell.kind) {
          case detail::CellKind::Token: x.col(b) = token_vecs_.col(cell.token_id); break;
          case detail::CellKind::Mask: x.col(b) = params.mask_vector; break;
          case detail::CellKind::Pad: x.col(b) = params.pad_vector; break;
        }
      }
    }
    std::vector<Matrix> reversed(steps.rbegin(), steps.rend());
    const std::vector<Matrix> h_fwd =
        lstm_scan(params.forward_lstm, steps, with_cache ? &fwd_cache_ : nullptr);
    const std::vector<Matrix> h_bwd =
        lstm_scan(params.backward_lstm, reversed, with_cache ? &bwd_cache_ : nullptr);

    // Mean-pool each direction, then stack: rows [0,H) forward, [H,2H) backward.
    const int H = arch.d_h;
    context_ = Matrix::Zero(2 * H, batch);
    for (int t = 0; t < window; ++t) {
      context_.topRows(H) += h_fwd[t];
      context_.bottomRows(H) += h_bwd[t];
    }
    context_ /= static_cast<double>(window);

    target_vectors_.resize(arch.d_emb, batch);
    for (int b = 0; b < batch; ++b) target_vectors_.col(b) = token_vecs_.col(target_ids_[b]);
  }

  const Matrix& context() const { return context_; }                // (2*d_h, batch)
  const Matrix& target_vectors() const { return target_vectors_; }  // (d_emb, batch)

  // Accumulates into `grads` (a zeroed or partially filled ModelParameters of
  // the same shape). d_target may be empty when the loss ignores token vectors.
  void backward(const ModelParameters& params, const Matrix& d_context,
                const Matrix& d_target, ModelParameters& grads) const {
    const int H = params.arch.d_h;
    const int batch = static_cast<int>(target_ids_.size());
    if (d_context.rows() != 2 * H || d_context.cols() != batch)
      throw DataError("d_context shape does not match encoder batch");

    // Mean pooling spreads the upstream gradient evenly over the steps.
    std::vector<Matrix> up_fwd(window_), up_bwd(window_);
    const Matrix df = d_context.topRows(H) / static_cast<double>(window_);
    const Matrix db = d_context.bottomRows(H) / static_cast<double>(window_);
    for (int t = 0; t < window_; ++t) {
      up_fwd[t] = df;
      up_bwd[t] = db;
    }
    const std::vector<Matrix> dx_fwd =
        lstm_scan_backward(params.forward_lstm, fwd_cache_, up_fwd, grads.forward_lstm);
    const std::vector<Matrix> dx_bwd =
        lstm_scan_backward(params.backward_lstm, bwd_cache_, up_bwd, grads.backward_lstm);

    // Window-slot gradients: backward scan saw the steps reversed.
    Matrix d_tokens = Matrix::Zero(token_vecs_.rows(), token_vecs_.cols());
    for (int t = 0; t < window_; ++t) {
      const Matrix dx = dx_fwd[t] + dx_bwd[window_ - 1 - t];
      for (int b = 0; b < batch; ++b) {
        const detail::Cell& cell = cells_[t][b];
        switch (cell.kind) {
          case detail::CellKind::Token: d_tokens.col(cell.token_id) += dx.col(b); break;
          case detail::CellKind::Mask: grads.mask_vector += dx.col(b); break;
          case detail::CellKind::Pad: grads.pad_vector += dx.col(b); break;
        }
      }
    }
    if (d_target.size() > 0) {
      for (int b = 0; b < batch; ++b) d_tokens.col(target_ids_[b]) += d_target.col(b);
    }

    // Scatter token gradients onto the character embedding rows.
    for (int id = 0; id < static_cast<int>(texts_.size()); ++id) {
      for (const char c : texts_[id])
        grads.embedding.row(CharVocabulary::index_of(c)) += d_tokens.col(id).transpose();
    }
  }

 private:
  int intern(const std::string& text) {
    auto [it, inserted] = registry_.try_emplace(text, static_cast<int>(texts_.size()));
    if (inserted) texts_.push_back(text);
    return it->second;
  }

  int window_ = 0;
  std::unordered_map<std::string, int> registry_;
  std::vector<std::string> texts_;
  std::vector<std::vector<detail::Cell>> cells_;  // [window][batch]
  std::vector<int> target_ids_;
  Matrix token_vecs_;  // (d_emb, n_unique)
  LstmCache fwd_cache_, bwd_cache_;
  Matrix context_;
  Matrix target_vectors_;
};

// logit_b = w . [token_b ; context_b] + bias, prob_b = logistic(logit_b).
struct ClassifierOutput {
  Eigen::RowVectorXd logits;
  Eigen::RowVectorXd probs;
};

inline ClassifierOutput classifier_forward(const ModelParameters& params,
                                           const Matrix& target_vectors, const Matrix& context) {
  const int E = params.arch.d_emb;
  const int C = 2 * params.arch.d_h;
  if (target_vectors.rows() != E || context.rows() != C ||
      target_vectors.cols() != context.cols())
    throw DataError("classifier input shape mismatch");
  ClassifierOutput out;
  out.logits = params.classifier_weight.head(E).transpose() * target_vectors +
               params.classifier_weight.tail(C).transpose() * context;
  out.logits.array() += params.classifier_bias(0);
  out.probs = out.logits.unaryExpr([](double z) { return logistic(z); });
  return out;
}

// d_logits is dL/dz per column. Fills d_target/d_context and accumulates the
// weight and bias gradients.
inline void classifier_backward(const ModelParameters& params, const Matrix& target_vectors,
                                const Matrix& context, const Eigen::RowVectorXd& d_logits,
                                ModelParameters& grads, Matrix& d_target, Matrix& d_context) {
  const int E = params.arch.d_emb;
  const int C = 2 * params.arch.d_h;
  grads.classifier_weight.head(E) += target_vectors * d_logits.transpose();
  grads.classifier_weight.tail(C) += context * d_logits.transpose();
  grads.classifier_bias(0) += d_logits.sum();
  d_target = params.classifier_weight.head(E) * d_logits;
  d_context = params.classifier_weight.tail(C) * d_logits;
}

// Single-message conveniences built on the batched path.

inline Vector encode_context(const ModelParameters& params, const TokenizedMessage& message,
                             int target_index, int k) {
  EncoderBatch batch;
  const std::vector<ContextQuery> one{{&message, target_index}};
  batch.forward(params, one, k, /*with_cache=*/false);
  return batch.context().col(0);
}

// Probability that the target token is a parameter.
inline double predict_token(const ModelParameters& params, const TokenizedMessage& message,
                            int target_index, int k) {
  EncoderBatch batch;
  const std::vector<ContextQuery> one{{&message, target_index}};
  batch.forward(params, one, k, /*with_cache=*/false);
  return classifier_forward(params, batch.target_vectors(), batch.context()).probs(0);
}

}  // namespace uniparser
