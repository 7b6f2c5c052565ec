#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <random>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "uniparser/adam.hpp"
#include "uniparser/common.hpp"
#include "uniparser/corpus.hpp"
#include "uniparser/encoder.hpp"
#include "uniparser/model.hpp"

namespace uniparser {

struct TrainConfig {
  double learning_rate = 0.002;
  int batch_size = 256;  // tokens per classification batch
  int epochs = 4;
  int k = 3;
  int negatives = 3;  // |V_d| per contrastive sample
  double lambda = 0.01;
  std::uint64_t seed = 42;
  int d_emb = 64;
  int d_h = 64;
  int cap = 0;  // max messages taken per source, 0 = all
  bool include_positive_in_denominator = false;
  bool disable_context = false;     // token-only ablation
  bool disable_similarity = false;  // drop the contrastive term
};

constexpr int kDefaultFineTuneEpochs = 16;

struct EpochStats {
  double classification_loss = 0.0;
  double contrastive_loss = 0.0;
  double total_loss = 0.0;
  double seconds = 0.0;
};

struct TrainReport {
  std::vector<EpochStats> epochs;
  int messages = 0;
  int tokens = 0;
  int contrastive_samples = 0;  // across all batches and epochs
};

// Messages from several sources flattened into one index space, regrouped
// globally. Pointers borrow from the source datasets.
struct TrainingPool {
  std::vector<const LabeledMessage*> messages;
  GroupMap groups;                              // key -> pool indices
  std::vector<int> group_of;                    // pool index -> group ordinal
  std::vector<const std::vector<int>*> member_lists;  // ordinal -> pool indices

  std::size_t size() const { return messages.size(); }
};

inline TrainingPool build_training_pool(const std::vector<const LabeledDataset*>& sources,
                                        int cap = 0) {
  TrainingPool pool;
  for (const LabeledDataset* src : sources) {
    if (src == nullptr) throw DataError("build_training_pool: null dataset");
    std::size_t take = src->records.size();
    if (cap > 0) take = std::min(take, static_cast<std::size_t>(cap));
    for (std::size_t i = 0; i < take; ++i) pool.messages.push_back(&src->records[i]);
  }
  for (int i = 0; i < static_cast<int>(pool.messages.size()); ++i)
    pool.groups[group_key_of(pool.messages[i]->message)].push_back(i);
  pool.group_of.assign(pool.messages.size(), -1);
  int g = 0;
  for (const auto& [key, members] : pool.groups) {
    pool.member_lists.push_back(&members);
    for (int idx : members) pool.group_of[idx] = g;
    ++g;
  }
  return pool;
}

namespace detail {

struct TokenRef {
  int msg = 0;
  int tok = 0;
};

// Classification path when the context encoder is ablated: only the summed
// character embeddings of the target tokens, context block forced to zero.
struct TokenOnlyBatch {
  void forward(const ModelParameters& params, const std::vector<ContextQuery>& queries) {
    registry_.clear();
    texts_.clear();
    ids_.resize(queries.size());
    for (std::size_t b = 0; b < queries.size(); ++b) {
      const ContextQuery& q = queries[b];
      const std::string& text = q.message->tokens[q.target].text;
      auto [it, inserted] = registry_.try_emplace(text, static_cast<int>(texts_.size()));
      if (inserted) texts_.push_back(text);
      ids_[b] = it->second;
    }
    Matrix unique = Matrix::Zero(params.arch.d_emb, static_cast<Eigen::Index>(texts_.size()));
    for (std::size_t id = 0; id < texts_.size(); ++id) {
      for (const char c : texts_[id])
        unique.col(static_cast<Eigen::Index>(id)) +=
            params.embedding.row(CharVocabulary::index_of(c)).transpose();
    }
    targets_.resize(params.arch.d_emb, static_cast<Eigen::Index>(queries.size()));
    for (std::size_t b = 0; b < queries.size(); ++b) targets_.col(b) = unique.col(ids_[b]);
  }

  const Matrix& target_vectors() const { return targets_; }

  void backward(const Matrix& d_target, ModelParameters& grads) const {
    Matrix d_unique = Matrix::Zero(targets_.rows(), static_cast<Eigen::Index>(texts_.size()));
    for (std::size_t b = 0; b < ids_.size(); ++b) d_unique.col(ids_[b]) += d_target.col(b);
    for (std::size_t id = 0; id < texts_.size(); ++id) {
      for (const char c : texts_[id])
        grads.embedding.row(CharVocabulary::index_of(c)) +=
            d_unique.col(static_cast<Eigen::Index>(id)).transpose();
    }
  }

 private:
  std::unordered_map<std::string, int> registry_;
  std::vector<std::string> texts_;
  std::vector<int> ids_;
  Matrix targets_;
};

// Uniform draw over messages outside group g. Rejection sampling with a
// linear fallback when the group dominates the pool.
inline int draw_dissimilar(const TrainingPool& pool, int g, std::mt19937_64& rng) {
  const int n = static_cast<int>(pool.size());
  std::uniform_int_distribution<int> dist(0, n - 1);
  for (int tries = 0; tries < 64; ++tries) {
    const int u = dist(rng);
    if (pool.group_of[u] != g) return u;
  }
  std::vector<int> others;
  others.reserve(pool.size());
  for (int i = 0; i < n; ++i)
    if (pool.group_of[i] != g) others.push_back(i);
  if (others.empty()) throw DataError("contrastive sampling: single group pool");
  std::uniform_int_distribution<std::size_t> pick(0, others.size() - 1);
  return others[pick(rng)];
}

}  // namespace detail

struct ContrastiveSampleIndices {
  int anchor = 0;
  int similar = 0;
  std::vector<int> dissimilar;
};

// Similar message from the anchor's own group (the anchor itself when it is
// alone); `negatives` dissimilar messages drawn uniformly from other groups,
// distinct whenever the pool allows. Requires at least two groups.
inline ContrastiveSampleIndices sample_contrastive(const TrainingPool& pool, int anchor,
                                                   int negatives, std::mt19937_64& rng) {
  if (pool.groups.size() < 2) throw DataError("contrastive sampling: single group pool");
  if (negatives < 1) throw DataError("contrastive sampling: need at least one negative");
  const int g = pool.group_of[anchor];
  const std::vector<int>& members = *pool.member_lists[g];

  ContrastiveSampleIndices out;
  out.anchor = anchor;
  if (members.size() > 1) {
    std::uniform_int_distribution<std::size_t> dist(0, members.size() - 2);
    std::size_t r = dist(rng);
    std::size_t self = 0;
    while (members[self] != anchor) ++self;
    out.similar = members[r < self ? r : r + 1];
  } else {
    out.similar = anchor;
  }

  const std::size_t other_count = pool.size() - members.size();
  for (int i = 0; i < negatives; ++i) {
    int d = detail::draw_dissimilar(pool, g, rng);
    if (other_count > static_cast<std::size_t>(negatives)) {
      int tries = 0;
      while (std::find(out.dissimilar.begin(), out.dissimilar.end(), d) != out.dissimilar.end() &&
             tries < 64) {
        d = detail::draw_dissimilar(pool, g, rng);
        ++tries;
      }
    }
    out.dissimilar.push_back(d);
  }
  return out;
}

namespace detail {

// One optimizer pass over `epochs` epochs; shared by train and fine_tune.
inline void run_epochs(ModelParameters& params, const TrainingPool& pool, const TrainConfig& cfg,
                       int epochs, std::mt19937_64& rng, TrainReport* report, std::ostream* log) {
  if (cfg.batch_size < 1) throw DataError("batch size must be >= 1");
  if (cfg.negatives < 1) throw DataError("negatives must be >= 1");
  if (cfg.learning_rate <= 0.0) throw DataError("learning rate must be positive");
  const Architecture arch = params.arch;
  const bool use_context = !cfg.disable_context;
  const bool use_similarity =
      use_context && !cfg.disable_similarity && pool.groups.size() >= 2 && cfg.lambda != 0.0;

  std::vector<TokenRef> refs;
  for (int m = 0; m < static_cast<int>(pool.size()); ++m)
    for (int t = 0; t < static_cast<int>(pool.messages[m]->message.size()); ++t)
      refs.push_back({m, t});
  if (refs.empty()) return;
  if (report) {
    report->messages = static_cast<int>(pool.size());
    report->tokens = static_cast<int>(refs.size());
  }

  ModelParameters mom1 = ModelParameters::zeros(arch);
  ModelParameters mom2 = ModelParameters::zeros(arch);
  AdamConfig adam_cfg;
  long step = 0;

  EncoderBatch cls_encoder, sim_encoder;
  TokenOnlyBatch token_batch;
  const int stride = 2 + cfg.negatives;  // columns per contrastive sample

  for (int epoch = 0; epoch < epochs; ++epoch) {
    const auto started = std::chrono::steady_clock::now();
    std::shuffle(refs.begin(), refs.end(), rng);

    double cls_sum = 0.0, contrast_sum = 0.0;
    std::size_t contrast_count = 0;

    for (std::size_t at = 0; at < refs.size(); at += cfg.batch_size) {
      const std::size_t batch_n = std::min<std::size_t>(cfg.batch_size, refs.size() - at);
      std::vector<ContextQuery> queries(batch_n);
      std::vector<TokenLabel> labels(batch_n);
      for (std::size_t i = 0; i < batch_n; ++i) {
        const TokenRef& r = refs[at + i];
        queries[i] = {&pool.messages[r.msg]->message, r.tok};
        labels[i] = pool.messages[r.msg]->labels[r.tok];
      }

      ModelParameters grads = ModelParameters::zeros(arch);

      // Classification term.
      Matrix context;
      const Matrix* targets = nullptr;
      if (use_context) {
        cls_encoder.forward(params, queries, arch.k, /*with_cache=*/true);
        context = cls_encoder.context();
        targets = &cls_encoder.target_vectors();
      } else {
        token_batch.forward(params, queries);
        context = Matrix::Zero(2 * arch.d_h, static_cast<Eigen::Index>(batch_n));
        targets = &token_batch.target_vectors();
      }
      const ClassifierOutput out = classifier_forward(params, *targets, context);
      std::vector<double> probs(out.probs.data(), out.probs.data() + batch_n);
      std::vector<double> d_prob;
      const double cls = classification_loss(probs, labels, &d_prob);
      Eigen::RowVectorXd d_logits(batch_n);
      for (std::size_t i = 0; i < batch_n; ++i)
        d_logits(static_cast<Eigen::Index>(i)) =
            d_prob[i] * logistic_derivative_from_value(probs[i]);
      Matrix d_target, d_context;
      classifier_backward(params, *targets, context, d_logits, grads, d_target, d_context);
      if (use_context) {
        cls_encoder.backward(params, d_context, d_target, grads);
      } else {
        token_batch.backward(d_target, grads);
      }
      cls_sum += cls * static_cast<double>(batch_n);

      // Contrastive term: one sample per distinct message in the batch,
      // averaged, scaled by lambda.
      double batch_contrast = 0.0;
      if (use_similarity) {
        std::vector<int> distinct;
        std::unordered_set<int> seen;
        for (std::size_t i = 0; i < batch_n; ++i)
          if (seen.insert(refs[at + i].msg).second) distinct.push_back(refs[at + i].msg);

        std::vector<ContrastiveSampleIndices> samples;
        samples.reserve(distinct.size());
        std::vector<ContextQuery> sim_queries;
        sim_queries.reserve(distinct.size() * stride);
        for (int m : distinct) {
          ContrastiveSampleIndices s = sample_contrastive(pool, m, cfg.negatives, rng);
          samples.push_back(s);
          sim_queries.push_back({&pool.messages[s.anchor]->message, 0});
          sim_queries.push_back({&pool.messages[s.similar]->message, 0});
          for (int d : s.dissimilar) sim_queries.push_back({&pool.messages[d]->message, 0});
        }
        if (!samples.empty()) {
          sim_encoder.forward(params, sim_queries, arch.k, /*with_cache=*/true);
          const Matrix& ctx = sim_encoder.context();
          Matrix d_ctx = Matrix::Zero(ctx.rows(), ctx.cols());
          const double scale = cfg.lambda / static_cast<double>(samples.size());
          ContrastiveSample values;
          ContrastiveGradients cg;
          for (std::size_t j = 0; j < samples.size(); ++j) {
            const Eigen::Index base = static_cast<Eigen::Index>(j * stride);
            values.anchor = ctx.col(base);
            values.similar = ctx.col(base + 1);
            values.dissimilar.assign(cfg.negatives, Vector());
            for (int d = 0; d < cfg.negatives; ++d) values.dissimilar[d] = ctx.col(base + 2 + d);
            batch_contrast +=
                contrastive_loss(values, cfg.include_positive_in_denominator, &cg);
            d_ctx.col(base) += scale * cg.d_anchor;
            d_ctx.col(base + 1) += scale * cg.d_similar;
            for (int d = 0; d < cfg.negatives; ++d)
              d_ctx.col(base + 2 + d) += scale * cg.d_dissimilar[d];
          }
          sim_encoder.backward(params, d_ctx, Matrix(), grads);
          contrast_sum += batch_contrast;
          contrast_count += samples.size();
          batch_contrast /= static_cast<double>(samples.size());
          if (report) report->contrastive_samples += static_cast<int>(samples.size());
        }
      }

      ++step;
      try {
        visit_tensors(params, grads, mom1, mom2,
                      [&](const char* name, auto& p, const auto& g, auto& m1, auto& m2) {
                        adam_update(p, g, m1, m2, step, cfg.learning_rate, adam_cfg, name);
                      });
      } catch (const NumericError& e) {
        throw NumericError(std::string(e.what()) + " at epoch " + std::to_string(epoch + 1) +
                           ", step " + std::to_string(step));
      }
    }

    EpochStats stats;
    stats.classification_loss = cls_sum / static_cast<double>(refs.size());
    stats.contrastive_loss =
        contrast_count > 0 ? contrast_sum / static_cast<double>(contrast_count) : 0.0;
    stats.total_loss = total_loss(stats.classification_loss, stats.contrastive_loss,
                                  use_similarity ? cfg.lambda : 0.0);
    stats.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    if (report) report->epochs.push_back(stats);
    if (log) {
      char line[160];
      std::snprintf(line, sizeof(line),
                    "epoch %d/%d  cls %.6f  contrast %.6f  total %.6f  (%.1fs)", epoch + 1,
                    epochs, stats.classification_loss, stats.contrastive_loss, stats.total_loss,
                    stats.seconds);
      *log << line << '\n' << std::flush;
    }
  }
}

}  // namespace detail

// Trains a fresh model on the pool. Deterministic for a fixed config: one
// RNG seeded from cfg.seed drives init, shuffling and sampling.
inline ModelParameters train(const TrainingPool& pool, const TrainConfig& cfg,
                             TrainReport* report = nullptr, std::ostream* log = nullptr) {
  if (pool.messages.empty()) throw DataError("train: empty training pool");
  Architecture arch;
  arch.d_emb = cfg.d_emb;
  arch.d_h = cfg.d_h;
  arch.k = cfg.k;
  ModelParameters params = init_model(arch, cfg.seed);
  if (cfg.disable_context) {
    // Zero LSTM weights produce exactly zero context vectors, and since the
    // ablated loss never touches them they stay zero through Adam. A saved
    // token-only model therefore runs the ordinary inference path unchanged.
    params.forward_lstm = LstmCellParams::zeros(arch.d_emb, arch.d_h);
    params.backward_lstm = LstmCellParams::zeros(arch.d_emb, arch.d_h);
  }
  std::mt19937_64 rng(cfg.seed);
  detail::run_epochs(params, pool, cfg, cfg.epochs, rng, report, log);
  return params;
}

// Continues training an existing model in place, e.g. on a few dozen labeled
// lines from a new source. Ignores cfg architecture fields in favor of the
// model's own. An empty pool leaves the model untouched.
inline void fine_tune(ModelParameters& params, const TrainingPool& pool, const TrainConfig& cfg,
                      TrainReport* report = nullptr, std::ostream* log = nullptr) {
  if (pool.messages.empty()) return;
  std::mt19937_64 rng(cfg.seed);
  detail::run_epochs(params, pool, cfg, cfg.epochs, rng, report, log);
}

}  // namespace uniparser
