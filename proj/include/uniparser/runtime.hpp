#pragma once

#include <atomic>
#include <chrono>
#include <map>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "uniparser/common.hpp"
#include "uniparser/encoder.hpp"
#include "uniparser/labels.hpp"
#include "uniparser/model.hpp"
#include "uniparser/tokenizer.hpp"

namespace uniparser {

struct ParseResult {
  int line = 0;  // 1-based input position
  std::string raw;
  std::vector<TokenLabel> labels;
  std::string template_text;
  std::vector<std::string> parameters;
  std::string error;  // set instead of template/parameters when the line is unusable
};

struct ThroughputReport {
  std::size_t messages = 0;
  double seconds = 0.0;  // wall clock; callers fold input loading time in
  double messages_per_second() const { return seconds > 0.0 ? messages / seconds : 0.0; }
};

struct TemplateParts {
  std::string template_text;
  std::vector<std::string> parameters;
};

// Each maximal run of parameter tokens separated only by separator bytes
// collapses to one "<*>"; the parameter list holds the replaced substrings,
// separators included. Everything else is copied verbatim.
inline TemplateParts reconstruct_template(const TokenizedMessage& msg,
                                          const std::vector<TokenLabel>& labels) {
  if (labels.size() != msg.size())
    throw DataError("reconstruct_template: label count does not match token count");
  const std::string& raw = msg.raw;
  const auto gap_is_separators = [&](std::size_t from, std::size_t to) {
    for (std::size_t p = msg.tokens[from].end; p < msg.tokens[to].begin; ++p)
      if (!is_separator(raw[p])) return false;
    return true;
  };

  TemplateParts out;
  std::size_t cursor = 0;
  std::size_t i = 0;
  const std::size_t n = msg.size();
  while (i < n) {
    if (labels[i] != TokenLabel::Parameter) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < n && labels[j + 1] == TokenLabel::Parameter && gap_is_separators(j, j + 1))
      ++j;
    const std::size_t begin = msg.tokens[i].begin;
    const std::size_t end = msg.tokens[j].end;
    out.template_text.append(raw, cursor, begin - cursor);
    out.template_text += "<*>";
    out.parameters.push_back(raw.substr(begin, end - begin));
    cursor = end;
    i = j + 1;
  }
  out.template_text.append(raw, cursor, raw.size() - cursor);
  return out;
}

namespace detail {

struct TokenSlot {
  int msg = 0;
  int tok = 0;
};

// Predicts one fixed slice of the token stream. Batch boundaries depend only
// on batch_size, so outputs cannot depend on the worker count.
inline void predict_slice(const ModelParameters& params,
                          const std::vector<TokenizedMessage>& messages,
                          const std::vector<TokenSlot>& slots, std::size_t begin, std::size_t end,
                          EncoderBatch& encoder, std::vector<double>& probs) {
  std::vector<ContextQuery> queries(end - begin);
  for (std::size_t i = begin; i < end; ++i)
    queries[i - begin] = {&messages[slots[i].msg], slots[i].tok};
  encoder.forward(params, queries, params.arch.k, /*with_cache=*/false);
  const ClassifierOutput out =
      classifier_forward(params, encoder.target_vectors(), encoder.context());
  for (std::size_t i = begin; i < end; ++i)
    probs[i] = out.probs(static_cast<Eigen::Index>(i - begin));
}

}  // namespace detail

// Classifies every token of every line (threshold 0.5) and reconstructs
// templates. Results stay in input order; zero-token lines become error
// records rather than failures. Worker threads share the read-only model and
// write disjoint slots, so any worker count yields identical output.
inline std::vector<ParseResult> parse_batch(const ModelParameters& params,
                                            const std::vector<std::string>& lines,
                                            int batch_size = 512, int workers = 1,
                                            ThroughputReport* report = nullptr) {
  if (batch_size < 1) throw DataError("parse batch size must be >= 1");
  const auto started = std::chrono::steady_clock::now();

  std::vector<TokenizedMessage> messages(lines.size());
  std::vector<detail::TokenSlot> slots;
  for (std::size_t m = 0; m < lines.size(); ++m) {
    messages[m] = tokenize(lines[m]);
    for (int t = 0; t < static_cast<int>(messages[m].size()); ++t)
      slots.push_back({static_cast<int>(m), t});
  }

  std::vector<double> probs(slots.size(), 0.0);
  const std::size_t n_batches = (slots.size() + batch_size - 1) / batch_size;
  const auto run_batch = [&](std::size_t b, EncoderBatch& encoder) {
    const std::size_t begin = b * batch_size;
    const std::size_t end = std::min(slots.size(), begin + batch_size);
    detail::predict_slice(params, messages, slots, begin, end, encoder, probs);
  };

  const int n_workers = std::max(1, std::min<int>(workers, static_cast<int>(n_batches)));
  if (n_workers <= 1) {
    EncoderBatch encoder;
    for (std::size_t b = 0; b < n_batches; ++b) run_batch(b, encoder);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (int w = 0; w < n_workers; ++w) {
      pool.emplace_back([&] {
        EncoderBatch encoder;
        for (std::size_t b = next.fetch_add(1); b < n_batches; b = next.fetch_add(1))
          run_batch(b, encoder);
      });
    }
    for (std::thread& t : pool) t.join();
  }

  std::vector<ParseResult> results(lines.size());
  std::size_t at = 0;
  for (std::size_t m = 0; m < lines.size(); ++m) {
    ParseResult& r = results[m];
    r.line = static_cast<int>(m) + 1;
    r.raw = lines[m];
    const std::size_t n_tokens = messages[m].size();
    if (n_tokens == 0) {
      r.error = "empty message";
      continue;
    }
    r.labels.resize(n_tokens);
    for (std::size_t t = 0; t < n_tokens; ++t, ++at)
      r.labels[t] = probs[at] >= 0.5 ? TokenLabel::Parameter : TokenLabel::Template;
    TemplateParts parts = reconstruct_template(messages[m], r.labels);
    r.template_text = std::move(parts.template_text);
    r.parameters = std::move(parts.parameters);
  }

  if (report) {
    report->messages = lines.size();
    report->seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  }
  return results;
}

inline ParseResult parse_message(const ModelParameters& params, const std::string& raw) {
  ParseResult r = parse_batch(params, {raw}).front();
  if (!r.error.empty()) throw DataError("parse_message: " + r.error);
  return r;
}

// Exact-string grouping on the reconstructed template; error records are
// left out. Deterministic order via std::map.
inline std::map<std::string, std::vector<int>> group_by_template(
    const std::vector<ParseResult>& results) {
  std::map<std::string, std::vector<int>> groups;
  for (std::size_t i = 0; i < results.size(); ++i)
    if (results[i].error.empty())
      groups[results[i].template_text].push_back(static_cast<int>(i));
  return groups;
}

}  // namespace uniparser
