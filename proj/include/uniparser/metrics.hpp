#pragma once

#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "uniparser/common.hpp"
#include "uniparser/corpus.hpp"
#include "uniparser/runtime.hpp"

namespace uniparser {

struct MetricReport {
  std::string dataset;
  std::size_t messages = 0;
  std::size_t message_correct = 0;  // every token labeled correctly
  std::size_t group_correct = 0;    // predicted member-set equals truth member-set
  std::size_t predicted_groups = 0;
  std::size_t truth_groups = 0;
  double group_accuracy = 0.0;
  double message_level_accuracy = 0.0;
};

// Fraction of messages whose label vector matches exactly.
inline double message_level_accuracy(const std::vector<std::vector<TokenLabel>>& predicted,
                                     const std::vector<std::vector<TokenLabel>>& truth,
                                     std::size_t* correct_out = nullptr) {
  if (predicted.size() != truth.size())
    throw DataError("message_level_accuracy: message count mismatch");
  if (predicted.empty()) throw DataError("message_level_accuracy: no messages");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i].size() != truth[i].size())
      throw DataError("message_level_accuracy: label arity mismatch at message " +
                      std::to_string(i));
    if (predicted[i] == truth[i]) ++correct;
  }
  if (correct_out) *correct_out = correct;
  return static_cast<double>(correct) / static_cast<double>(predicted.size());
}

namespace detail {

// message index -> group ordinal; rejects anything but an exact partition of
// 0..n-1.
inline std::vector<int> partition_index(const std::vector<std::vector<int>>& partition,
                                        std::size_t n, const char* which) {
  std::vector<int> of(n, -1);
  std::size_t covered = 0;
  for (std::size_t g = 0; g < partition.size(); ++g) {
    for (int m : partition[g]) {
      if (m < 0 || static_cast<std::size_t>(m) >= n || of[m] != -1)
        throw DataError(std::string("group_accuracy: ") + which + " groups are not a partition");
      of[m] = static_cast<int>(g);
      ++covered;
    }
  }
  if (covered != n)
    throw DataError(std::string("group_accuracy: ") + which + " groups are not a partition");
  return of;
}

}  // namespace detail

// A message counts as correct when its predicted group holds exactly the
// same messages as its truth group. Both arguments must partition the same
// index universe.
inline double group_accuracy(const std::vector<std::vector<int>>& predicted,
                             const std::vector<std::vector<int>>& truth,
                             std::size_t* correct_out = nullptr) {
  std::size_t n = 0;
  for (const auto& g : predicted) n += g.size();
  std::size_t n_truth = 0;
  for (const auto& g : truth) n_truth += g.size();
  if (n != n_truth) throw DataError("group_accuracy: partitions cover different message counts");
  if (n == 0) throw DataError("group_accuracy: no messages");

  const std::vector<int> truth_of = detail::partition_index(truth, n, "truth");
  (void)detail::partition_index(predicted, n, "predicted");

  // Set equality = same size and predicted group entirely inside one truth
  // group; checking per predicted group keeps this linear.
  std::size_t correct = 0;
  for (const std::vector<int>& group : predicted) {
    if (group.empty()) continue;
    const int t = truth_of[group.front()];
    bool same = group.size() == truth[t].size();
    for (std::size_t i = 1; same && i < group.size(); ++i) same = truth_of[group[i]] == t;
    if (same) correct += group.size();
  }
  if (correct_out) *correct_out = correct;
  return static_cast<double>(correct) / static_cast<double>(n);
}

struct EvaluationResult {
  MetricReport report;
  std::vector<ParseResult> results;
};

// Parses every message of a labeled dataset and scores both metrics. Truth
// groups are keyed by the ground-truth template string. `oracle` swaps the
// model's predictions for the truth labels (pipeline sanity check);
// k_override changes the context radius at inference, 0 keeps the model's.
inline EvaluationResult evaluate(const ModelParameters& params, const LabeledDataset& data,
                                 int workers = 1, int batch_size = 512, bool oracle = false,
                                 int k_override = 0) {
  if (data.records.empty()) throw DataError("evaluate: dataset has no usable messages");

  std::vector<std::string> lines;
  lines.reserve(data.records.size());
  for (const LabeledMessage& r : data.records) lines.push_back(r.message.raw);

  EvaluationResult out;
  if (oracle) {
    out.results.resize(data.records.size());
    for (std::size_t i = 0; i < data.records.size(); ++i) {
      ParseResult& r = out.results[i];
      r.line = static_cast<int>(i) + 1;
      r.raw = lines[i];
      r.labels = data.records[i].labels;
      TemplateParts parts = reconstruct_template(data.records[i].message, r.labels);
      r.template_text = std::move(parts.template_text);
      r.parameters = std::move(parts.parameters);
    }
  } else {
    ModelParameters adjusted;
    const ModelParameters* use = &params;
    if (k_override > 0 && k_override != params.arch.k) {
      adjusted = params;
      adjusted.arch.k = k_override;
      use = &adjusted;
    }
    out.results = parse_batch(*use, lines, batch_size, workers);
  }

  std::vector<std::vector<TokenLabel>> predicted(data.records.size());
  std::vector<std::vector<TokenLabel>> truth(data.records.size());
  for (std::size_t i = 0; i < data.records.size(); ++i) {
    predicted[i] = out.results[i].labels;
    truth[i] = data.records[i].labels;
  }

  MetricReport& rep = out.report;
  rep.dataset = data.source_name;
  rep.messages = data.records.size();
  rep.message_level_accuracy = message_level_accuracy(predicted, truth, &rep.message_correct);

  std::map<std::string, std::vector<int>> truth_map;
  for (std::size_t i = 0; i < data.records.size(); ++i)
    truth_map[data.records[i].truth_template].push_back(static_cast<int>(i));
  const std::map<std::string, std::vector<int>> pred_map = group_by_template(out.results);

  std::vector<std::vector<int>> pred_groups, truth_groups;
  for (const auto& [key, members] : pred_map) pred_groups.push_back(members);
  for (const auto& [key, members] : truth_map) truth_groups.push_back(members);
  rep.predicted_groups = pred_groups.size();
  rep.truth_groups = truth_groups.size();
  rep.group_accuracy = group_accuracy(pred_groups, truth_groups, &rep.group_correct);
  return out;
}

inline nlohmann::json metric_report_to_json(const MetricReport& r) {
  return {{"dataset", r.dataset},
          {"messages", r.messages},
          {"message_correct", r.message_correct},
          {"group_correct", r.group_correct},
          {"predicted_groups", r.predicted_groups},
          {"truth_groups", r.truth_groups},
          {"group_accuracy", r.group_accuracy},
          {"message_level_accuracy", r.message_level_accuracy}};
}

inline std::string metric_report_text(const MetricReport& r) {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "%-12s  messages %6zu  GA %.4f (%zu/%zu)  MLA %.4f (%zu/%zu)  groups %zu/%zu",
                r.dataset.c_str(), r.messages, r.group_accuracy, r.group_correct, r.messages,
                r.message_level_accuracy, r.message_correct, r.messages, r.predicted_groups,
                r.truth_groups);
  return std::string(buf);
}

}  // namespace uniparser
