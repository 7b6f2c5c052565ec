#pragma once

#include <iostream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "uniparser/common.hpp"
#include "uniparser/csv.hpp"
#include "uniparser/labels.hpp"
#include "uniparser/tokenizer.hpp"

namespace uniparser {

struct RawRecord {
  int line_id = 0;
  std::string content;
  std::string template_text;
};

struct LabeledMessage {
  TokenizedMessage message;
  std::vector<TokenLabel> labels;  // one per token
  std::string truth_template;
  int line_id = 0;
};

// Messages sharing token count and first token are contrast-similar.
struct GroupKey {
  std::size_t token_count = 0;
  std::string first_token;

  auto operator<=>(const GroupKey&) const = default;
};

using GroupMap = std::map<GroupKey, std::vector<int>>;

struct LabeledDataset {
  std::string source_name;
  std::vector<LabeledMessage> records;
  GroupMap groups;
  std::vector<int> group_of;  // record index -> position in group order
  int skipped = 0;

  // groups in key order, as indexable lists (deterministic)
  std::vector<const std::vector<int>*> group_list() const {
    std::vector<const std::vector<int>*> out;
    out.reserve(groups.size());
    for (const auto& [key, members] : groups) out.push_back(&members);
    return out;
  }
};

inline GroupKey group_key_of(const TokenizedMessage& msg) {
  GroupKey key;
  key.token_count = msg.tokens.size();
  if (!msg.tokens.empty()) key.first_token = msg.tokens.front().text;
  return key;
}

// Partition record indices by (token count, first token), file order within
// each group. Fills dataset.groups and dataset.group_of.
inline void build_groups(LabeledDataset& dataset) {
  dataset.groups.clear();
  dataset.group_of.assign(dataset.records.size(), -1);
  for (int i = 0; i < static_cast<int>(dataset.records.size()); ++i)
    dataset.groups[group_key_of(dataset.records[i].message)].push_back(i);
  int g = 0;
  for (const auto& [key, members] : dataset.groups) {
    for (int idx : members) dataset.group_of[idx] = g;
    ++g;
  }
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && is_separator(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_separator(s.back())) s.remove_suffix(1);
  return s;
}

// Loads a loghub-style structured CSV. Rows whose template fails to align
// are skipped and reported as "SKIP <line_id>: <reason>" on diag.
inline LabeledDataset load_dataset(const std::filesystem::path& path,
                                   const std::string& content_column = "Content",
                                   const std::string& template_column = "EventTemplate",
                                   std::ostream& diag = std::cerr) {
  const CsvTable table = read_csv(path);
  const std::size_t content_col = table.column(content_column);
  const std::size_t template_col = table.column(template_column);
  const bool has_line_id = table.has_column("LineId");
  const std::size_t line_col = has_line_id ? table.column("LineId") : 0;

  LabeledDataset dataset;
  {
    auto parent = path.parent_path().filename().string();
    dataset.source_name = parent.empty() ? path.stem().string() : parent;
  }

  int row_number = 0;
  for (const auto& row : table.rows) {
    ++row_number;
    if (content_col >= row.size() || template_col >= row.size()) {
      dataset.skipped += 1;
      diag << "SKIP " << row_number << ": short row\n";
      continue;
    }
    LabeledMessage rec;
    rec.line_id = row_number;
    if (has_line_id && line_col < row.size()) {
      try {
        rec.line_id = std::stoi(row[line_col]);
      } catch (const std::exception&) {
      }
    }
    const std::string content{trim(row[content_col])};
    rec.truth_template = std::string(trim(row[template_col]));
    if (content.empty()) {
      dataset.skipped += 1;
      diag << "SKIP " << rec.line_id << ": empty content\n";
      continue;
    }
    rec.message = tokenize(content);
    try {
      rec.labels = derive_token_labels(rec.message, rec.truth_template);
    } catch (const AlignmentError& e) {
      dataset.skipped += 1;
      diag << "SKIP " << rec.line_id << ": " << e.what() << "\n";
      continue;
    }
    dataset.records.push_back(std::move(rec));
  }
  build_groups(dataset);
  return dataset;
}

}  // namespace uniparser
