#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "uniparser/common.hpp"
#include "uniparser/model.hpp"
#include "uniparser/vocab.hpp"

namespace uniparser {

namespace detail {

inline nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline nlohmann::json vector_to_json(const Vector& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

inline Matrix matrix_from_json(const nlohmann::json& j, Eigen::Index rows, Eigen::Index cols,
                               const std::string& name) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows)
    throw DataError("tensor " + name + ": expected " + std::to_string(rows) + " rows");
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const nlohmann::json& row = j[r];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw DataError("tensor " + name + ": expected " + std::to_string(cols) + " columns");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = row[c].get<double>();
  }
  return m;
}

inline Vector vector_from_json(const nlohmann::json& j, Eigen::Index size,
                               const std::string& name) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != size)
    throw DataError("tensor " + name + ": expected " + std::to_string(size) + " entries");
  Vector v(size);
  for (Eigen::Index i = 0; i < size; ++i) v(i) = j[i].get<double>();
  return v;
}

inline nlohmann::json lstm_to_json(const LstmCellParams& p) {
  return {{"w_input", matrix_to_json(p.w_input)},
          {"w_hidden", matrix_to_json(p.w_hidden)},
          {"bias", vector_to_json(p.bias)}};
}

inline LstmCellParams lstm_from_json(const nlohmann::json& j, int input_dim, int hidden_dim,
                                     const std::string& name) {
  LstmCellParams p;
  p.w_input = matrix_from_json(j.at("w_input"), 4 * hidden_dim, input_dim, name + ".w_input");
  p.w_hidden = matrix_from_json(j.at("w_hidden"), 4 * hidden_dim, hidden_dim, name + ".w_hidden");
  p.bias = vector_from_json(j.at("bias"), 4 * hidden_dim, name + ".bias");
  return p;
}

}  // namespace detail

inline nlohmann::json model_to_json(const ModelParameters& params) {
  const Architecture& a = params.arch;
  nlohmann::json j;
  j["format_version"] = 1;
  j["char_vocabulary"] = {{"printable", CharVocabulary::printable()},
                          {"oov_index", CharVocabulary::kOovIndex}};
  j["architecture"] = {{"d_emb", a.d_emb}, {"d_h", a.d_h}, {"k", a.k}};
  j["tensors"] = {{"embedding", detail::matrix_to_json(params.embedding)},
                  {"mask", detail::vector_to_json(params.mask_vector)},
                  {"pad", detail::vector_to_json(params.pad_vector)},
                  {"lstm_forward", detail::lstm_to_json(params.forward_lstm)},
                  {"lstm_backward", detail::lstm_to_json(params.backward_lstm)},
                  {"classifier",
                   {{"weight", detail::vector_to_json(params.classifier_weight)},
                    {"bias", detail::vector_to_json(params.classifier_bias)}}}};
  return j;
}

inline ModelParameters model_from_json(const nlohmann::json& j) {
  if (j.value("format_version", 0) != 1)
    throw DataError("unsupported model format_version");
  const nlohmann::json& arch = j.at("architecture");
  Architecture a;
  a.d_emb = arch.at("d_emb").get<int>();
  a.d_h = arch.at("d_h").get<int>();
  a.k = arch.at("k").get<int>();
  if (a.d_emb < 1 || a.d_h < 1 || a.k < 1) throw DataError("invalid architecture sizes");

  const nlohmann::json& vocab = j.at("char_vocabulary");
  if (vocab.at("printable").get<std::string>() != CharVocabulary::printable() ||
      vocab.at("oov_index").get<int>() != CharVocabulary::kOovIndex)
    throw DataError("model char vocabulary does not match this build");

  const nlohmann::json& t = j.at("tensors");
  ModelParameters p;
  p.arch = a;
  p.embedding = detail::matrix_from_json(t.at("embedding"), CharVocabulary::kSize, a.d_emb,
                                         "embedding");
  p.mask_vector = detail::vector_from_json(t.at("mask"), a.d_emb, "mask");
  p.pad_vector = detail::vector_from_json(t.at("pad"), a.d_emb, "pad");
  p.forward_lstm = detail::lstm_from_json(t.at("lstm_forward"), a.d_emb, a.d_h, "lstm_forward");
  p.backward_lstm = detail::lstm_from_json(t.at("lstm_backward"), a.d_emb, a.d_h, "lstm_backward");
  p.classifier_weight = detail::vector_from_json(t.at("classifier").at("weight"),
                                                 a.classifier_input_dim(), "classifier.weight");
  p.classifier_bias = detail::vector_from_json(t.at("classifier").at("bias"), 1,
                                               "classifier.bias");
  return p;
}

inline void save_model(const std::string& path, const ModelParameters& params) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open file for writing: " + path);
  // nlohmann keeps object keys sorted and prints shortest exact doubles, so
  // identical parameters serialize to identical bytes.
  out << model_to_json(params).dump(2) << '\n';
  if (!out) throw DataError("failed writing model file: " + path);
}

inline ModelParameters load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("invalid model file " + path + ": " + e.what());
  }
  try {
    return model_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw DataError("invalid model file " + path + ": " + e.what());
  }
}

}  // namespace uniparser
