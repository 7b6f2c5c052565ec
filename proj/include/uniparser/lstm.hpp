#pragma once

#include <utility>
#include <vector>

#include "uniparser/common.hpp"
#include "uniparser/linalg.hpp"

namespace uniparser {

enum class ScanDirection { Forward, Backward };

// Gate rows are stacked [input; forget; cell; output], each hidden_dim tall.
struct LstmCellParams {
  Matrix w_input;   // (4*hidden, input)
  Matrix w_hidden;  // (4*hidden, hidden)
  Vector bias;      // (4*hidden), forget block initialized to 1

  int input_dim() const { return static_cast<int>(w_input.cols()); }
  int hidden_dim() const { return static_cast<int>(w_hidden.cols()); }

  static LstmCellParams zeros(int input_dim, int hidden_dim) {
    LstmCellParams p;
    p.w_input = Matrix::Zero(4 * hidden_dim, input_dim);
    p.w_hidden = Matrix::Zero(4 * hidden_dim, hidden_dim);
    p.bias = Vector::Zero(4 * hidden_dim);
    return p;
  }
};

// Gradients share the parameter layout.
using LstmGradients = LstmCellParams;

// Per-step activations kept for the backward pass. Columns are batch lanes.
struct LstmCache {
  std::vector<Matrix> inputs;     // (E,B) per step, in scan order
  std::vector<Matrix> gates;      // (4H,B) post-activation [i;f;g;o]
  std::vector<Matrix> cell;       // (H,B)
  std::vector<Matrix> cell_tanh;  // (H,B)
  std::vector<Matrix> hidden;     // (H,B)
};

// Batched scan over a sequence of (E,B) input matrices, already ordered in
// scan order. Initial hidden and cell states are zero. Returns hidden
// states per step; fills cache when given.
inline std::vector<Matrix> lstm_scan(const LstmCellParams& p, const std::vector<Matrix>& inputs,
                                     LstmCache* cache = nullptr) {
  const int H = p.hidden_dim();
  if (inputs.empty()) throw DataError("lstm_scan: empty sequence");
  const auto B = inputs.front().cols();
  for (const Matrix& x : inputs)
    if (x.rows() != p.input_dim() || x.cols() != B)
      throw DataError("lstm_scan: input dimension mismatch");

  std::vector<Matrix> hiddens;
  hiddens.reserve(inputs.size());
  Matrix h_prev = Matrix::Zero(H, B);
  Matrix c_prev = Matrix::Zero(H, B);
  if (cache) {
    cache->inputs = inputs;
    cache->gates.clear();
    cache->cell.clear();
    cache->cell_tanh.clear();
    cache->hidden.clear();
  }
  for (const Matrix& x : inputs) {
    Matrix a = p.w_input * x + p.w_hidden * h_prev;
    a.colwise() += p.bias;
    a.topRows(2 * H) = a.topRows(2 * H).unaryExpr([](double v) { return logistic(v); });
    a.middleRows(2 * H, H) = a.middleRows(2 * H, H).array().tanh();
    a.bottomRows(H) = a.bottomRows(H).unaryExpr([](double v) { return logistic(v); });

    Matrix c = a.middleRows(H, H).cwiseProduct(c_prev) + a.topRows(H).cwiseProduct(a.middleRows(2 * H, H));
    Matrix ct = c.array().tanh();
    Matrix h = a.bottomRows(H).cwiseProduct(ct);
    if (cache) {
      cache->gates.push_back(a);
      cache->cell.push_back(c);
      cache->cell_tanh.push_back(ct);
      cache->hidden.push_back(h);
    }
    hiddens.push_back(h);
    h_prev = std::move(h);
    c_prev = std::move(c);
  }
  return hiddens;
}

// Reverse-mode pass for lstm_scan. upstream[t] is dLoss/d hidden[t] in scan
// order. Accumulates parameter gradients into grads and returns dLoss/d
// input[t] in scan order.
inline std::vector<Matrix> lstm_scan_backward(const LstmCellParams& p, const LstmCache& cache,
                                              const std::vector<Matrix>& upstream,
                                              LstmGradients& grads) {
  const int H = p.hidden_dim();
  const std::size_t T = cache.inputs.size();
  if (upstream.size() != T) throw DataError("lstm_scan_backward: upstream length mismatch");
  const auto B = cache.inputs.front().cols();

  std::vector<Matrix> d_inputs(T);
  const Matrix zero_state = Matrix::Zero(H, B);
  Matrix dh_carry = Matrix::Zero(H, B);
  Matrix dc_carry = Matrix::Zero(H, B);
  Matrix da(4 * H, B);
  for (std::size_t t = T; t-- > 0;) {
    const Matrix& gates = cache.gates[t];
    const auto gi = gates.topRows(H);
    const auto gf = gates.middleRows(H, H);
    const auto gg = gates.middleRows(2 * H, H);
    const auto go = gates.bottomRows(H);
    const Matrix& ct = cache.cell_tanh[t];

    const Matrix dh = upstream[t] + dh_carry;
    const Matrix dc =
        dh.cwiseProduct(go).cwiseProduct(Matrix::Ones(H, B) - ct.cwiseProduct(ct)) + dc_carry;

    // d pre-activations via the saturations' local derivatives
    da.topRows(H) = dc.cwiseProduct(gg).cwiseProduct(gi).cwiseProduct(Matrix::Ones(H, B) - gi);
    const Matrix& c_prev = (t == 0) ? zero_state : cache.cell[t - 1];
    da.middleRows(H, H) =
        dc.cwiseProduct(c_prev).cwiseProduct(gf).cwiseProduct(Matrix::Ones(H, B) - gf);
    da.middleRows(2 * H, H) =
        dc.cwiseProduct(gi).cwiseProduct(Matrix::Ones(H, B) - gg.cwiseProduct(gg));
    da.bottomRows(H) = dh.cwiseProduct(ct).cwiseProduct(go).cwiseProduct(Matrix::Ones(H, B) - go);

    const Matrix& h_prev_ref = (t == 0) ? zero_state : cache.hidden[t - 1];
    grads.w_input.noalias() += da * cache.inputs[t].transpose();
    grads.w_hidden.noalias() += da * h_prev_ref.transpose();
    grads.bias += da.rowwise().sum();

    d_inputs[t] = p.w_input.transpose() * da;
    dh_carry = p.w_hidden.transpose() * da;
    dc_carry = dc.cwiseProduct(gf);
  }
  return d_inputs;
}

namespace detail {
inline std::vector<Matrix> as_columns(const std::vector<Vector>& xs, bool reversed) {
  std::vector<Matrix> out;
  out.reserve(xs.size());
  if (reversed)
    for (auto it = xs.rbegin(); it != xs.rend(); ++it) out.push_back(*it);
  else
    for (const Vector& x : xs) out.push_back(x);
  return out;
}
}  // namespace detail

// Single-sequence scan. direction Forward: h_i covers x_1..x_i. direction
// Backward: the scan runs right to left and h_i covers x_T..x_i; outputs
// stay aligned with input positions.
inline std::vector<Vector> lstm_forward(const LstmCellParams& p, const std::vector<Vector>& inputs,
                                        ScanDirection direction) {
  const bool rev = direction == ScanDirection::Backward;
  const auto hiddens = lstm_scan(p, detail::as_columns(inputs, rev));
  std::vector<Vector> out(inputs.size());
  for (std::size_t t = 0; t < hiddens.size(); ++t)
    out[rev ? inputs.size() - 1 - t : t] = hiddens[t].col(0);
  return out;
}

// Exact reverse-mode gradients for lstm_forward; runs the forward pass
// internally to populate the cache. upstream[i] is dLoss/d h_i (aligned to
// input positions). Returns parameter gradients and dLoss/d x_i.
inline std::pair<LstmGradients, std::vector<Vector>> lstm_backward(
    const LstmCellParams& p, const std::vector<Vector>& inputs, ScanDirection direction,
    const std::vector<Vector>& upstream) {
  if (upstream.size() != inputs.size())
    throw DataError("lstm_backward: upstream length mismatch");
  const bool rev = direction == ScanDirection::Backward;
  LstmCache cache;
  lstm_scan(p, detail::as_columns(inputs, rev), &cache);
  const auto up_cols = detail::as_columns(upstream, rev);
  LstmGradients grads = LstmGradients::zeros(p.input_dim(), p.hidden_dim());
  const auto d_inputs = lstm_scan_backward(p, cache, up_cols, grads);
  std::vector<Vector> dx(inputs.size());
  for (std::size_t t = 0; t < d_inputs.size(); ++t)
    dx[rev ? inputs.size() - 1 - t : t] = d_inputs[t].col(0);
  return {std::move(grads), std::move(dx)};
}

}  // namespace uniparser
