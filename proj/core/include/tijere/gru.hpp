#pragma once

// Gated recurrent unit, one direction, with backpropagation through time.
//
//   z = sigmoid(Wz x + Uz h' + bz)          update gate
//   r = sigmoid(Wr x + Ur h' + br)          reset gate
//   n = tanh(Wn x + Un (r * h') + bn)       candidate
//   h = (1 - z) * n + z * h'
//
// Weights are stacked gate-wise in the order [update; reset; candidate].
// Steps whose mask is 0 leave the state untouched and emit a zero row.

#include <cstdint>
#include <span>
#include <vector>

#include "tijere/crf.hpp"

namespace tijere::model {

struct GruWeights {
  Matrix input;      // 3h x d
  Matrix recurrent;  // 3h x h
  Vector bias;       // 3h

  Eigen::Index hidden() const { return recurrent.cols(); }
  static GruWeights zeros(Eigen::Index input_dim, Eigen::Index hidden_dim);
};

struct GruTrace {
  std::vector<Eigen::Index> steps;  // positions in processing order
  Matrix prev;                      // state entering each step (k x h)
  Matrix update;                    // z
  Matrix reset;                     // r
  Matrix candidate;                 // n
};

// Runs over `inputs` (T x d) left-to-right, or right-to-left when `reverse`.
// Returns T x h.
Matrix gru_forward(const GruWeights& w, const Matrix& inputs,
                   std::span<const std::uint8_t> mask, bool reverse,
                   GruTrace* trace = nullptr);

// Accumulates parameter gradients into `grads` and input gradients into
// `d_inputs` (T x d) given d loss / d outputs (T x h).
void gru_backward(const GruWeights& w, const Matrix& inputs,
                  const GruTrace& trace, const Matrix& d_outputs,
                  GruWeights& grads, Matrix& d_inputs);

// Row t = [forward state at t ; backward state at t].
Matrix bigru(const GruWeights& forward, const GruWeights& backward,
             const Matrix& inputs, std::span<const std::uint8_t> mask);

}  // namespace tijere::model
