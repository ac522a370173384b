#pragma once

// Linear-chain CRF over NER tags with virtual START/STOP states.
//
// The transition matrix has shape (L + 2) x (L + 2), indexed [from][to];
// row/column L is START and L + 1 is STOP. A path y_0..y_{T-1} scores
//   trans[START][y_0] + sum_t emit[t][y_t] + sum_t trans[y_{t-1}][y_t]
//   + trans[y_{T-1}][STOP].

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace tijere::model {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline Eigen::Index crf_start(Eigen::Index num_labels) { return num_labels; }
inline Eigen::Index crf_stop(Eigen::Index num_labels) { return num_labels + 1; }

// Stable log(sum(exp(v))); -inf for an empty or all -inf input.
double log_sum_exp(const Eigen::Ref<const Vector>& v);

// Dense-chain primitives: every row of `emissions` is a real step.
double crf_log_partition(const Matrix& emissions, const Matrix& transitions);
double crf_path_score(const Matrix& emissions, const Matrix& transitions,
                      std::span<const int> labels);
std::vector<int> crf_viterbi(const Matrix& emissions, const Matrix& transitions);

struct CrfGradient {
  double nll = 0.0;
  Matrix emissions;    // d nll / d emissions
  Matrix transitions;  // d nll / d transitions
};

// Negative log-likelihood of `labels` and its gradient, via forward-backward.
CrfGradient crf_nll_gradient(const Matrix& emissions, const Matrix& transitions,
                             std::span<const int> labels);

// Masked variants: steps with mask 0 are dropped from the chain.
double crf_nll(const Matrix& logits, std::span<const int> labels,
               std::span<const std::uint8_t> mask, const Matrix& transitions);

// Masked positions come back as tag 0.
std::vector<int> crf_decode(const Matrix& logits,
                            std::span<const std::uint8_t> mask,
                            const Matrix& transitions);

// Additive transition mask that forbids O -> I-T, B-T/I-T -> I-U (U != T)
// and START -> I-T: 0 where allowed, -inf where forbidden.
Matrix bio_transition_mask(const std::vector<std::string>& tags);

}  // namespace tijere::model
