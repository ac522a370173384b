#pragma once

// Independent reference implementations used to check the library.

#include <cstdint>
#include <string>
#include <vector>

#include "tijere/model.hpp"

namespace tijere::testing {

using model::Matrix;
using model::Vector;

// Path score written straight from the chain definition.
double path_score_oracle(const Matrix& emissions, const Matrix& transitions,
                         const std::vector<int>& labels);

struct BruteForceCrf {
  double log_partition = 0.0;
  std::vector<int> best_path;
  double best_score = 0.0;
};

// Enumerates all L^T label paths.
BruteForceCrf brute_force_crf(const Matrix& emissions, const Matrix& transitions);

// One GRU step with scalar loops. Weight layout matches GruWeights.
std::vector<double> gru_step_oracle(const model::GruWeights& w,
                                    const std::vector<double>& x,
                                    const std::vector<double>& h_prev);

// Triple-loop product.
Matrix matmul_oracle(const Matrix& a, const Matrix& b);

struct ArrayCheck {
  std::string name;
  double max_rel_error = 0.0;
  double analytic = 0.0;  // at the worst element
  double numeric = 0.0;
  std::size_t elements = 0;
};

// Central differences of the joint loss for every element of every
// parameter array. The train-mode forward replays the same dropout masks by
// reseeding the generator with `dropout_seed` each time. Relative error is
// |a - n| / max(|a|, |n|, floor).
std::vector<ArrayCheck> finite_difference_check(const model::JointModel& net,
                                                const mslr::Batch& batch,
                                                std::uint64_t dropout_seed,
                                                double step = 1e-5,
                                                double floor = 1e-6);

}  // namespace tijere::testing
