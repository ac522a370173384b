#include "tijere/crf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tijere::model {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

Matrix gather_rows(const Matrix& m, std::span<const std::uint8_t> mask) {
  Eigen::Index count = 0;
  for (auto v : mask) count += v ? 1 : 0;
  Matrix out(count, m.cols());
  Eigen::Index r = 0;
  for (std::size_t t = 0; t < mask.size(); ++t) {
    if (mask[t]) out.row(r++) = m.row(static_cast<Eigen::Index>(t));
  }
  return out;
}

std::vector<int> gather(std::span<const int> v,
                        std::span<const std::uint8_t> mask) {
  std::vector<int> out;
  for (std::size_t t = 0; t < mask.size(); ++t) {
    if (mask[t]) out.push_back(v[t]);
  }
  return out;
}

// alpha(t, j): log-sum of all prefixes ending in j at step t.
Matrix forward_scores(const Matrix& e, const Matrix& trans) {
  const Eigen::Index T = e.rows(), L = e.cols();
  Matrix alpha(T, L);
  for (Eigen::Index j = 0; j < L; ++j) {
    alpha(0, j) = trans(crf_start(L), j) + e(0, j);
  }
  Vector scratch(L);
  for (Eigen::Index t = 1; t < T; ++t) {
    for (Eigen::Index j = 0; j < L; ++j) {
      for (Eigen::Index i = 0; i < L; ++i) {
        scratch(i) = alpha(t - 1, i) + trans(i, j);
      }
      alpha(t, j) = log_sum_exp(scratch) + e(t, j);
    }
  }
  return alpha;
}

// beta(t, i): log-sum of all suffixes after step t given y_t = i.
Matrix backward_scores(const Matrix& e, const Matrix& trans) {
  const Eigen::Index T = e.rows(), L = e.cols();
  Matrix beta(T, L);
  for (Eigen::Index i = 0; i < L; ++i) beta(T - 1, i) = trans(i, crf_stop(L));
  Vector scratch(L);
  for (Eigen::Index t = T - 2; t >= 0; --t) {
    for (Eigen::Index i = 0; i < L; ++i) {
      for (Eigen::Index j = 0; j < L; ++j) {
        scratch(j) = trans(i, j) + e(t + 1, j) + beta(t + 1, j);
      }
      beta(t, i) = log_sum_exp(scratch);
    }
  }
  return beta;
}

double safe_exp(double log_value) {
  return log_value == kNegInf ? 0.0 : std::exp(log_value);
}

}  // namespace

double log_sum_exp(const Eigen::Ref<const Vector>& v) {
  if (v.size() == 0) return kNegInf;
  const double m = v.maxCoeff();
  if (m == kNegInf) return kNegInf;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) sum += safe_exp(v(i) - m);
  return m + std::log(sum);
}

double crf_log_partition(const Matrix& emissions, const Matrix& transitions) {
  const Eigen::Index L = emissions.cols();
  if (emissions.rows() == 0) return transitions(crf_start(L), crf_stop(L));
  const Matrix alpha = forward_scores(emissions, transitions);
  Vector last(L);
  for (Eigen::Index j = 0; j < L; ++j) {
    last(j) = alpha(alpha.rows() - 1, j) + transitions(j, crf_stop(L));
  }
  return log_sum_exp(last);
}

double crf_path_score(const Matrix& emissions, const Matrix& transitions,
                      std::span<const int> labels) {
  const Eigen::Index L = emissions.cols();
  if (labels.empty()) return transitions(crf_start(L), crf_stop(L));
  double score = transitions(crf_start(L), labels[0]);
  for (std::size_t t = 0; t < labels.size(); ++t) {
    score += emissions(static_cast<Eigen::Index>(t), labels[t]);
    if (t > 0) score += transitions(labels[t - 1], labels[t]);
  }
  return score + transitions(labels.back(), crf_stop(L));
}

std::vector<int> crf_viterbi(const Matrix& emissions,
                             const Matrix& transitions) {
  const Eigen::Index T = emissions.rows(), L = emissions.cols();
  if (T == 0) return {};
  Matrix score(T, L);
  Eigen::MatrixXi back(T, L);
  for (Eigen::Index j = 0; j < L; ++j) {
    score(0, j) = transitions(crf_start(L), j) + emissions(0, j);
  }
  for (Eigen::Index t = 1; t < T; ++t) {
    for (Eigen::Index j = 0; j < L; ++j) {
      double best = kNegInf;
      int best_i = 0;
      // Strict comparison keeps the lowest id on ties.
      for (Eigen::Index i = 0; i < L; ++i) {
        const double s = score(t - 1, i) + transitions(i, j);
        if (s > best) {
          best = s;
          best_i = static_cast<int>(i);
        }
      }
      score(t, j) = best + emissions(t, j);
      back(t, j) = best_i;
    }
  }
  double best = kNegInf;
  int best_last = 0;
  for (Eigen::Index j = 0; j < L; ++j) {
    const double s = score(T - 1, j) + transitions(j, crf_stop(L));
    if (s > best) {
      best = s;
      best_last = static_cast<int>(j);
    }
  }
  std::vector<int> path(static_cast<std::size_t>(T));
  path.back() = best_last;
  for (Eigen::Index t = T - 1; t > 0; --t) {
    path[static_cast<std::size_t>(t - 1)] =
        back(t, path[static_cast<std::size_t>(t)]);
  }
  return path;
}

CrfGradient crf_nll_gradient(const Matrix& emissions, const Matrix& transitions,
                             std::span<const int> labels) {
  const Eigen::Index T = emissions.rows(), L = emissions.cols();
  CrfGradient g;
  g.emissions = Matrix::Zero(T, L);
  g.transitions = Matrix::Zero(transitions.rows(), transitions.cols());
  if (T == 0) return g;

  const Matrix alpha = forward_scores(emissions, transitions);
  const Matrix beta = backward_scores(emissions, transitions);
  Vector last(L);
  for (Eigen::Index j = 0; j < L; ++j) {
    last(j) = alpha(T - 1, j) + transitions(j, crf_stop(L));
  }
  const double log_z = log_sum_exp(last);
  // Rounding can leave a certain path a few ulps below zero.
  g.nll = std::max(log_z - crf_path_score(emissions, transitions, labels), 0.0);

  for (Eigen::Index t = 0; t < T; ++t) {
    for (Eigen::Index j = 0; j < L; ++j) {
      g.emissions(t, j) = safe_exp(alpha(t, j) + beta(t, j) - log_z);
    }
  }
  for (Eigen::Index j = 0; j < L; ++j) {
    g.transitions(crf_start(L), j) = g.emissions(0, j);
    g.transitions(j, crf_stop(L)) = g.emissions(T - 1, j);
  }
  for (Eigen::Index t = 1; t < T; ++t) {
    for (Eigen::Index i = 0; i < L; ++i) {
      for (Eigen::Index j = 0; j < L; ++j) {
        g.transitions(i, j) +=
            safe_exp(alpha(t - 1, i) + transitions(i, j) + emissions(t, j) +
                     beta(t, j) - log_z);
      }
    }
  }

  // Subtract the gold path's feature counts.
  g.transitions(crf_start(L), labels[0]) -= 1.0;
  for (std::size_t t = 0; t < labels.size(); ++t) {
    g.emissions(static_cast<Eigen::Index>(t), labels[t]) -= 1.0;
    if (t > 0) g.transitions(labels[t - 1], labels[t]) -= 1.0;
  }
  g.transitions(labels.back(), crf_stop(L)) -= 1.0;
  return g;
}

double crf_nll(const Matrix& logits, std::span<const int> labels,
               std::span<const std::uint8_t> mask, const Matrix& transitions) {
  const Matrix e = gather_rows(logits, mask);
  const std::vector<int> y = gather(labels, mask);
  if (y.empty()) return 0.0;
  const double nll = crf_log_partition(e, transitions) -
                     crf_path_score(e, transitions, y);
  return std::max(nll, 0.0);
}

std::vector<int> crf_decode(const Matrix& logits,
                            std::span<const std::uint8_t> mask,
                            const Matrix& transitions) {
  const std::vector<int> path =
      crf_viterbi(gather_rows(logits, mask), transitions);
  std::vector<int> out(mask.size(), 0);
  std::size_t k = 0;
  for (std::size_t t = 0; t < mask.size(); ++t) {
    if (mask[t]) out[t] = path[k++];
  }
  return out;
}

Matrix bio_transition_mask(const std::vector<std::string>& tags) {
  const auto L = static_cast<Eigen::Index>(tags.size());
  Matrix mask = Matrix::Zero(L + 2, L + 2);
  auto type_of = [&](Eigen::Index k) -> std::string {
    const auto& tag = tags[static_cast<std::size_t>(k)];
    return tag.size() > 2 ? tag.substr(2) : std::string();
  };
  auto is_inside = [&](Eigen::Index k) {
    return tags[static_cast<std::size_t>(k)].rfind("I-", 0) == 0;
  };
  for (Eigen::Index j = 0; j < L; ++j) {
    if (!is_inside(j)) continue;
    mask(crf_start(L), j) = kNegInf;
    for (Eigen::Index i = 0; i < L; ++i) {
      const bool continues =
          tags[static_cast<std::size_t>(i)] != "O" && type_of(i) == type_of(j);
      if (!continues) mask(i, j) = kNegInf;
    }
  }
  return mask;
}

}  // namespace tijere::model
