#include <benchmark/benchmark.h>

#include <vector>

#include "tijere/crf.hpp"
#include "tijere/random.hpp"

using namespace tijere;
using model::Matrix;

namespace {

// 13 entity types -> 27 BIO tags.
constexpr Eigen::Index kLabels = 27;

Matrix random_matrix(Rng& rng, Eigen::Index r, Eigen::Index c) {
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(-1.0, 1.0);
  return m;
}

struct Chain {
  Matrix emissions;
  Matrix transitions;
  std::vector<int> labels;

  explicit Chain(Eigen::Index length) {
    Rng rng(length);
    emissions = random_matrix(rng, length, kLabels);
    transitions = random_matrix(rng, kLabels + 2, kLabels + 2);
    labels.resize(static_cast<std::size_t>(length));
    for (auto& y : labels) y = static_cast<int>(rng.below(kLabels));
  }
};

void BM_LogPartition(benchmark::State& state) {
  const Chain c(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(model::crf_log_partition(c.emissions, c.transitions));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_Viterbi(benchmark::State& state) {
  const Chain c(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(model::crf_viterbi(c.emissions, c.transitions));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_NllGradient(benchmark::State& state) {
  const Chain c(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(model::crf_nll_gradient(c.emissions, c.transitions, c.labels));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_LogPartition)->RangeMultiplier(4)->Range(16, 256);
BENCHMARK(BM_Viterbi)->RangeMultiplier(4)->Range(16, 256);
BENCHMARK(BM_NllGradient)->RangeMultiplier(4)->Range(16, 256);
