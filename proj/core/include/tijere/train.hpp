#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tijere/corpus.hpp"
#include "tijere/model.hpp"
#include "tijere/mslr.hpp"

namespace tijere::train {

struct TrainConfig {
  std::array<double, 3> split_ratios = {0.70, 0.15, 0.15};
  std::uint64_t split_seed = 42;
  std::uint64_t shuffle_seed = 42;
  std::uint64_t init_seed = 42;  // parameter init and dropout
  double learning_rate = 1e-5;
  double epsilon = 1e-8;
  double weight_decay = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  std::size_t batch_size = 16;
  std::size_t epochs = 3;
  std::optional<double> clip_norm;
  std::size_t checkpoint_every = 0;  // epochs; 0 = only best and final
  std::size_t max_len = mslr::kDefaultMaxLen;
  std::size_t min_freq = 1;

  // Throws std::invalid_argument.
  void validate() const;
  nlohmann::json to_json() const;
  bool operator==(const TrainConfig&) const = default;
};

// ---------------------------------------------------------------------------
// Splitting

struct Split {
  std::vector<corpus::AnnotatedSentence> train;
  std::vector<corpus::AnnotatedSentence> validation;
  std::vector<corpus::AnnotatedSentence> test;
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> validation_indices;
  std::vector<std::size_t> test_indices;
};

// Sentence-level shuffle-and-cut. Validation and test sizes are
// floor(n * ratio); the remainder goes to train.
Split split(std::span<const corpus::AnnotatedSentence> corpus,
            const std::array<double, 3>& ratios, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Optimizer

struct AdamWConfig {
  double learning_rate = 1e-5;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double weight_decay = 0.01;
};

struct OptimizerState {
  model::ModelParams first_moment;
  model::ModelParams second_moment;
  std::uint64_t step = 0;

  static OptimizerState for_params(const model::ModelParams& params);
};

// p <- p * (1 - lr * wd) - lr * m_hat / (sqrt(v_hat) + eps). Arrays named in
// `frozen` are left untouched.
void adamw_step(model::ModelParams& params, const model::ModelParams& grads,
                OptimizerState& state, const AdamWConfig& config,
                std::span<const std::string_view> frozen = {});

// Rescales `grads` to global norm <= max_norm; returns the norm before.
double clip_gradients(model::ModelParams& grads, double max_norm);

// ---------------------------------------------------------------------------
// Training

struct EpochMetrics {
  double ner_loss = 0.0;
  double re_loss = 0.0;
  double joint_loss = 0.0;
  double ner_accuracy = 0.0;  // token level
  double re_accuracy = 0.0;
  std::size_t instances = 0;
};

struct EpochLog {
  std::size_t epoch = 0;  // 1-based
  EpochMetrics train;
  std::optional<EpochMetrics> validation;
  double seconds = 0.0;
};

struct TrainingLog {
  std::vector<EpochLog> epochs;

  // Wall-clock times are left out so that reruns produce identical files.
  nlohmann::json to_json() const;
  // Rows "epoch,split,metric,value".
  std::string to_csv() const;
};

struct TrainOptions {
  corpus::OntologySchema schema = corpus::OntologySchema::bundled();
  std::optional<std::filesystem::path> embeddings;
  // Directory for best.ckpt.json / final.ckpt.json / epoch checkpoints.
  std::optional<std::filesystem::path> output_dir;
  std::ostream* progress = nullptr;
};

struct TrainResult {
  model::ModelBundle final_model;
  model::ModelBundle best_model;
  std::size_t best_epoch = 0;
  std::optional<std::filesystem::path> best_checkpoint;
  TrainingLog log;
  std::vector<mslr::SkippedRecord> skipped;
  Split split;
};

// Loss/accuracy of `model` over instances in eval mode.
EpochMetrics evaluate_instances(const model::JointModel& model,
                                std::span<const mslr::MslrInstance> instances,
                                std::size_t batch_size);

// Trains on `train_set`, selecting the epoch with the lowest validation
// joint loss (train joint loss when there is no validation data). Size
// fields of `model_config` are filled in from the data.
TrainResult fit(std::span<const corpus::AnnotatedSentence> train_set,
                std::span<const corpus::AnnotatedSentence> validation_set,
                const corpus::TypeInventory& inventory,
                const model::ModelConfig& model_config,
                const TrainConfig& train_config,
                const TrainOptions& options = {});

// Splits `corpus` and calls fit on the train/validation parts.
TrainResult train_loop(std::span<const corpus::AnnotatedSentence> corpus,
                       const model::ModelConfig& model_config,
                       const TrainConfig& train_config,
                       const TrainOptions& options = {});

}  // namespace tijere::train
