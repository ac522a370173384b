#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tijere/model.hpp"
#include "tijere/train.hpp"

namespace tijere::cli {

enum ExitCode : int { kOk = 0, kDataError = 1, kUsageError = 2, kRuntimeError = 3 };

// Everything a subcommand needs, resolved as defaults < config file < flags.
struct RunConfig {
  std::string command;
  std::uint64_t seed = 42;
  model::ModelConfig model;
  train::TrainConfig train;
  std::size_t workers = 1;
  bool strict = false;
  bool ontology_filter = false;
  double confidence_floor = 0.0;
  bool gold_pairs = true;
  bool predicted_pairs = false;
  bool gold_spans = false;
  std::string format = "json";
  std::optional<std::string> dataset;
  std::optional<std::string> ontology;
  std::optional<std::string> config_file;
  std::optional<std::string> checkpoint;
  std::optional<std::string> input;
  std::optional<std::string> embeddings;
  std::optional<std::string> out;
  // Config-file keys that were recognized but have no effect here.
  std::vector<std::string> ignored_keys;

  nlohmann::json to_json() const;
};

// Applies a training config file. Accepts the hyperparameter table keys
// (batch_size, dropout, epsilon, learning_rate, hidden_size, embedding_size,
// epochs, optimizer, weight_decay) plus this tool's own option names.
// Throws std::invalid_argument on unknown keys or bad values.
void apply_config(RunConfig& config, const nlohmann::json& doc);

// Runs the tool with argv-style arguments (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace tijere::cli
