#pragma once

// Span/type NER metrics, triple-level RE metrics and the four-way
// entity-mask / entity-type ablation.

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tijere/corpus.hpp"
#include "tijere/extract.hpp"
#include "tijere/model.hpp"
#include "tijere/train.hpp"

namespace tijere::eval {

struct SpanPrediction {
  std::size_t sentence = 0;
  std::size_t start = 0;
  std::size_t end = 0;
  std::string type;

  auto operator<=>(const SpanPrediction&) const = default;
};

struct TriplePrediction {
  std::size_t sentence = 0;
  std::size_t head_start = 0;
  std::size_t head_end = 0;
  std::size_t tail_start = 0;
  std::size_t tail_end = 0;
  std::string relation;

  auto operator<=>(const TriplePrediction&) const = default;
};

// One relation decision on a pair that has a gold label (noRelation
// included).
struct ClassifiedPair {
  TriplePrediction gold;  // relation may be noRelation
  std::string predicted;
};

struct ClassReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t true_positives = 0;
  std::size_t predicted = 0;
  std::size_t gold = 0;  // support
};

struct MetricReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::optional<double> accuracy;
  std::size_t true_positives = 0;
  std::size_t predicted = 0;
  std::size_t gold = 0;
  std::map<std::string, ClassReport> per_class;

  nlohmann::json to_json() const;
};

// 2PR / (P + R), 0 when P + R = 0.
double f1_score(double precision, double recall);

// Lenient BIO decode of one sentence's labels.
std::vector<SpanPrediction> decode_spans(std::span<const std::string> labels,
                                         std::size_t sentence = 0);

// Micro exact-match scores; predictions are matched as a multiset. P is 0
// when nothing is predicted, R is 0 when there is no gold.
MetricReport ner_metrics(std::span<const SpanPrediction> gold,
                         std::span<const SpanPrediction> predicted);

// noRelation entries are dropped from both sides before scoring.
MetricReport re_metrics(std::span<const TriplePrediction> gold,
                        std::span<const TriplePrediction> predicted);

// Same P/R/F1 as above plus accuracy over every classified pair. With
// noRelation scored as a class, micro P = R = F1 = that accuracy.
MetricReport re_metrics(std::span<const ClassifiedPair> pairs);

// Fraction of positions whose labels agree. Throws std::invalid_argument on
// a length mismatch.
double token_accuracy(std::span<const std::vector<std::string>> gold,
                      std::span<const std::vector<std::string>> predicted);

// ---------------------------------------------------------------------------
// Model evaluation

struct EvalOptions {
  bool gold_pairs = true;        // classify the annotated relation pairs
  bool predicted_pairs = false;  // full extract pipeline on decoded spans
  extract::ExtractOptions extract;
  std::size_t workers = 1;
};

struct EvalReport {
  MetricReport ner;  // accuracy = token accuracy
  std::optional<MetricReport> re_gold_pairs;
  std::optional<MetricReport> re_predicted_pairs;
  std::size_t sentences = 0;
  std::vector<std::size_t> skipped;  // over max_len

  nlohmann::json to_json() const;
  std::string to_table() const;
};

EvalReport evaluate(const model::ModelBundle& bundle,
                    std::span<const corpus::AnnotatedSentence> sentences,
                    const EvalOptions& options = {});

// ---------------------------------------------------------------------------
// Ablation

struct AblationRow {
  std::string name;  // e.g. "mask-on_type-off"
  bool use_entity_mask = false;
  bool use_entity_type = false;
  EvalReport report;
  train::TrainingLog log;
};

struct AblationReport {
  std::string evaluated_on;  // "test", "validation" or "train"
  std::vector<AblationRow> rows;

  nlohmann::json to_json() const;
  std::string to_table() const;
};

std::string ablation_name(bool use_entity_mask, bool use_entity_type);

// Trains (F,F), (T,F), (F,T), (T,T) with identical seeds and data, scoring
// each best checkpoint on the test split (validation, then train, when the
// earlier splits are empty).
AblationReport run_ablation(std::span<const corpus::AnnotatedSentence> corpus,
                            const model::ModelConfig& model_config,
                            const train::TrainConfig& train_config,
                            const train::TrainOptions& train_options = {},
                            const EvalOptions& eval_options = {});

}  // namespace tijere::eval
