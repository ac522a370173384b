#pragma once

// Joint NER + relation classifier:
//
//   token ids -> embedding -> BiGRU -> dense -> CRF            (NER branch)
//                               \-> masked sum over the entity pair
//                                   ++ head/tail type embeddings
//                                   -> dense -> softmax        (RE branch)
//
// trained on alpha * CRF NLL + beta * cross-entropy, with hand-written
// backpropagation for every parameter array.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "tijere/corpus.hpp"
#include "tijere/crf.hpp"
#include "tijere/gru.hpp"
#include "tijere/mslr.hpp"
#include "tijere/random.hpp"

namespace tijere::model {

struct ModelConfig {
  std::size_t vocab_size = 2;
  std::size_t embed_dim = 768;
  std::size_t hidden_dim = 256;  // per direction
  std::size_t num_ner_labels = 1;
  std::size_t num_relations = 1;
  std::size_t num_entity_types = 1;
  double dropout = 0.3;
  bool use_entity_mask = true;
  bool use_entity_type = true;
  double alpha = 1.0;
  double beta = 1.0;
  bool bio_constraints = false;
  bool freeze_embeddings = false;

  std::size_t entity_type_dim() const { return 2 * hidden_dim; }
  std::size_t concat_dim() const {
    return 2 * hidden_dim + (use_entity_type ? 2 * entity_type_dim() : 0);
  }
  // Throws std::invalid_argument.
  void validate() const;

  nlohmann::json to_json() const;
  static ModelConfig from_json(const nlohmann::json& doc);
  bool operator==(const ModelConfig&) const = default;
};

// Mutable view of one parameter array, used by the optimizer, gradient
// checks and checkpoints.
struct ArrayView {
  std::string_view name;
  double* data;
  Eigen::Index rows;
  Eigen::Index cols;

  Eigen::Index size() const { return rows * cols; }
};

struct ConstArrayView {
  std::string_view name;
  const double* data;
  Eigen::Index rows;
  Eigen::Index cols;

  Eigen::Index size() const { return rows * cols; }
};

struct ModelParams {
  Matrix token_embedding;  // vocab x d
  GruWeights forward_gru;
  GruWeights backward_gru;
  Matrix type_embedding;  // types x 2h (empty without entity types)
  Matrix ner_weight;      // L_ner x 2h
  Vector ner_bias;
  Matrix transitions;  // (L_ner + 2) x (L_ner + 2)
  Matrix re_weight;    // L_re x concat_dim
  Vector re_bias;

  // Uniform(-0.1, 0.1) embeddings, Xavier-uniform matrices, zero biases and
  // transitions. Each array draws from its own stream derived from `seed`.
  static ModelParams initialize(const ModelConfig& config, std::uint64_t seed);
  static ModelParams zeros(const ModelConfig& config);
  ModelParams zeros_like() const;

  std::vector<ArrayView> arrays();
  std::vector<ConstArrayView> arrays() const;
  std::size_t parameter_count() const;
  bool all_finite() const;
  // Throws std::invalid_argument on any shape mismatch.
  void check_shapes(const ModelConfig& config) const;
};

// ---------------------------------------------------------------------------
// Layer operations

// Throws IdOutOfRange.
Matrix embed(const Matrix& table, std::span<const int> token_ids);

Matrix ner_logits(const Matrix& encoded, const Matrix& weight,
                  const Vector& bias);

// Sum of encoder rows weighted by the mask.
Vector entity_pool(const Matrix& encoded, std::span<const std::uint8_t> mask);

// [pooled ; E(head) ; E(tail)], or just `pooled` when `type_embedding` is
// null.
Vector relation_features(const Vector& pooled, const Matrix* type_embedding,
                         int head_type, int tail_type);

Vector softmax(const Vector& logits);

struct RelationOutput {
  Vector logits;
  Vector probs;
};

RelationOutput relation_logits_and_probs(const Vector& features,
                                         const Matrix& weight,
                                         const Vector& bias);

inline double joint_loss(double ner_nll, double re_ce, double alpha,
                         double beta) {
  return alpha * ner_nll + beta * re_ce;
}

// ---------------------------------------------------------------------------
// Forward / backward

enum class Mode { kTrain, kEval };

struct InstanceTrace {
  std::vector<int> token_ids;
  std::vector<std::uint8_t> attention;
  std::vector<std::uint8_t> pool_mask;
  Matrix embedded;         // after dropout
  Matrix embed_dropout;    // scaled keep mask, empty without dropout
  GruTrace forward_gru;
  GruTrace backward_gru;
  Matrix encoded;          // after dropout
  Matrix encoded_dropout;  // scaled keep mask, empty without dropout
  Matrix emissions;
  std::vector<int> ner_labels;  // empty when unlabeled
  Vector features;
  Vector probs;
  int head_type = 0;
  int tail_type = 0;
  int relation_label = mslr::kUnlabeled;
  mslr::Origin origin;
};

struct ForwardTrace {
  ModelConfig config;
  Matrix transitions;  // effective (with constraint mask)
  std::vector<InstanceTrace> rows;
  std::size_t ner_rows = 0;
  std::size_t re_rows = 0;
};

struct ForwardResult {
  double ner_nll = 0.0;  // mean over rows with NER labels
  double re_ce = 0.0;    // mean over rows with relation labels
  double joint = 0.0;
  std::vector<double> row_ner_nll;
  std::vector<double> row_re_ce;
  std::vector<std::vector<int>> decoded;
  std::vector<Vector> relation_probs;
  ForwardTrace trace;
};

class JointModel {
 public:
  JointModel(ModelConfig config, ModelParams params,
             std::optional<Matrix> transition_mask = std::nullopt);

  static JointModel create(const ModelConfig& config, std::uint64_t seed,
                           std::optional<Matrix> transition_mask = std::nullopt);

  const ModelConfig& config() const { return config_; }
  ModelParams& params() { return params_; }
  const ModelParams& params() const { return params_; }
  Matrix effective_transitions() const;

  // Train mode draws dropout masks from `rng`; eval mode is deterministic.
  // Losses cover only labeled rows.
  ForwardResult forward(const mslr::Batch& batch, Mode mode,
                        Rng* rng = nullptr) const;

  // Gradients of the joint loss recorded in `trace`.
  ModelParams backward(const ForwardTrace& trace) const;

  // NER-only inference over the real tokens of one sentence.
  std::vector<int> tag(std::span<const int> token_ids) const;

  // Relation probabilities for one (possibly unlabeled) row.
  Vector classify(const mslr::MslrInstance& instance) const;

  // Eval-mode BiGRU output for one unpadded sentence. Together with
  // decode_encoded and classify_encoded this lets inference encode a
  // sentence once and score every candidate pair against it.
  Matrix encode(std::span<const int> token_ids) const;
  std::vector<int> decode_encoded(const Matrix& encoded) const;
  // Throws EmptyMask when the entity mask is on and `entity_mask` is empty.
  Vector classify_encoded(const Matrix& encoded,
                          std::span<const std::uint8_t> entity_mask,
                          int head_type, int tail_type) const;

 private:
  Matrix encode_tokens(std::span<const int> ids,
                       std::span<const std::uint8_t> mask, bool train,
                       Rng* rng, InstanceTrace* trace) const;

  ModelConfig config_;
  ModelParams params_;
  std::optional<Matrix> transition_mask_;
};

// ---------------------------------------------------------------------------
// Checkpoints and embedding files

// Everything needed to run a trained model on new text.
struct ModelBundle {
  ModelConfig config;
  ModelParams params;
  mslr::Vocabulary vocab;
  corpus::TypeInventory inventory;

  JointModel make_model() const;
};

// JSON container: {"format": "tijere-checkpoint", "version": 1, "config",
// "vocab", "inventory", "params": {name: {"shape": [r, c], "data": [...]}}}.
std::string checkpoint_to_string(const ModelBundle& bundle);
ModelBundle checkpoint_from_string(std::string_view text);
void save_checkpoint(const ModelBundle& bundle,
                     const std::filesystem::path& path);
// Throws CheckpointError on format or shape problems.
ModelBundle load_checkpoint(const std::filesystem::path& path);

// Text file: a header line "tijere-embeddings 1 <vocab hash hex> <rows> <dim>"
// followed by one whitespace-separated vector per token id.
struct EmbeddingFile {
  std::uint64_t vocab_hash = 0;
  Matrix vectors;
};

EmbeddingFile load_embeddings(const std::filesystem::path& path);
void save_embeddings(const std::filesystem::path& path,
                     const mslr::Vocabulary& vocab, const Matrix& vectors);
// Copies vectors into the token table; throws CheckpointError when the hash,
// row count or dimension disagree.
void apply_embeddings(ModelParams& params, const EmbeddingFile& file,
                      const mslr::Vocabulary& vocab);

}  // namespace tijere::model
