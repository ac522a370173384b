#pragma once

// Multisequence labeling representation: one labeled copy of a sentence per
// relation, each carrying the full token sequence, the sentence's original
// BIO labels, an entity mask over the head and tail spans, and the (head,
// tail) entity-type pair. Also the token vocabulary and padded batching.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "tijere/corpus.hpp"

namespace tijere::mslr {

inline constexpr int kPadId = 0;
inline constexpr int kUnkId = 1;
inline constexpr std::string_view kPadToken = "<pad>";
inline constexpr std::string_view kUnkToken = "<unk>";

// Relation label of inference-time rows. The model never reads labels from
// rows carrying it.
inline constexpr int kUnlabeled = -1;

inline constexpr std::size_t kDefaultMaxLen = 256;

class Vocabulary {
 public:
  Vocabulary();
  // `tokens` excludes the two specials; ids start at 2.
  explicit Vocabulary(std::span<const std::string> tokens);

  // UNK for anything unknown.
  int id(std::string_view token) const;
  const std::string& token(int id) const { return tokens_.at(id); }
  bool contains(std::string_view token) const;
  std::size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }

  // FNV-1a over the id-ordered token list; identifies the vocabulary in
  // precomputed-embedding files.
  std::uint64_t hash() const;

  nlohmann::json to_json() const;
  static Vocabulary from_json(const nlohmann::json& doc);

  bool operator==(const Vocabulary& other) const {
    return tokens_ == other.tokens_;
  }

 private:
  std::vector<std::string> tokens_;
  std::map<std::string, int, std::less<>> index_;
};

// Tokens with frequency >= min_freq, ordered by frequency (descending) then
// lexicographically.
Vocabulary build_vocab(std::span<const corpus::AnnotatedSentence> corpus,
                       std::size_t min_freq = 1);

struct Origin {
  std::size_t sentence = 0;
  std::size_t relation = 0;

  bool operator==(const Origin&) const = default;
};

// Unencoded row produced by expansion.
struct MslrRecord {
  std::vector<std::string> tokens;
  std::vector<int> ner_labels;  // empty for inference rows
  std::vector<std::uint8_t> entity_mask;
  int head_type = 0;
  int tail_type = 0;
  int relation_label = kUnlabeled;
  Origin origin;
  corpus::EntitySpan head;
  corpus::EntitySpan tail;
};

struct MslrInstance {
  std::vector<int> token_ids;
  std::vector<std::uint8_t> attention_mask;
  std::vector<std::uint8_t> entity_mask;
  int head_type = 0;
  int tail_type = 0;
  std::vector<int> ner_labels;  // empty for inference rows
  int relation_label = kUnlabeled;
  Origin origin;
  std::size_t length = 0;  // real tokens; the rest is padding

  std::size_t width() const { return token_ids.size(); }
  bool has_ner_labels() const { return !ner_labels.empty(); }
  bool has_relation_label() const { return relation_label != kUnlabeled; }
  nlohmann::json to_json() const;
};

struct Batch {
  std::vector<MslrInstance> rows;  // all padded to `width`
  std::size_t width = 0;
  std::vector<std::size_t> lengths;

  std::size_t size() const { return rows.size(); }
};

// 1 on both spans, 0 elsewhere. Throws OverlapError on intersecting spans.
std::vector<std::uint8_t> make_entity_mask(std::size_t length,
                                           const corpus::EntitySpan& head,
                                           const corpus::EntitySpan& tail);

// One record per relation, in relation order. Throws DuplicatePairError when
// one ordered entity pair carries two relations.
std::vector<MslrRecord> expand(const corpus::AnnotatedSentence& sentence,
                               std::size_t sentence_index,
                               const corpus::TypeInventory& inventory);

std::vector<MslrRecord> expand_corpus(
    std::span<const corpus::AnnotatedSentence> corpus,
    const corpus::TypeInventory& inventory);

// Unlabeled row for classifying the pair (head, tail) at inference.
MslrRecord make_inference_record(std::span<const std::string> tokens,
                                 const corpus::EntitySpan& head,
                                 const corpus::EntitySpan& tail,
                                 const corpus::TypeInventory& inventory,
                                 Origin origin = {});

// Pads to `pad_to` (default max_len). Throws LengthError when the sentence is
// longer than max_len; nothing is truncated.
MslrInstance encode(const MslrRecord& record, const Vocabulary& vocab,
                    std::size_t max_len = kDefaultMaxLen,
                    std::optional<std::size_t> pad_to = std::nullopt);

// Re-pads an encoded row to `width` (>= its length).
MslrInstance repad(const MslrInstance& instance, std::size_t width);

// Token ids of the real (unpadded) positions.
std::vector<int> strip_padding(const MslrInstance& instance);

struct SkippedRecord {
  Origin origin;
  std::string reason;
};

struct EncodedSet {
  std::vector<MslrInstance> instances;
  std::vector<SkippedRecord> skipped;
};

// Encodes every record, reporting (and skipping) over-length ones.
EncodedSet encode_all(std::span<const MslrRecord> records,
                      const Vocabulary& vocab,
                      std::size_t max_len = kDefaultMaxLen);

// Groups instances into batches padded to each batch's longest row. With a
// seed, instance order is shuffled first.
std::vector<Batch> make_batches(std::span<const MslrInstance> instances,
                                std::size_t batch_size,
                                std::optional<std::uint64_t> shuffle_seed);

void write_jsonl(std::ostream& out, std::span<const MslrInstance> instances);

}  // namespace tijere::mslr
