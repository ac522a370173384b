#pragma once

// Corpus model for joint entity/relation annotation: parsing, structural
// validation, the ontology (relation domain/range) schema, type inventories,
// and distribution statistics.

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "tijere/errors.hpp"

namespace tijere::corpus {

inline constexpr std::string_view kNoRelation = "noRelation";
inline constexpr std::string_view kOutsideTag = "O";

struct EntityType {
  std::string name;
  int id = 0;
};

struct RelationType {
  std::string name;
  int id = 0;
  bool is_no_relation = false;
};

// Token-level span, end-exclusive.
struct EntitySpan {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string type;
  std::string surface;

  std::size_t length() const { return end - start; }
  bool overlaps(const EntitySpan& other) const {
    return start < other.end && other.start < end;
  }
  bool operator==(const EntitySpan&) const = default;
};

struct RelationInstance {
  std::size_t head_index = 0;
  std::size_t tail_index = 0;
  std::string relation;

  bool operator==(const RelationInstance&) const = default;
};

struct AnnotatedSentence {
  std::vector<std::string> tokens;
  std::vector<EntitySpan> entities;
  std::vector<RelationInstance> relations;
  std::vector<std::string> labels;

  bool operator==(const AnnotatedSentence&) const = default;
};

// Whitespace tokenization of a sentence's text field.
std::vector<std::string> tokenize(std::string_view text);

std::string join_tokens(std::span<const std::string> tokens, std::size_t begin,
                        std::size_t end);

// ---------------------------------------------------------------------------
// Ontology

struct RelationRule {
  std::set<std::string> domain;
  std::set<std::string> range;

  bool operator==(const RelationRule&) const = default;
};

class OntologySchema {
 public:
  OntologySchema() = default;
  explicit OntologySchema(std::map<std::string, RelationRule> rules);

  // The fifteen-relation cyber threat schema with noRelation added.
  static OntologySchema bundled();
  static OntologySchema from_json(const nlohmann::json& doc);
  static OntologySchema load(const std::filesystem::path& path);
  nlohmann::json to_json() const;

  bool contains(std::string_view relation) const;
  // Throws UnknownRelation.
  const RelationRule& rule(std::string_view relation) const;
  // True iff head_type is in the domain and tail_type in the range of
  // `relation`. noRelation admits everything.
  bool admits(std::string_view relation, std::string_view head_type,
              std::string_view tail_type) const;
  // True iff some named relation admits the ordered type pair.
  bool admits_any(std::string_view head_type, std::string_view tail_type) const;

  // Named relations (noRelation excluded), sorted.
  std::vector<std::string> relation_names() const;
  // Every entity type mentioned in any domain or range.
  std::set<std::string> entity_types() const;
  const std::map<std::string, RelationRule>& rules() const { return rules_; }

 private:
  std::map<std::string, RelationRule> rules_;
};

// ---------------------------------------------------------------------------
// Type inventories: dense ids for entity types, relation types and BIO tags.
//
// Tag layout: 0 = "O", then for entity type k: 1 + 2k = "B-T", 2 + 2k = "I-T".

class TypeInventory {
 public:
  TypeInventory() = default;
  TypeInventory(std::vector<std::string> entity_types,
                std::vector<std::string> relation_types);

  // Entity types are the union of corpus and ontology types; relation types
  // the union of corpus relations, ontology relations and noRelation. Both
  // sorted lexicographically.
  static TypeInventory build(std::span<const AnnotatedSentence> corpus,
                             const OntologySchema& schema);
  static TypeInventory from_json(const nlohmann::json& doc);
  nlohmann::json to_json() const;

  const std::vector<EntityType>& entity_types() const { return entity_types_; }
  const std::vector<RelationType>& relation_types() const {
    return relation_types_;
  }
  const std::vector<std::string>& tags() const { return tags_; }

  std::size_t num_entity_types() const { return entity_types_.size(); }
  std::size_t num_relations() const { return relation_types_.size(); }
  std::size_t num_tags() const { return tags_.size(); }

  // Throws LabelError for an unknown type.
  int entity_type_id(std::string_view name) const;
  // Throws UnknownRelation.
  int relation_id(std::string_view name) const;
  int no_relation_id() const { return no_relation_id_; }
  // Throws LabelError for an unknown tag.
  int tag_id(std::string_view tag) const;
  const std::string& tag_name(int id) const { return tags_.at(id); }
  const std::string& relation_name(int id) const {
    return relation_types_.at(id).name;
  }
  const std::string& entity_type_name(int id) const {
    return entity_types_.at(id).name;
  }

  std::vector<int> encode_tags(std::span<const std::string> labels) const;
  std::vector<std::string> decode_tags(std::span<const int> ids) const;

  bool operator==(const TypeInventory& other) const {
    return tags_ == other.tags_ && relation_names() == other.relation_names();
  }

 private:
  std::vector<std::string> relation_names() const;

  std::vector<EntityType> entity_types_;
  std::vector<RelationType> relation_types_;
  std::vector<std::string> tags_;
  std::map<std::string, int, std::less<>> entity_index_;
  std::map<std::string, int, std::less<>> relation_index_;
  std::map<std::string, int, std::less<>> tag_index_;
  int no_relation_id_ = -1;
};

// ---------------------------------------------------------------------------
// Parsing

// Field order of the triples in a record's "relations" array.
enum class RelationOrder { kHeadLabelTail, kHeadTailLabel };

std::optional<RelationOrder> parse_relation_order(std::string_view name);
std::string_view relation_order_name(RelationOrder order);

struct ParseOptions {
  // Used when the document does not declare an order in its header.
  RelationOrder relation_order = RelationOrder::kHeadLabelTail;
  // Types allowed in B-/I- tags besides those used by the record's own spans.
  // Defaults to the bundled ontology's types.
  std::optional<std::set<std::string>> known_entity_types;
};

enum class IssueKind { kMalformedDocument, kSchema, kSpan, kLabel, kIndex };

std::string_view issue_kind_name(IssueKind kind);

struct Issue {
  IssueKind kind;
  std::optional<std::size_t> record;
  std::string message;
};

struct DatasetCheck {
  std::vector<AnnotatedSentence> sentences;  // records that passed
  std::vector<std::size_t> record_indices;   // source index of each sentence
  std::vector<Issue> issues;                 // at most one per record
  RelationOrder relation_order = RelationOrder::kHeadLabelTail;
};

// Parses a document and collects every structural problem instead of
// stopping at the first. The document is either an array of records or an
// object {"relation_order": "head_label_tail"|"head_tail_label",
// "records": [...]}.
DatasetCheck check_dataset(std::string_view json_text,
                           const ParseOptions& options = {});

// Throws the typed error for the first issue found.
std::vector<AnnotatedSentence> parse_dataset(std::string_view json_text,
                                             const ParseOptions& options = {});
std::vector<AnnotatedSentence> load_dataset(const std::filesystem::path& path,
                                            const ParseOptions& options = {});

std::string serialize_dataset(
    std::span<const AnnotatedSentence> corpus,
    RelationOrder order = RelationOrder::kHeadLabelTail, int indent = -1);

// Rebuilds BIO tags from spans.
std::vector<std::string> spans_to_bio(std::size_t length,
                                      std::span<const EntitySpan> spans);

// Lenient inverse of spans_to_bio: B starts a span, I of the same type
// continues it, and an I with no compatible predecessor starts a new one.
// Unrecognized tags count as O. Surfaces are filled when `tokens` is given.
std::vector<EntitySpan> bio_to_spans(std::span<const std::string> labels,
                                     std::span<const std::string> tokens = {});

std::string read_file(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Validation

struct BioViolation {
  std::size_t position = 0;
  std::string tag;
  std::string reason;
};

struct BioReport {
  std::vector<BioViolation> violations;
  bool valid() const { return violations.empty(); }
};

// An I-T is valid only right after B-T or I-T of the same T. Tags that are
// not O/B-*/I-* are reported as violations too.
BioReport validate_bio(std::span<const std::string> labels);

struct OntologyViolation {
  std::size_t relation_index = 0;
  std::string relation;
  std::string head_type;
  std::string tail_type;
};

std::vector<OntologyViolation> validate_ontology(
    const AnnotatedSentence& sentence, const OntologySchema& schema);

// All ordered pairs (i, j), i != j, in (i, j) ascending order. With
// `ontology_filter`, pairs no named relation admits are dropped.
std::vector<std::pair<std::size_t, std::size_t>> candidate_pairs(
    std::span<const EntitySpan> entities, const OntologySchema& schema,
    bool ontology_filter);
std::vector<std::pair<std::size_t, std::size_t>> candidate_pairs(
    const AnnotatedSentence& sentence, const OntologySchema& schema,
    bool ontology_filter);

// ---------------------------------------------------------------------------
// Statistics

struct DatasetStats {
  std::size_t sentences = 0;
  std::size_t tokens = 0;
  std::size_t entities = 0;
  std::size_t relations = 0;
  std::map<std::string, std::size_t> entity_counts;
  std::map<std::string, std::size_t> relation_counts;

  nlohmann::json to_json() const;
  std::string to_table() const;
};

// Types and relations from `schema` (when given) are listed with zero counts
// even if absent from the corpus.
DatasetStats dataset_stats(std::span<const AnnotatedSentence> corpus,
                           const OntologySchema* schema = nullptr);

}  // namespace tijere::corpus
