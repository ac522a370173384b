#pragma once

// Raw sentence -> CRF spans -> ordered candidate pairs -> relation
// classification -> triples, plus graph export of the result.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "tijere/corpus.hpp"
#include "tijere/model.hpp"

namespace tijere::extract {

struct SpanRef {
  std::size_t start = 0;
  std::size_t end = 0;

  bool operator==(const SpanRef&) const = default;
  auto operator<=>(const SpanRef&) const = default;
};

struct Triple {
  std::string head;
  std::string head_type;
  std::string relation;
  std::string tail;
  std::string tail_type;
  double confidence = 0.0;
  std::size_t sentence_id = 0;
  SpanRef head_span;
  SpanRef tail_span;

  nlohmann::json to_json() const;
  static Triple from_json(const nlohmann::json& doc);
  bool operator==(const Triple&) const = default;
};

enum class DropReason { kNoRelation, kBelowFloor, kOntology };

std::string_view drop_reason_name(DropReason reason);

struct DroppedPair {
  corpus::EntitySpan head;
  corpus::EntitySpan tail;
  std::string predicted;  // argmax relation
  double confidence = 0.0;
  double no_relation_confidence = 0.0;
  DropReason reason = DropReason::kNoRelation;
};

struct ExtractionResult {
  std::size_t sentence_id = 0;
  std::vector<std::string> tokens;
  std::vector<corpus::EntitySpan> entities;
  std::vector<Triple> triples;
  std::vector<DroppedPair> dropped;

  std::string sentence() const;
  nlohmann::json to_json() const;
  // Throws MalformedDocument.
  static ExtractionResult from_json(const nlohmann::json& doc);
};

// A JSON array of results, as written by the CLI.
std::vector<ExtractionResult> results_from_json(const nlohmann::json& doc);

struct ExtractOptions {
  // Drop triples whose (head type, tail type) break the predicted
  // relation's domain/range rule.
  bool ontology_filter = false;
  // Keep a triple only when its probability is >= the floor.
  double confidence_floor = 0.0;
  corpus::OntologySchema schema = corpus::OntologySchema::bundled();
  std::size_t max_len = mslr::kDefaultMaxLen;
};

class Extractor {
 public:
  // An unloaded extractor; every call throws ModelNotLoaded.
  Extractor() = default;
  Extractor(model::ModelBundle bundle, ExtractOptions options = {});

  static Extractor load(const std::filesystem::path& checkpoint,
                        ExtractOptions options = {});

  bool loaded() const { return model_.has_value(); }
  const ExtractOptions& options() const { return options_; }
  const model::ModelBundle& bundle() const;

  // Whitespace-tokenizes `text`. Throws EmptyInput for blank text.
  ExtractionResult extract(std::string_view text,
                           std::size_t sentence_id = 0) const;

  // With `gold_spans`, NER decoding is skipped and those spans are used as
  // the entities.
  ExtractionResult extract_tokens(
      std::span<const std::string> tokens, std::size_t sentence_id = 0,
      std::optional<std::span<const corpus::EntitySpan>> gold_spans =
          std::nullopt) const;

  // One result per sentence, in input order.
  std::vector<ExtractionResult> extract_corpus(
      std::span<const corpus::AnnotatedSentence> sentences, bool use_gold_spans,
      std::size_t workers = 1) const;
  std::vector<ExtractionResult> extract_lines(
      std::span<const std::string> lines, std::size_t workers = 1) const;

 private:
  const model::JointModel& model() const;

  std::optional<model::ModelBundle> bundle_;
  std::optional<model::JointModel> model_;
  ExtractOptions options_;
};

// "json": {"nodes": [{"id", "surface", "type"}], "edges": [{"source",
// "target", "relation", "confidence", "sentence_id", "head_span",
// "tail_span"}]}, nodes numbered in order of first appearance.
// "csv": head,head_type,relation,tail,tail_type,confidence,sentence_id.
// Throws UnknownFormat for anything else.
std::string export_graph(std::span<const ExtractionResult> results,
                         std::string_view format);

// Triples back out of a JSON graph document.
std::vector<Triple> import_graph_json(std::string_view text);

}  // namespace tijere::extract
