#include "tijere/extract.hpp"

#include <map>
#include <sstream>
#include <tuple>

#include "tijere/errors.hpp"
#include "tijere/parallel.hpp"

namespace tijere::extract {

using nlohmann::json;

namespace {

json span_json(const SpanRef& s) { return json::array({s.start, s.end}); }

SpanRef span_from(const json& doc) {
  if (!doc.is_array() || doc.size() != 2) {
    throw MalformedDocument("span must be [start, end]");
  }
  return {doc[0].get<std::size_t>(), doc[1].get<std::size_t>()};
}

json entity_json(const corpus::EntitySpan& e) {
  return {{"start", e.start}, {"end", e.end}, {"type", e.type},
          {"surface", e.surface}};
}

std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\n\r") == std::string::npos) return value;
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

json Triple::to_json() const {
  return {{"head", head},
          {"head_type", head_type},
          {"relation", relation},
          {"tail", tail},
          {"tail_type", tail_type},
          {"confidence", confidence},
          {"sentence_id", sentence_id},
          {"head_span", span_json(head_span)},
          {"tail_span", span_json(tail_span)}};
}

Triple Triple::from_json(const json& doc) {
  try {
    Triple t;
    t.head = doc.at("head").get<std::string>();
    t.head_type = doc.at("head_type").get<std::string>();
    t.relation = doc.at("relation").get<std::string>();
    t.tail = doc.at("tail").get<std::string>();
    t.tail_type = doc.at("tail_type").get<std::string>();
    t.confidence = doc.at("confidence").get<double>();
    t.sentence_id = doc.at("sentence_id").get<std::size_t>();
    t.head_span = span_from(doc.at("head_span"));
    t.tail_span = span_from(doc.at("tail_span"));
    return t;
  } catch (const json::exception& e) {
    throw MalformedDocument(std::string("bad triple: ") + e.what());
  }
}

std::string_view drop_reason_name(DropReason reason) {
  switch (reason) {
    case DropReason::kNoRelation:
      return "noRelation";
    case DropReason::kBelowFloor:
      return "below_floor";
    case DropReason::kOntology:
      return "ontology";
  }
  return "unknown";
}

std::string ExtractionResult::sentence() const {
  return corpus::join_tokens(tokens, 0, tokens.size());
}

json ExtractionResult::to_json() const {
  json ents = json::array();
  for (const auto& e : entities) ents.push_back(entity_json(e));
  json trips = json::array();
  for (const auto& t : triples) trips.push_back(t.to_json());
  json drops = json::array();
  for (const auto& d : dropped) {
    drops.push_back({{"head", entity_json(d.head)},
                     {"tail", entity_json(d.tail)},
                     {"predicted", d.predicted},
                     {"confidence", d.confidence},
                     {"no_relation_confidence", d.no_relation_confidence},
                     {"reason", drop_reason_name(d.reason)}});
  }
  return {{"sentence_id", sentence_id}, {"sentence", sentence()},
          {"entities", ents},           {"triples", trips},
          {"dropped", drops}};
}

namespace {

corpus::EntitySpan entity_from(const json& doc) {
  return {doc.at("start").get<std::size_t>(), doc.at("end").get<std::size_t>(),
          doc.at("type").get<std::string>(), doc.at("surface").get<std::string>()};
}

DropReason drop_reason_from(const std::string& name) {
  for (auto r : {DropReason::kNoRelation, DropReason::kBelowFloor,
                 DropReason::kOntology}) {
    if (drop_reason_name(r) == name) return r;
  }
  throw MalformedDocument("unknown drop reason '" + name + "'");
}

}  // namespace

ExtractionResult ExtractionResult::from_json(const json& doc) {
  try {
    ExtractionResult r;
    r.sentence_id = doc.at("sentence_id").get<std::size_t>();
    r.tokens = corpus::tokenize(doc.at("sentence").get<std::string>());
    for (const auto& e : doc.at("entities")) r.entities.push_back(entity_from(e));
    for (const auto& t : doc.at("triples")) r.triples.push_back(Triple::from_json(t));
    for (const auto& d : doc.at("dropped")) {
      r.dropped.push_back({entity_from(d.at("head")), entity_from(d.at("tail")),
                           d.at("predicted").get<std::string>(),
                           d.at("confidence").get<double>(),
                           d.at("no_relation_confidence").get<double>(),
                           drop_reason_from(d.at("reason").get<std::string>())});
    }
    return r;
  } catch (const json::exception& e) {
    throw MalformedDocument(std::string("bad extraction result: ") + e.what());
  }
}

std::vector<ExtractionResult> results_from_json(const json& doc) {
  if (!doc.is_array()) {
    throw MalformedDocument("extraction results must be a JSON array");
  }
  std::vector<ExtractionResult> out;
  for (const auto& r : doc) out.push_back(ExtractionResult::from_json(r));
  return out;
}

// ---------------------------------------------------------------------------

Extractor::Extractor(model::ModelBundle bundle, ExtractOptions options)
    : bundle_(std::move(bundle)), options_(std::move(options)) {
  bundle_->params.check_shapes(bundle_->config);
  model_.emplace(bundle_->make_model());
}

Extractor Extractor::load(const std::filesystem::path& checkpoint,
                          ExtractOptions options) {
  return Extractor(model::load_checkpoint(checkpoint), std::move(options));
}

const model::ModelBundle& Extractor::bundle() const {
  if (!bundle_) throw ModelNotLoaded("no checkpoint loaded");
  return *bundle_;
}

const model::JointModel& Extractor::model() const {
  if (!model_) throw ModelNotLoaded("no checkpoint loaded");
  return *model_;
}

ExtractionResult Extractor::extract(std::string_view text,
                                    std::size_t sentence_id) const {
  model();
  const auto tokens = corpus::tokenize(text);
  return extract_tokens(tokens, sentence_id);
}

ExtractionResult Extractor::extract_tokens(
    std::span<const std::string> tokens, std::size_t sentence_id,
    std::optional<std::span<const corpus::EntitySpan>> gold_spans) const {
  const auto& net = model();
  const auto& inv = bundle_->inventory;
  if (tokens.empty()) throw EmptyInput("nothing to extract from");
  if (tokens.size() > options_.max_len) {
    throw LengthError("sentence " + std::to_string(sentence_id) + " has " +
                      std::to_string(tokens.size()) +
                      " tokens, more than max_len " +
                      std::to_string(options_.max_len));
  }

  ExtractionResult result;
  result.sentence_id = sentence_id;
  result.tokens.assign(tokens.begin(), tokens.end());

  std::vector<int> ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens) ids.push_back(bundle_->vocab.id(t));
  const model::Matrix encoded = net.encode(ids);

  if (gold_spans) {
    for (auto span : *gold_spans) {
      if (span.end > tokens.size() || span.start >= span.end) {
        throw SpanError("span [" + std::to_string(span.start) + ", " +
                        std::to_string(span.end) + ") outside the sentence");
      }
      span.surface = corpus::join_tokens(tokens, span.start, span.end);
      result.entities.push_back(std::move(span));
    }
  } else {
    const auto tags = inv.decode_tags(net.decode_encoded(encoded));
    result.entities = corpus::bio_to_spans(tags, tokens);
  }

  const int no_rel = inv.no_relation_id();
  const auto& ents = result.entities;
  for (std::size_t i = 0; i < ents.size(); ++i) {
    for (std::size_t j = 0; j < ents.size(); ++j) {
      if (i == j) continue;
      const auto& head = ents[i];
      const auto& tail = ents[j];
      const auto mask = mslr::make_entity_mask(tokens.size(), head, tail);
      const model::Vector probs =
          net.classify_encoded(encoded, mask, inv.entity_type_id(head.type),
                               inv.entity_type_id(tail.type));
      Eigen::Index best = 0;
      probs.maxCoeff(&best);
      const std::string& relation = inv.relation_name(static_cast<int>(best));

      DroppedPair drop{head, tail, relation, probs(best), probs(no_rel),
                       DropReason::kNoRelation};
      if (best == no_rel) {
        result.dropped.push_back(std::move(drop));
        continue;
      }
      if (probs(best) < options_.confidence_floor) {
        drop.reason = DropReason::kBelowFloor;
        result.dropped.push_back(std::move(drop));
        continue;
      }
      if (options_.ontology_filter &&
          (!options_.schema.contains(relation) ||
           !options_.schema.admits(relation, head.type, tail.type))) {
        drop.reason = DropReason::kOntology;
        result.dropped.push_back(std::move(drop));
        continue;
      }
      result.triples.push_back({head.surface, head.type, relation, tail.surface,
                                tail.type, probs(best), sentence_id,
                                SpanRef{head.start, head.end},
                                SpanRef{tail.start, tail.end}});
    }
  }
  return result;
}

std::vector<ExtractionResult> Extractor::extract_corpus(
    std::span<const corpus::AnnotatedSentence> sentences, bool use_gold_spans,
    std::size_t workers) const {
  model();
  std::vector<ExtractionResult> out(sentences.size());
  parallel_for(sentences.size(), workers, [&](std::size_t i) {
    const auto& s = sentences[i];
    std::optional<std::span<const corpus::EntitySpan>> gold;
    if (use_gold_spans) gold = std::span<const corpus::EntitySpan>(s.entities);
    out[i] = extract_tokens(s.tokens, i, gold);
  });
  return out;
}

std::vector<ExtractionResult> Extractor::extract_lines(
    std::span<const std::string> lines, std::size_t workers) const {
  model();
  std::vector<ExtractionResult> out(lines.size());
  parallel_for(lines.size(), workers,
               [&](std::size_t i) { out[i] = extract(lines[i], i); });
  return out;
}

// ---------------------------------------------------------------------------

std::string export_graph(std::span<const ExtractionResult> results,
                         std::string_view format) {
  if (format == "csv") {
    std::ostringstream out;
    out.precision(17);
    out << "head,head_type,relation,tail,tail_type,confidence,sentence_id\n";
    for (const auto& r : results) {
      for (const auto& t : r.triples) {
        out << csv_field(t.head) << ',' << csv_field(t.head_type) << ','
            << csv_field(t.relation) << ',' << csv_field(t.tail) << ','
            << csv_field(t.tail_type) << ',' << t.confidence << ','
            << t.sentence_id << '\n';
      }
    }
    return out.str();
  }
  if (format != "json") {
    throw UnknownFormat("unknown graph format '" + std::string(format) +
                        "' (expected json or csv)");
  }

  std::map<std::pair<std::string, std::string>, std::size_t> node_ids;
  json nodes = json::array();
  json edges = json::array();
  auto node = [&](const std::string& surface, const std::string& type) {
    auto [it, fresh] = node_ids.try_emplace({surface, type}, node_ids.size());
    if (fresh) {
      nodes.push_back({{"id", it->second}, {"surface", surface}, {"type", type}});
    }
    return it->second;
  };
  for (const auto& r : results) {
    for (const auto& t : r.triples) {
      const std::size_t src = node(t.head, t.head_type);
      const std::size_t dst = node(t.tail, t.tail_type);
      edges.push_back({{"source", src},
                       {"target", dst},
                       {"relation", t.relation},
                       {"confidence", t.confidence},
                       {"sentence_id", t.sentence_id},
                       {"head_span", span_json(t.head_span)},
                       {"tail_span", span_json(t.tail_span)}});
    }
  }
  return json{{"nodes", nodes}, {"edges", edges}}.dump(2) + "\n";
}

std::vector<Triple> import_graph_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw MalformedDocument(std::string("graph is not valid JSON: ") + e.what());
  }
  try {
    std::map<std::size_t, std::pair<std::string, std::string>> nodes;
    for (const auto& n : doc.at("nodes")) {
      nodes[n.at("id").get<std::size_t>()] = {n.at("surface").get<std::string>(),
                                              n.at("type").get<std::string>()};
    }
    std::vector<Triple> out;
    for (const auto& e : doc.at("edges")) {
      const auto& head = nodes.at(e.at("source").get<std::size_t>());
      const auto& tail = nodes.at(e.at("target").get<std::size_t>());
      out.push_back({head.first, head.second, e.at("relation").get<std::string>(),
                     tail.first, tail.second, e.at("confidence").get<double>(),
                     e.at("sentence_id").get<std::size_t>(),
                     span_from(e.at("head_span")), span_from(e.at("tail_span"))});
    }
    return out;
  } catch (const json::exception& e) {
    throw MalformedDocument(std::string("bad graph document: ") + e.what());
  } catch (const std::out_of_range&) {
    throw MalformedDocument("edge refers to a missing node");
  }
}

}  // namespace tijere::extract
