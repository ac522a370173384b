#include "tijere/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace tijere::corpus {

using nlohmann::json;

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() &&
           std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
    }
    const std::size_t begin = i;
    while (i < text.size() &&
           !std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
    }
    if (i > begin) tokens.emplace_back(text.substr(begin, i - begin));
  }
  return tokens;
}

std::string join_tokens(std::span<const std::string> tokens, std::size_t begin,
                        std::size_t end) {
  std::string out;
  for (std::size_t i = begin; i < end && i < tokens.size(); ++i) {
    if (i > begin) out += ' ';
    out += tokens[i];
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// ---------------------------------------------------------------------------
// OntologySchema

OntologySchema::OntologySchema(std::map<std::string, RelationRule> rules)
    : rules_(std::move(rules)) {
  for (const auto& [name, rule] : rules_) {
    if (name == kNoRelation) continue;
    if (rule.domain.empty() || rule.range.empty()) {
      throw SchemaError("ontology relation '" + name +
                        "' needs non-empty domain and range");
    }
  }
  rules_.try_emplace(std::string(kNoRelation));
}

OntologySchema OntologySchema::bundled() {
  const std::set<std::string> actors = {"HackOrg", "OffAct", "Exp",
                                        "Way",     "Tool",   "SamFile"};
  std::map<std::string, RelationRule> rules;
  rules["analyses"] = {{"SecTeam"}, {"SamFile"}};
  rules["associatedWith"] = {{"HackOrg"}, {"HackOrg"}};
  rules["discovers"] = {{"SecTeam"}, {"HackOrg"}};
  rules["discoveredBy"] = {{"HackOrg"}, {"SecTeam"}};
  rules["hasAttackTime"] = {{"HackOrg", "OffAct", "Way"}, {"Time"}};
  rules["hasCharacteristics"] = {actors, {"Features"}};
  rules["locatedAt"] = {{"Org"}, {"Area"}};
  rules["monitors"] = {{"SecTeam"}, {"Org", "Area", "Tool", "Exp"}};
  rules["monitoredBy"] = {{"Org", "Area", "Tool", "Exp"}, {"SecTeam"}};
  rules["motivates"] = {{"Purp"}, {"HackOrg", "OffAct", "Exp", "Way"}};
  rules["motivatedBy"] = {{"HackOrg", "OffAct", "Exp", "Way"}, {"Purp"}};
  rules["uses"] = {actors, {"Tool", "OffAct", "Exp", "SamFile", "Way"}};
  rules["usedBy"] = {{"Features", "OffAct", "Exp", "Way", "Tool", "SamFile"},
                     actors};
  rules["targets"] = {actors, {"Area", "Org", "SecTeam"}};
  rules["targetedBy"] = {{"Area", "Org", "SecTeam"}, actors};
  return OntologySchema(std::move(rules));
}

OntologySchema OntologySchema::from_json(const json& doc) {
  if (!doc.is_object()) {
    throw SchemaError("ontology must be a JSON object of relation rules");
  }
  std::map<std::string, RelationRule> rules;
  for (const auto& [name, entry] : doc.items()) {
    if (!entry.is_object()) {
      throw SchemaError("ontology relation '" + name + "' must be an object");
    }
    RelationRule rule;
    for (const char* key : {"domain", "range"}) {
      const auto it = entry.find(key);
      if (it == entry.end() || !it->is_array()) {
        throw SchemaError("ontology relation '" + name + "' lacks a '" + key +
                          "' array");
      }
      auto& target = std::string_view(key) == "domain" ? rule.domain
                                                       : rule.range;
      for (const auto& type : *it) {
        if (!type.is_string()) {
          throw SchemaError("ontology relation '" + name +
                            "' has a non-string type");
        }
        target.insert(type.get<std::string>());
      }
    }
    rules.emplace(name, std::move(rule));
  }
  return OntologySchema(std::move(rules));
}

OntologySchema OntologySchema::load(const std::filesystem::path& path) {
  try {
    return from_json(json::parse(read_file(path)));
  } catch (const json::parse_error& e) {
    throw MalformedDocument(path.string() + ": " + e.what());
  }
}

json OntologySchema::to_json() const {
  json doc = json::object();
  for (const auto& [name, rule] : rules_) {
    doc[name] = {{"domain", rule.domain}, {"range", rule.range}};
  }
  return doc;
}

bool OntologySchema::contains(std::string_view relation) const {
  return rules_.find(std::string(relation)) != rules_.end();
}

const RelationRule& OntologySchema::rule(std::string_view relation) const {
  const auto it = rules_.find(std::string(relation));
  if (it == rules_.end()) {
    throw UnknownRelation("relation '" + std::string(relation) +
                          "' is not in the ontology");
  }
  return it->second;
}

bool OntologySchema::admits(std::string_view relation,
                            std::string_view head_type,
                            std::string_view tail_type) const {
  if (relation == kNoRelation) return true;
  const RelationRule& r = rule(relation);
  return r.domain.count(std::string(head_type)) > 0 &&
         r.range.count(std::string(tail_type)) > 0;
}

bool OntologySchema::admits_any(std::string_view head_type,
                                std::string_view tail_type) const {
  for (const auto& [name, rule] : rules_) {
    if (name == kNoRelation) continue;
    if (rule.domain.count(std::string(head_type)) &&
        rule.range.count(std::string(tail_type))) {
      return true;
    }
  }
  return false;
}

std::vector<std::string> OntologySchema::relation_names() const {
  std::vector<std::string> names;
  for (const auto& [name, rule] : rules_) {
    if (name != kNoRelation) names.push_back(name);
  }
  return names;
}

std::set<std::string> OntologySchema::entity_types() const {
  std::set<std::string> types;
  for (const auto& [name, rule] : rules_) {
    types.insert(rule.domain.begin(), rule.domain.end());
    types.insert(rule.range.begin(), rule.range.end());
  }
  return types;
}

// ---------------------------------------------------------------------------
// TypeInventory

TypeInventory::TypeInventory(std::vector<std::string> entity_types,
                             std::vector<std::string> relation_types) {
  tags_.emplace_back(kOutsideTag);
  tag_index_.emplace(std::string(kOutsideTag), 0);
  for (auto& name : entity_types) {
    const int id = static_cast<int>(entity_types_.size());
    if (!entity_index_.emplace(name, id).second) {
      throw SchemaError("duplicate entity type '" + name + "'");
    }
    tag_index_.emplace("B-" + name, static_cast<int>(tags_.size()));
    tags_.push_back("B-" + name);
    tag_index_.emplace("I-" + name, static_cast<int>(tags_.size()));
    tags_.push_back("I-" + name);
    entity_types_.push_back({std::move(name), id});
  }
  for (auto& name : relation_types) {
    const int id = static_cast<int>(relation_types_.size());
    if (!relation_index_.emplace(name, id).second) {
      throw SchemaError("duplicate relation type '" + name + "'");
    }
    const bool is_none = name == kNoRelation;
    if (is_none) no_relation_id_ = id;
    relation_types_.push_back({std::move(name), id, is_none});
  }
  if (no_relation_id_ < 0) {
    throw SchemaError("relation inventory must contain noRelation");
  }
}

TypeInventory TypeInventory::build(std::span<const AnnotatedSentence> corpus,
                                   const OntologySchema& schema) {
  std::set<std::string> types = schema.entity_types();
  std::set<std::string> relations;
  for (const auto& [name, rule] : schema.rules()) relations.insert(name);
  relations.insert(std::string(kNoRelation));
  for (const auto& sentence : corpus) {
    for (const auto& e : sentence.entities) types.insert(e.type);
    for (const auto& r : sentence.relations) relations.insert(r.relation);
  }
  return TypeInventory({types.begin(), types.end()},
                       {relations.begin(), relations.end()});
}

json TypeInventory::to_json() const {
  json entity = json::array();
  for (const auto& t : entity_types_) entity.push_back(t.name);
  return {{"entity_types", entity}, {"relation_types", relation_names()}};
}

TypeInventory TypeInventory::from_json(const json& doc) {
  try {
    return TypeInventory(doc.at("entity_types").get<std::vector<std::string>>(),
                         doc.at("relation_types").get<std::vector<std::string>>());
  } catch (const json::exception& e) {
    throw SchemaError(std::string("bad type inventory: ") + e.what());
  }
}

std::vector<std::string> TypeInventory::relation_names() const {
  std::vector<std::string> names;
  for (const auto& r : relation_types_) names.push_back(r.name);
  return names;
}

int TypeInventory::entity_type_id(std::string_view name) const {
  const auto it = entity_index_.find(name);
  if (it == entity_index_.end()) {
    throw LabelError("unknown entity type '" + std::string(name) + "'");
  }
  return it->second;
}

int TypeInventory::relation_id(std::string_view name) const {
  const auto it = relation_index_.find(name);
  if (it == relation_index_.end()) {
    throw UnknownRelation("unknown relation type '" + std::string(name) + "'");
  }
  return it->second;
}

int TypeInventory::tag_id(std::string_view tag) const {
  const auto it = tag_index_.find(tag);
  if (it == tag_index_.end()) {
    throw LabelError("unknown tag '" + std::string(tag) + "'");
  }
  return it->second;
}

std::vector<int> TypeInventory::encode_tags(
    std::span<const std::string> labels) const {
  std::vector<int> ids;
  ids.reserve(labels.size());
  for (const auto& l : labels) ids.push_back(tag_id(l));
  return ids;
}

std::vector<std::string> TypeInventory::decode_tags(
    std::span<const int> ids) const {
  std::vector<std::string> labels;
  labels.reserve(ids.size());
  for (int id : ids) labels.push_back(tags_.at(id));
  return labels;
}

// ---------------------------------------------------------------------------
// Parsing

std::optional<RelationOrder> parse_relation_order(std::string_view name) {
  if (name == "head_label_tail") return RelationOrder::kHeadLabelTail;
  if (name == "head_tail_label") return RelationOrder::kHeadTailLabel;
  return std::nullopt;
}

std::string_view relation_order_name(RelationOrder order) {
  return order == RelationOrder::kHeadLabelTail ? "head_label_tail"
                                                : "head_tail_label";
}

std::string_view issue_kind_name(IssueKind kind) {
  switch (kind) {
    case IssueKind::kMalformedDocument: return "MalformedDocument";
    case IssueKind::kSchema: return "SchemaError";
    case IssueKind::kSpan: return "SpanError";
    case IssueKind::kLabel: return "LabelError";
    case IssueKind::kIndex: return "IndexError";
  }
  return "Unknown";
}

std::vector<std::string> spans_to_bio(std::size_t length,
                                      std::span<const EntitySpan> spans) {
  std::vector<std::string> labels(length, std::string(kOutsideTag));
  for (const auto& span : spans) {
    for (std::size_t i = span.start; i < span.end && i < length; ++i) {
      labels[i] = (i == span.start ? "B-" : "I-") + span.type;
    }
  }
  return labels;
}

std::vector<EntitySpan> bio_to_spans(std::span<const std::string> labels,
                                     std::span<const std::string> tokens) {
  std::vector<EntitySpan> spans;
  std::optional<EntitySpan> open;
  auto close = [&] {
    if (!open) return;
    if (!tokens.empty()) {
      open->surface = join_tokens(tokens, open->start, open->end);
    }
    spans.push_back(*open);
    open.reset();
  };
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const std::string_view tag = labels[i];
    const bool tagged =
        tag.size() > 2 && (tag[0] == 'B' || tag[0] == 'I') && tag[1] == '-';
    if (!tagged) {
      close();
      continue;
    }
    const std::string_view type = tag.substr(2);
    if (tag[0] == 'I' && open && open->type == type) {
      open->end = i + 1;
      continue;
    }
    close();
    open = EntitySpan{i, i + 1, std::string(type), {}};
  }
  close();
  return spans;
}

namespace {

struct RecordFailure {
  IssueKind kind;
  std::string message;
};

// Splits "B-Tool" into ('B', "Tool"); returns nullopt for anything that is
// not O/B-*/I-*. 'O' comes back with an empty type.
std::optional<std::pair<char, std::string_view>> split_tag(
    std::string_view tag) {
  if (tag == kOutsideTag) return std::pair<char, std::string_view>{'O', {}};
  if (tag.size() > 2 && (tag[0] == 'B' || tag[0] == 'I') && tag[1] == '-') {
    return std::pair<char, std::string_view>{tag[0], tag.substr(2)};
  }
  return std::nullopt;
}

bool is_index(const json& v) {
  return v.is_number_integer() &&
         (v.is_number_unsigned() || v.get<std::int64_t>() >= 0);
}

std::optional<RecordFailure> convert_record(
    const json& record, RelationOrder order,
    const std::set<std::string>& known_types, AnnotatedSentence& out) {
  auto schema_fail = [](std::string msg) {
    return RecordFailure{IssueKind::kSchema, std::move(msg)};
  };
  if (!record.is_object()) return schema_fail("record is not an object");
  for (const char* key : {"text", "entities", "relations", "entity_labels"}) {
    if (!record.contains(key)) {
      return schema_fail(std::string("missing field '") + key + "'");
    }
  }
  if (!record["text"].is_string()) {
    return schema_fail("field 'text' must be a string");
  }
  for (const char* key : {"entities", "relations", "entity_labels"}) {
    if (!record[key].is_array()) {
      return schema_fail(std::string("field '") + key + "' must be an array");
    }
  }

  out.tokens = tokenize(record["text"].get_ref<const std::string&>());
  const std::size_t n = out.tokens.size();

  const auto& entities = record["entities"];
  for (std::size_t k = 0; k < entities.size(); ++k) {
    const auto& e = entities[k];
    if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() ||
        !e[1].is_number_integer() || !e[2].is_string()) {
      return schema_fail("entity " + std::to_string(k) +
                         " must be [start, end, type]");
    }
    const auto start = e[0].get<std::int64_t>();
    const auto end = e[1].get<std::int64_t>();
    if (start < 0 || end <= start || static_cast<std::size_t>(end) > n) {
      return RecordFailure{
          IssueKind::kSpan,
          "entity " + std::to_string(k) + " span [" + std::to_string(start) +
              ", " + std::to_string(end) + ") out of range for " +
              std::to_string(n) + " tokens"};
    }
    EntitySpan span;
    span.start = static_cast<std::size_t>(start);
    span.end = static_cast<std::size_t>(end);
    span.type = e[2].get<std::string>();
    span.surface = join_tokens(out.tokens, span.start, span.end);
    out.entities.push_back(std::move(span));
  }

  const auto& labels = record["entity_labels"];
  for (const auto& l : labels) {
    if (!l.is_string()) return schema_fail("entity_labels must be strings");
    out.labels.push_back(l.get<std::string>());
  }
  if (out.labels.size() != n) {
    return RecordFailure{IssueKind::kLabel,
                         "entity_labels has " +
                             std::to_string(out.labels.size()) +
                             " tags for " + std::to_string(n) + " tokens"};
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto parts = split_tag(out.labels[i]);
    bool known = parts.has_value();
    if (known && parts->first != 'O') {
      const std::string type(parts->second);
      known = known_types.count(type) > 0 ||
              std::any_of(out.entities.begin(), out.entities.end(),
                          [&](const EntitySpan& s) { return s.type == type; });
    }
    if (!known) {
      return RecordFailure{IssueKind::kLabel, "unknown tag '" + out.labels[i] +
                                                  "' at position " +
                                                  std::to_string(i)};
    }
  }
  const BioReport bio = validate_bio(out.labels);
  if (!bio.valid()) {
    const auto& v = bio.violations.front();
    return RecordFailure{IssueKind::kLabel, "BIO violation at position " +
                                                std::to_string(v.position) +
                                                " (" + v.tag + "): " + v.reason};
  }

  for (std::size_t a = 0; a < out.entities.size(); ++a) {
    for (std::size_t b = a + 1; b < out.entities.size(); ++b) {
      if (out.entities[a].overlaps(out.entities[b])) {
        return RecordFailure{IssueKind::kSpan,
                             "entities " + std::to_string(a) + " and " +
                                 std::to_string(b) + " overlap"};
      }
    }
  }
  if (spans_to_bio(n, out.entities) != out.labels) {
    return RecordFailure{IssueKind::kSpan,
                         "entity spans disagree with entity_labels"};
  }

  const auto& relations = record["relations"];
  for (std::size_t k = 0; k < relations.size(); ++k) {
    const auto& r = relations[k];
    const std::size_t label_pos =
        order == RelationOrder::kHeadLabelTail ? 1 : 2;
    const std::size_t tail_pos =
        order == RelationOrder::kHeadLabelTail ? 2 : 1;
    if (!r.is_array() || r.size() != 3 || !r[0].is_number_integer() ||
        !r[tail_pos].is_number_integer() || !r[label_pos].is_string()) {
      return schema_fail(
          "relation " + std::to_string(k) + " must be " +
          (order == RelationOrder::kHeadLabelTail ? "[head, relation, tail]"
                                                  : "[head, tail, relation]"));
    }
    const auto head = r[0].get<std::int64_t>();
    const auto tail = r[tail_pos].get<std::int64_t>();
    const auto m = static_cast<std::int64_t>(out.entities.size());
    if (!is_index(r[0]) || !is_index(r[tail_pos]) || head >= m || tail >= m) {
      return RecordFailure{
          IssueKind::kIndex,
          "relation " + std::to_string(k) + " references entity (" +
              std::to_string(head) + ", " + std::to_string(tail) +
              ") but the record has " + std::to_string(m) + " entities"};
    }
    if (head == tail) {
      return RecordFailure{IssueKind::kIndex,
                           "relation " + std::to_string(k) +
                               " has identical head and tail"};
    }
    out.relations.push_back({static_cast<std::size_t>(head),
                             static_cast<std::size_t>(tail),
                             r[label_pos].get<std::string>()});
  }
  return std::nullopt;
}

[[noreturn]] void throw_issue(const Issue& issue) {
  switch (issue.kind) {
    case IssueKind::kMalformedDocument:
      throw MalformedDocument(issue.message, issue.record);
    case IssueKind::kSchema: throw SchemaError(issue.message, issue.record);
    case IssueKind::kSpan: throw SpanError(issue.message, issue.record);
    case IssueKind::kLabel: throw LabelError(issue.message, issue.record);
    case IssueKind::kIndex: throw IndexError(issue.message, issue.record);
  }
  throw DataError(issue.message, issue.record);
}

}  // namespace

DatasetCheck check_dataset(std::string_view json_text,
                           const ParseOptions& options) {
  DatasetCheck check;
  check.relation_order = options.relation_order;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    check.issues.push_back({IssueKind::kMalformedDocument, std::nullopt,
                            std::string("unparseable JSON: ") + e.what()});
    return check;
  }

  const json* records = &doc;
  if (doc.is_object()) {
    if (const auto it = doc.find("relation_order"); it != doc.end()) {
      const auto order =
          it->is_string() ? parse_relation_order(it->get<std::string>())
                          : std::nullopt;
      if (!order) {
        check.issues.push_back(
            {IssueKind::kSchema, std::nullopt,
             "header relation_order must be head_label_tail or "
             "head_tail_label"});
        return check;
      }
      check.relation_order = *order;
    }
    const auto it = doc.find("records");
    if (it == doc.end() || !it->is_array()) {
      check.issues.push_back({IssueKind::kSchema, std::nullopt,
                              "document object lacks a 'records' array"});
      return check;
    }
    records = &*it;
  } else if (!doc.is_array()) {
    check.issues.push_back({IssueKind::kSchema, std::nullopt,
                            "document must be an array of records"});
    return check;
  }

  const std::set<std::string> known =
      options.known_entity_types ? *options.known_entity_types
                                 : OntologySchema::bundled().entity_types();
  for (std::size_t i = 0; i < records->size(); ++i) {
    AnnotatedSentence sentence;
    if (auto failure = convert_record((*records)[i], check.relation_order,
                                      known, sentence)) {
      check.issues.push_back({failure->kind, i, std::move(failure->message)});
      continue;
    }
    check.sentences.push_back(std::move(sentence));
    check.record_indices.push_back(i);
  }
  return check;
}

std::vector<AnnotatedSentence> parse_dataset(std::string_view json_text,
                                             const ParseOptions& options) {
  DatasetCheck check = check_dataset(json_text, options);
  if (!check.issues.empty()) throw_issue(check.issues.front());
  return std::move(check.sentences);
}

std::vector<AnnotatedSentence> load_dataset(const std::filesystem::path& path,
                                            const ParseOptions& options) {
  return parse_dataset(read_file(path), options);
}

std::string serialize_dataset(std::span<const AnnotatedSentence> corpus,
                              RelationOrder order, int indent) {
  json records = json::array();
  for (const auto& s : corpus) {
    json entities = json::array();
    for (const auto& e : s.entities) entities.push_back({e.start, e.end, e.type});
    json relations = json::array();
    for (const auto& r : s.relations) {
      if (order == RelationOrder::kHeadLabelTail) {
        relations.push_back({r.head_index, r.relation, r.tail_index});
      } else {
        relations.push_back({r.head_index, r.tail_index, r.relation});
      }
    }
    records.push_back({{"text", join_tokens(s.tokens, 0, s.tokens.size())},
                       {"entities", entities},
                       {"relations", relations},
                       {"entity_labels", s.labels}});
  }
  if (order == RelationOrder::kHeadLabelTail) return records.dump(indent);
  json doc = {{"relation_order", relation_order_name(order)},
              {"records", records}};
  return doc.dump(indent);
}

// ---------------------------------------------------------------------------
// Validation

BioReport validate_bio(std::span<const std::string> labels) {
  BioReport report;
  std::optional<std::string_view> open_type;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto parts = split_tag(labels[i]);
    if (!parts) {
      report.violations.push_back({i, labels[i], "not an O/B-/I- tag"});
      open_type.reset();
      continue;
    }
    const auto [prefix, type] = *parts;
    if (prefix == 'I') {
      if (!open_type) {
        report.violations.push_back({i, labels[i], "I tag without a B tag"});
      } else if (*open_type != type) {
        report.violations.push_back(
            {i, labels[i],
             "type switch from " + std::string(*open_type) + " inside a span"});
      }
      open_type = type;
    } else if (prefix == 'B') {
      open_type = type;
    } else {
      open_type.reset();
    }
  }
  return report;
}

std::vector<OntologyViolation> validate_ontology(
    const AnnotatedSentence& sentence, const OntologySchema& schema) {
  std::vector<OntologyViolation> violations;
  for (std::size_t k = 0; k < sentence.relations.size(); ++k) {
    const auto& r = sentence.relations[k];
    if (r.relation == kNoRelation) continue;
    const auto& head = sentence.entities.at(r.head_index).type;
    const auto& tail = sentence.entities.at(r.tail_index).type;
    if (!schema.admits(r.relation, head, tail)) {
      violations.push_back({k, r.relation, head, tail});
    }
  }
  return violations;
}

std::vector<std::pair<std::size_t, std::size_t>> candidate_pairs(
    std::span<const EntitySpan> entities, const OntologySchema& schema,
    bool ontology_filter) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < entities.size(); ++i) {
    for (std::size_t j = 0; j < entities.size(); ++j) {
      if (i == j) continue;
      if (ontology_filter &&
          !schema.admits_any(entities[i].type, entities[j].type)) {
        continue;
      }
      pairs.emplace_back(i, j);
    }
  }
  return pairs;
}

std::vector<std::pair<std::size_t, std::size_t>> candidate_pairs(
    const AnnotatedSentence& sentence, const OntologySchema& schema,
    bool ontology_filter) {
  return candidate_pairs(sentence.entities, schema, ontology_filter);
}

// ---------------------------------------------------------------------------
// Statistics

DatasetStats dataset_stats(std::span<const AnnotatedSentence> corpus,
                           const OntologySchema* schema) {
  DatasetStats stats;
  if (schema) {
    for (const auto& type : schema->entity_types()) stats.entity_counts[type];
    for (const auto& [name, rule] : schema->rules()) stats.relation_counts[name];
  }
  stats.sentences = corpus.size();
  for (const auto& s : corpus) {
    stats.tokens += s.tokens.size();
    stats.entities += s.entities.size();
    stats.relations += s.relations.size();
    for (const auto& e : s.entities) ++stats.entity_counts[e.type];
    for (const auto& r : s.relations) ++stats.relation_counts[r.relation];
  }
  return stats;
}

json DatasetStats::to_json() const {
  return {{"sentences", sentences},
          {"tokens", tokens},
          {"entities", entities},
          {"relations", relations},
          {"entity_counts", entity_counts},
          {"relation_counts", relation_counts}};
}

std::string DatasetStats::to_table() const {
  std::size_t width = 14;
  for (const auto& [k, v] : entity_counts) width = std::max(width, k.size());
  for (const auto& [k, v] : relation_counts) width = std::max(width, k.size());
  std::ostringstream out;
  auto row = [&](std::string_view key, std::size_t value) {
    out << std::left << std::setw(static_cast<int>(width) + 2) << key
        << std::right << std::setw(8) << value << '\n';
  };
  row("sentences", sentences);
  row("tokens", tokens);
  row("entities", entities);
  row("relations", relations);
  out << "\nEntity type\n";
  for (const auto& [k, v] : entity_counts) row(k, v);
  out << "\nRelation type\n";
  for (const auto& [k, v] : relation_counts) row(k, v);
  return out.str();
}

}  // namespace tijere::corpus
