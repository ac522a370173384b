#include "tijere/mslr.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <set>
#include <unordered_map>

#include "tijere/random.hpp"

namespace tijere::mslr {

using nlohmann::json;

Vocabulary::Vocabulary() : Vocabulary(std::span<const std::string>{}) {}

Vocabulary::Vocabulary(std::span<const std::string> tokens) {
  tokens_.emplace_back(kPadToken);
  tokens_.emplace_back(kUnkToken);
  tokens_.insert(tokens_.end(), tokens.begin(), tokens.end());
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (!index_.emplace(tokens_[i], static_cast<int>(i)).second) {
      throw DataError("duplicate vocabulary token '" + tokens_[i] + "'");
    }
  }
}

int Vocabulary::id(std::string_view token) const {
  const auto it = index_.find(token);
  return it == index_.end() ? kUnkId : it->second;
}

bool Vocabulary::contains(std::string_view token) const {
  return index_.find(token) != index_.end();
}

std::uint64_t Vocabulary::hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (const auto& t : tokens_) {
    for (unsigned char c : t) {
      h ^= c;
      h *= 1099511628211ULL;
    }
    h ^= 0x0a;
    h *= 1099511628211ULL;
  }
  return h;
}

json Vocabulary::to_json() const {
  return std::vector<std::string>(tokens_.begin() + 2, tokens_.end());
}

Vocabulary Vocabulary::from_json(const json& doc) {
  const auto tokens = doc.get<std::vector<std::string>>();
  return Vocabulary(tokens);
}

Vocabulary build_vocab(std::span<const corpus::AnnotatedSentence> corpus,
                       std::size_t min_freq) {
  min_freq = std::max<std::size_t>(min_freq, 1);
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& s : corpus) {
    for (const auto& t : s.tokens) ++counts[t];
  }
  std::vector<std::pair<std::string, std::size_t>> kept;
  for (auto& [token, count] : counts) {
    if (count >= min_freq && token != kPadToken && token != kUnkToken) {
      kept.emplace_back(token, count);
    }
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  std::vector<std::string> tokens;
  tokens.reserve(kept.size());
  for (auto& [token, count] : kept) tokens.push_back(std::move(token));
  return Vocabulary(tokens);
}

json MslrInstance::to_json() const {
  return {{"token_ids", token_ids},
          {"attention_mask", attention_mask},
          {"entity_mask", entity_mask},
          {"head_type", head_type},
          {"tail_type", tail_type},
          {"ner_labels", ner_labels},
          {"relation_label", relation_label},
          {"origin", {{"sentence", origin.sentence},
                      {"relation", origin.relation}}}};
}

std::vector<std::uint8_t> make_entity_mask(std::size_t length,
                                           const corpus::EntitySpan& head,
                                           const corpus::EntitySpan& tail) {
  for (const auto* span : {&head, &tail}) {
    if (span->start >= span->end || span->end > length) {
      throw SpanError("span [" + std::to_string(span->start) + ", " +
                      std::to_string(span->end) + ") out of range for length " +
                      std::to_string(length));
    }
  }
  if (head.overlaps(tail)) {
    throw OverlapError("head and tail spans overlap");
  }
  std::vector<std::uint8_t> mask(length, 0);
  for (std::size_t i = head.start; i < head.end; ++i) mask[i] = 1;
  for (std::size_t i = tail.start; i < tail.end; ++i) mask[i] = 1;
  return mask;
}

std::vector<MslrRecord> expand(const corpus::AnnotatedSentence& sentence,
                               std::size_t sentence_index,
                               const corpus::TypeInventory& inventory) {
  std::vector<MslrRecord> records;
  records.reserve(sentence.relations.size());
  if (sentence.relations.empty()) return records;

  const std::vector<int> labels = inventory.encode_tags(sentence.labels);
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (std::size_t k = 0; k < sentence.relations.size(); ++k) {
    const auto& rel = sentence.relations[k];
    if (!seen.emplace(rel.head_index, rel.tail_index).second) {
      throw DuplicatePairError(
          "entity pair (" + std::to_string(rel.head_index) + ", " +
              std::to_string(rel.tail_index) + ") labeled more than once",
          sentence_index);
    }
    const auto& head = sentence.entities.at(rel.head_index);
    const auto& tail = sentence.entities.at(rel.tail_index);
    MslrRecord record;
    record.tokens = sentence.tokens;
    record.ner_labels = labels;
    record.entity_mask = make_entity_mask(sentence.tokens.size(), head, tail);
    record.head_type = inventory.entity_type_id(head.type);
    record.tail_type = inventory.entity_type_id(tail.type);
    record.relation_label = inventory.relation_id(rel.relation);
    record.origin = {sentence_index, k};
    record.head = head;
    record.tail = tail;
    records.push_back(std::move(record));
  }
  return records;
}

std::vector<MslrRecord> expand_corpus(
    std::span<const corpus::AnnotatedSentence> corpus,
    const corpus::TypeInventory& inventory) {
  std::vector<MslrRecord> records;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    auto rows = expand(corpus[i], i, inventory);
    records.insert(records.end(), std::make_move_iterator(rows.begin()),
                   std::make_move_iterator(rows.end()));
  }
  return records;
}

MslrRecord make_inference_record(std::span<const std::string> tokens,
                                 const corpus::EntitySpan& head,
                                 const corpus::EntitySpan& tail,
                                 const corpus::TypeInventory& inventory,
                                 Origin origin) {
  MslrRecord record;
  record.tokens.assign(tokens.begin(), tokens.end());
  record.entity_mask = make_entity_mask(tokens.size(), head, tail);
  record.head_type = inventory.entity_type_id(head.type);
  record.tail_type = inventory.entity_type_id(tail.type);
  record.relation_label = kUnlabeled;
  record.origin = origin;
  record.head = head;
  record.tail = tail;
  return record;
}

MslrInstance encode(const MslrRecord& record, const Vocabulary& vocab,
                    std::size_t max_len, std::optional<std::size_t> pad_to) {
  const std::size_t n = record.tokens.size();
  if (n > max_len) {
    throw LengthError("sentence " + std::to_string(record.origin.sentence) +
                      " has " + std::to_string(n) +
                      " tokens, more than max_len " + std::to_string(max_len));
  }
  const std::size_t width = std::max(pad_to.value_or(max_len), n);
  MslrInstance out;
  out.length = n;
  out.token_ids.assign(width, kPadId);
  out.attention_mask.assign(width, 0);
  out.entity_mask.assign(width, 0);
  for (std::size_t i = 0; i < n; ++i) {
    out.token_ids[i] = vocab.id(record.tokens[i]);
    out.attention_mask[i] = 1;
    out.entity_mask[i] = record.entity_mask.at(i);
  }
  if (!record.ner_labels.empty()) {
    out.ner_labels.assign(width, 0);
    std::copy(record.ner_labels.begin(), record.ner_labels.end(),
              out.ner_labels.begin());
  }
  out.head_type = record.head_type;
  out.tail_type = record.tail_type;
  out.relation_label = record.relation_label;
  out.origin = record.origin;
  return out;
}

MslrInstance repad(const MslrInstance& instance, std::size_t width) {
  if (width < instance.length) {
    throw LengthError("cannot pad a row of length " +
                      std::to_string(instance.length) + " to width " +
                      std::to_string(width));
  }
  MslrInstance out = instance;
  const std::size_t n = instance.length;
  out.token_ids.resize(n);
  out.attention_mask.resize(n);
  out.entity_mask.resize(n);
  out.token_ids.resize(width, kPadId);
  out.attention_mask.resize(width, 0);
  out.entity_mask.resize(width, 0);
  if (out.has_ner_labels()) {
    out.ner_labels.resize(n);
    out.ner_labels.resize(width, 0);
  }
  return out;
}

std::vector<int> strip_padding(const MslrInstance& instance) {
  std::vector<int> ids;
  for (std::size_t i = 0; i < instance.width(); ++i) {
    if (instance.attention_mask[i]) ids.push_back(instance.token_ids[i]);
  }
  return ids;
}

EncodedSet encode_all(std::span<const MslrRecord> records,
                      const Vocabulary& vocab, std::size_t max_len) {
  EncodedSet set;
  set.instances.reserve(records.size());
  for (const auto& r : records) {
    try {
      set.instances.push_back(encode(r, vocab, max_len, r.tokens.size()));
    } catch (const LengthError& e) {
      set.skipped.push_back({r.origin, e.what()});
    }
  }
  return set;
}

std::vector<Batch> make_batches(std::span<const MslrInstance> instances,
                                std::size_t batch_size,
                                std::optional<std::uint64_t> shuffle_seed) {
  batch_size = std::max<std::size_t>(batch_size, 1);
  std::vector<std::size_t> order(instances.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (shuffle_seed) {
    Rng rng(*shuffle_seed);
    rng.shuffle(std::span<std::size_t>(order));
  }
  std::vector<Batch> batches;
  for (std::size_t begin = 0; begin < order.size(); begin += batch_size) {
    const std::size_t end = std::min(order.size(), begin + batch_size);
    Batch batch;
    for (std::size_t i = begin; i < end; ++i) {
      batch.width = std::max(batch.width, instances[order[i]].length);
    }
    for (std::size_t i = begin; i < end; ++i) {
      batch.rows.push_back(repad(instances[order[i]], batch.width));
      batch.lengths.push_back(instances[order[i]].length);
    }
    batches.push_back(std::move(batch));
  }
  return batches;
}

void write_jsonl(std::ostream& out, std::span<const MslrInstance> instances) {
  for (const auto& instance : instances) {
    out << instance.to_json().dump() << '\n';
  }
}

}  // namespace tijere::mslr
