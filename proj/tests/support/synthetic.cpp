#include "synthetic.hpp"

#include <algorithm>
#include <map>
#include <utility>

namespace tijere::testing {

namespace {

const std::vector<std::string>& entity_types() {
  static const std::vector<std::string> types = {
      "Area", "Exp", "HackOrg", "Org", "SamFile", "SecTeam", "Time", "Tool"};
  return types;
}

const std::vector<std::string>& relation_names() {
  static const std::vector<std::string> names = {
      "noRelation", "uses", "usedBy", "targets", "targetedBy", "hasAttackTime"};
  return names;
}

std::string word(std::uint64_t k) { return "w" + std::to_string(k); }

}  // namespace

corpus::AnnotatedSentence random_sentence(Rng& rng,
                                          const RandomSentenceOptions& options) {
  corpus::AnnotatedSentence s;
  const std::size_t n =
      options.min_length + rng.below(options.max_length - options.min_length + 1);
  for (std::size_t i = 0; i < n; ++i) {
    s.tokens.push_back(word(rng.below(options.vocabulary)));
  }

  // Place spans left to right with random gaps.
  const std::size_t wanted = rng.below(options.max_entities + 1);
  std::size_t pos = rng.below(3);
  for (std::size_t e = 0; e < wanted && pos < n; ++e) {
    const std::size_t len =
        std::min<std::size_t>(1 + rng.below(options.max_span), n - pos);
    const auto& type = entity_types()[rng.below(entity_types().size())];
    s.entities.push_back({pos, pos + len, type,
                          corpus::join_tokens(s.tokens, pos, pos + len)});
    pos += len + rng.below(3);
  }
  s.labels = corpus::spans_to_bio(n, s.entities);

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < s.entities.size(); ++i) {
    for (std::size_t j = 0; j < s.entities.size(); ++j) {
      if (i != j) pairs.emplace_back(i, j);
    }
  }
  rng.shuffle(std::span(pairs));
  const std::size_t keep = pairs.empty() ? 0 : rng.below(pairs.size() + 1);
  for (std::size_t k = 0; k < keep; ++k) {
    s.relations.push_back({pairs[k].first, pairs[k].second,
                           relation_names()[rng.below(relation_names().size())]});
  }
  return s;
}

std::vector<corpus::AnnotatedSentence> random_corpus(
    std::size_t n, std::uint64_t seed, const RandomSentenceOptions& options) {
  Rng rng(seed);
  std::vector<corpus::AnnotatedSentence> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(random_sentence(rng, options));
  return out;
}

std::string type_pair_relation(std::string_view head, std::string_view tail) {
  static const std::map<std::pair<std::string, std::string>, std::string> map = {
      {{"HackOrg", "Tool"}, "uses"},
      {{"Tool", "HackOrg"}, "usedBy"},
      {{"HackOrg", "Org"}, "targets"},
      {{"Org", "HackOrg"}, "targetedBy"},
      {{"Tool", "Org"}, "targets"},
      {{"Org", "Tool"}, "targetedBy"},
      {{"HackOrg", "Time"}, "hasAttackTime"},
      {{"HackOrg", "SecTeam"}, "discoveredBy"},
      {{"SecTeam", "HackOrg"}, "discovers"},
      {{"SecTeam", "Tool"}, "monitors"},
      {{"Tool", "SecTeam"}, "monitoredBy"},
      {{"SecTeam", "Org"}, "monitors"},
      {{"Org", "SecTeam"}, "monitoredBy"},
  };
  const auto it = map.find({std::string(head), std::string(tail)});
  return it == map.end() ? std::string(corpus::kNoRelation) : it->second;
}

std::vector<corpus::AnnotatedSentence> type_determined_corpus(std::size_t n,
                                                              std::uint64_t seed) {
  static const std::map<std::string, std::vector<std::string>> surfaces = {
      {"HackOrg", {"APT28", "Lazarus", "Turla", "FIN7", "Carbanak"}},
      {"Tool", {"Mimikatz", "PlugX", "Emotet", "Cobalt Strike", "njRAT"}},
      {"Org", {"banks", "law firms", "utilities", "ministries", "retailers"}},
      {"Time", {"2014", "2017", "March 2019", "last year", "2021"}},
      {"SecTeam", {"FireEye", "Kaspersky", "Talos", "Mandiant", "ESET"}},
  };
  static const std::vector<std::string> fillers = {
      "the", "group", "was", "seen", "in", "a", "campaign", "against",
      "with", "and", "reported", "by", "during", "new", "activity"};
  std::vector<std::string> types;
  for (const auto& [t, _] : surfaces) types.push_back(t);

  Rng rng(seed);
  std::vector<corpus::AnnotatedSentence> out;
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<std::string> picked = types;
    rng.shuffle(std::span(picked));
    picked.resize(3);

    corpus::AnnotatedSentence s;
    auto filler = [&](std::size_t lo, std::size_t hi) {
      const std::size_t count = lo + rng.below(hi - lo + 1);
      for (std::size_t i = 0; i < count; ++i) {
        s.tokens.push_back(fillers[rng.below(fillers.size())]);
      }
    };
    filler(0, 2);
    for (std::size_t e = 0; e < picked.size(); ++e) {
      if (e) filler(1, 2);
      const auto& pool = surfaces.at(picked[e]);
      const auto words = corpus::tokenize(pool[rng.below(pool.size())]);
      const std::size_t start = s.tokens.size();
      s.tokens.insert(s.tokens.end(), words.begin(), words.end());
      s.entities.push_back({start, s.tokens.size(), picked[e],
                            corpus::join_tokens(s.tokens, start, s.tokens.size())});
    }
    filler(0, 2);
    s.labels = corpus::spans_to_bio(s.tokens.size(), s.entities);
    for (std::size_t i = 0; i < s.entities.size(); ++i) {
      for (std::size_t j = 0; j < s.entities.size(); ++j) {
        if (i == j) continue;
        s.relations.push_back(
            {i, j, type_pair_relation(s.entities[i].type, s.entities[j].type)});
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace tijere::testing
