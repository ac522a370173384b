#pragma once

// Synthetic corpora for property tests and the ablation benchmark.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tijere/corpus.hpp"
#include "tijere/random.hpp"

namespace tijere::testing {

struct RandomSentenceOptions {
  std::size_t min_length = 3;
  std::size_t max_length = 20;
  std::size_t max_entities = 4;
  std::size_t max_span = 3;
  std::size_t vocabulary = 50;
};

// Valid BIO, non-overlapping spans sorted by start, relations over distinct
// ordered pairs (noRelation included).
corpus::AnnotatedSentence random_sentence(Rng& rng,
                                          const RandomSentenceOptions& options = {});
std::vector<corpus::AnnotatedSentence> random_corpus(
    std::size_t n, std::uint64_t seed, const RandomSentenceOptions& options = {});

// The relation a type-determined corpus assigns to (head type, tail type).
std::string type_pair_relation(std::string_view head, std::string_view tail);

// Three entities of distinct types per sentence and every ordered pair
// labeled with type_pair_relation.
std::vector<corpus::AnnotatedSentence> type_determined_corpus(
    std::size_t n, std::uint64_t seed);

}  // namespace tijere::testing
