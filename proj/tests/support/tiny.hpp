#pragma once

// A small labeled batch and matching config for gradient and training tests.

#include <cstdint>
#include <vector>

#include "tijere/corpus.hpp"
#include "tijere/model.hpp"
#include "tijere/mslr.hpp"

namespace tijere::testing {

struct TinySetup {
  std::vector<corpus::AnnotatedSentence> sentences;
  corpus::TypeInventory inventory;
  mslr::Vocabulary vocab;
  model::ModelConfig config;
  mslr::Batch batch;
};

// Two sentences of different lengths (so the batch carries padding), a
// restricted ontology of three entity types and d=4, h=3.
TinySetup tiny_setup(bool use_entity_mask, bool use_entity_type,
                     double dropout = 0.3);

}  // namespace tijere::testing
