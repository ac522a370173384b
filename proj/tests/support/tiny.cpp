#include "tiny.hpp"

namespace tijere::testing {

TinySetup tiny_setup(bool use_entity_mask, bool use_entity_type,
                     double dropout) {
  TinySetup t;
  corpus::AnnotatedSentence a;
  a.tokens = {"APT29", "uses", "Mimikatz", "against", "XYZ", "Bank"};
  a.entities = {{0, 1, "HackOrg", "APT29"},
                {2, 3, "Tool", "Mimikatz"},
                {4, 6, "Org", "XYZ Bank"}};
  a.labels = corpus::spans_to_bio(a.tokens.size(), a.entities);
  a.relations = {{0, 1, "uses"}, {0, 2, "targets"}, {1, 2, "noRelation"}};

  corpus::AnnotatedSentence b;
  b.tokens = {"Mimikatz", "was", "used", "by", "APT29"};
  b.entities = {{0, 1, "Tool", "Mimikatz"}, {4, 5, "HackOrg", "APT29"}};
  b.labels = corpus::spans_to_bio(b.tokens.size(), b.entities);
  b.relations = {{0, 1, "usedBy"}};
  t.sentences = {a, b};

  t.inventory = corpus::TypeInventory(
      {"HackOrg", "Org", "Tool"},
      {"noRelation", "targets", "usedBy", "uses"});
  t.vocab = mslr::build_vocab(t.sentences);

  t.config.vocab_size = t.vocab.size();
  t.config.embed_dim = 4;
  t.config.hidden_dim = 3;
  t.config.num_ner_labels = t.inventory.num_tags();
  t.config.num_relations = t.inventory.num_relations();
  t.config.num_entity_types = t.inventory.num_entity_types();
  t.config.dropout = dropout;
  t.config.use_entity_mask = use_entity_mask;
  t.config.use_entity_type = use_entity_type;

  const auto records = mslr::expand_corpus(t.sentences, t.inventory);
  const auto encoded = mslr::encode_all(records, t.vocab);
  t.batch = mslr::make_batches(encoded.instances, encoded.instances.size(),
                               std::nullopt)
                .front();
  return t;
}

}  // namespace tijere::testing
