#include <doctest.h>

#include <algorithm>

#include "tiny.hpp"
#include "tijere/errors.hpp"
#include "tijere/extract.hpp"

using namespace tijere;
using namespace tijere::extract;

namespace {

model::ModelBundle tiny_bundle(std::uint64_t seed = 1) {
  auto t = testing::tiny_setup(true, true, 0.0);
  return {t.config, model::ModelParams::initialize(t.config, seed), t.vocab,
          t.inventory};
}

// Pushes the relation bias so that `relation` wins every pair.
model::ModelBundle biased_bundle(const std::string& relation) {
  auto b = tiny_bundle();
  b.params.re_bias(b.inventory.relation_id(relation)) = 50.0;
  return b;
}

Triple triple(std::string h, std::string r, std::string t, std::size_t sid = 0) {
  return {std::move(h), "HackOrg", std::move(r), std::move(t), "Tool", 0.9, sid,
          {0, 1}, {2, 3}};
}

}  // namespace

TEST_CASE("unloaded extractor") {
  const Extractor e;
  CHECK_FALSE(e.loaded());
  CHECK_THROWS_AS(e.extract("APT29 uses Mimikatz"), ModelNotLoaded);
  CHECK_THROWS_AS(e.bundle(), ModelNotLoaded);
}

TEST_CASE("empty input") {
  const Extractor e(tiny_bundle());
  CHECK_THROWS_AS(e.extract("   "), EmptyInput);
}

TEST_CASE("gold spans drive pair enumeration") {
  const Extractor e(biased_bundle("uses"));
  const std::vector<std::string> tokens = {"APT29", "uses", "Mimikatz", "against",
                                           "XYZ", "Bank"};
  const std::vector<corpus::EntitySpan> spans = {{0, 1, "HackOrg", ""},
                                                 {2, 3, "Tool", ""},
                                                 {4, 6, "Org", ""}};
  const auto r = e.extract_tokens(tokens, 7, std::span(spans));
  CHECK(r.entities.size() == 3);
  CHECK(r.entities[2].surface == "XYZ Bank");
  CHECK(r.triples.size() == 6);
  CHECK(r.dropped.empty());
  for (const auto& t : r.triples) {
    CHECK(t.relation == "uses");
    CHECK(t.confidence > 0.0);
    CHECK(t.confidence <= 1.0);
    CHECK(t.sentence_id == 7);
    // Every triple's spans are among the entities.
    auto has = [&](SpanRef s) {
      return std::any_of(r.entities.begin(), r.entities.end(), [&](const auto& e) {
        return e.start == s.start && e.end == s.end;
      });
    };
    CHECK(has(t.head_span));
    CHECK(has(t.tail_span));
  }
  CHECK(r.triples[0].head == "APT29");
  CHECK(r.triples[0].tail == "Mimikatz");

  // Deterministic.
  CHECK(e.extract_tokens(tokens, 7, std::span(spans)).to_json() == r.to_json());

  const std::vector<corpus::EntitySpan> one = {{0, 1, "HackOrg", ""}};
  const auto single = e.extract_tokens(tokens, 0, std::span(one));
  CHECK(single.triples.empty());
  CHECK(single.entities.size() == 1);
}

TEST_CASE("filters") {
  const std::vector<std::string> tokens = {"APT29", "uses", "Mimikatz"};
  const std::vector<corpus::EntitySpan> spans = {{0, 1, "HackOrg", ""},
                                                 {2, 3, "Tool", ""}};
  ExtractOptions floor;
  floor.confidence_floor = 1.0 + 1e-9;
  const auto none = Extractor(biased_bundle("uses"), floor)
                        .extract_tokens(tokens, 0, std::span(spans));
  CHECK(none.triples.empty());
  CHECK(none.dropped.size() == 2);
  CHECK(none.dropped[0].reason == DropReason::kBelowFloor);

  ExtractOptions onto;
  onto.ontology_filter = true;
  const auto filtered = Extractor(biased_bundle("uses"), onto)
                            .extract_tokens(tokens, 0, std::span(spans));
  // HackOrg uses Tool is allowed, Tool uses HackOrg is not.
  REQUIRE(filtered.triples.size() == 1);
  CHECK(filtered.triples[0].head == "APT29");
  CHECK(filtered.dropped[0].reason == DropReason::kOntology);

  const auto rejected = Extractor(biased_bundle("noRelation"))
                            .extract_tokens(tokens, 0, std::span(spans));
  CHECK(rejected.triples.empty());
  CHECK(rejected.dropped[0].reason == DropReason::kNoRelation);
  CHECK(rejected.dropped[0].no_relation_confidence > 0.99);
}

TEST_CASE("decoded spans from raw text") {
  auto b = tiny_bundle();
  // Make the tagger call every token B-Tool.
  b.params.ner_bias(b.inventory.tag_id("B-Tool")) = 100.0;
  const Extractor e(b);
  const auto r = e.extract("APT29 uses Mimikatz");
  CHECK(r.entities.size() == 3);
  CHECK(r.entities[1].type == "Tool");
  CHECK(r.triples.size() + r.dropped.size() == 6);
  CHECK(r.sentence() == "APT29 uses Mimikatz");

  const std::vector<std::string> lines = {"APT29 uses Mimikatz", "Mimikatz"};
  const auto all = e.extract_lines(lines, 2);
  CHECK(all.size() == 2);
  CHECK(all[1].sentence_id == 1);
  CHECK(all[0].to_json() == r.to_json());
}

TEST_CASE("graph export") {
  ExtractionResult one;
  one.triples = {triple("APT29", "uses", "Mimikatz")};
  const std::vector<ExtractionResult> single = {one};
  const auto g1 = nlohmann::json::parse(export_graph(single, "json"));
  CHECK(g1["nodes"].size() == 2);
  CHECK(g1["edges"].size() == 1);

  ExtractionResult two;
  two.triples = {triple("APT29", "uses", "Mimikatz"), triple("APT29", "uses", "PlugX", 1)};
  const std::vector<ExtractionResult> shared = {two};
  const auto g2 = nlohmann::json::parse(export_graph(shared, "json"));
  CHECK(g2["nodes"].size() == 3);
  CHECK(g2["edges"].size() == 2);

  const auto empty = nlohmann::json::parse(export_graph({}, "json"));
  CHECK(empty["nodes"].empty());
  CHECK(empty["edges"].empty());

  CHECK(import_graph_json(export_graph(shared, "json")) == two.triples);

  ExtractionResult quoted;
  quoted.triples = {triple("oil, energy", "targets", "say \"hi\"")};
  const std::vector<ExtractionResult> q = {quoted};
  const auto csv = export_graph(q, "csv");
  CHECK(csv.find("\"oil, energy\"") != std::string::npos);
  CHECK(csv.find("\"say \"\"hi\"\"\"") != std::string::npos);
  CHECK(csv.rfind("head,head_type,relation,tail,tail_type,confidence,sentence_id\n", 0) == 0);

  CHECK_THROWS_AS(export_graph(q, "graphml"), UnknownFormat);
  CHECK_THROWS_AS(import_graph_json("{"), MalformedDocument);
}

TEST_CASE("results json round trip") {
  const std::vector<std::string> tokens = {"APT29", "uses", "Mimikatz"};
  const std::vector<corpus::EntitySpan> spans = {{0, 1, "HackOrg", ""},
                                                 {2, 3, "Tool", ""}};
  ExtractOptions onto;
  onto.ontology_filter = true;
  const auto r = Extractor(biased_bundle("uses"), onto)
                     .extract_tokens(tokens, 3, std::span(spans));
  const nlohmann::json doc = nlohmann::json::array({r.to_json()});
  const auto back = results_from_json(doc);
  REQUIRE(back.size() == 1);
  CHECK(back[0].to_json() == r.to_json());
  CHECK_THROWS_AS(results_from_json(nlohmann::json::object()), MalformedDocument);
}
