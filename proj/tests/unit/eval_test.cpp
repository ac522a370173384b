#include <doctest.h>

#include <algorithm>

#include "synthetic.hpp"
#include "tiny.hpp"
#include "tijere/eval.hpp"

using namespace tijere;
using namespace tijere::eval;

namespace {

SpanPrediction sp(std::size_t s, std::size_t b, std::size_t e, std::string t) {
  return {s, b, e, std::move(t)};
}

TriplePrediction tp(std::size_t s, std::size_t h, std::size_t t, std::string r) {
  return {s, h, h + 1, t, t + 1, std::move(r)};
}

}  // namespace

TEST_CASE("decode_spans") {
  const std::vector<std::string> a = {"B-Tool", "I-Tool", "O", "B-Area"};
  const auto spans = decode_spans(a, 3);
  REQUIRE(spans.size() == 2);
  CHECK(spans[0] == sp(3, 0, 2, "Tool"));
  CHECK(spans[1] == sp(3, 3, 4, "Area"));
  const std::vector<std::string> o = {"O", "O"};
  CHECK(decode_spans(o).empty());
  const std::vector<std::string> i = {"I-Tool"};
  CHECK(decode_spans(i) == std::vector<SpanPrediction>{sp(0, 0, 1, "Tool")});
}

TEST_CASE("ner metrics") {
  const std::vector<SpanPrediction> gold = {sp(0, 0, 1, "A"), sp(0, 2, 3, "B"),
                                            sp(1, 0, 2, "D")};
  const std::vector<SpanPrediction> pred = {sp(0, 0, 1, "A"), sp(0, 2, 3, "B"),
                                            sp(1, 0, 2, "C")};
  const auto m = ner_metrics(gold, pred);
  CHECK(m.precision == doctest::Approx(2.0 / 3.0));
  CHECK(m.recall == doctest::Approx(2.0 / 3.0));
  CHECK(m.f1 == doctest::Approx(2.0 / 3.0));
  CHECK(m.per_class.at("C").precision == 0.0);
  CHECK(m.per_class.at("A").f1 == 1.0);

  const auto same = ner_metrics(gold, gold);
  CHECK(same.precision == 1.0);
  CHECK(same.recall == 1.0);
  CHECK(same.f1 == 1.0);

  const auto none = ner_metrics(gold, {});
  CHECK(none.precision == 0.0);
  CHECK(none.recall == 0.0);
  CHECK(none.f1 == 0.0);

  auto shuffled = pred;
  std::reverse(shuffled.begin(), shuffled.end());
  CHECK(ner_metrics(gold, shuffled).f1 == m.f1);

  // Sentence index is part of the match.
  const std::vector<SpanPrediction> moved = {sp(5, 0, 1, "A")};
  CHECK(ner_metrics(gold, moved).true_positives == 0);
}

TEST_CASE("re metrics") {
  const std::vector<TriplePrediction> gold = {tp(0, 0, 1, "uses"), tp(0, 1, 2, "targets"),
                                              tp(1, 0, 1, "uses"), tp(1, 1, 0, "usedBy")};
  const std::vector<TriplePrediction> pred = {
      tp(0, 0, 1, "uses"), tp(0, 1, 2, "targets"), tp(1, 0, 1, "uses"),
      tp(1, 1, 0, "uses"), tp(2, 0, 1, "targets"), tp(2, 1, 0, "noRelation")};
  const auto m = re_metrics(gold, pred);
  CHECK(m.predicted == 5);
  CHECK(m.precision == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(m.recall == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(m.f1 == doctest::Approx(2 * 0.6 * 0.75 / 1.35).epsilon(1e-15));
  CHECK(std::abs(m.f1 - f1_score(m.precision, m.recall)) < 1e-12);
  CHECK(re_metrics(gold, gold).f1 == 1.0);

  std::vector<ClassifiedPair> pairs = {
      {tp(0, 0, 1, "uses"), "noRelation"},
      {tp(0, 1, 0, "noRelation"), "noRelation"},
      {tp(0, 1, 2, "noRelation"), "noRelation"},
      {tp(0, 2, 1, "targets"), "noRelation"}};
  const auto all_no = re_metrics(pairs);
  CHECK(all_no.recall == 0.0);
  CHECK(all_no.f1 == 0.0);
  CHECK(*all_no.accuracy == doctest::Approx(0.5));
}

TEST_CASE("f1 and token accuracy") {
  CHECK(f1_score(0.0, 0.0) == 0.0);
  CHECK(f1_score(1.0, 1.0) == 1.0);
  const std::vector<std::vector<std::string>> g = {{"O", "B-A"}, {"O"}};
  const std::vector<std::vector<std::string>> p = {{"O", "O"}, {"O"}};
  CHECK(token_accuracy(g, p) == doctest::Approx(2.0 / 3.0));
  const std::vector<std::vector<std::string>> short_p = {{"O"}, {"O"}};
  CHECK_THROWS_AS(token_accuracy(g, short_p), std::invalid_argument);
}

TEST_CASE("metric report json") {
  const std::vector<SpanPrediction> gold = {sp(0, 0, 1, "A")};
  const auto j = ner_metrics(gold, gold).to_json();
  CHECK(j["f1"] == 1.0);
  CHECK(j["accuracy"].is_null());
  CHECK(j["per_class"]["A"]["support"] == 1);
}

TEST_CASE("evaluate a model") {
  auto t = testing::tiny_setup(true, true, 0.0);
  model::ModelBundle bundle{t.config, model::ModelParams::initialize(t.config, 1),
                            t.vocab, t.inventory};
  EvalOptions opts;
  opts.predicted_pairs = true;
  const auto report = evaluate(bundle, t.sentences, opts);
  CHECK(report.sentences == 2);
  REQUIRE(report.re_gold_pairs.has_value());
  REQUIRE(report.re_predicted_pairs.has_value());
  CHECK(report.re_gold_pairs->gold == 3);  // noRelation is not a positive
  CHECK(report.ner.gold == 5);
  CHECK(report.ner.accuracy.has_value());

  opts.workers = 3;
  const auto parallel = evaluate(bundle, t.sentences, opts);
  CHECK(parallel.to_json() == report.to_json());
  const auto table = report.to_table();
  CHECK(table.find("RE (gold pairs)") != std::string::npos);

  opts.extract.max_len = 5;
  const auto capped = evaluate(bundle, t.sentences, opts);
  CHECK(capped.skipped == std::vector<std::size_t>{0});
}

TEST_CASE("ablation harness shape") {
  const auto corpus = testing::type_determined_corpus(12, 2);
  model::ModelConfig mc;
  mc.embed_dim = 6;
  mc.hidden_dim = 3;
  train::TrainConfig tc;
  tc.epochs = 1;
  tc.learning_rate = 1e-2;
  const auto report = run_ablation(corpus, mc, tc);
  REQUIRE(report.rows.size() == 4);
  CHECK(report.rows[0].name == "mask-off_type-off");
  CHECK(report.rows[1].name == "mask-on_type-off");
  CHECK(report.rows[2].name == "mask-off_type-on");
  CHECK(report.rows[3].name == "mask-on_type-on");
  CHECK(report.evaluated_on == "test");
  const auto table = report.to_table();
  CHECK(std::count(table.begin(), table.end(), '\n') == 5);
  CHECK(report.to_json()["rows"].size() == 4);
}

TEST_CASE("ner metrics at initialization do not depend on EDF") {
  auto base = testing::tiny_setup(true, true, 0.0);
  for (bool mask : {false, true}) {
    for (bool type : {false, true}) {
      auto t = testing::tiny_setup(mask, type, 0.0);
      model::ModelBundle b{t.config, model::ModelParams::initialize(t.config, 5),
                           t.vocab, t.inventory};
      const auto r = evaluate(b, t.sentences);
      CHECK(r.ner.to_json() == evaluate(model::ModelBundle{
                                            base.config,
                                            model::ModelParams::initialize(base.config, 5),
                                            base.vocab, base.inventory},
                                        base.sentences)
                                   .ner.to_json());
    }
  }
}
