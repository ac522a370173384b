#include "tijere/eval.hpp"

#include <algorithm>
#include <iomanip>
#include <set>
#include <sstream>
#include <stdexcept>

#include "tijere/parallel.hpp"

namespace tijere::eval {

using nlohmann::json;

double f1_score(double precision, double recall) {
  const double sum = precision + recall;
  return sum > 0.0 ? 2.0 * precision * recall / sum : 0.0;
}

namespace {

double ratio(std::size_t num, std::size_t den) {
  return den ? static_cast<double>(num) / static_cast<double>(den) : 0.0;
}

// Multiset intersection size of two sorted ranges.
template <typename T>
std::size_t matches(const std::vector<T>& a, const std::vector<T>& b) {
  std::size_t n = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++n, ++i, ++j;
    }
  }
  return n;
}

// `key` names the class of an item (entity type or relation).
template <typename T, typename Key>
MetricReport score(std::vector<T> gold, std::vector<T> predicted, Key key) {
  std::sort(gold.begin(), gold.end());
  std::sort(predicted.begin(), predicted.end());
  MetricReport r;
  r.gold = gold.size();
  r.predicted = predicted.size();
  r.true_positives = matches(gold, predicted);
  r.precision = ratio(r.true_positives, r.predicted);
  r.recall = ratio(r.true_positives, r.gold);
  r.f1 = f1_score(r.precision, r.recall);

  std::set<std::string> classes;
  for (const auto& g : gold) classes.insert(key(g));
  for (const auto& p : predicted) classes.insert(key(p));
  for (const auto& c : classes) {
    std::vector<T> g, p;
    std::copy_if(gold.begin(), gold.end(), std::back_inserter(g),
                 [&](const T& x) { return key(x) == c; });
    std::copy_if(predicted.begin(), predicted.end(), std::back_inserter(p),
                 [&](const T& x) { return key(x) == c; });
    ClassReport cr;
    cr.gold = g.size();
    cr.predicted = p.size();
    cr.true_positives = matches(g, p);
    cr.precision = ratio(cr.true_positives, cr.predicted);
    cr.recall = ratio(cr.true_positives, cr.gold);
    cr.f1 = f1_score(cr.precision, cr.recall);
    r.per_class[c] = cr;
  }
  return r;
}

std::vector<TriplePrediction> positives(std::span<const TriplePrediction> in) {
  std::vector<TriplePrediction> out;
  for (const auto& t : in) {
    if (t.relation != corpus::kNoRelation) out.push_back(t);
  }
  return out;
}

}  // namespace

json MetricReport::to_json() const {
  json classes = json::object();
  for (const auto& [name, c] : per_class) {
    classes[name] = {{"precision", c.precision},
                     {"recall", c.recall},
                     {"f1", c.f1},
                     {"true_positives", c.true_positives},
                     {"predicted", c.predicted},
                     {"support", c.gold}};
  }
  return {{"precision", precision},
          {"recall", recall},
          {"f1", f1},
          {"accuracy", accuracy ? json(*accuracy) : json(nullptr)},
          {"true_positives", true_positives},
          {"predicted", predicted},
          {"support", gold},
          {"per_class", classes}};
}

std::vector<SpanPrediction> decode_spans(std::span<const std::string> labels,
                                         std::size_t sentence) {
  std::vector<SpanPrediction> out;
  for (const auto& s : corpus::bio_to_spans(labels)) {
    out.push_back({sentence, s.start, s.end, s.type});
  }
  return out;
}

MetricReport ner_metrics(std::span<const SpanPrediction> gold,
                         std::span<const SpanPrediction> predicted) {
  return score(std::vector<SpanPrediction>(gold.begin(), gold.end()),
               std::vector<SpanPrediction>(predicted.begin(), predicted.end()),
               [](const SpanPrediction& s) { return s.type; });
}

MetricReport re_metrics(std::span<const TriplePrediction> gold,
                        std::span<const TriplePrediction> predicted) {
  return score(positives(gold), positives(predicted),
               [](const TriplePrediction& t) { return t.relation; });
}

MetricReport re_metrics(std::span<const ClassifiedPair> pairs) {
  std::vector<TriplePrediction> gold, predicted;
  std::size_t correct = 0;
  for (const auto& p : pairs) {
    gold.push_back(p.gold);
    TriplePrediction guess = p.gold;
    guess.relation = p.predicted;
    predicted.push_back(std::move(guess));
    correct += p.gold.relation == p.predicted ? 1 : 0;
  }
  MetricReport r = re_metrics(gold, predicted);
  r.accuracy = ratio(correct, pairs.size());
  return r;
}

double token_accuracy(std::span<const std::vector<std::string>> gold,
                      std::span<const std::vector<std::string>> predicted) {
  if (gold.size() != predicted.size()) {
    throw std::invalid_argument("token_accuracy: sentence count mismatch");
  }
  std::size_t total = 0, correct = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i].size() != predicted[i].size()) {
      throw std::invalid_argument("token_accuracy: length mismatch in sentence " +
                                  std::to_string(i));
    }
    for (std::size_t t = 0; t < gold[i].size(); ++t) {
      ++total;
      correct += gold[i][t] == predicted[i][t] ? 1 : 0;
    }
  }
  return ratio(correct, total);
}

// ---------------------------------------------------------------------------

namespace {

struct SentenceOutcome {
  bool skipped = false;
  std::vector<std::string> gold_tags;
  std::vector<std::string> predicted_tags;
  std::vector<SpanPrediction> gold_spans;
  std::vector<SpanPrediction> predicted_spans;
  std::vector<ClassifiedPair> gold_pairs;
  std::vector<ClassifiedPair> extracted_pairs;
  std::vector<TriplePrediction> extracted_gold;
};

TriplePrediction triple_of(std::size_t sentence, const corpus::EntitySpan& h,
                           const corpus::EntitySpan& t, std::string relation) {
  return {sentence, h.start, h.end, t.start, t.end, std::move(relation)};
}

void append_row(std::ostream& out, const std::string& name,
                const MetricReport& m) {
  out << std::left << std::setw(18) << name << std::right << std::fixed
      << std::setprecision(4) << std::setw(8) << m.precision << std::setw(8)
      << m.recall << std::setw(8) << m.f1 << std::setw(8);
  if (m.accuracy) {
    out << *m.accuracy;
  } else {
    out << "-";
  }
  out << std::setw(8) << m.true_positives << std::setw(8) << m.predicted
      << std::setw(8) << m.gold << '\n';
}

}  // namespace

json EvalReport::to_json() const {
  return {{"sentences", sentences},
          {"skipped", skipped},
          {"ner", ner.to_json()},
          {"re_gold_pairs",
           re_gold_pairs ? re_gold_pairs->to_json() : json(nullptr)},
          {"re_predicted_pairs",
           re_predicted_pairs ? re_predicted_pairs->to_json() : json(nullptr)}};
}

std::string EvalReport::to_table() const {
  std::ostringstream out;
  out << std::left << std::setw(18) << "task" << std::right << std::setw(8)
      << "P" << std::setw(8) << "R" << std::setw(8) << "F1" << std::setw(8)
      << "Acc" << std::setw(8) << "TP" << std::setw(8) << "pred"
      << std::setw(8) << "gold" << '\n';
  append_row(out, "NER", ner);
  if (re_gold_pairs) append_row(out, "RE (gold pairs)", *re_gold_pairs);
  if (re_predicted_pairs) append_row(out, "RE (pred pairs)", *re_predicted_pairs);
  return out.str();
}

EvalReport evaluate(const model::ModelBundle& bundle,
                    std::span<const corpus::AnnotatedSentence> sentences,
                    const EvalOptions& options) {
  const model::JointModel net = bundle.make_model();
  const auto& inv = bundle.inventory;
  std::optional<extract::Extractor> extractor;
  if (options.predicted_pairs) extractor.emplace(bundle, options.extract);
  const std::size_t max_len = options.extract.max_len;

  std::vector<SentenceOutcome> outcomes(sentences.size());
  parallel_for(sentences.size(), options.workers, [&](std::size_t i) {
    const auto& s = sentences[i];
    auto& o = outcomes[i];
    if (s.tokens.size() > max_len || s.tokens.empty()) {
      o.skipped = true;
      return;
    }
    std::vector<int> ids;
    for (const auto& t : s.tokens) ids.push_back(bundle.vocab.id(t));
    const model::Matrix encoded = net.encode(ids);
    o.gold_tags = s.labels;
    o.predicted_tags = inv.decode_tags(net.decode_encoded(encoded));
    o.gold_spans = decode_spans(o.gold_tags, i);
    o.predicted_spans = decode_spans(o.predicted_tags, i);

    if (options.gold_pairs) {
      for (const auto& r : s.relations) {
        const auto& h = s.entities[r.head_index];
        const auto& t = s.entities[r.tail_index];
        const auto mask = mslr::make_entity_mask(s.tokens.size(), h, t);
        const model::Vector probs = net.classify_encoded(
            encoded, mask, inv.entity_type_id(h.type),
            inv.entity_type_id(t.type));
        Eigen::Index best = 0;
        probs.maxCoeff(&best);
        o.gold_pairs.push_back({triple_of(i, h, t, r.relation),
                                inv.relation_name(static_cast<int>(best))});
      }
    }

    if (extractor) {
      const auto result = extractor->extract_tokens(s.tokens, i);
      auto gold_label = [&](const corpus::EntitySpan& h,
                            const corpus::EntitySpan& t) -> std::string {
        for (const auto& r : s.relations) {
          const auto& gh = s.entities[r.head_index];
          const auto& gt = s.entities[r.tail_index];
          if (gh.start == h.start && gh.end == h.end && gh.type == h.type &&
              gt.start == t.start && gt.end == t.end && gt.type == t.type) {
            return r.relation;
          }
        }
        return std::string(corpus::kNoRelation);
      };
      for (const auto& tr : result.triples) {
        corpus::EntitySpan h{tr.head_span.start, tr.head_span.end,
                             tr.head_type, tr.head};
        corpus::EntitySpan t{tr.tail_span.start, tr.tail_span.end,
                             tr.tail_type, tr.tail};
        o.extracted_pairs.push_back(
            {triple_of(i, h, t, gold_label(h, t)), tr.relation});
      }
      for (const auto& d : result.dropped) {
        o.extracted_pairs.push_back(
            {triple_of(i, d.head, d.tail, gold_label(d.head, d.tail)),
             std::string(corpus::kNoRelation)});
      }
      for (const auto& r : s.relations) {
        o.extracted_gold.push_back(triple_of(i, s.entities[r.head_index],
                                             s.entities[r.tail_index],
                                             r.relation));
      }
    }
  });

  EvalReport report;
  report.sentences = sentences.size();
  std::vector<SpanPrediction> gold_spans, pred_spans;
  std::vector<std::vector<std::string>> gold_tags, pred_tags;
  std::vector<ClassifiedPair> gold_pairs, extracted_pairs;
  std::vector<TriplePrediction> extracted_gold;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    auto& o = outcomes[i];
    if (o.skipped) {
      report.skipped.push_back(i);
      continue;
    }
    gold_spans.insert(gold_spans.end(), o.gold_spans.begin(), o.gold_spans.end());
    pred_spans.insert(pred_spans.end(), o.predicted_spans.begin(),
                      o.predicted_spans.end());
    gold_tags.push_back(std::move(o.gold_tags));
    pred_tags.push_back(std::move(o.predicted_tags));
    gold_pairs.insert(gold_pairs.end(), o.gold_pairs.begin(), o.gold_pairs.end());
    extracted_pairs.insert(extracted_pairs.end(), o.extracted_pairs.begin(),
                           o.extracted_pairs.end());
    extracted_gold.insert(extracted_gold.end(), o.extracted_gold.begin(),
                          o.extracted_gold.end());
  }
  report.ner = ner_metrics(gold_spans, pred_spans);
  report.ner.accuracy = token_accuracy(gold_tags, pred_tags);
  if (options.gold_pairs) report.re_gold_pairs = re_metrics(gold_pairs);
  if (options.predicted_pairs) {
    // Recall is against every annotated triple, including pairs whose
    // spans the tagger missed.
    std::vector<TriplePrediction> predicted;
    std::size_t correct = 0;
    for (const auto& p : extracted_pairs) {
      TriplePrediction t = p.gold;
      t.relation = p.predicted;
      predicted.push_back(std::move(t));
      correct += p.gold.relation == p.predicted ? 1 : 0;
    }
    report.re_predicted_pairs = re_metrics(extracted_gold, predicted);
    report.re_predicted_pairs->accuracy = ratio(correct, extracted_pairs.size());
  }
  return report;
}

// ---------------------------------------------------------------------------

std::string ablation_name(bool use_entity_mask, bool use_entity_type) {
  return std::string("mask-") + (use_entity_mask ? "on" : "off") + "_type-" +
         (use_entity_type ? "on" : "off");
}

json AblationReport::to_json() const {
  json rows_json = json::array();
  for (const auto& r : rows) {
    rows_json.push_back({{"name", r.name},
                         {"use_entity_mask", r.use_entity_mask},
                         {"use_entity_type", r.use_entity_type},
                         {"report", r.report.to_json()},
                         {"log", r.log.to_json()}});
  }
  return {{"evaluated_on", evaluated_on}, {"rows", rows_json}};
}

std::string AblationReport::to_table() const {
  std::ostringstream out;
  out << std::left << std::setw(20) << "config" << std::right;
  for (const char* h : {"NER P", "NER R", "NER F1", "RE P", "RE R", "RE F1"}) {
    out << std::setw(9) << h;
  }
  out << '\n' << std::fixed << std::setprecision(4);
  for (const auto& r : rows) {
    const MetricReport re = r.report.re_gold_pairs.value_or(MetricReport{});
    out << std::left << std::setw(20) << r.name << std::right << std::setw(9)
        << r.report.ner.precision << std::setw(9) << r.report.ner.recall
        << std::setw(9) << r.report.ner.f1 << std::setw(9) << re.precision
        << std::setw(9) << re.recall << std::setw(9) << re.f1 << '\n';
  }
  return out.str();
}

AblationReport run_ablation(std::span<const corpus::AnnotatedSentence> corpus,
                            const model::ModelConfig& model_config,
                            const train::TrainConfig& train_config,
                            const train::TrainOptions& train_options,
                            const EvalOptions& eval_options) {
  static constexpr std::pair<bool, bool> kConfigs[] = {
      {false, false}, {true, false}, {false, true}, {true, true}};
  AblationReport report;
  for (const auto& [mask, type] : kConfigs) {
    model::ModelConfig mc = model_config;
    mc.use_entity_mask = mask;
    mc.use_entity_type = type;
    train::TrainOptions opts = train_options;
    const std::string name = ablation_name(mask, type);
    if (opts.output_dir) opts.output_dir = *opts.output_dir / name;
    auto trained = train::train_loop(corpus, mc, train_config, opts);

    const auto& parts = trained.split;
    std::span<const corpus::AnnotatedSentence> held = parts.test;
    report.evaluated_on = "test";
    if (held.empty()) {
      held = parts.validation;
      report.evaluated_on = "validation";
    }
    if (held.empty()) {
      held = parts.train;
      report.evaluated_on = "train";
    }
    AblationRow row;
    row.name = name;
    row.use_entity_mask = mask;
    row.use_entity_type = type;
    row.report = evaluate(trained.best_model, held, eval_options);
    row.log = std::move(trained.log);
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace tijere::eval
