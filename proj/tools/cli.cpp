#include "cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "tijere/corpus.hpp"
#include "tijere/errors.hpp"
#include "tijere/eval.hpp"
#include "tijere/extract.hpp"
#include "tijere/mslr.hpp"

namespace tijere::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <typename T>
json opt_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  f << text;
}

void write_json(const fs::path& path, const json& doc) {
  write_text(path, doc.dump(2) + "\n");
}

const std::string& need(const std::optional<std::string>& v, const char* flag) {
  if (!v) throw UsageError(std::string("missing required option ") + flag);
  return *v;
}

corpus::OntologySchema load_schema(const RunConfig& rc) {
  return rc.ontology ? corpus::OntologySchema::load(*rc.ontology)
                     : corpus::OntologySchema::bundled();
}

corpus::ParseOptions parse_options(const corpus::OntologySchema& schema) {
  corpus::ParseOptions o;
  o.known_entity_types = schema.entity_types();
  return o;
}

std::vector<corpus::AnnotatedSentence> load_corpus(
    const RunConfig& rc, const corpus::OntologySchema& schema) {
  return corpus::load_dataset(need(rc.dataset, "--dataset"), parse_options(schema));
}

void save_run_config(const RunConfig& rc) {
  if (rc.out) write_json(fs::path(*rc.out) / "run_config.json", rc.to_json());
}

extract::ExtractOptions extract_options(const RunConfig& rc,
                                        const corpus::OntologySchema& schema) {
  extract::ExtractOptions o;
  o.ontology_filter = rc.ontology_filter;
  o.confidence_floor = rc.confidence_floor;
  o.schema = schema;
  o.max_len = rc.train.max_len;
  return o;
}

eval::EvalOptions eval_options(const RunConfig& rc,
                               const corpus::OntologySchema& schema) {
  eval::EvalOptions o;
  o.gold_pairs = rc.gold_pairs;
  o.predicted_pairs = rc.predicted_pairs;
  o.extract = extract_options(rc, schema);
  o.workers = rc.workers;
  return o;
}

// ---------------------------------------------------------------------------
// Subcommands

int cmd_validate(const RunConfig& rc, std::ostream& out) {
  const auto schema = load_schema(rc);
  const auto check = corpus::check_dataset(
      corpus::read_file(need(rc.dataset, "--dataset")), parse_options(schema));

  json issues = json::array();
  for (const auto& i : check.issues) {
    out << "error: record " << (i.record ? std::to_string(*i.record) : "-")
        << ": " << corpus::issue_kind_name(i.kind) << ": " << i.message << '\n';
    issues.push_back({{"record", opt_json(i.record)},
                      {"kind", corpus::issue_kind_name(i.kind)},
                      {"message", i.message}});
  }
  json violations = json::array();
  for (std::size_t k = 0; k < check.sentences.size(); ++k) {
    const auto& s = check.sentences[k];
    const std::size_t record = check.record_indices[k];
    std::vector<corpus::OntologyViolation> found;
    for (std::size_t r = 0; r < s.relations.size(); ++r) {
      const auto& rel = s.relations[r];
      if (!schema.contains(rel.relation)) {
        found.push_back({r, rel.relation, s.entities[rel.head_index].type,
                         s.entities[rel.tail_index].type});
      }
    }
    if (found.empty()) found = corpus::validate_ontology(s, schema);
    for (const auto& v : found) {
      out << (rc.strict ? "error" : "warning") << ": record " << record
          << ": relation " << v.relation_index << " (" << v.head_type << ", "
          << v.relation << ", " << v.tail_type << ") breaks the ontology\n";
      violations.push_back({{"record", record},
                            {"relation_index", v.relation_index},
                            {"relation", v.relation},
                            {"head_type", v.head_type},
                            {"tail_type", v.tail_type}});
    }
  }
  const std::size_t records = check.sentences.size() + check.issues.size();
  out << "records: " << records << ", structural errors: " << issues.size()
      << ", ontology violations: " << violations.size() << '\n';
  if (rc.out) {
    write_json(fs::path(*rc.out) / "validation.json",
               {{"records", records},
                {"structural_errors", issues},
                {"ontology_violations", violations},
                {"strict", rc.strict}});
  }
  const bool failed = !issues.empty() || (rc.strict && !violations.empty());
  return failed ? kDataError : kOk;
}

int cmd_stats(const RunConfig& rc, std::ostream& out) {
  const auto schema = load_schema(rc);
  const auto corpus = load_corpus(rc, schema);
  const auto stats = corpus::dataset_stats(corpus, &schema);
  out << stats.to_table();
  if (rc.out) write_json(fs::path(*rc.out) / "stats.json", stats.to_json());
  return kOk;
}

int cmd_mslr(const RunConfig& rc, std::ostream& out) {
  const auto schema = load_schema(rc);
  const auto corpus = load_corpus(rc, schema);
  const auto inv = corpus::TypeInventory::build(corpus, schema);
  const auto vocab = mslr::build_vocab(corpus, rc.train.min_freq);
  const auto records = mslr::expand_corpus(corpus, inv);
  const auto set = mslr::encode_all(records, vocab, rc.train.max_len);
  const fs::path dir = need(rc.out, "--out");
  fs::create_directories(dir);
  std::ofstream f(dir / "mslr.jsonl", std::ios::binary);
  mslr::write_jsonl(f, set.instances);
  write_json(dir / "vocab.json", vocab.to_json());
  write_json(dir / "inventory.json", inv.to_json());
  for (const auto& s : set.skipped) out << "skipped: " << s.reason << '\n';
  out << "sentences: " << corpus.size() << ", instances: " << set.instances.size()
      << ", skipped: " << set.skipped.size() << '\n';
  return kOk;
}

int cmd_train(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  const auto schema = load_schema(rc);
  const auto corpus = load_corpus(rc, schema);
  const fs::path dir = need(rc.out, "--out");
  train::TrainOptions opts;
  opts.schema = schema;
  opts.output_dir = dir;
  opts.progress = &err;
  if (rc.embeddings) opts.embeddings = *rc.embeddings;
  const auto result = train::train_loop(corpus, rc.model, rc.train, opts);

  write_json(dir / "training_log.json", result.log.to_json());
  write_text(dir / "training_log.csv", result.log.to_csv());
  write_json(dir / "split.json", {{"train", result.split.train_indices},
                                  {"validation", result.split.validation_indices},
                                  {"test", result.split.test_indices}});
  json metrics = {{"best_epoch", result.best_epoch}, {"seed", rc.seed}};
  if (!result.split.test.empty()) {
    const auto report =
        eval::evaluate(result.best_model, result.split.test, eval_options(rc, schema));
    metrics["test"] = report.to_json();
    write_text(dir / "metrics.txt", report.to_table());
    out << report.to_table();
  }
  write_json(dir / "metrics.json", metrics);
  out << "best epoch " << result.best_epoch << ", checkpoint "
      << (dir / "best.ckpt.json").string() << '\n';
  return kOk;
}

int cmd_eval(const RunConfig& rc, std::ostream& out) {
  const auto schema = load_schema(rc);
  const auto bundle = model::load_checkpoint(need(rc.checkpoint, "--checkpoint"));
  const auto corpus = load_corpus(rc, schema);
  const auto report = eval::evaluate(bundle, corpus, eval_options(rc, schema));
  out << "seed " << rc.seed << '\n' << report.to_table();
  if (rc.out) {
    write_json(fs::path(*rc.out) / "metrics.json", report.to_json());
    write_text(fs::path(*rc.out) / "metrics.txt", report.to_table());
  }
  return kOk;
}

int cmd_ablate(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  const auto schema = load_schema(rc);
  const auto corpus = load_corpus(rc, schema);
  const fs::path dir = need(rc.out, "--out");
  train::TrainOptions opts;
  opts.schema = schema;
  opts.output_dir = dir;
  opts.progress = &err;
  if (rc.embeddings) opts.embeddings = *rc.embeddings;
  const auto report = eval::run_ablation(corpus, rc.model, rc.train, opts,
                                         eval_options(rc, schema));
  for (const auto& row : report.rows) {
    write_json(dir / ("metrics_" + row.name + ".json"), row.report.to_json());
  }
  write_json(dir / "ablation.json", report.to_json());
  write_text(dir / "ablation.txt", report.to_table());
  out << "evaluated on " << report.evaluated_on << " split, seed " << rc.seed
      << '\n'
      << report.to_table();
  return kOk;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::istringstream in(corpus::read_file(path));
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!corpus::tokenize(line).empty()) lines.push_back(line);
  }
  return lines;
}

int cmd_extract(const RunConfig& rc, std::ostream& out) {
  const auto schema = load_schema(rc);
  if (rc.input.has_value() == rc.dataset.has_value()) {
    throw UsageError("extract needs exactly one of --input or --dataset");
  }
  if (rc.gold_spans && !rc.dataset) {
    throw UsageError("--gold-spans needs --dataset");
  }
  const auto extractor = extract::Extractor::load(
      need(rc.checkpoint, "--checkpoint"), extract_options(rc, schema));
  std::vector<extract::ExtractionResult> results;
  if (rc.input) {
    const auto lines = read_lines(*rc.input);
    if (lines.empty()) throw EmptyInput(*rc.input + " has no sentences");
    results = extractor.extract_lines(lines, rc.workers);
  } else {
    results = extractor.extract_corpus(load_corpus(rc, schema), rc.gold_spans,
                                       rc.workers);
  }
  json doc = json::array();
  for (const auto& r : results) {
    doc.push_back(r.to_json());
    for (const auto& t : r.triples) {
      out << r.sentence_id << '\t' << t.head << " (" << t.head_type << ")\t"
          << t.relation << '\t' << t.tail << " (" << t.tail_type << ")\t"
          << std::fixed << std::setprecision(4) << t.confidence << '\n';
    }
  }
  if (rc.out) write_json(fs::path(*rc.out) / "extraction.json", doc);
  return kOk;
}

int cmd_export(const RunConfig& rc, std::ostream& out) {
  const auto& input = need(rc.input, "--input");
  json doc;
  try {
    doc = json::parse(corpus::read_file(input));
  } catch (const json::parse_error& e) {
    throw MalformedDocument(input + ": " + e.what());
  }
  const auto results = extract::results_from_json(doc);
  const std::string graph = extract::export_graph(results, rc.format);
  if (rc.out) {
    write_text(fs::path(*rc.out) / ("graph." + rc.format), graph);
  } else {
    out << graph;
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// Flags

struct Flags {
  std::optional<std::string> dataset, ontology, config, checkpoint, input,
      embeddings, out, format;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers, max_len, epochs, batch_size, embed_dim,
      hidden_dim, min_freq, checkpoint_every;
  std::optional<double> lr, dropout, weight_decay, clip_norm, confidence_floor;
  std::optional<bool> use_entity_mask, use_entity_type, bio_constraints,
      freeze_embeddings, predicted_pairs, gold_pairs;
  bool strict = false;
  bool ontology_filter = false;
  bool gold_spans = false;
};

template <typename T>
void override(T& target, const std::optional<T>& flag) {
  if (flag) target = *flag;
}

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--seed", f.seed, "Seed for splits, shuffling, init and dropout (default 42)");
  sub->add_option("--config", f.config, "JSON config file; flags override its values");
  sub->add_option("--ontology", f.ontology, "Ontology JSON (default: bundled schema)");
  sub->add_option("--out", f.out, "Output directory");
  sub->add_option("--workers", f.workers, "Worker threads for evaluation/extraction");
  sub->add_option("--max-len", f.max_len, "Longest sentence accepted, in tokens");
}

void add_model_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--epochs", f.epochs);
  sub->add_option("--batch-size", f.batch_size);
  sub->add_option("--lr", f.lr, "Learning rate");
  sub->add_option("--weight-decay", f.weight_decay);
  sub->add_option("--clip-norm", f.clip_norm);
  sub->add_option("--dropout", f.dropout);
  sub->add_option("--embed-dim", f.embed_dim);
  sub->add_option("--hidden-dim", f.hidden_dim, "GRU size per direction");
  sub->add_option("--min-freq", f.min_freq);
  sub->add_option("--checkpoint-every", f.checkpoint_every);
  sub->add_option("--embeddings", f.embeddings, "Precomputed embedding file");
  sub->add_flag("--freeze-embeddings,!--no-freeze-embeddings", f.freeze_embeddings);
  sub->add_flag("--use-entity-mask,!--no-use-entity-mask", f.use_entity_mask);
  sub->add_flag("--use-entity-type,!--no-use-entity-type", f.use_entity_type);
  sub->add_flag("--bio-constraints,!--no-bio-constraints", f.bio_constraints);
}

void add_eval_flags(CLI::App* sub, Flags& f) {
  sub->add_flag("--predicted-pairs,!--no-predicted-pairs", f.predicted_pairs,
                "Also score the end-to-end pipeline on decoded spans");
  sub->add_flag("--gold-pairs,!--no-gold-pairs", f.gold_pairs);
  sub->add_flag("--ontology-filter", f.ontology_filter);
  sub->add_option("--confidence-floor", f.confidence_floor);
}

RunConfig resolve(const std::string& command, const Flags& f) {
  RunConfig rc;
  rc.command = command;
  rc.config_file = f.config;
  if (f.config) {
    json doc;
    try {
      doc = json::parse(corpus::read_file(*f.config));
    } catch (const json::parse_error& e) {
      throw UsageError(*f.config + ": " + e.what());
    } catch (const DataError& e) {
      throw UsageError(e.what());
    }
    try {
      apply_config(rc, doc);
    } catch (const std::invalid_argument& e) {
      throw UsageError(*f.config + ": " + e.what());
    }
  }
  override(rc.seed, f.seed);
  override(rc.workers, f.workers);
  override(rc.train.max_len, f.max_len);
  override(rc.train.epochs, f.epochs);
  override(rc.train.batch_size, f.batch_size);
  override(rc.train.learning_rate, f.lr);
  override(rc.train.weight_decay, f.weight_decay);
  override(rc.train.min_freq, f.min_freq);
  override(rc.train.checkpoint_every, f.checkpoint_every);
  if (f.clip_norm) rc.train.clip_norm = f.clip_norm;
  override(rc.model.dropout, f.dropout);
  override(rc.model.embed_dim, f.embed_dim);
  override(rc.model.hidden_dim, f.hidden_dim);
  override(rc.model.use_entity_mask, f.use_entity_mask);
  override(rc.model.use_entity_type, f.use_entity_type);
  override(rc.model.bio_constraints, f.bio_constraints);
  override(rc.model.freeze_embeddings, f.freeze_embeddings);
  override(rc.predicted_pairs, f.predicted_pairs);
  override(rc.gold_pairs, f.gold_pairs);
  override(rc.confidence_floor, f.confidence_floor);
  override(rc.format, f.format);
  if (f.ontology_filter) rc.ontology_filter = true;
  if (f.strict) rc.strict = true;
  if (f.gold_spans) rc.gold_spans = true;
  if (f.dataset) rc.dataset = f.dataset;
  if (f.ontology) rc.ontology = f.ontology;
  if (f.checkpoint) rc.checkpoint = f.checkpoint;
  if (f.input) rc.input = f.input;
  if (f.embeddings) rc.embeddings = f.embeddings;
  if (f.out) rc.out = f.out;

  rc.train.split_seed = rc.seed;
  rc.train.shuffle_seed = rc.seed;
  rc.train.init_seed = rc.seed;
  try {
    rc.train.validate();
    if (rc.model.dropout < 0.0 || rc.model.dropout >= 1.0) {
      throw std::invalid_argument("dropout must be in [0, 1)");
    }
    if (rc.model.embed_dim == 0 || rc.model.hidden_dim == 0) {
      throw std::invalid_argument("dimensions must be positive");
    }
    if (rc.workers == 0) throw std::invalid_argument("--workers must be positive");
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return rc;
}

}  // namespace

json RunConfig::to_json() const {
  json model_json = model.to_json();
  // Sizes are filled in from the data at train time.
  for (const char* k : {"vocab_size", "num_ner_labels", "num_relations",
                        "num_entity_types"}) {
    model_json.erase(k);
  }
  return {{"command", command},
          {"seed", seed},
          {"model", model_json},
          {"train", train.to_json()},
          {"workers", workers},
          {"strict", strict},
          {"ontology_filter", ontology_filter},
          {"confidence_floor", confidence_floor},
          {"gold_pairs", gold_pairs},
          {"predicted_pairs", predicted_pairs},
          {"gold_spans", gold_spans},
          {"format", format},
          {"dataset", opt_json(dataset)},
          {"ontology", opt_json(ontology)},
          {"config_file", opt_json(config_file)},
          {"checkpoint", opt_json(checkpoint)},
          {"input", opt_json(input)},
          {"embeddings", opt_json(embeddings)},
          {"out", opt_json(out)},
          {"ignored_config_keys", ignored_keys}};
}

void apply_config(RunConfig& rc, const json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("config must be a JSON object");
  static const std::set<std::string> ignored = {"kernel_size", "conv_layer"};
  for (const auto& [key, value] : doc.items()) {
    try {
      if (ignored.count(key)) {
        rc.ignored_keys.push_back(key);
      } else if (key == "optimizer") {
        const auto name = value.get<std::string>();
        if (name != "AdamW" && name != "adamw") {
          throw std::invalid_argument("only the AdamW optimizer is supported");
        }
      } else if (key == "batch_size") {
        rc.train.batch_size = value.get<std::size_t>();
      } else if (key == "dropout") {
        rc.model.dropout = value.get<double>();
      } else if (key == "epsilon") {
        rc.train.epsilon = value.get<double>();
      } else if (key == "learning_rate") {
        rc.train.learning_rate = value.get<double>();
      } else if (key == "hidden_size") {
        rc.model.hidden_dim = value.get<std::size_t>();
      } else if (key == "embedding_size") {
        rc.model.embed_dim = value.get<std::size_t>();
      } else if (key == "epochs") {
        rc.train.epochs = value.get<std::size_t>();
      } else if (key == "weight_decay") {
        rc.train.weight_decay = value.get<double>();
      } else if (key == "beta1") {
        rc.train.beta1 = value.get<double>();
      } else if (key == "beta2") {
        rc.train.beta2 = value.get<double>();
      } else if (key == "clip_norm") {
        rc.train.clip_norm = value.is_null() ? std::nullopt
                                             : std::optional(value.get<double>());
      } else if (key == "split_ratios") {
        rc.train.split_ratios = value.get<std::array<double, 3>>();
      } else if (key == "checkpoint_every") {
        rc.train.checkpoint_every = value.get<std::size_t>();
      } else if (key == "max_len") {
        rc.train.max_len = value.get<std::size_t>();
      } else if (key == "min_freq") {
        rc.train.min_freq = value.get<std::size_t>();
      } else if (key == "seed") {
        rc.seed = value.get<std::uint64_t>();
      } else if (key == "alpha") {
        rc.model.alpha = value.get<double>();
      } else if (key == "beta") {
        rc.model.beta = value.get<double>();
      } else if (key == "use_entity_mask") {
        rc.model.use_entity_mask = value.get<bool>();
      } else if (key == "use_entity_type") {
        rc.model.use_entity_type = value.get<bool>();
      } else if (key == "bio_constraints") {
        rc.model.bio_constraints = value.get<bool>();
      } else if (key == "freeze_embeddings") {
        rc.model.freeze_embeddings = value.get<bool>();
      } else if (key == "embeddings") {
        rc.embeddings = value.get<std::string>();
      } else if (key == "workers") {
        rc.workers = value.get<std::size_t>();
      } else if (key == "ontology_filter") {
        rc.ontology_filter = value.get<bool>();
      } else if (key == "confidence_floor") {
        rc.confidence_floor = value.get<double>();
      } else {
        throw std::invalid_argument("unknown config key '" + key + "'");
      }
    } catch (const json::exception& e) {
      throw std::invalid_argument("bad value for '" + key + "': " + e.what());
    }
  }
}

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Joint cyber threat entity and relation extraction"};
  app.name(args.empty() ? "tijere" : fs::path(args[0]).filename().string());
  app.require_subcommand(1);
  Flags f;

  auto* validate = app.add_subcommand("validate", "Check a dataset's structure and ontology");
  add_common(validate, f);
  validate->add_option("--dataset", f.dataset)->required();
  validate->add_flag("--strict", f.strict, "Treat ontology violations as errors");

  auto* stats = app.add_subcommand("stats", "Entity and relation distribution");
  add_common(stats, f);
  stats->add_option("--dataset", f.dataset)->required();

  auto* mslr = app.add_subcommand("mslr", "Dump the multisequence instances as JSON lines");
  add_common(mslr, f);
  mslr->add_option("--dataset", f.dataset)->required();
  mslr->add_option("--min-freq", f.min_freq);

  auto* train = app.add_subcommand("train", "Train a joint model");
  add_common(train, f);
  add_model_flags(train, f);
  add_eval_flags(train, f);
  train->add_option("--dataset", f.dataset)->required();

  auto* evaluate = app.add_subcommand("eval", "Score a checkpoint on a dataset");
  add_common(evaluate, f);
  add_eval_flags(evaluate, f);
  evaluate->add_option("--dataset", f.dataset)->required();
  evaluate->add_option("--checkpoint", f.checkpoint)->required();

  auto* ablate = app.add_subcommand("ablate", "Train and score the four entity-feature configurations");
  add_common(ablate, f);
  add_model_flags(ablate, f);
  add_eval_flags(ablate, f);
  ablate->add_option("--dataset", f.dataset)->required();

  auto* extract = app.add_subcommand("extract", "Extract triples from sentences");
  add_common(extract, f);
  extract->add_option("--checkpoint", f.checkpoint)->required();
  extract->add_option("--input", f.input, "Text file, one sentence per line");
  extract->add_option("--dataset", f.dataset, "Annotated corpus");
  extract->add_flag("--gold-spans", f.gold_spans, "Use the corpus spans instead of decoding");
  extract->add_flag("--ontology-filter", f.ontology_filter);
  extract->add_option("--confidence-floor", f.confidence_floor);

  auto* exporter = app.add_subcommand("export", "Turn extraction results into a graph");
  add_common(exporter, f);
  exporter->add_option("--input", f.input, "extraction.json from the extract command")->required();
  exporter->add_option("--format", f.format, "json or csv");

  std::vector<std::string> rest(args.rbegin(), args.rend());
  if (!rest.empty()) rest.pop_back();
  try {
    app.parse(rest);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n'
        << "run '" << app.get_name() << " --help' for usage\n";
    return kUsageError;
  }

  CLI::App* active = app.get_subcommands().front();
  const std::string command = active->get_name();
  try {
    const RunConfig rc = resolve(command, f);
    for (const auto& k : rc.ignored_keys) {
      err << "note: config key '" << k << "' has no effect and was ignored\n";
    }
    save_run_config(rc);
    if (command == "validate") return cmd_validate(rc, out);
    if (command == "stats") return cmd_stats(rc, out);
    if (command == "mslr") return cmd_mslr(rc, out);
    if (command == "train") return cmd_train(rc, out, err);
    if (command == "eval") return cmd_eval(rc, out);
    if (command == "ablate") return cmd_ablate(rc, out, err);
    if (command == "extract") return cmd_extract(rc, out);
    if (command == "export") return cmd_export(rc, out);
    throw UsageError("unknown command " + command);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n'
        << "run '" << app.get_name() << " " << command << " --help' for usage\n";
    return kUsageError;
  } catch (const UnknownFormat& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
}

}  // namespace tijere::cli
