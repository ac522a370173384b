#include "tijere/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace tijere::train {

using nlohmann::json;

void TrainConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("train config: ") + what);
  };
  const double sum = split_ratios[0] + split_ratios[1] + split_ratios[2];
  require(std::abs(sum - 1.0) <= 1e-9, "split ratios must sum to 1");
  require(std::all_of(split_ratios.begin(), split_ratios.end(),
                      [](double r) { return r >= 0.0; }),
          "split ratios must be non-negative");
  require(learning_rate > 0.0, "learning rate must be positive");
  require(batch_size > 0, "batch size must be positive");
  require(epochs > 0, "epochs must be positive");
  require(epsilon > 0.0, "epsilon must be positive");
  require(weight_decay >= 0.0, "weight decay must be non-negative");
  require(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0,
          "betas must be in [0, 1)");
  require(!clip_norm || *clip_norm > 0.0, "clip norm must be positive");
  require(max_len > 0, "max_len must be positive");
}

json TrainConfig::to_json() const {
  json doc = {{"split_ratios", split_ratios},
              {"split_seed", split_seed},
              {"shuffle_seed", shuffle_seed},
              {"init_seed", init_seed},
              {"learning_rate", learning_rate},
              {"epsilon", epsilon},
              {"weight_decay", weight_decay},
              {"beta1", beta1},
              {"beta2", beta2},
              {"batch_size", batch_size},
              {"epochs", epochs},
              {"checkpoint_every", checkpoint_every},
              {"max_len", max_len},
              {"min_freq", min_freq}};
  doc["clip_norm"] = clip_norm ? json(*clip_norm) : json(nullptr);
  return doc;
}

// ---------------------------------------------------------------------------

Split split(std::span<const corpus::AnnotatedSentence> corpus,
            const std::array<double, 3>& ratios, std::uint64_t seed) {
  const std::size_t n = corpus.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));

  // Guard against 0.15 * 100 landing a hair under 15.
  auto portion = [n](double ratio) {
    return static_cast<std::size_t>(
        std::floor(static_cast<double>(n) * ratio + 1e-9));
  };
  const std::size_t n_val = portion(ratios[1]);
  const std::size_t n_test = portion(ratios[2]);
  const std::size_t n_train = n - n_val - n_test;

  Split out;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t idx = order[k];
    if (k < n_train) {
      out.train_indices.push_back(idx);
    } else if (k < n_train + n_val) {
      out.validation_indices.push_back(idx);
    } else {
      out.test_indices.push_back(idx);
    }
  }
  // Keep corpus order inside each partition.
  for (auto* v : {&out.train_indices, &out.validation_indices,
                  &out.test_indices}) {
    std::sort(v->begin(), v->end());
  }
  for (auto i : out.train_indices) out.train.push_back(corpus[i]);
  for (auto i : out.validation_indices) out.validation.push_back(corpus[i]);
  for (auto i : out.test_indices) out.test.push_back(corpus[i]);
  return out;
}

// ---------------------------------------------------------------------------

OptimizerState OptimizerState::for_params(const model::ModelParams& params) {
  return {params.zeros_like(), params.zeros_like(), 0};
}

void adamw_step(model::ModelParams& params, const model::ModelParams& grads,
                OptimizerState& state, const AdamWConfig& config,
                std::span<const std::string_view> frozen) {
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double bias1 = 1.0 - std::pow(config.beta1, t);
  const double bias2 = 1.0 - std::pow(config.beta2, t);
  const double decay = 1.0 - config.learning_rate * config.weight_decay;

  auto p = params.arrays();
  const auto g = grads.arrays();
  auto m = state.first_moment.arrays();
  auto v = state.second_moment.arrays();
  for (std::size_t a = 0; a < p.size(); ++a) {
    if (p[a].size() != g[a].size() || p[a].size() != m[a].size()) {
      throw std::invalid_argument("optimizer shape mismatch in " +
                                  std::string(p[a].name));
    }
    if (std::find(frozen.begin(), frozen.end(), p[a].name) != frozen.end()) {
      continue;
    }
    for (Eigen::Index i = 0; i < p[a].size(); ++i) {
      const double gi = g[a].data[i];
      m[a].data[i] = config.beta1 * m[a].data[i] + (1.0 - config.beta1) * gi;
      v[a].data[i] =
          config.beta2 * v[a].data[i] + (1.0 - config.beta2) * gi * gi;
      const double m_hat = m[a].data[i] / bias1;
      const double v_hat = v[a].data[i] / bias2;
      p[a].data[i] = p[a].data[i] * decay - config.learning_rate * m_hat /
                                                (std::sqrt(v_hat) +
                                                 config.epsilon);
    }
  }
}

double clip_gradients(model::ModelParams& grads, double max_norm) {
  double sq = 0.0;
  for (const auto& a : std::as_const(grads).arrays()) {
    for (Eigen::Index i = 0; i < a.size(); ++i) sq += a.data[i] * a.data[i];
  }
  const double norm = std::sqrt(sq);
  if (norm > max_norm) {
    const double scale = max_norm / norm;
    for (auto& a : grads.arrays()) {
      for (Eigen::Index i = 0; i < a.size(); ++i) a.data[i] *= scale;
    }
  }
  return norm;
}

// ---------------------------------------------------------------------------

json TrainingLog::to_json() const {
  auto metrics = [](const EpochMetrics& m) {
    return json{{"ner_loss", m.ner_loss},         {"re_loss", m.re_loss},
                {"joint_loss", m.joint_loss},     {"ner_accuracy", m.ner_accuracy},
                {"re_accuracy", m.re_accuracy},   {"instances", m.instances}};
  };
  json rows = json::array();
  for (const auto& e : epochs) {
    json row = {{"epoch", e.epoch}, {"train", metrics(e.train)}};
    row["validation"] =
        e.validation ? metrics(*e.validation) : json(nullptr);
    rows.push_back(std::move(row));
  }
  return {{"epochs", rows}};
}

std::string TrainingLog::to_csv() const {
  std::ostringstream out;
  out.precision(17);
  out << "epoch,split,metric,value\n";
  auto emit = [&](std::size_t epoch, const char* split, const EpochMetrics& m) {
    out << epoch << ',' << split << ",ner_loss," << m.ner_loss << '\n'
        << epoch << ',' << split << ",re_loss," << m.re_loss << '\n'
        << epoch << ',' << split << ",joint_loss," << m.joint_loss << '\n'
        << epoch << ',' << split << ",ner_accuracy," << m.ner_accuracy << '\n'
        << epoch << ',' << split << ",re_accuracy," << m.re_accuracy << '\n';
  };
  for (const auto& e : epochs) {
    emit(e.epoch, "train", e.train);
    if (e.validation) emit(e.epoch, "validation", *e.validation);
  }
  return out.str();
}

namespace {

struct MetricAccumulator {
  double ner_sum = 0.0, re_sum = 0.0;
  std::size_t ner_rows = 0, re_rows = 0;
  std::size_t tokens = 0, tokens_correct = 0;
  std::size_t relations_correct = 0;
  std::size_t instances = 0;

  void add(const mslr::Batch& batch, const model::ForwardResult& r) {
    ner_sum += r.ner_nll * static_cast<double>(r.trace.ner_rows);
    re_sum += r.re_ce * static_cast<double>(r.trace.re_rows);
    ner_rows += r.trace.ner_rows;
    re_rows += r.trace.re_rows;
    instances += batch.size();
    for (std::size_t i = 0; i < batch.size(); ++i) {
      const auto& row = batch.rows[i];
      if (row.has_ner_labels()) {
        for (std::size_t t = 0; t < row.width(); ++t) {
          if (!row.attention_mask[t]) continue;
          ++tokens;
          tokens_correct += r.decoded[i][t] == row.ner_labels[t] ? 1 : 0;
        }
      }
      if (row.has_relation_label()) {
        Eigen::Index best = 0;
        r.relation_probs[i].maxCoeff(&best);
        relations_correct += best == row.relation_label ? 1 : 0;
      }
    }
  }

  EpochMetrics finish(double alpha, double beta) const {
    EpochMetrics m;
    m.ner_loss = ner_rows ? ner_sum / static_cast<double>(ner_rows) : 0.0;
    m.re_loss = re_rows ? re_sum / static_cast<double>(re_rows) : 0.0;
    m.joint_loss = model::joint_loss(m.ner_loss, m.re_loss, alpha, beta);
    m.ner_accuracy =
        tokens ? static_cast<double>(tokens_correct) / static_cast<double>(tokens)
               : 0.0;
    m.re_accuracy = re_rows ? static_cast<double>(relations_correct) /
                                  static_cast<double>(re_rows)
                            : 0.0;
    m.instances = instances;
    return m;
  }
};

std::string origins_of(const mslr::Batch& batch) {
  std::ostringstream out;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    if (i) out << ", ";
    out << "(" << batch.rows[i].origin.sentence << ", "
        << batch.rows[i].origin.relation << ")";
  }
  return out.str();
}

}  // namespace

EpochMetrics evaluate_instances(const model::JointModel& model,
                                std::span<const mslr::MslrInstance> instances,
                                std::size_t batch_size) {
  MetricAccumulator acc;
  for (const auto& batch :
       mslr::make_batches(instances, batch_size, std::nullopt)) {
    acc.add(batch, model.forward(batch, model::Mode::kEval));
  }
  return acc.finish(model.config().alpha, model.config().beta);
}

TrainResult fit(std::span<const corpus::AnnotatedSentence> train_set,
                std::span<const corpus::AnnotatedSentence> validation_set,
                const corpus::TypeInventory& inventory,
                const model::ModelConfig& model_config,
                const TrainConfig& train_config, const TrainOptions& options) {
  train_config.validate();
  TrainResult result;

  mslr::Vocabulary vocab = mslr::build_vocab(train_set, train_config.min_freq);
  model::ModelConfig config = model_config;
  config.vocab_size = vocab.size();
  config.num_ner_labels = inventory.num_tags();
  config.num_relations = inventory.num_relations();
  config.num_entity_types = inventory.num_entity_types();
  config.validate();

  auto train_records = mslr::expand_corpus(train_set, inventory);
  auto val_records = mslr::expand_corpus(validation_set, inventory);
  auto train_encoded =
      mslr::encode_all(train_records, vocab, train_config.max_len);
  auto val_encoded = mslr::encode_all(val_records, vocab, train_config.max_len);
  result.skipped = train_encoded.skipped;
  result.skipped.insert(result.skipped.end(), val_encoded.skipped.begin(),
                        val_encoded.skipped.end());
  if (options.progress) {
    for (const auto& s : result.skipped) {
      *options.progress << "skipped: " << s.reason << '\n';
    }
  }

  model::ModelBundle bundle{config, {}, vocab, inventory};
  model::ModelParams params =
      model::ModelParams::initialize(config, train_config.init_seed);
  if (options.embeddings) {
    model::apply_embeddings(params, model::load_embeddings(*options.embeddings),
                            vocab);
  }
  std::optional<model::Matrix> mask;
  if (config.bio_constraints) mask = model::bio_transition_mask(inventory.tags());
  model::JointModel net(config, std::move(params), mask);

  OptimizerState state = OptimizerState::for_params(net.params());
  const AdamWConfig adam{train_config.learning_rate, train_config.beta1,
                         train_config.beta2, train_config.epsilon,
                         train_config.weight_decay};
  std::vector<std::string_view> frozen;
  if (config.freeze_embeddings) frozen.push_back("token_embedding");
  Rng dropout_rng(derive_seed(train_config.init_seed, "dropout"));

  auto snapshot = [&] {
    model::ModelBundle b = bundle;
    b.params = net.params();
    return b;
  };
  if (options.output_dir) std::filesystem::create_directories(*options.output_dir);

  double best_loss = std::numeric_limits<double>::infinity();
  for (std::size_t epoch = 1; epoch <= train_config.epochs; ++epoch) {
    const auto start = std::chrono::steady_clock::now();
    MetricAccumulator acc;
    const auto batches =
        mslr::make_batches(train_encoded.instances, train_config.batch_size,
                           derive_seed(train_config.shuffle_seed, epoch));
    for (const auto& batch : batches) {
      const auto fwd = net.forward(batch, model::Mode::kTrain, &dropout_rng);
      if (!std::isfinite(fwd.joint)) {
        throw NonFiniteLoss("non-finite loss in epoch " +
                            std::to_string(epoch) + " for batch rows " +
                            origins_of(batch));
      }
      acc.add(batch, fwd);
      model::ModelParams grads = net.backward(fwd.trace);
      if (train_config.clip_norm) clip_gradients(grads, *train_config.clip_norm);
      adamw_step(net.params(), grads, state, adam, frozen);
    }

    EpochLog entry;
    entry.epoch = epoch;
    entry.train = acc.finish(config.alpha, config.beta);
    if (!val_encoded.instances.empty()) {
      entry.validation = evaluate_instances(net, val_encoded.instances,
                                            train_config.batch_size);
    }
    entry.seconds = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - start)
                        .count();
    const double selection =
        entry.validation ? entry.validation->joint_loss : entry.train.joint_loss;
    if (selection < best_loss) {
      best_loss = selection;
      result.best_epoch = epoch;
      result.best_model = snapshot();
      if (options.output_dir) {
        result.best_checkpoint = *options.output_dir / "best.ckpt.json";
        model::save_checkpoint(result.best_model, *result.best_checkpoint);
      }
    }
    if (options.output_dir && train_config.checkpoint_every > 0 &&
        epoch % train_config.checkpoint_every == 0) {
      model::save_checkpoint(snapshot(),
                             *options.output_dir /
                                 ("epoch_" + std::to_string(epoch) + ".ckpt.json"));
    }
    if (options.progress) {
      *options.progress << "epoch " << epoch << " train joint "
                        << entry.train.joint_loss << " (ner "
                        << entry.train.ner_loss << ", re " << entry.train.re_loss
                        << ")";
      if (entry.validation) {
        *options.progress << " validation joint " << entry.validation->joint_loss;
      }
      *options.progress << " [" << entry.seconds << " s]\n";
    }
    result.log.epochs.push_back(entry);
  }

  result.final_model = snapshot();
  if (result.best_epoch == 0) result.best_model = result.final_model;
  if (options.output_dir) {
    model::save_checkpoint(result.final_model,
                           *options.output_dir / "final.ckpt.json");
  }
  return result;
}

TrainResult train_loop(std::span<const corpus::AnnotatedSentence> corpus,
                       const model::ModelConfig& model_config,
                       const TrainConfig& train_config,
                       const TrainOptions& options) {
  if (corpus.empty()) throw DataError("cannot train on an empty corpus");
  train_config.validate();
  Split parts = split(corpus, train_config.split_ratios, train_config.split_seed);
  const auto inventory = corpus::TypeInventory::build(corpus, options.schema);
  TrainResult result = fit(parts.train, parts.validation, inventory,
                           model_config, train_config, options);
  result.split = std::move(parts);
  return result;
}

}  // namespace tijere::train
