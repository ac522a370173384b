#include "tijere/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace tijere::model {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Config

void ModelConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("model config: ") + what);
  };
  require(vocab_size >= 2, "vocab_size must cover PAD and UNK");
  require(embed_dim > 0 && hidden_dim > 0, "dimensions must be positive");
  require(num_ner_labels > 0, "num_ner_labels must be positive");
  require(num_relations > 0, "num_relations must be positive");
  require(!use_entity_type || num_entity_types > 0,
          "entity types enabled with zero types");
  require(dropout >= 0.0 && dropout < 1.0, "dropout must be in [0, 1)");
  require(alpha >= 0.0 && beta >= 0.0, "loss weights must be non-negative");
}

json ModelConfig::to_json() const {
  return {{"vocab_size", vocab_size},
          {"embed_dim", embed_dim},
          {"hidden_dim", hidden_dim},
          {"num_ner_labels", num_ner_labels},
          {"num_relations", num_relations},
          {"num_entity_types", num_entity_types},
          {"dropout", dropout},
          {"use_entity_mask", use_entity_mask},
          {"use_entity_type", use_entity_type},
          {"alpha", alpha},
          {"beta", beta},
          {"bio_constraints", bio_constraints},
          {"freeze_embeddings", freeze_embeddings}};
}

ModelConfig ModelConfig::from_json(const json& doc) {
  ModelConfig c;
  c.vocab_size = doc.at("vocab_size").get<std::size_t>();
  c.embed_dim = doc.at("embed_dim").get<std::size_t>();
  c.hidden_dim = doc.at("hidden_dim").get<std::size_t>();
  c.num_ner_labels = doc.at("num_ner_labels").get<std::size_t>();
  c.num_relations = doc.at("num_relations").get<std::size_t>();
  c.num_entity_types = doc.at("num_entity_types").get<std::size_t>();
  c.dropout = doc.at("dropout").get<double>();
  c.use_entity_mask = doc.at("use_entity_mask").get<bool>();
  c.use_entity_type = doc.at("use_entity_type").get<bool>();
  c.alpha = doc.at("alpha").get<double>();
  c.beta = doc.at("beta").get<double>();
  c.bio_constraints = doc.value("bio_constraints", false);
  c.freeze_embeddings = doc.value("freeze_embeddings", false);
  return c;
}

// ---------------------------------------------------------------------------
// Parameters

namespace {

void fill_uniform(double* data, Eigen::Index n, double limit, Rng& rng) {
  for (Eigen::Index i = 0; i < n; ++i) data[i] = rng.uniform(-limit, limit);
}

double xavier(Eigen::Index fan_in, Eigen::Index fan_out) {
  return std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
}

}  // namespace

ModelParams ModelParams::zeros(const ModelConfig& c) {
  const auto d = static_cast<Eigen::Index>(c.embed_dim);
  const auto h = static_cast<Eigen::Index>(c.hidden_dim);
  const auto L = static_cast<Eigen::Index>(c.num_ner_labels);
  const auto R = static_cast<Eigen::Index>(c.num_relations);
  ModelParams p;
  p.token_embedding = Matrix::Zero(static_cast<Eigen::Index>(c.vocab_size), d);
  p.forward_gru = GruWeights::zeros(d, h);
  p.backward_gru = GruWeights::zeros(d, h);
  p.type_embedding =
      c.use_entity_type
          ? Matrix::Zero(static_cast<Eigen::Index>(c.num_entity_types), 2 * h)
          : Matrix(0, 0);
  p.ner_weight = Matrix::Zero(L, 2 * h);
  p.ner_bias = Vector::Zero(L);
  p.transitions = Matrix::Zero(L + 2, L + 2);
  p.re_weight = Matrix::Zero(R, static_cast<Eigen::Index>(c.concat_dim()));
  p.re_bias = Vector::Zero(R);
  return p;
}

ModelParams ModelParams::initialize(const ModelConfig& c, std::uint64_t seed) {
  c.validate();
  ModelParams p = zeros(c);
  const auto d = static_cast<Eigen::Index>(c.embed_dim);
  const auto h = static_cast<Eigen::Index>(c.hidden_dim);
  for (const auto& a : p.arrays()) {
    Rng rng(derive_seed(seed, a.name));
    const std::string_view name = a.name;
    if (name == "token_embedding" || name == "type_embedding") {
      fill_uniform(a.data, a.size(), 0.1, rng);
    } else if (name.ends_with(".input")) {
      fill_uniform(a.data, a.size(), xavier(d, h), rng);
    } else if (name.ends_with(".recurrent")) {
      fill_uniform(a.data, a.size(), xavier(h, h), rng);
    } else if (name == "ner_weight" || name == "re_weight") {
      fill_uniform(a.data, a.size(), xavier(a.cols, a.rows), rng);
    }
    // Biases and transitions stay zero.
  }
  return p;
}

ModelParams ModelParams::zeros_like() const {
  ModelParams p = *this;
  for (auto& a : p.arrays()) std::fill(a.data, a.data + a.size(), 0.0);
  return p;
}

namespace {

template <typename View, typename Params>
std::vector<View> collect_arrays(Params& p) {
  std::vector<View> out;
  auto add = [&](std::string_view name, auto& m) {
    out.push_back(View{name, m.data(), m.rows(), m.cols()});
  };
  add("token_embedding", p.token_embedding);
  add("forward_gru.input", p.forward_gru.input);
  add("forward_gru.recurrent", p.forward_gru.recurrent);
  add("forward_gru.bias", p.forward_gru.bias);
  add("backward_gru.input", p.backward_gru.input);
  add("backward_gru.recurrent", p.backward_gru.recurrent);
  add("backward_gru.bias", p.backward_gru.bias);
  add("type_embedding", p.type_embedding);
  add("ner_weight", p.ner_weight);
  add("ner_bias", p.ner_bias);
  add("transitions", p.transitions);
  add("re_weight", p.re_weight);
  add("re_bias", p.re_bias);
  return out;
}

}  // namespace

std::vector<ArrayView> ModelParams::arrays() {
  return collect_arrays<ArrayView>(*this);
}

std::vector<ConstArrayView> ModelParams::arrays() const {
  return collect_arrays<ConstArrayView>(*this);
}

std::size_t ModelParams::parameter_count() const {
  std::size_t n = 0;
  for (const auto& a : arrays()) n += static_cast<std::size_t>(a.size());
  return n;
}

bool ModelParams::all_finite() const {
  for (const auto& a : arrays()) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      if (!std::isfinite(a.data[i])) return false;
    }
  }
  return true;
}

void ModelParams::check_shapes(const ModelConfig& config) const {
  const ModelParams expected = zeros(config);
  const auto want = expected.arrays();
  const auto have = arrays();
  for (std::size_t i = 0; i < want.size(); ++i) {
    if (want[i].rows != have[i].rows || want[i].cols != have[i].cols) {
      std::ostringstream msg;
      msg << "parameter " << want[i].name << " has shape " << have[i].rows
          << "x" << have[i].cols << ", config expects " << want[i].rows << "x"
          << want[i].cols;
      throw std::invalid_argument(msg.str());
    }
  }
}

// ---------------------------------------------------------------------------
// Layer operations

Matrix embed(const Matrix& table, std::span<const int> token_ids) {
  Matrix out(static_cast<Eigen::Index>(token_ids.size()), table.cols());
  for (std::size_t t = 0; t < token_ids.size(); ++t) {
    const int id = token_ids[t];
    if (id < 0 || id >= table.rows()) {
      throw IdOutOfRange("token id " + std::to_string(id) +
                         " outside vocabulary of " +
                         std::to_string(table.rows()));
    }
    out.row(static_cast<Eigen::Index>(t)) = table.row(id);
  }
  return out;
}

Matrix ner_logits(const Matrix& encoded, const Matrix& weight,
                  const Vector& bias) {
  Matrix out = encoded * weight.transpose();
  out.rowwise() += bias.transpose();
  return out;
}

Vector entity_pool(const Matrix& encoded, std::span<const std::uint8_t> mask) {
  Vector pooled = Vector::Zero(encoded.cols());
  for (std::size_t t = 0; t < mask.size(); ++t) {
    if (mask[t]) pooled += encoded.row(static_cast<Eigen::Index>(t)).transpose();
  }
  return pooled;
}

Vector relation_features(const Vector& pooled, const Matrix* type_embedding,
                         int head_type, int tail_type) {
  if (!type_embedding) return pooled;
  const Eigen::Index k = type_embedding->rows();
  if (head_type < 0 || head_type >= k || tail_type < 0 || tail_type >= k) {
    throw IdOutOfRange("entity type id outside the type embedding table");
  }
  const Eigen::Index de = type_embedding->cols();
  Vector out(pooled.size() + 2 * de);
  out << pooled, type_embedding->row(head_type).transpose(),
      type_embedding->row(tail_type).transpose();
  return out;
}

Vector softmax(const Vector& logits) {
  const double m = logits.maxCoeff();
  Vector e = (logits.array() - m).exp().matrix();
  return e / e.sum();
}

RelationOutput relation_logits_and_probs(const Vector& features,
                                         const Matrix& weight,
                                         const Vector& bias) {
  RelationOutput out;
  out.logits = weight * features + bias;
  out.probs = softmax(out.logits);
  return out;
}

// ---------------------------------------------------------------------------
// JointModel

JointModel::JointModel(ModelConfig config, ModelParams params,
                       std::optional<Matrix> transition_mask)
    : config_(std::move(config)),
      params_(std::move(params)),
      transition_mask_(std::move(transition_mask)) {
  config_.validate();
  params_.check_shapes(config_);
  if (transition_mask_ &&
      (transition_mask_->rows() != params_.transitions.rows() ||
       transition_mask_->cols() != params_.transitions.cols())) {
    throw std::invalid_argument("transition mask shape mismatch");
  }
}

JointModel JointModel::create(const ModelConfig& config, std::uint64_t seed,
                              std::optional<Matrix> transition_mask) {
  return JointModel(config, ModelParams::initialize(config, seed),
                    std::move(transition_mask));
}

Matrix JointModel::effective_transitions() const {
  if (config_.bio_constraints && transition_mask_) {
    return params_.transitions + *transition_mask_;
  }
  return params_.transitions;
}

namespace {

Matrix dropout_mask(Eigen::Index rows, Eigen::Index cols, double rate,
                    Rng& rng) {
  const double keep = 1.0 - rate;
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = rng.uniform() < keep ? 1.0 / keep : 0.0;
    }
  }
  return m;
}

double cross_entropy(const Vector& logits, int label) {
  return log_sum_exp(logits) - logits(label);
}

}  // namespace

Matrix JointModel::encode_tokens(std::span<const int> ids,
                                 std::span<const std::uint8_t> mask,
                                 bool train, Rng* rng,
                                 InstanceTrace* trace) const {
  Matrix x = embed(params_.token_embedding, ids);
  const bool drop = train && config_.dropout > 0.0;
  if (drop) {
    Matrix m = dropout_mask(x.rows(), x.cols(), config_.dropout, *rng);
    x = x.cwiseProduct(m);
    if (trace) trace->embed_dropout = std::move(m);
  }
  const Matrix f = gru_forward(params_.forward_gru, x, mask, false,
                               trace ? &trace->forward_gru : nullptr);
  const Matrix b = gru_forward(params_.backward_gru, x, mask, true,
                               trace ? &trace->backward_gru : nullptr);
  Matrix enc(x.rows(), f.cols() + b.cols());
  enc << f, b;
  if (drop) {
    Matrix m = dropout_mask(enc.rows(), enc.cols(), config_.dropout, *rng);
    enc = enc.cwiseProduct(m);
    if (trace) trace->encoded_dropout = std::move(m);
  }
  if (trace) trace->embedded = std::move(x);
  return enc;
}

ForwardResult JointModel::forward(const mslr::Batch& batch, Mode mode,
                                  Rng* rng) const {
  const bool train = mode == Mode::kTrain;
  if (train && config_.dropout > 0.0 && rng == nullptr) {
    throw std::invalid_argument("train-mode dropout needs a generator");
  }
  ForwardResult result;
  result.trace.config = config_;
  result.trace.transitions = effective_transitions();
  const Matrix& trans = result.trace.transitions;

  double ner_sum = 0.0;
  double re_sum = 0.0;
  for (const auto& row : batch.rows) {
    InstanceTrace tr;
    tr.token_ids = row.token_ids;
    tr.attention = row.attention_mask;
    tr.origin = row.origin;
    tr.encoded = encode_tokens(row.token_ids, row.attention_mask, train, rng,
                               &tr);
    tr.emissions = ner_logits(tr.encoded, params_.ner_weight, params_.ner_bias);
    result.decoded.push_back(crf_decode(tr.emissions, tr.attention, trans));
    if (row.has_ner_labels()) {
      tr.ner_labels = row.ner_labels;
      const double nll = crf_nll(tr.emissions, tr.ner_labels, tr.attention,
                                 trans);
      result.row_ner_nll.push_back(nll);
      ner_sum += nll;
      ++result.trace.ner_rows;
    }

    if (config_.use_entity_mask) {
      tr.pool_mask.resize(row.width());
      bool any = false;
      for (std::size_t t = 0; t < row.width(); ++t) {
        tr.pool_mask[t] = row.entity_mask[t] && row.attention_mask[t];
        any = any || tr.pool_mask[t];
      }
      if (!any) {
        throw EmptyMask("entity mask is empty for sentence " +
                        std::to_string(row.origin.sentence) + " relation " +
                        std::to_string(row.origin.relation));
      }
    } else {
      tr.pool_mask = row.attention_mask;
    }
    tr.head_type = row.head_type;
    tr.tail_type = row.tail_type;
    const Vector pooled = entity_pool(tr.encoded, tr.pool_mask);
    tr.features = relation_features(
        pooled, config_.use_entity_type ? &params_.type_embedding : nullptr,
        row.head_type, row.tail_type);
    RelationOutput re = relation_logits_and_probs(
        tr.features, params_.re_weight, params_.re_bias);
    tr.probs = re.probs;
    if (row.has_relation_label()) {
      tr.relation_label = row.relation_label;
      const double ce = cross_entropy(re.logits, row.relation_label);
      result.row_re_ce.push_back(ce);
      re_sum += ce;
      ++result.trace.re_rows;
    }
    result.relation_probs.push_back(std::move(re.probs));
    result.trace.rows.push_back(std::move(tr));
  }
  const auto& t = result.trace;
  result.ner_nll = t.ner_rows ? ner_sum / static_cast<double>(t.ner_rows) : 0.0;
  result.re_ce = t.re_rows ? re_sum / static_cast<double>(t.re_rows) : 0.0;
  result.joint =
      joint_loss(result.ner_nll, result.re_ce, config_.alpha, config_.beta);
  return result;
}

ModelParams JointModel::backward(const ForwardTrace& trace) const {
  ModelParams g = params_.zeros_like();
  const auto h = static_cast<Eigen::Index>(config_.hidden_dim);
  const auto de = static_cast<Eigen::Index>(config_.entity_type_dim());
  const double ner_scale =
      trace.ner_rows ? config_.alpha / static_cast<double>(trace.ner_rows) : 0;
  const double re_scale =
      trace.re_rows ? config_.beta / static_cast<double>(trace.re_rows) : 0;

  for (const auto& tr : trace.rows) {
    const auto T = static_cast<Eigen::Index>(tr.token_ids.size());
    Matrix d_enc = Matrix::Zero(T, 2 * h);

    if (!tr.ner_labels.empty() && ner_scale != 0.0) {
      std::vector<Eigen::Index> active;
      std::vector<int> labels;
      for (Eigen::Index t = 0; t < T; ++t) {
        if (tr.attention[static_cast<std::size_t>(t)]) {
          active.push_back(t);
          labels.push_back(tr.ner_labels[static_cast<std::size_t>(t)]);
        }
      }
      Matrix e(static_cast<Eigen::Index>(active.size()), tr.emissions.cols());
      for (std::size_t k = 0; k < active.size(); ++k) {
        e.row(static_cast<Eigen::Index>(k)) = tr.emissions.row(active[k]);
      }
      const CrfGradient cg = crf_nll_gradient(e, trace.transitions, labels);
      g.transitions += ner_scale * cg.transitions;
      Matrix d_em = Matrix::Zero(T, tr.emissions.cols());
      for (std::size_t k = 0; k < active.size(); ++k) {
        d_em.row(active[k]) =
            ner_scale * cg.emissions.row(static_cast<Eigen::Index>(k));
      }
      g.ner_weight.noalias() += d_em.transpose() * tr.encoded;
      g.ner_bias += d_em.colwise().sum().transpose();
      d_enc.noalias() += d_em * params_.ner_weight;
    }

    if (tr.relation_label != mslr::kUnlabeled && re_scale != 0.0) {
      Vector d_logits = re_scale * tr.probs;
      d_logits(tr.relation_label) -= re_scale;
      g.re_weight.noalias() += d_logits * tr.features.transpose();
      g.re_bias += d_logits;
      const Vector d_feat = params_.re_weight.transpose() * d_logits;
      if (config_.use_entity_type) {
        g.type_embedding.row(tr.head_type) +=
            d_feat.segment(2 * h, de).transpose();
        g.type_embedding.row(tr.tail_type) +=
            d_feat.segment(2 * h + de, de).transpose();
      }
      const Vector d_pool = d_feat.head(2 * h);
      for (Eigen::Index t = 0; t < T; ++t) {
        if (tr.pool_mask[static_cast<std::size_t>(t)]) {
          d_enc.row(t) += d_pool.transpose();
        }
      }
    }

    if (tr.encoded_dropout.size() > 0) {
      d_enc = d_enc.cwiseProduct(tr.encoded_dropout);
    }
    Matrix d_x = Matrix::Zero(T, tr.embedded.cols());
    gru_backward(params_.forward_gru, tr.embedded, tr.forward_gru,
                 d_enc.leftCols(h), g.forward_gru, d_x);
    gru_backward(params_.backward_gru, tr.embedded, tr.backward_gru,
                 d_enc.rightCols(h), g.backward_gru, d_x);
    if (tr.embed_dropout.size() > 0) d_x = d_x.cwiseProduct(tr.embed_dropout);
    if (!config_.freeze_embeddings) {
      for (Eigen::Index t = 0; t < T; ++t) {
        g.token_embedding.row(tr.token_ids[static_cast<std::size_t>(t)]) +=
            d_x.row(t);
      }
    }
  }
  return g;
}

std::vector<int> JointModel::tag(std::span<const int> token_ids) const {
  return decode_encoded(encode(token_ids));
}

Matrix JointModel::encode(std::span<const int> token_ids) const {
  const std::vector<std::uint8_t> mask(token_ids.size(), 1);
  return encode_tokens(token_ids, mask, false, nullptr, nullptr);
}

std::vector<int> JointModel::decode_encoded(const Matrix& encoded) const {
  if (encoded.rows() == 0) return {};
  const Matrix em = ner_logits(encoded, params_.ner_weight, params_.ner_bias);
  return crf_viterbi(em, effective_transitions());
}

Vector JointModel::classify_encoded(const Matrix& encoded,
                                    std::span<const std::uint8_t> entity_mask,
                                    int head_type, int tail_type) const {
  Vector pooled;
  if (config_.use_entity_mask) {
    if (std::none_of(entity_mask.begin(), entity_mask.end(),
                     [](std::uint8_t m) { return m != 0; })) {
      throw EmptyMask("entity mask is empty");
    }
    pooled = entity_pool(encoded, entity_mask);
  } else {
    const std::vector<std::uint8_t> all(
        static_cast<std::size_t>(encoded.rows()), 1);
    pooled = entity_pool(encoded, all);
  }
  const Vector features = relation_features(
      pooled, config_.use_entity_type ? &params_.type_embedding : nullptr,
      head_type, tail_type);
  return relation_logits_and_probs(features, params_.re_weight,
                                   params_.re_bias)
      .probs;
}

Vector JointModel::classify(const mslr::MslrInstance& instance) const {
  mslr::Batch batch;
  mslr::MslrInstance row = instance;
  row.relation_label = mslr::kUnlabeled;
  row.ner_labels.clear();
  batch.width = row.width();
  batch.lengths.push_back(row.length);
  batch.rows.push_back(std::move(row));
  return forward(batch, Mode::kEval).relation_probs.front();
}

// ---------------------------------------------------------------------------
// Checkpoints

JointModel ModelBundle::make_model() const {
  std::optional<Matrix> mask;
  if (config.bio_constraints) mask = bio_transition_mask(inventory.tags());
  return JointModel(config, params, std::move(mask));
}

std::string checkpoint_to_string(const ModelBundle& bundle) {
  json params = json::object();
  for (const auto& a : bundle.params.arrays()) {
    json data = json::array();
    // Row-major order.
    for (Eigen::Index r = 0; r < a.rows; ++r) {
      for (Eigen::Index c = 0; c < a.cols; ++c) {
        data.push_back(a.data[c * a.rows + r]);
      }
    }
    params[std::string(a.name)] = {{"shape", {a.rows, a.cols}},
                                   {"data", std::move(data)}};
  }
  json doc = {{"format", "tijere-checkpoint"},
              {"version", 1},
              {"config", bundle.config.to_json()},
              {"vocab", bundle.vocab.to_json()},
              {"inventory", bundle.inventory.to_json()},
              {"params", std::move(params)}};
  return doc.dump();
}

ModelBundle checkpoint_from_string(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw CheckpointError(std::string("unparseable checkpoint: ") + e.what());
  }
  try {
    if (doc.at("format") != "tijere-checkpoint") {
      throw CheckpointError("not a tijere checkpoint");
    }
    if (doc.at("version").get<int>() != 1) {
      throw CheckpointError("unsupported checkpoint version");
    }
    ModelBundle bundle;
    bundle.config = ModelConfig::from_json(doc.at("config"));
    bundle.config.validate();
    bundle.vocab = mslr::Vocabulary::from_json(doc.at("vocab"));
    bundle.inventory = corpus::TypeInventory::from_json(doc.at("inventory"));
    if (bundle.vocab.size() != bundle.config.vocab_size ||
        bundle.inventory.num_tags() != bundle.config.num_ner_labels ||
        bundle.inventory.num_relations() != bundle.config.num_relations ||
        bundle.inventory.num_entity_types() != bundle.config.num_entity_types) {
      throw CheckpointError("vocabulary or inventory disagrees with config");
    }
    bundle.params = ModelParams::zeros(bundle.config);
    const auto& stored = doc.at("params");
    for (auto& a : bundle.params.arrays()) {
      const auto& entry = stored.at(std::string(a.name));
      const auto shape = entry.at("shape").get<std::vector<Eigen::Index>>();
      if (shape.size() != 2 || shape[0] != a.rows || shape[1] != a.cols) {
        throw CheckpointError("parameter " + std::string(a.name) +
                              " has an inconsistent shape");
      }
      const auto& data = entry.at("data");
      if (static_cast<Eigen::Index>(data.size()) != a.size()) {
        throw CheckpointError("parameter " + std::string(a.name) +
                              " has the wrong element count");
      }
      for (Eigen::Index r = 0; r < a.rows; ++r) {
        for (Eigen::Index c = 0; c < a.cols; ++c) {
          a.data[c * a.rows + r] =
              data[static_cast<std::size_t>(r * a.cols + c)].get<double>();
        }
      }
    }
    return bundle;
  } catch (const json::exception& e) {
    throw CheckpointError(std::string("malformed checkpoint: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw CheckpointError(e.what());
  }
}

void save_checkpoint(const ModelBundle& bundle,
                     const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write checkpoint " + path.string());
  out << checkpoint_to_string(bundle);
}

ModelBundle load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open checkpoint " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return checkpoint_from_string(buf.str());
}

// ---------------------------------------------------------------------------
// Embedding files

EmbeddingFile load_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CheckpointError("cannot open embeddings " + path.string());
  std::string magic, hash_hex;
  int version = 0;
  Eigen::Index rows = 0, dim = 0;
  if (!(in >> magic >> version >> hash_hex >> rows >> dim) ||
      magic != "tijere-embeddings" || version != 1 || rows <= 0 || dim <= 0) {
    throw CheckpointError("bad embeddings header in " + path.string());
  }
  EmbeddingFile file;
  try {
    file.vocab_hash = std::stoull(hash_hex, nullptr, 16);
  } catch (const std::exception&) {
    throw CheckpointError("bad vocabulary hash in " + path.string());
  }
  file.vectors.resize(rows, dim);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      if (!(in >> file.vectors(r, c))) {
        throw CheckpointError("truncated embeddings file " + path.string());
      }
    }
  }
  return file;
}

void save_embeddings(const std::filesystem::path& path,
                     const mslr::Vocabulary& vocab, const Matrix& vectors) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write embeddings " + path.string());
  out << "tijere-embeddings 1 " << std::hex << std::setw(16)
      << std::setfill('0') << vocab.hash() << std::dec << std::setfill(' ')
      << ' ' << vectors.rows() << ' ' << vectors.cols() << '\n';
  out << std::setprecision(17);
  for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
    for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
      if (c) out << ' ';
      out << vectors(r, c);
    }
    out << '\n';
  }
}

void apply_embeddings(ModelParams& params, const EmbeddingFile& file,
                      const mslr::Vocabulary& vocab) {
  if (file.vocab_hash != vocab.hash()) {
    throw CheckpointError("embedding file was built for another vocabulary");
  }
  if (file.vectors.rows() != params.token_embedding.rows() ||
      file.vectors.cols() != params.token_embedding.cols()) {
    throw CheckpointError("embedding file shape disagrees with the model");
  }
  params.token_embedding = file.vectors;
}

}  // namespace tijere::model
