#include "entrank/matchnets.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "entrank/errors.hpp"
#include "entrank/jsonio.hpp"

namespace entrank {

using nn::Matrix;
using nn::Vector;
using nlohmann::json;

std::vector<LabeledQuery> load_labeled_pairs(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open training-pair file: " + path.string());
  std::vector<LabeledQuery> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      const json row = json::parse(line);
      LabeledQuery pair;
      for (const auto& t : row.at("q")) pair.query.push_back(to_lower(t.get<std::string>()));
      for (const auto& l : row.at("labels")) pair.labels.insert(l.get<std::string>());
      out.push_back(std::move(pair));
    } catch (const json::exception& e) {
      throw DataError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

void save_labeled_pairs(const std::vector<LabeledQuery>& pairs,
                        const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write training-pair file: " + path.string());
  for (const auto& pair : pairs) {
    json row;
    row["q"] = pair.query;
    row["labels"] = pair.labels;
    out << row.dump() << '\n';
  }
}

OverlapFeatures overlap_features(const Tokens& query, const Tokens& labelName,
                                 const std::set<Tokens>& labelPatterns) {
  OverlapFeatures out;
  const auto qWords = token_set(query);
  const auto qStems = stemmed_token_set(query);
  out.word_name = jaccard(qWords, token_set(labelName));
  out.stem_name = jaccard(qStems, stemmed_token_set(labelName));
  for (const auto& pattern : labelPatterns) {
    out.word_pattern_max = std::max(out.word_pattern_max, jaccard(qWords, token_set(pattern)));
    out.stem_pattern_max =
        std::max(out.stem_pattern_max, jaccard(qStems, stemmed_token_set(pattern)));
  }
  return out;
}

namespace {

double bce(double p, double y) {
  const double clamped = std::clamp(p, 1e-12, 1.0 - 1e-12);
  return -(y * std::log(clamped) + (1.0 - y) * std::log(1.0 - clamped));
}

std::vector<std::string> sorted_vocab_tokens(const std::vector<Tokens>& sequences) {
  std::set<std::string> seen;
  for (const auto& seq : sequences) seen.insert(seq.begin(), seq.end());
  return {seen.begin(), seen.end()};
}

// Validation slice: floor(n * fraction) examples after a seeded shuffle.
// A zero-sized slice disables early stopping.
void split_validation(std::size_t n, double fraction, nn::Rng& rng,
                      std::vector<std::size_t>& train, std::vector<std::size_t>& val) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  const std::size_t valCount = static_cast<std::size_t>(static_cast<double>(n) * fraction);
  val.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(valCount));
  train.assign(idx.begin() + static_cast<std::ptrdiff_t>(valCount), idx.end());
  std::sort(val.begin(), val.end());
  std::sort(train.begin(), train.end());
}

json conv_to_json(const nn::Conv1d& c) {
  json filters = json::array();
  for (const auto& f : c.filters) filters.push_back(matrix_to_json(f));
  return {{"filters", std::move(filters)}, {"biases", vector_to_json(c.biases)}};
}

nn::Conv1d conv_from_json(const json& j, int inputDim) {
  const auto& filters = j.at("filters");
  const int k = static_cast<int>(filters.size());
  const int width = static_cast<int>(filters.at(0).size());
  nn::Conv1d c(k, width, inputDim);
  for (int f = 0; f < k; ++f) c.filters[static_cast<std::size_t>(f)] = matrix_from_json(filters.at(f));
  c.biases = vector_from_json(j.at("biases"));
  return c;
}

json embedding_to_json(const nn::EmbeddingTable& e) {
  json vocab = json::object();
  for (const auto& [token, row] : e.vocab) vocab[token] = row;
  return {{"vocab", std::move(vocab)},
          {"vectors", matrix_to_json(e.vectors)},
          {"trainable", e.trainable}};
}

nn::EmbeddingTable embedding_from_json(const json& j) {
  nn::EmbeddingTable e;
  for (const auto& [token, row] : j.at("vocab").items()) e.vocab[token] = row.get<int>();
  e.vectors = matrix_from_json(j.at("vectors"));
  e.trainable = j.at("trainable").get<bool>();
  return e;
}

json label_meta_to_json(const std::map<std::string, LabelMeta>& meta) {
  json out = json::object();
  for (const auto& [label, m] : meta) {
    json patterns = json::array();
    for (const auto& p : m.patterns) patterns.push_back(p);
    out[label] = {{"name", m.name_tokens}, {"patterns", std::move(patterns)}};
  }
  return out;
}

std::map<std::string, LabelMeta> label_meta_from_json(const json& j) {
  std::map<std::string, LabelMeta> out;
  for (const auto& [label, m] : j.items()) {
    LabelMeta meta;
    for (const auto& t : m.at("name")) meta.name_tokens.push_back(t.get<std::string>());
    for (const auto& p : m.at("patterns")) {
      Tokens pattern;
      for (const auto& t : p) pattern.push_back(t.get<std::string>());
      meta.patterns.insert(std::move(pattern));
    }
    out[label] = std::move(meta);
  }
  return out;
}

}  // namespace

int QueryLabelNet::pooled_dim() const {
  int total = 0;
  for (const auto& c : convs) total += c.num_filters();
  return total;
}

int QueryLabelNet::index_of(const std::string& label) const {
  const auto it = std::lower_bound(labels.begin(), labels.end(), label);
  if (it == labels.end() || *it != label) return -1;
  return static_cast<int>(it - labels.begin());
}

nn::Vector QueryLabelNet::score(const Tokens& query) const {
  if (query.empty()) throw std::invalid_argument("QueryLabelNet: query must have >= 1 token");
  const Matrix embedded = embeddings.lookup(query);
  Vector pooled(pooled_dim());
  int offset = 0;
  for (const auto& conv : convs) {
    pooled.segment(offset, conv.num_filters()) =
        nn::maxpool_apply(nn::conv1d_apply(conv.filters, conv.biases, embedded));
    offset += conv.num_filters();
  }
  const int pd = pooled_dim();
  Vector scores(label_count());
  for (int l = 0; l < label_count(); ++l) {
    const auto& meta = label_meta.at(labels[static_cast<std::size_t>(l)]);
    const OverlapFeatures ov = overlap_features(query, meta.name_tokens, meta.patterns);
    const double z = out_weights.head(pd).dot(pooled) +
                     out_weights.tail(4).dot(Vector(ov.as_vector())) + label_bias(l);
    scores(l) = nn::sigmoid(z);
  }
  return scores;
}

double QueryLabelNet::score_label(const Tokens& query, const std::string& label) const {
  const int idx = index_of(label);
  if (idx < 0) return 0.0;
  return score(query)(idx);
}

std::string QueryLabelNet::to_json_string() const {
  json j;
  j["kind"] = "query_label_net";
  j["embeddings"] = embedding_to_json(embeddings);
  json convArr = json::array();
  for (const auto& c : convs) convArr.push_back(conv_to_json(c));
  j["convs"] = std::move(convArr);
  j["out_weights"] = vector_to_json(out_weights);
  j["label_bias"] = vector_to_json(label_bias);
  j["labels"] = labels;
  j["label_meta"] = label_meta_to_json(label_meta);
  return j.dump(1);
}

QueryLabelNet QueryLabelNet::from_json_string(const std::string& text) {
  const json j = json::parse(text);
  QueryLabelNet net;
  net.embeddings = embedding_from_json(j.at("embeddings"));
  for (const auto& c : j.at("convs")) net.convs.push_back(conv_from_json(c, net.embeddings.dim()));
  net.out_weights = vector_from_json(j.at("out_weights"));
  net.label_bias = vector_from_json(j.at("label_bias"));
  for (const auto& l : j.at("labels")) net.labels.push_back(l.get<std::string>());
  net.label_meta = label_meta_from_json(j.at("label_meta"));
  return net;
}

void QueryLabelNet::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write checkpoint: " + path.string());
  out << to_json_string();
}

QueryLabelNet QueryLabelNet::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open checkpoint: " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return from_json_string(text);
}

namespace {

// Per-example cache that does not depend on parameters.
struct LabelNetExample {
  Tokens query;
  std::vector<int> rows;
  Vector targets;          // 0/1 per label
  Matrix overlaps;         // label_count x 4
};

double label_net_loss(const QueryLabelNet& net, const std::vector<LabelNetExample>& examples,
                      const std::vector<std::size_t>& idx) {
  if (idx.empty()) return 0.0;
  double total = 0.0;
  for (const std::size_t i : idx) {
    const Vector p = net.score(examples[i].query);
    double exLoss = 0.0;
    for (Eigen::Index l = 0; l < p.size(); ++l) exLoss += bce(p(l), examples[i].targets(l));
    total += exLoss / static_cast<double>(p.size());
  }
  return total / static_cast<double>(idx.size());
}

struct LabelNetSnapshot {
  Matrix embeddings;
  std::vector<std::vector<Matrix>> filters;
  std::vector<Vector> biases;
  Vector out_weights;
  Vector label_bias;
};

LabelNetSnapshot snapshot_of(const QueryLabelNet& net) {
  LabelNetSnapshot s;
  s.embeddings = net.embeddings.vectors;
  for (const auto& c : net.convs) {
    s.filters.push_back(c.filters);
    s.biases.push_back(c.biases);
  }
  s.out_weights = net.out_weights;
  s.label_bias = net.label_bias;
  return s;
}

void restore(QueryLabelNet& net, const LabelNetSnapshot& s) {
  net.embeddings.vectors = s.embeddings;
  for (std::size_t i = 0; i < net.convs.size(); ++i) {
    net.convs[i].filters = s.filters[i];
    net.convs[i].biases = s.biases[i];
  }
  net.out_weights = s.out_weights;
  net.label_bias = s.label_bias;
}

}  // namespace

QueryLabelNet train_label_net(const std::vector<LabeledQuery>& data,
                              const std::map<std::string, LabelMeta>& labelMeta,
                              const LabelNetConfig& config, TrainReport* report) {
  if (data.empty()) throw std::invalid_argument("train_label_net: empty training set");

  QueryLabelNet net;
  {
    std::set<std::string> labelSet;
    for (const auto& ex : data) labelSet.insert(ex.labels.begin(), ex.labels.end());
    if (labelSet.empty()) throw std::invalid_argument("train_label_net: no labels in data");
    net.labels.assign(labelSet.begin(), labelSet.end());
  }
  for (const auto& label : net.labels) {
    const auto it = labelMeta.find(label);
    if (it != labelMeta.end()) {
      net.label_meta[label] = it->second;
    } else {
      net.label_meta[label] = {name_tokens(label), {}};
    }
  }

  nn::Rng rng(config.seed);
  {
    std::vector<Tokens> sequences;
    for (const auto& ex : data) sequences.push_back(ex.query);
    net.embeddings = nn::EmbeddingTable::random(sorted_vocab_tokens(sequences),
                                                config.embedding_dim, rng);
  }
  if (!config.pretrained_embeddings.empty())
    net.embeddings.load_pretrained(config.pretrained_embeddings);
  for (const int w : config.filter_widths) {
    nn::Conv1d conv(config.feature_maps, w, config.embedding_dim);
    conv.randomize(rng);
    net.convs.push_back(std::move(conv));
  }
  const int pd = net.pooled_dim();
  net.out_weights = Vector::Zero(pd + 4);
  {
    const double limit = std::sqrt(6.0 / (pd + 4 + 1));
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (Eigen::Index i = 0; i < net.out_weights.size(); ++i) net.out_weights(i) = dist(rng);
  }
  net.label_bias = Vector::Zero(net.label_count());

  // Parameter-independent caches.
  std::vector<LabelNetExample> examples;
  examples.reserve(data.size());
  for (const auto& ex : data) {
    if (ex.query.empty()) throw std::invalid_argument("train_label_net: empty query in data");
    LabelNetExample e;
    e.query = ex.query;
    e.rows = net.embeddings.rows_of(ex.query);
    e.targets = Vector::Zero(net.label_count());
    for (const auto& l : ex.labels) e.targets(net.index_of(l)) = 1.0;
    e.overlaps = Matrix(net.label_count(), 4);
    for (int l = 0; l < net.label_count(); ++l) {
      const auto& meta = net.label_meta.at(net.labels[static_cast<std::size_t>(l)]);
      e.overlaps.row(l) =
          overlap_features(ex.query, meta.name_tokens, meta.patterns).as_vector().transpose();
    }
    examples.push_back(std::move(e));
  }

  std::vector<std::size_t> trainIdx, valIdx;
  split_validation(examples.size(), config.validation_fraction, rng, trainIdx, valIdx);
  if (trainIdx.empty()) {
    trainIdx = valIdx;  // tiny datasets: train on everything, no early stop
    valIdx.clear();
  }

  nn::AdadeltaState embState = nn::AdadeltaState::like(net.embeddings.vectors);
  std::vector<std::vector<nn::AdadeltaState>> filterStates;
  std::vector<nn::AdadeltaState> biasStates;
  for (const auto& c : net.convs) {
    std::vector<nn::AdadeltaState> perFilter;
    for (const auto& f : c.filters) perFilter.push_back(nn::AdadeltaState::like(f));
    filterStates.push_back(std::move(perFilter));
    biasStates.push_back(nn::AdadeltaState::like(c.biases));
  }
  nn::AdadeltaState outState = nn::AdadeltaState::like(net.out_weights);
  nn::AdadeltaState labelBiasState = nn::AdadeltaState::like(net.label_bias);

  if (report) {
    report->initial_loss = label_net_loss(net, examples, trainIdx);
    report->train_loss.clear();
    report->val_loss.clear();
    report->epochs_run = 0;
  }

  LabelNetSnapshot best = snapshot_of(net);
  double bestValLoss = std::numeric_limits<double>::infinity();
  int sinceImprovement = 0;
  const int labelCount = net.label_count();
  nn::Dropout dropout(config.dropout);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::vector<std::size_t> order = trainIdx;
    std::shuffle(order.begin(), order.end(), rng);
    double epochLoss = 0.0;
    std::size_t batches = 0;

    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(config.batch_size)) {
      ++batches;
      const std::size_t stop =
          std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
      const double invBatch = 1.0 / static_cast<double>(stop - start);
      for (auto& c : net.convs) c.zero_grads();
      Matrix gradEmb = Matrix::Zero(net.embeddings.vectors.rows(), net.embeddings.vectors.cols());
      Vector gradOut = Vector::Zero(net.out_weights.size());
      Vector gradLabelBias = Vector::Zero(labelCount);

      for (std::size_t pos = start; pos < stop; ++pos) {
        const LabelNetExample& e = examples[order[pos]];
        Matrix embedded(static_cast<Eigen::Index>(e.rows.size()), net.embeddings.dim());
        for (std::size_t i = 0; i < e.rows.size(); ++i)
          embedded.row(static_cast<Eigen::Index>(i)) = net.embeddings.vectors.row(e.rows[i]);

        std::vector<nn::MaxPoolOverTime> pools(net.convs.size());
        Vector pooled(pd);
        int offset = 0;
        for (std::size_t c = 0; c < net.convs.size(); ++c) {
          pooled.segment(offset, net.convs[c].num_filters()) =
              pools[c].forward(net.convs[c].forward(embedded));
          offset += net.convs[c].num_filters();
        }
        const Vector dropped = dropout.forward(pooled, nn::Mode::train, rng);

        double coefSum = 0.0;
        const double scale = invBatch / static_cast<double>(labelCount);
        for (int l = 0; l < labelCount; ++l) {
          const double z = net.out_weights.head(pd).dot(dropped) +
                           net.out_weights.tail(4).dot(e.overlaps.row(l).transpose()) +
                           net.label_bias(l);
          const double p = nn::sigmoid(z);
          epochLoss += bce(p, e.targets(l)) * invBatch / labelCount;
          const double coef = (p - e.targets(l)) * scale;
          coefSum += coef;
          gradOut.head(pd) += coef * dropped;
          gradOut.tail(4) += coef * e.overlaps.row(l).transpose();
          gradLabelBias(l) += coef;
        }
        const Vector gradPooled = dropout.backward(coefSum * net.out_weights.head(pd));
        offset = 0;
        for (std::size_t c = 0; c < net.convs.size(); ++c) {
          const Matrix gradInput = net.convs[c].backward(
              pools[c].backward(gradPooled.segment(offset, net.convs[c].num_filters())));
          offset += net.convs[c].num_filters();
          for (std::size_t i = 0; i < e.rows.size(); ++i)
            gradEmb.row(e.rows[i]) += gradInput.row(static_cast<Eigen::Index>(i));
        }
      }

      for (std::size_t c = 0; c < net.convs.size(); ++c) {
        for (std::size_t f = 0; f < net.convs[c].filters.size(); ++f)
          nn::adadelta_step(net.convs[c].filters[f], net.convs[c].grad_filters[f],
                            filterStates[c][f], config.adadelta_rho, config.adadelta_eps);
        Matrix biasParam = net.convs[c].biases;
        nn::adadelta_step(biasParam, net.convs[c].grad_biases, biasStates[c],
                          config.adadelta_rho, config.adadelta_eps);
        net.convs[c].biases = biasParam;
      }
      Matrix outParam = net.out_weights;
      nn::adadelta_step(outParam, gradOut, outState, config.adadelta_rho, config.adadelta_eps);
      net.out_weights = outParam;
      Matrix lbParam = net.label_bias;
      nn::adadelta_step(lbParam, gradLabelBias, labelBiasState, config.adadelta_rho,
                        config.adadelta_eps);
      net.label_bias = lbParam;
      if (net.embeddings.trainable)
        nn::adadelta_step(net.embeddings.vectors, gradEmb, embState, config.adadelta_rho,
                          config.adadelta_eps);
    }

    if (report) {
      report->train_loss.push_back(epochLoss / static_cast<double>(std::max<std::size_t>(1, batches)));
      report->epochs_run = epoch + 1;
    }
    if (!valIdx.empty()) {
      const double valLoss = label_net_loss(net, examples, valIdx);
      if (report) report->val_loss.push_back(valLoss);
      if (valLoss < bestValLoss - 1e-12) {
        bestValLoss = valLoss;
        best = snapshot_of(net);
        sinceImprovement = 0;
      } else if (++sinceImprovement >= config.patience) {
        break;
      }
    }
  }
  if (!valIdx.empty()) restore(net, best);
  return net;
}

double QuerySnippetNet::score(const Tokens& query, const Tokens& snippet) const {
  const Vector pq = nn::maxpool_apply(
      nn::conv1d_apply(conv_query.filters, conv_query.biases, embeddings.lookup(query)));
  const Vector ps = nn::maxpool_apply(
      nn::conv1d_apply(conv_snippet.filters, conv_snippet.biases, embeddings.lookup(snippet)));
  const double sim = pq.dot(bilinear * ps);
  const double overlap = jaccard(token_set(query), token_set(snippet));
  const Eigen::Index f = pq.size();
  Vector x(2 * f + 2);
  x.head(f) = pq;
  x(f) = sim;
  x.segment(f + 1, f) = ps;
  x(2 * f + 1) = overlap;
  return nn::sigmoid(join_weights.dot(x) + join_bias);
}

std::string QuerySnippetNet::to_json_string() const {
  json j;
  j["kind"] = "query_snippet_net";
  j["embeddings"] = embedding_to_json(embeddings);
  j["conv_query"] = conv_to_json(conv_query);
  j["conv_snippet"] = conv_to_json(conv_snippet);
  j["bilinear"] = matrix_to_json(bilinear);
  j["join_weights"] = vector_to_json(join_weights);
  j["join_bias"] = join_bias;
  return j.dump(1);
}

QuerySnippetNet QuerySnippetNet::from_json_string(const std::string& text) {
  const json j = json::parse(text);
  QuerySnippetNet net;
  net.embeddings = embedding_from_json(j.at("embeddings"));
  net.conv_query = conv_from_json(j.at("conv_query"), net.embeddings.dim());
  net.conv_snippet = conv_from_json(j.at("conv_snippet"), net.embeddings.dim());
  net.bilinear = matrix_from_json(j.at("bilinear"));
  net.join_weights = vector_from_json(j.at("join_weights"));
  net.join_bias = j.at("join_bias").get<double>();
  return net;
}

void QuerySnippetNet::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write checkpoint: " + path.string());
  out << to_json_string();
}

QuerySnippetNet QuerySnippetNet::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open checkpoint: " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return from_json_string(text);
}

namespace {

struct QcnInternalExample {
  std::vector<int> query_rows;
  std::vector<int> snippet_rows;
  double overlap = 0.0;
  double target = 0.0;
};

double qcn_loss(const QuerySnippetNet& net, const std::vector<QcnExample>& data,
                const std::vector<std::size_t>& idx) {
  if (idx.empty()) return 0.0;
  double total = 0.0;
  for (const std::size_t i : idx)
    total += bce(net.score(data[i].query, data[i].snippet), data[i].positive ? 1.0 : 0.0);
  return total / static_cast<double>(idx.size());
}

struct QcnSnapshot {
  Matrix embeddings;
  std::vector<Matrix> fq, fs;
  Vector bq, bs;
  Matrix bilinear;
  Vector join_weights;
  double join_bias = 0.0;
};

QcnSnapshot snapshot_of(const QuerySnippetNet& net) {
  return {net.embeddings.vectors, net.conv_query.filters, net.conv_snippet.filters,
          net.conv_query.biases,  net.conv_snippet.biases, net.bilinear,
          net.join_weights,       net.join_bias};
}

void restore(QuerySnippetNet& net, const QcnSnapshot& s) {
  net.embeddings.vectors = s.embeddings;
  net.conv_query.filters = s.fq;
  net.conv_snippet.filters = s.fs;
  net.conv_query.biases = s.bq;
  net.conv_snippet.biases = s.bs;
  net.bilinear = s.bilinear;
  net.join_weights = s.join_weights;
  net.join_bias = s.join_bias;
}

}  // namespace

QuerySnippetNet train_qcn(const std::vector<QcnExample>& data, const QcnConfig& config,
                          TrainReport* report) {
  if (data.empty()) throw std::invalid_argument("train_qcn: empty training set");
  const bool hasPositive = std::any_of(data.begin(), data.end(), [](const auto& e) { return e.positive; });
  const bool hasNegative = std::any_of(data.begin(), data.end(), [](const auto& e) { return !e.positive; });
  if (!hasPositive || !hasNegative)
    throw std::invalid_argument("train_qcn: training set has only one class");

  nn::Rng rng(config.seed);
  QuerySnippetNet net;
  {
    std::vector<Tokens> sequences;
    for (const auto& e : data) {
      if (e.query.empty() || e.snippet.empty())
        throw std::invalid_argument("train_qcn: empty query or snippet in data");
      sequences.push_back(e.query);
      sequences.push_back(e.snippet);
    }
    net.embeddings = nn::EmbeddingTable::random(sorted_vocab_tokens(sequences),
                                                config.embedding_dim, rng);
  }
  if (!config.pretrained_embeddings.empty())
    net.embeddings.load_pretrained(config.pretrained_embeddings);
  net.conv_query = nn::Conv1d(config.feature_maps, config.filter_width, config.embedding_dim);
  net.conv_query.randomize(rng);
  net.conv_snippet = nn::Conv1d(config.feature_maps, config.filter_width, config.embedding_dim);
  net.conv_snippet.randomize(rng);
  const int fm = config.feature_maps;
  net.bilinear = Matrix::Zero(fm, fm);
  {
    const double limit = std::sqrt(6.0 / (fm + fm));
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (Eigen::Index i = 0; i < net.bilinear.rows(); ++i)
      for (Eigen::Index j = 0; j < net.bilinear.cols(); ++j) net.bilinear(i, j) = dist(rng);
  }
  net.join_weights = Vector::Zero(2 * fm + 2);
  {
    const double limit = std::sqrt(6.0 / (2 * fm + 2 + 1));
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (Eigen::Index i = 0; i < net.join_weights.size(); ++i) net.join_weights(i) = dist(rng);
  }
  net.join_bias = 0.0;

  std::vector<QcnInternalExample> examples;
  examples.reserve(data.size());
  for (const auto& e : data) {
    QcnInternalExample ex;
    ex.query_rows = net.embeddings.rows_of(e.query);
    ex.snippet_rows = net.embeddings.rows_of(e.snippet);
    ex.overlap = jaccard(token_set(e.query), token_set(e.snippet));
    ex.target = e.positive ? 1.0 : 0.0;
    examples.push_back(std::move(ex));
  }

  std::vector<std::size_t> trainIdx, valIdx;
  split_validation(examples.size(), config.validation_fraction, rng, trainIdx, valIdx);
  if (trainIdx.empty()) {
    trainIdx = valIdx;
    valIdx.clear();
  }

  nn::AdadeltaState embState = nn::AdadeltaState::like(net.embeddings.vectors);
  std::vector<nn::AdadeltaState> fqStates, fsStates;
  for (const auto& f : net.conv_query.filters) fqStates.push_back(nn::AdadeltaState::like(f));
  for (const auto& f : net.conv_snippet.filters) fsStates.push_back(nn::AdadeltaState::like(f));
  nn::AdadeltaState bqState = nn::AdadeltaState::like(net.conv_query.biases);
  nn::AdadeltaState bsState = nn::AdadeltaState::like(net.conv_snippet.biases);
  nn::AdadeltaState bilinearState = nn::AdadeltaState::like(net.bilinear);
  nn::AdadeltaState joinState = nn::AdadeltaState::like(net.join_weights);
  Matrix joinBiasParam(1, 1);
  nn::AdadeltaState joinBiasState = nn::AdadeltaState::like(joinBiasParam);

  if (report) {
    report->initial_loss = qcn_loss(net, data, trainIdx);
    report->train_loss.clear();
    report->val_loss.clear();
    report->epochs_run = 0;
  }

  QcnSnapshot best = snapshot_of(net);
  double bestValLoss = std::numeric_limits<double>::infinity();
  int sinceImprovement = 0;
  nn::Dropout dropQ(config.dropout), dropS(config.dropout);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::vector<std::size_t> order = trainIdx;
    std::shuffle(order.begin(), order.end(), rng);
    double epochLoss = 0.0;
    std::size_t batches = 0;

    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(config.batch_size)) {
      ++batches;
      const std::size_t stop =
          std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
      const double invBatch = 1.0 / static_cast<double>(stop - start);
      net.conv_query.zero_grads();
      net.conv_snippet.zero_grads();
      Matrix gradEmb = Matrix::Zero(net.embeddings.vectors.rows(), net.embeddings.vectors.cols());
      Matrix gradBilinear = Matrix::Zero(fm, fm);
      Vector gradJoin = Vector::Zero(net.join_weights.size());
      double gradJoinBias = 0.0;

      for (std::size_t pos = start; pos < stop; ++pos) {
        const QcnInternalExample& e = examples[order[pos]];
        Matrix embQ(static_cast<Eigen::Index>(e.query_rows.size()), net.embeddings.dim());
        for (std::size_t i = 0; i < e.query_rows.size(); ++i)
          embQ.row(static_cast<Eigen::Index>(i)) = net.embeddings.vectors.row(e.query_rows[i]);
        Matrix embS(static_cast<Eigen::Index>(e.snippet_rows.size()), net.embeddings.dim());
        for (std::size_t i = 0; i < e.snippet_rows.size(); ++i)
          embS.row(static_cast<Eigen::Index>(i)) = net.embeddings.vectors.row(e.snippet_rows[i]);

        nn::MaxPoolOverTime poolQ, poolS;
        const Vector pq = poolQ.forward(net.conv_query.forward(embQ));
        const Vector ps = poolS.forward(net.conv_snippet.forward(embS));
        const Vector pqd = dropQ.forward(pq, nn::Mode::train, rng);
        const Vector psd = dropS.forward(ps, nn::Mode::train, rng);
        const double sim = pqd.dot(net.bilinear * psd);
        Vector x(2 * fm + 2);
        x.head(fm) = pqd;
        x(fm) = sim;
        x.segment(fm + 1, fm) = psd;
        x(2 * fm + 1) = e.overlap;
        const double p = nn::sigmoid(net.join_weights.dot(x) + net.join_bias);
        epochLoss += bce(p, e.target) * invBatch;

        const double coef = (p - e.target) * invBatch;
        gradJoin += coef * x;
        gradJoinBias += coef;
        const Vector gx = coef * net.join_weights;
        const double gSim = gx(fm);
        const Vector gPqd = gx.head(fm) + gSim * (net.bilinear * psd);
        const Vector gPsd = gx.segment(fm + 1, fm) + gSim * (net.bilinear.transpose() * pqd);
        gradBilinear += gSim * pqd * psd.transpose();

        const Matrix gEmbQ = net.conv_query.backward(poolQ.backward(dropQ.backward(gPqd)));
        const Matrix gEmbS = net.conv_snippet.backward(poolS.backward(dropS.backward(gPsd)));
        for (std::size_t i = 0; i < e.query_rows.size(); ++i)
          gradEmb.row(e.query_rows[i]) += gEmbQ.row(static_cast<Eigen::Index>(i));
        for (std::size_t i = 0; i < e.snippet_rows.size(); ++i)
          gradEmb.row(e.snippet_rows[i]) += gEmbS.row(static_cast<Eigen::Index>(i));
      }

      // Weight decay: l2_conv on convolution parameters, l2_other elsewhere.
      for (std::size_t f = 0; f < net.conv_query.filters.size(); ++f) {
        Matrix g = net.conv_query.grad_filters[f] + config.l2_conv * net.conv_query.filters[f];
        nn::adadelta_step(net.conv_query.filters[f], g, fqStates[f], config.adadelta_rho,
                          config.adadelta_eps);
      }
      for (std::size_t f = 0; f < net.conv_snippet.filters.size(); ++f) {
        Matrix g = net.conv_snippet.grad_filters[f] + config.l2_conv * net.conv_snippet.filters[f];
        nn::adadelta_step(net.conv_snippet.filters[f], g, fsStates[f], config.adadelta_rho,
                          config.adadelta_eps);
      }
      {
        Matrix param = net.conv_query.biases;
        Matrix g = net.conv_query.grad_biases + config.l2_conv * net.conv_query.biases;
        nn::adadelta_step(param, g, bqState, config.adadelta_rho, config.adadelta_eps);
        net.conv_query.biases = param;
        param = net.conv_snippet.biases;
        g = net.conv_snippet.grad_biases + config.l2_conv * net.conv_snippet.biases;
        nn::adadelta_step(param, g, bsState, config.adadelta_rho, config.adadelta_eps);
        net.conv_snippet.biases = param;
      }
      {
        Matrix g = gradBilinear + config.l2_other * net.bilinear;
        nn::adadelta_step(net.bilinear, g, bilinearState, config.adadelta_rho,
                          config.adadelta_eps);
      }
      {
        Matrix param = net.join_weights;
        Matrix g = gradJoin + config.l2_other * net.join_weights;
        nn::adadelta_step(param, g, joinState, config.adadelta_rho, config.adadelta_eps);
        net.join_weights = param;
        joinBiasParam(0, 0) = net.join_bias;
        Matrix gb(1, 1);
        gb(0, 0) = gradJoinBias + config.l2_other * net.join_bias;
        nn::adadelta_step(joinBiasParam, gb, joinBiasState, config.adadelta_rho,
                          config.adadelta_eps);
        net.join_bias = joinBiasParam(0, 0);
      }
      if (net.embeddings.trainable) {
        Matrix g = gradEmb + config.l2_other * net.embeddings.vectors;
        nn::adadelta_step(net.embeddings.vectors, g, embState, config.adadelta_rho,
                          config.adadelta_eps);
      }
    }

    if (report) {
      report->train_loss.push_back(epochLoss / static_cast<double>(std::max<std::size_t>(1, batches)));
      report->epochs_run = epoch + 1;
    }
    if (!valIdx.empty()) {
      const double valLoss = qcn_loss(net, data, valIdx);
      if (report) report->val_loss.push_back(valLoss);
      if (valLoss < bestValLoss - 1e-12) {
        bestValLoss = valLoss;
        best = snapshot_of(net);
        sinceImprovement = 0;
      } else if (++sinceImprovement >= config.patience) {
        break;
      }
    }
  }
  if (!valIdx.empty()) restore(net, best);
  return net;
}

double qcn_aggregate(const std::vector<double>& snippetScores) {
  double total = 0.0;
  for (const double s : snippetScores) total += s;
  return total;
}

}  // namespace entrank
