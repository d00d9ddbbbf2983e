#pragma once
// The three scoring networks.
//
//  * QueryLabelNet ("QTN"/"QRN"): multi-label scorer over a fixed label
//    vocabulary (types or relations).  A query is embedded, run through wide
//    convolutions (widths 3 and 4 by default, 150 maps each) and max-pooled;
//    each label is scored by a shared output weight vector applied to
//    [pooled || that label's 4 Jaccard overlap features], plus a per-label
//    bias, through a sigmoid.
//  * QuerySnippetNet ("QCN"): two convolution towers (width 5, 150 maps)
//    over query and snippet, a bilinear similarity between the pooled
//    vectors, and a join layer over [pooledQ || sim || pooledS || word
//    overlap] with a sigmoid output.
//
// Training is mini-batch SGD with Adadelta, dropout on the pooled vectors,
// and early stopping on a held-out validation slice.

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "entrank/nn.hpp"
#include "entrank/text.hpp"

namespace entrank {

// Bag-of-words and bag-of-stems Jaccard between a query and a label's name
// and patterns; pattern features take the max over patterns and are 0 when
// the label has none.
struct OverlapFeatures {
  double word_name = 0.0;
  double word_pattern_max = 0.0;
  double stem_name = 0.0;
  double stem_pattern_max = 0.0;
  Eigen::Vector4d as_vector() const { return {word_name, word_pattern_max, stem_name, stem_pattern_max}; }
};

OverlapFeatures overlap_features(const Tokens& query, const Tokens& labelName,
                                 const std::set<Tokens>& labelPatterns);

struct LabelMeta {
  Tokens name_tokens;
  std::set<Tokens> patterns;
};

// One (query, label set) training example.  Pattern tuples are fed through
// the same path with the pattern tokens standing in for the query.
struct LabeledQuery {
  Tokens query;
  std::set<std::string> labels;
};

// Training-pair file: JSONL `{"q": [tokens], "labels": [ids]}` per line.
std::vector<LabeledQuery> load_labeled_pairs(const std::filesystem::path& path);
void save_labeled_pairs(const std::vector<LabeledQuery>& pairs,
                        const std::filesystem::path& path);

// Optional training trace: initial loss, per-epoch train/validation losses.
struct TrainReport {
  double initial_loss = 0.0;
  std::vector<double> train_loss;
  std::vector<double> val_loss;
  int epochs_run = 0;
};

struct LabelNetConfig {
  int embedding_dim = 50;
  std::vector<int> filter_widths = {3, 4};
  int feature_maps = 150;
  double dropout = 0.5;
  int epochs = 100;
  int patience = 10;
  double validation_fraction = 0.1;
  int batch_size = 50;
  double adadelta_rho = 0.95;
  double adadelta_eps = 1e-6;
  std::uint64_t seed = 1;
  std::filesystem::path pretrained_embeddings;  // optional
};

class QueryLabelNet {
 public:
  nn::EmbeddingTable embeddings;
  std::vector<nn::Conv1d> convs;  // one per filter width
  nn::Vector out_weights;         // pooled dims + 4 overlap dims, shared across labels
  nn::Vector label_bias;          // per label
  std::vector<std::string> labels;
  std::map<std::string, LabelMeta> label_meta;

  int pooled_dim() const;
  int label_count() const { return static_cast<int>(labels.size()); }
  int index_of(const std::string& label) const;  // -1 when unknown

  // Deterministic forward pass with dropout off; query must be non-empty.
  nn::Vector score(const Tokens& query) const;
  // Score for one label id; 0.0 for labels outside the vocabulary.
  double score_label(const Tokens& query, const std::string& label) const;

  std::string to_json_string() const;
  static QueryLabelNet from_json_string(const std::string& text);
  void save(const std::filesystem::path& path) const;
  static QueryLabelNet load(const std::filesystem::path& path);
};

// Labels present in the data form the vocabulary; labels without examples are
// dropped.  Metadata defaults to the tokenized label id when absent from
// labelMeta.  Throws on an empty training set.
QueryLabelNet train_label_net(const std::vector<LabeledQuery>& data,
                              const std::map<std::string, LabelMeta>& labelMeta,
                              const LabelNetConfig& config, TrainReport* report = nullptr);

struct QcnConfig {
  int embedding_dim = 50;
  int filter_width = 5;
  int feature_maps = 150;
  double dropout = 0.5;
  int epochs = 100;
  int patience = 10;
  double validation_fraction = 0.1;
  int batch_size = 50;
  double l2_conv = 1e-5;
  double l2_other = 1e-4;
  double adadelta_rho = 0.95;
  double adadelta_eps = 1e-6;
  std::uint64_t seed = 1;
  std::filesystem::path pretrained_embeddings;  // optional
};

struct QcnExample {
  Tokens query;
  Tokens snippet;
  bool positive = false;
};

class QuerySnippetNet {
 public:
  nn::EmbeddingTable embeddings;  // shared by both towers
  nn::Conv1d conv_query;
  nn::Conv1d conv_snippet;
  nn::Matrix bilinear;     // F x F
  nn::Vector join_weights;  // [pooledQ | sim | pooledS | overlap] -> scalar
  double join_bias = 0.0;

  // Relevance in (0,1); pure, metadata-free.
  double score(const Tokens& query, const Tokens& snippet) const;

  std::string to_json_string() const;
  static QuerySnippetNet from_json_string(const std::string& text);
  void save(const std::filesystem::path& path) const;
  static QuerySnippetNet load(const std::filesystem::path& path);
};

// Logistic loss over positive/negative snippets; L2 of l2_conv on convolution
// parameters and l2_other on everything else.  Throws when the training set
// is empty or single-class.
QuerySnippetNet train_qcn(const std::vector<QcnExample>& data, const QcnConfig& config,
                          TrainReport* report = nullptr);

// Sum of snippet scores supporting one (query, entity); 0.0 with no support.
double qcn_aggregate(const std::vector<double>& snippetScores);

}  // namespace entrank
