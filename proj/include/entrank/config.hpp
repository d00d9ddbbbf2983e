#pragma once
// Run configuration: a flat key=value text file plus CLI overrides.  Every
// key has a default; unknown keys are rejected.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace entrank {

struct RunConfig {
  // Input paths.
  std::string kg;
  std::string corpus;
  std::string aliases;
  std::string queries;
  std::string stopwords;
  std::string embeddings;  // optional pretrained word vectors
  std::string qtn_pairs;   // optional (query, types) training-pair file
  std::string qrn_pairs;   // optional (query, relations) training-pair file
  std::string model_dir = "models";

  // Corpus retrieval and interpretation enumeration.
  std::size_t snippet_cap = 200;
  std::size_t prune_limit = 64;
  std::size_t relpattern_min_count = 2;
  std::size_t relpattern_max_len = 6;

  // Convolutional network settings.
  int emb_dim = 50;
  std::vector<int> label_filter_widths = {3, 4};
  int qcn_filter_width = 5;
  int feature_maps = 150;
  double dropout = 0.5;
  int epochs = 100;
  int patience = 10;
  double val_fraction = 0.1;
  int batch_size = 50;
  double l2_conv = 1e-5;
  double l2_other = 1e-4;
  double adadelta_rho = 0.95;
  double adadelta_eps = 1e-6;

  // Score combination training.
  double margin = 1.0;
  double c = 1.0;
  int max_rounds = 50;
  double eta0 = 0.1;
  int passes = 200;
  double tolerance = 1e-6;

  // Inference.
  std::string mode = "ALL";  // ONE | FEW | ALL
  int kprime = 2;
  double threshold_x = 0.95;
  std::string rank_split = "test";  // which query split cmd_rank processes; "all" allowed
  std::string ablation = "full";    // full | noQCN | noQTN | noQRN

  std::uint64_t seed = 12345;
};

// Applies `key=value`; throws DataError for unknown keys or bad values.
void apply_config_entry(RunConfig& config, const std::string& key, const std::string& value);

// Parses a config file of key=value lines ('#' comments allowed).
RunConfig load_config(const std::filesystem::path& path);

// Applies a list of `key=value` override strings on top of a config.
void apply_overrides(RunConfig& config, const std::vector<std::string>& overrides);

}  // namespace entrank
