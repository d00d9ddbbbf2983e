#include "entrank/config.hpp"

#include <fstream>
#include <sstream>

#include "entrank/errors.hpp"

namespace entrank {

namespace {

std::vector<int> parse_int_list(const std::string& value) {
  std::vector<int> out;
  std::stringstream in(value);
  std::string piece;
  while (std::getline(in, piece, ',')) {
    if (!piece.empty()) out.push_back(std::stoi(piece));
  }
  return out;
}

}  // namespace

void apply_config_entry(RunConfig& config, const std::string& key, const std::string& value) {
  try {
    if (key == "kg") config.kg = value;
    else if (key == "corpus") config.corpus = value;
    else if (key == "aliases") config.aliases = value;
    else if (key == "queries") config.queries = value;
    else if (key == "stopwords") config.stopwords = value;
    else if (key == "embeddings") config.embeddings = value;
    else if (key == "qtn_pairs") config.qtn_pairs = value;
    else if (key == "qrn_pairs") config.qrn_pairs = value;
    else if (key == "model_dir") config.model_dir = value;
    else if (key == "snippet_cap") config.snippet_cap = std::stoul(value);
    else if (key == "prune_limit") config.prune_limit = std::stoul(value);
    else if (key == "relpattern_min_count") config.relpattern_min_count = std::stoul(value);
    else if (key == "relpattern_max_len") config.relpattern_max_len = std::stoul(value);
    else if (key == "emb_dim") config.emb_dim = std::stoi(value);
    else if (key == "label_filter_widths") config.label_filter_widths = parse_int_list(value);
    else if (key == "qcn_filter_width") config.qcn_filter_width = std::stoi(value);
    else if (key == "feature_maps") config.feature_maps = std::stoi(value);
    else if (key == "dropout") config.dropout = std::stod(value);
    else if (key == "epochs") config.epochs = std::stoi(value);
    else if (key == "patience") config.patience = std::stoi(value);
    else if (key == "val_fraction") config.val_fraction = std::stod(value);
    else if (key == "batch_size") config.batch_size = std::stoi(value);
    else if (key == "l2_conv") config.l2_conv = std::stod(value);
    else if (key == "l2_other") config.l2_other = std::stod(value);
    else if (key == "adadelta_rho") config.adadelta_rho = std::stod(value);
    else if (key == "adadelta_eps") config.adadelta_eps = std::stod(value);
    else if (key == "margin") config.margin = std::stod(value);
    else if (key == "c") config.c = std::stod(value);
    else if (key == "max_rounds") config.max_rounds = std::stoi(value);
    else if (key == "eta0") config.eta0 = std::stod(value);
    else if (key == "passes") config.passes = std::stoi(value);
    else if (key == "tolerance") config.tolerance = std::stod(value);
    else if (key == "mode") config.mode = value;
    else if (key == "kprime") config.kprime = std::stoi(value);
    else if (key == "threshold_x") config.threshold_x = std::stod(value);
    else if (key == "rank_split") config.rank_split = value;
    else if (key == "ablation") config.ablation = value;
    else if (key == "seed") config.seed = std::stoull(value);
    else throw DataError("unknown config key: " + key);
  } catch (const DataError&) {
    throw;
  } catch (const std::exception&) {
    throw DataError("bad value for config key " + key + ": " + value);
  }
  if (key == "mode" && value != "ONE" && value != "FEW" && value != "ALL")
    throw DataError("mode must be ONE, FEW or ALL");
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config file: " + path.string());
  RunConfig config;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw DataError(path.string() + ":" + std::to_string(lineno) + ": expected key=value");
    apply_config_entry(config, line.substr(0, eq), line.substr(eq + 1));
  }
  return config;
}

void apply_overrides(RunConfig& config, const std::vector<std::string>& overrides) {
  for (const auto& entry : overrides) {
    const auto eq = entry.find('=');
    if (eq == std::string::npos) throw DataError("override must be key=value: " + entry);
    apply_config_entry(config, entry.substr(0, eq), entry.substr(eq + 1));
  }
}

}  // namespace entrank
