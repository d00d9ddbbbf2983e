#include "entrank/pipeline.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "entrank/errors.hpp"

namespace entrank {

using nlohmann::json;

namespace {

std::string format_score(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

std::map<std::string, std::string> identity_names(const std::set<std::string>& ids) {
  std::map<std::string, std::string> out;
  for (const auto& id : ids) out[id] = id;
  return out;
}

std::set<std::string> kg_relations(const KnowledgeGraph& kg) {
  std::set<std::string> out;
  for (const auto& t : kg.triples()) out.insert(t.relation);
  for (const auto& [rel, type] : kg.relation_object_types()) out.insert(rel);
  return out;
}

std::set<std::string> kg_types(const KnowledgeGraph& kg) {
  std::set<std::string> out;
  for (const auto& [entity, types] : kg.type_assertions()) out.insert(types.begin(), types.end());
  return out;
}

}  // namespace

Artifacts load_artifacts(const RunConfig& config) {
  Artifacts art;
  art.kg = KnowledgeGraph::load(config.kg);
  art.corpus = SnippetIndex::load(config.corpus);
  art.aliases = AliasDictionary::load(config.aliases);
  art.stopwords = load_stopwords(config.stopwords);
  art.queries = load_queries(config.queries);
  art.type_patterns = extract_type_patterns(art.kg, identity_names(kg_relations(art.kg)),
                                            identity_names(kg_types(art.kg)));
  art.relation_patterns = mine_relation_patterns(art.kg, art.corpus,
                                                 config.relpattern_min_count,
                                                 config.relpattern_max_len);
  return art;
}

void Models::save(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  qcn.save(dir / "qcn.json");
  qtn.save(dir / "qtn.json");
  qrn.save(dir / "qrn.json");
  combiner.save(dir / "combiner.json");
}

Models Models::load(const std::filesystem::path& dir) {
  Models m;
  m.qcn = QuerySnippetNet::load(dir / "qcn.json");
  m.qtn = QueryLabelNet::load(dir / "qtn.json");
  m.qrn = QueryLabelNet::load(dir / "qrn.json");
  m.combiner = CombinerModel::load(dir / "combiner.json");
  return m;
}

QueryContext build_query_context(const Artifacts& art, const Models& models,
                                 const RunConfig& config, const QueryRecord& record) {
  QueryContext ctx;
  ctx.record = &record;
  ctx.links = link(art.aliases, record.tokens);
  ctx.snippet_ids = snippets_for_query(art.corpus, record.tokens, linked_entities(ctx.links),
                                       art.stopwords, config.snippet_cap);
  ctx.candidates = enumerate_interpretations(record.tokens, ctx.links, art.kg, art.corpus,
                                             ctx.snippet_ids, config.prune_limit);
  if (record.tokens.empty() || ctx.candidates.all_candidates.empty()) return ctx;

  const QueryNetScores nets = score_query_nets(models.qcn, models.qtn, models.qrn,
                                               record.tokens, art.corpus, ctx.snippet_ids);
  for (const auto& interp : ctx.candidates.interpretations) {
    const std::string id = interp.id();
    for (const auto& e2 : ctx.candidates.candidates(id)) {
      ctx.features[id][e2] = assemble_features(record.tokens, ctx.candidates, interp, e2, nets,
                                               art.kg, ctx.links, models.qtn.embeddings);
    }
  }
  return ctx;
}

CombinerQuery to_combiner_query(const QueryContext& ctx, const FeatureScaler& scaler) {
  CombinerQuery out;
  out.id = ctx.record->id;
  out.gold = ctx.record->gold;
  for (const auto& [interpId, perEntity] : ctx.features) {
    for (const auto& [entity, phi] : perEntity)
      out.features[interpId][entity] = scaler.apply(phi);
  }
  return out;
}

void cmd_build(const RunConfig& config, const std::filesystem::path& outDir, std::ostream& log) {
  const Artifacts art = load_artifacts(config);
  std::filesystem::create_directories(outDir);
  art.kg.save(outDir / "kg.tsv");
  art.corpus.save(outDir / "corpus.jsonl");
  art.aliases.save(outDir / "aliases.tsv");
  {
    std::ofstream out(outDir / "type_patterns.tsv");
    for (const auto& [type, patterns] : art.type_patterns.patterns)
      for (const auto& p : patterns) out << type << '\t' << join_tokens(p) << '\n';
  }
  {
    std::ofstream out(outDir / "relation_patterns.tsv");
    for (const auto& [rel, patterns] : art.relation_patterns.patterns)
      for (const auto& [p, count] : patterns)
        out << rel << '\t' << join_tokens(p) << '\t' << count << '\n';
  }
  {
    json stats;
    stats["entities"] = art.kg.entities().size();
    stats["triples"] = art.kg.triples().size();
    stats["mediators"] = art.kg.mediators().size();
    stats["snippets"] = art.corpus.snippets().size();
    stats["queries"] = art.queries.size();
    std::ofstream out(outDir / "stats.json");
    out << stats.dump(1) << '\n';
  }
  log << "build: " << art.kg.triples().size() << " triples, "
      << art.corpus.snippets().size() << " snippets, " << art.queries.size() << " queries -> "
      << outDir.string() << "\n";
}

namespace {

struct TrainingData {
  std::vector<QcnExample> qcn;
  std::vector<LabeledQuery> qtn;
  std::map<std::string, LabelMeta> qtn_meta;
  std::vector<LabeledQuery> qrn;
  std::map<std::string, LabelMeta> qrn_meta;
};

TrainingData collect_training_data(const Artifacts& art, const RunConfig& config,
                                   const std::vector<const QueryRecord*>& trainQueries) {
  TrainingData data;
  const bool externalQtn = !config.qtn_pairs.empty();
  const bool externalQrn = !config.qrn_pairs.empty();
  if (externalQtn) data.qtn = load_labeled_pairs(config.qtn_pairs);
  if (externalQrn) data.qrn = load_labeled_pairs(config.qrn_pairs);

  // Label metadata: tokenized ids, patterns from the extraction/mining tables.
  for (const auto& type : kg_types(art.kg)) {
    LabelMeta meta;
    meta.name_tokens = name_tokens(type);
    const auto it = art.type_patterns.patterns.find(type);
    if (it != art.type_patterns.patterns.end()) meta.patterns = it->second;
    data.qtn_meta[type] = std::move(meta);
  }
  for (const auto& rel : kg_relations(art.kg)) {
    LabelMeta meta;
    meta.name_tokens = name_tokens(rel);
    const auto it = art.relation_patterns.patterns.find(rel);
    if (it != art.relation_patterns.patterns.end()) {
      for (const auto& [pattern, count] : it->second) meta.patterns.insert(pattern);
    }
    data.qrn_meta[rel] = std::move(meta);
  }

  for (const QueryRecord* q : trainQueries) {
    if (q->gold.empty() || q->tokens.empty()) continue;
    // Weak supervision for the query-snippet scorer.
    for (const auto& label : weak_label(art.corpus, q->tokens, q->gold, art.stopwords)) {
      data.qcn.push_back({q->tokens, art.corpus.at(label.snippet_id).tokens,
                          label.label == SnippetLabel::positive});
    }
    // Types of gold answers (unless explicit pairs were supplied).
    if (!externalQtn) {
      std::set<std::string> typeLabels;
      for (const auto& g : q->gold) {
        const auto types = art.kg.types_of(g);
        typeLabels.insert(types.begin(), types.end());
      }
      if (!typeLabels.empty()) data.qtn.push_back({q->tokens, typeLabels});
    }
    // Relations on KG paths from any linked entity to a gold answer.
    if (!externalQrn) {
      std::set<std::string> relLabels;
      for (const auto& e1 : linked_entities(link(art.aliases, q->tokens))) {
        for (const auto& pe : neighborhood(art.kg, e1, 2)) {
          if (!q->gold.count(pe.entity)) continue;
          relLabels.insert(pe.path[0]);
          if (pe.path.size() == 3) relLabels.insert(pe.path[2]);
        }
      }
      if (!relLabels.empty()) data.qrn.push_back({q->tokens, relLabels});
    }
  }

  // Pattern tuples enrich the training data as pseudo-queries.
  for (const auto& [type, patterns] : art.type_patterns.patterns) {
    for (const auto& p : patterns) data.qtn.push_back({p, {type}});
  }
  for (const auto& [rel, patterns] : art.relation_patterns.patterns) {
    for (const auto& [p, count] : patterns) data.qrn.push_back({p, {rel}});
  }
  return data;
}

LabelNetConfig label_net_config(const RunConfig& config, std::uint64_t seed) {
  LabelNetConfig c;
  c.embedding_dim = config.emb_dim;
  c.filter_widths = config.label_filter_widths;
  c.feature_maps = config.feature_maps;
  c.dropout = config.dropout;
  c.epochs = config.epochs;
  c.patience = config.patience;
  c.validation_fraction = config.val_fraction;
  c.batch_size = config.batch_size;
  c.adadelta_rho = config.adadelta_rho;
  c.adadelta_eps = config.adadelta_eps;
  c.seed = seed;
  if (!config.embeddings.empty()) c.pretrained_embeddings = config.embeddings;
  return c;
}

QcnConfig qcn_config(const RunConfig& config, std::uint64_t seed) {
  QcnConfig c;
  c.embedding_dim = config.emb_dim;
  c.filter_width = config.qcn_filter_width;
  c.feature_maps = config.feature_maps;
  c.dropout = config.dropout;
  c.epochs = config.epochs;
  c.patience = config.patience;
  c.validation_fraction = config.val_fraction;
  c.batch_size = config.batch_size;
  c.l2_conv = config.l2_conv;
  c.l2_other = config.l2_other;
  c.adadelta_rho = config.adadelta_rho;
  c.adadelta_eps = config.adadelta_eps;
  c.seed = seed;
  if (!config.embeddings.empty()) c.pretrained_embeddings = config.embeddings;
  return c;
}

CombinerOptions combiner_options(const RunConfig& config) {
  CombinerOptions o;
  o.margin = config.margin;
  o.C = config.c;
  o.max_rounds = config.max_rounds;
  o.eta0 = config.eta0;
  o.passes_per_round = config.passes;
  o.tolerance = config.tolerance;
  return o;
}

void dump_features(const std::vector<QueryContext>& contexts, const std::filesystem::path& path) {
  std::ofstream out(path);
  out << "query_id\tinterpretation\tentity";
  for (const char* name : kFeatureNames) out << '\t' << name;
  out << '\n';
  for (const auto& ctx : contexts) {
    for (const auto& [interpId, perEntity] : ctx.features) {
      for (const auto& [entity, phi] : perEntity) {
        out << ctx.record->id << '\t' << interpId << '\t' << entity;
        for (int i = 0; i < kFeatureCount; ++i) out << '\t' << format_score(phi(i));
        out << '\n';
      }
    }
  }
}

}  // namespace

void cmd_train(const RunConfig& config, std::ostream& log) {
  const Artifacts art = load_artifacts(config);
  std::vector<const QueryRecord*> trainQueries;
  for (const auto& q : art.queries) {
    if (q.split == "train") trainQueries.push_back(&q);
  }
  if (trainQueries.empty()) throw DataError("cmd_train: no train-split queries");

  const TrainingData data = collect_training_data(art, config, trainQueries);
  Models models;
  models.qcn = train_qcn(data.qcn, qcn_config(config, config.seed));
  models.qtn = train_label_net(data.qtn, data.qtn_meta, label_net_config(config, config.seed + 1));
  models.qrn = train_label_net(data.qrn, data.qrn_meta, label_net_config(config, config.seed + 2));
  log << "train: qcn " << data.qcn.size() << " examples, qtn " << data.qtn.size()
      << " examples over " << models.qtn.label_count() << " types, qrn " << data.qrn.size()
      << " examples over " << models.qrn.label_count() << " relations\n";

  // Assemble raw features for the train split and fit the scaler on them.
  std::vector<QueryContext> contexts;
  for (const QueryRecord* q : trainQueries)
    contexts.push_back(build_query_context(art, models, config, *q));
  std::vector<FeatureVector> rawVectors;
  for (const auto& ctx : contexts) {
    for (const auto& [interpId, perEntity] : ctx.features)
      for (const auto& [entity, phi] : perEntity) rawVectors.push_back(phi);
  }
  FeatureScaler scaler;
  scaler.fit(rawVectors);

  std::vector<CombinerQuery> combinerData;
  for (const auto& ctx : contexts) {
    if (!ctx.record->gold.empty() && !ctx.features.empty())
      combinerData.push_back(to_combiner_query(ctx, scaler));
  }
  CombinerTrainResult trained = train_combiner(combinerData, combiner_options(config));
  trained.model.scaler = scaler;
  models.combiner = trained.model;
  for (std::size_t r = 0; r < trained.objective_trace.size(); ++r)
    log << "combiner round " << r << " objective " << format_score(trained.objective_trace[r])
        << "\n";
  if (trained.skipped_queries > 0)
    log << "combiner: skipped " << trained.skipped_queries
        << " queries without both positive and negative candidates\n";

  models.save(config.model_dir);
  save_labeled_pairs(data.qtn, std::filesystem::path(config.model_dir) / "qtn_pairs.jsonl");
  save_labeled_pairs(data.qrn, std::filesystem::path(config.model_dir) / "qrn_pairs.jsonl");
  dump_features(contexts, std::filesystem::path(config.model_dir) / "features.tsv");
  log << "train: models written to " << config.model_dir << "\n";
}

std::vector<RankedEntity> run_inference(const ScoreMatrix& s, const std::string& mode,
                                        int kPrime) {
  if (mode == "ONE") return infer_one(s);
  if (mode == "FEW") return infer_few(s, kPrime).ranking;
  if (mode == "ALL") return infer_all(s);
  throw DataError("unknown inference mode: " + mode);
}

void write_ranked_rows(const std::vector<RankedRow>& rows, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write ranked file: " + path.string());
  for (const auto& r : rows) {
    out << r.query_id << '\t' << r.rank << '\t' << r.entity << '\t' << format_score(r.score)
        << '\t' << r.interpretation << '\n';
  }
}

std::vector<RankedRow> read_ranked_rows(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open ranked file: " + path.string());
  std::vector<RankedRow> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream fields(line);
    RankedRow row;
    std::string rank, score;
    if (!std::getline(fields, row.query_id, '\t') || !std::getline(fields, rank, '\t') ||
        !std::getline(fields, row.entity, '\t') || !std::getline(fields, score, '\t') ||
        !std::getline(fields, row.interpretation))
      throw DataError(path.string() + ":" + std::to_string(lineno) + ": expected 5 columns");
    row.rank = std::stoul(rank);
    row.score = std::stod(score);
    rows.push_back(std::move(row));
  }
  return rows;
}

void cmd_rank(const RunConfig& config, const std::filesystem::path& outFile, std::ostream& log) {
  const Artifacts art = load_artifacts(config);
  const Models models = Models::load(config.model_dir);
  if (!models.combiner.scaler.fitted())
    throw DataError("combiner model has no feature normalization statistics");

  std::vector<RankedRow> rows;
  std::size_t ranked = 0;
  for (const auto& q : art.queries) {
    if (config.rank_split != "all" && q.split != config.rank_split) continue;
    const QueryContext ctx = build_query_context(art, models, config, q);
    const CombinerQuery cq = to_combiner_query(ctx, models.combiner.scaler);
    const ScoreMatrix s = build_score_matrix(models.combiner.weights, cq.features);
    const std::vector<RankedEntity> ranking = run_inference(s, config.mode, config.kprime);
    for (std::size_t i = 0; i < ranking.size(); ++i) {
      rows.push_back({q.id, i + 1, ranking[i].entity, ranking[i].score,
                      ranking[i].interpretation});
    }
    ++ranked;
  }
  write_ranked_rows(rows, outFile);
  log << "rank: " << ranked << " queries (" << config.mode << ") -> " << outFile.string()
      << "\n";
}

namespace {

struct GroupedRankings {
  std::vector<std::string> ids;
  std::vector<std::vector<RankedEntity>> rankings;
  std::vector<GoldSet> golds;
};

GroupedRankings group_rows(const std::vector<RankedRow>& rows,
                           const std::vector<QueryRecord>& queries, const std::string& split) {
  std::map<std::string, std::vector<RankedEntity>> byQuery;
  for (const auto& r : rows)
    byQuery[r.query_id].push_back({r.entity, r.score, r.interpretation});
  GroupedRankings out;
  for (const auto& q : queries) {
    if (split != "all" && q.split != split) continue;
    out.ids.push_back(q.id);
    const auto it = byQuery.find(q.id);
    out.rankings.push_back(it == byQuery.end() ? std::vector<RankedEntity>{} : it->second);
    out.golds.push_back(q.gold);
  }
  return out;
}

void write_eval_report(const EvalResult& result, const std::filesystem::path& prefix,
                       const std::string& system) {
  {
    std::ofstream out(prefix.string() + ".tsv");
    out << "metric\tvalue\n";
    out << "MAP\t" << format_score(result.map) << '\n';
    out << "MRR\t" << format_score(result.mrr) << '\n';
    out << "NDCG@10\t" << format_score(result.mean_ndcg10) << '\n';
    out << "F1_relative\t" << format_score(result.mean_f1_relative) << '\n';
    out << "F1_ideal\t" << format_score(result.mean_f1_ideal) << '\n';
    out << "queries\t" << result.per_query.size() << '\n';
  }
  {
    std::ofstream out(prefix.string() + "_perquery.tsv");
    out << "query\tAP\tRR\tNDCG@10\tP_rel\tR_rel\tF1_rel\tP_ideal\tR_ideal\tF1_ideal\n";
    for (const auto& qe : result.per_query) {
      out << qe.id << '\t' << format_score(qe.ap) << '\t' << format_score(qe.rr) << '\t'
          << format_score(qe.ndcg10) << '\t' << format_score(qe.relative.precision) << '\t'
          << format_score(qe.relative.recall) << '\t' << format_score(qe.relative.f1) << '\t'
          << format_score(qe.ideal.precision) << '\t' << format_score(qe.ideal.recall) << '\t'
          << format_score(qe.ideal.f1) << '\n';
    }
  }
  {
    std::ofstream out(prefix.string() + "_prcurve.tsv");
    out << "recall\tprecision\n";
    for (const auto& p : result.pr_curve)
      out << format_score(p.recall) << '\t' << format_score(p.precision) << '\n';
  }
  {
    std::ofstream out(prefix.string() + ".md");
    out << "| System | MAP | MRR | NDCG@10 | F1 (relative) | F1 (ideal) |\n";
    out << "|---|---|---|---|---|---|\n";
    char buffer[256];
    std::snprintf(buffer, sizeof(buffer), "| %s | %.3f | %.3f | %.3f | %.3f | %.3f |\n",
                  system.c_str(), result.map, result.mrr, result.mean_ndcg10,
                  result.mean_f1_relative, result.mean_f1_ideal);
    out << buffer;
  }
}

}  // namespace

void cmd_eval(const RunConfig& config, const std::filesystem::path& rankedFile,
              const std::filesystem::path& reportPrefix, std::ostream& log) {
  const auto rows = read_ranked_rows(rankedFile);
  const auto queries = load_queries(config.queries);
  const GroupedRankings grouped = group_rows(rows, queries, config.rank_split);
  const EvalResult result =
      evaluate_rankings(grouped.ids, grouped.rankings, grouped.golds, config.threshold_x);
  write_eval_report(result, reportPrefix, config.mode);
  char buffer[256];
  std::snprintf(buffer, sizeof(buffer),
                "eval: %zu queries MAP %.4f MRR %.4f NDCG@10 %.4f F1rel %.4f F1ideal %.4f\n",
                result.per_query.size(), result.map, result.mrr, result.mean_ndcg10,
                result.mean_f1_relative, result.mean_f1_ideal);
  log << buffer;
}

namespace {

// Assembles normalized combiner queries for a split using stored models.
std::vector<CombinerQuery> combiner_queries_for_split(const Artifacts& art, const Models& models,
                                                      const RunConfig& config,
                                                      const std::string& split,
                                                      bool internalDevAs) {
  std::vector<CombinerQuery> out;
  for (const auto& q : art.queries) {
    bool take = false;
    if (split == "train") {
      take = q.split == "train" && !(internalDevAs && is_internal_dev(q.id));
    } else if (split == "dev") {
      take = q.split == "dev" || (q.split == "train" && is_internal_dev(q.id));
    } else {
      take = q.split == split;
    }
    if (!take || q.gold.empty()) continue;
    const QueryContext ctx = build_query_context(art, models, config, q);
    if (ctx.features.empty()) continue;
    out.push_back(to_combiner_query(ctx, models.combiner.scaler));
  }
  return out;
}

}  // namespace

void cmd_ablate(const RunConfig& config, const std::filesystem::path& reportFile,
                std::ostream& log) {
  const Artifacts art = load_artifacts(config);
  const Models models = Models::load(config.model_dir);
  const auto trainData = combiner_queries_for_split(art, models, config, "train", false);
  const auto testData = combiner_queries_for_split(art, models, config, "test", false);

  const std::vector<Ablation> ablations = {Ablation::full, Ablation::no_qcn, Ablation::no_qtn,
                                           Ablation::no_qrn};
  const auto table = run_ablation(trainData, testData, combiner_options(config), ablations,
                                  config.mode, config.kprime, config.threshold_x);
  std::ofstream out(reportFile);
  out << "system\tMAP\tMRR\tNDCG@10\tF1_relative\tF1_ideal\n";
  for (const auto& row : table) {
    out << ablation_name(row.ablation) << '\t' << format_score(row.result.map) << '\t'
        << format_score(row.result.mrr) << '\t' << format_score(row.result.mean_ndcg10) << '\t'
        << format_score(row.result.mean_f1_relative) << '\t'
        << format_score(row.result.mean_f1_ideal) << '\n';
    char buffer[128];
    std::snprintf(buffer, sizeof(buffer), "ablate %s: MAP %.4f F1rel %.4f\n",
                  ablation_name(row.ablation).c_str(), row.result.map,
                  row.result.mean_f1_relative);
    log << buffer;
  }
}

void cmd_tune(const RunConfig& config, const std::filesystem::path& reportFile,
              std::ostream& log) {
  const Artifacts art = load_artifacts(config);
  const Models models = Models::load(config.model_dir);
  const auto trainData = combiner_queries_for_split(art, models, config, "train", true);
  const auto devData = combiner_queries_for_split(art, models, config, "dev", false);
  if (trainData.empty() || devData.empty())
    throw DataError("cmd_tune: need non-empty train and dev splits");

  const std::vector<double> margins = {0.5, 1.0, 2.0};
  const std::vector<double> cs = {0.1, 1.0, 10.0};
  const std::vector<double> xs = {0.9, 0.95, 0.99};
  const std::vector<int> kprimes = {1, 2, 3};

  json trials = json::array();
  double bestMap = -1.0;
  json best;
  for (const double margin : margins) {
    for (const double c : cs) {
      CombinerOptions options = combiner_options(config);
      options.margin = margin;
      options.C = c;
      const CombinerTrainResult trained = train_combiner(trainData, options);
      // Rank dev queries under every mode/x/K' combination with this model.
      for (const auto& mode : {std::string("ONE"), std::string("FEW"), std::string("ALL")}) {
        for (const int kprime : kprimes) {
          if (mode != "FEW" && kprime != kprimes.front()) continue;
          std::vector<std::string> ids;
          std::vector<std::vector<RankedEntity>> rankings;
          std::vector<GoldSet> golds;
          for (const auto& q : devData) {
            const ScoreMatrix s = build_score_matrix(trained.model.weights, q.features);
            ids.push_back(q.id);
            rankings.push_back(run_inference(s, mode, kprime));
            golds.push_back(q.gold);
          }
          for (const double x : xs) {
            const EvalResult result = evaluate_rankings(ids, rankings, golds, x);
            json trial = {{"margin", margin}, {"C", c},       {"mode", mode},
                          {"kprime", kprime}, {"x", x},       {"dev_map", result.map},
                          {"dev_f1_relative", result.mean_f1_relative}};
            trials.push_back(trial);
            if (result.map > bestMap) {
              bestMap = result.map;
              best = trial;
            }
          }
        }
      }
    }
  }
  json report;
  report["best"] = best;
  report["trials"] = std::move(trials);
  std::ofstream out(reportFile);
  out << report.dump(1) << '\n';
  log << "tune: best dev MAP " << format_score(bestMap) << " with margin "
      << best.at("margin").get<double>() << " C " << best.at("C").get<double>() << " mode "
      << best.at("mode").get<std::string>() << " x " << best.at("x").get<double>() << "\n";
}

}  // namespace entrank
