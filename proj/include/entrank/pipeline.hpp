#pragma once
// End-to-end wiring used by the CLI: loading world artifacts, training the
// three networks plus the score combiner, ranking queries into a TSV, and
// producing evaluation/ablation/tuning reports.

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "entrank/combiner.hpp"
#include "entrank/config.hpp"
#include "entrank/corpus.hpp"
#include "entrank/eval.hpp"
#include "entrank/interp.hpp"
#include "entrank/kg.hpp"
#include "entrank/linker.hpp"
#include "entrank/matchnets.hpp"
#include "entrank/queryset.hpp"

namespace entrank {

struct Artifacts {
  KnowledgeGraph kg;
  SnippetIndex corpus;
  AliasDictionary aliases;
  Stopwords stopwords;
  std::vector<QueryRecord> queries;
  TypePatternTable type_patterns;
  RelationPatternTable relation_patterns;
};

Artifacts load_artifacts(const RunConfig& config);

struct Models {
  QuerySnippetNet qcn;
  QueryLabelNet qtn;
  QueryLabelNet qrn;
  CombinerModel combiner;

  void save(const std::filesystem::path& dir) const;
  static Models load(const std::filesystem::path& dir);
};

// Everything about one query needed for inference and evaluation.
struct QueryContext {
  const QueryRecord* record = nullptr;
  std::vector<LinkResult> links;
  std::set<std::string> snippet_ids;
  CandidateSet candidates;
  // Raw features per interpretation id per entity.
  std::map<std::string, std::map<std::string, FeatureVector>> features;
};

QueryContext build_query_context(const Artifacts& art, const Models& models,
                                 const RunConfig& config, const QueryRecord& record);

// Normalized CombinerQuery (scaler applied per feature vector).
CombinerQuery to_combiner_query(const QueryContext& ctx, const FeatureScaler& scaler);

// Commands.  Each prints a short summary line to `log`.
void cmd_build(const RunConfig& config, const std::filesystem::path& outDir, std::ostream& log);
void cmd_train(const RunConfig& config, std::ostream& log);
void cmd_rank(const RunConfig& config, const std::filesystem::path& outFile, std::ostream& log);
void cmd_eval(const RunConfig& config, const std::filesystem::path& rankedFile,
              const std::filesystem::path& reportPrefix, std::ostream& log);
void cmd_ablate(const RunConfig& config, const std::filesystem::path& reportFile,
                std::ostream& log);
void cmd_tune(const RunConfig& config, const std::filesystem::path& reportFile,
              std::ostream& log);

// Ranked-output file helpers (TSV: query, rank, entity, score, interpretation).
struct RankedRow {
  std::string query_id;
  std::size_t rank = 0;
  std::string entity;
  double score = 0.0;
  std::string interpretation;
};
void write_ranked_rows(const std::vector<RankedRow>& rows, const std::filesystem::path& path);
std::vector<RankedRow> read_ranked_rows(const std::filesystem::path& path);

// Runs the configured inference mode on a score matrix.
std::vector<RankedEntity> run_inference(const ScoreMatrix& s, const std::string& mode,
                                        int kPrime);

}  // namespace entrank
