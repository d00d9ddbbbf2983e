#pragma once
// Latent-interpretation score combination: a linear model over the 27
// features scores every (interpretation, entity) pair; entities are ranked
// under ONE / FEW / ALL inference; training alternates between assigning
// each positive entity's mass to its best supporting interpretation and a
// subgradient pass on the pairwise hinge objective.

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "entrank/interp.hpp"

namespace entrank {

// Sparse (interpretation, entity) -> score map; entries exist only where the
// interpretation supports the entity.
struct ScoreMatrix {
  std::map<std::string, std::map<std::string, double>> rows;  // interp -> entity -> score

  std::set<std::string> interpretation_ids() const;
  std::set<std::string> entity_ids() const;
  bool empty() const { return rows.empty(); }
};

double score(const FeatureVector& weights, const FeatureVector& phi);

// S(I, e2) = w . phi(q, I, e2) for every supported pair.
ScoreMatrix build_score_matrix(
    const FeatureVector& weights,
    const std::map<std::string, std::map<std::string, FeatureVector>>& features);

struct RankedEntity {
  std::string entity;
  double score = 0.0;
  std::string interpretation;  // best supporting interpretation (ties by id)
};

// Rank all entities by their best supporting score (descending, ties by id).
std::vector<RankedEntity> infer_all(const ScoreMatrix& s);

// Pick the interpretation with the largest per-interpretation sum of scores
// and rank only its candidates.
std::vector<RankedEntity> infer_one(const ScoreMatrix& s);

struct FewResult {
  std::vector<std::string> subset;  // chosen interpretation ids, sorted
  std::vector<RankedEntity> ranking;
};

// Choose the non-empty subset of at most kPrime interpretations maximizing
// the sum over covered entities of the best in-subset score (entities not
// covered are excluded from the sum and the output); ties prefer the
// lexicographically smallest id set.  kPrime must be 1..3.
FewResult infer_few(const ScoreMatrix& s, int kPrime);

struct CombinerModel {
  FeatureVector weights = FeatureVector::Zero();
  double margin = 1.0;
  double regularization = 1.0;  // C
  FeatureScaler scaler;
  std::vector<double> objective_trace;
  int rounds_run = 0;

  void save(const std::filesystem::path& path) const;
  static CombinerModel load(const std::filesystem::path& path);
  std::string to_json_string() const;
  static CombinerModel from_json_string(const std::string& text);
};

// One training query: features per (interpretation id, entity id) plus the
// gold entity set.
struct CombinerQuery {
  std::string id;
  std::map<std::string, std::map<std::string, FeatureVector>> features;
  std::set<std::string> gold;
};

struct CombinerOptions {
  double margin = 1.0;       // Delta
  double C = 1.0;
  int max_rounds = 50;
  double eta0 = 0.1;         // subgradient step eta_t = eta0 / (1 + t), t global
  int passes_per_round = 200;
  double tolerance = 1e-6;   // stop when the objective improves by less
};

struct CombinerTrainResult {
  CombinerModel model;
  std::vector<double> objective_trace;  // one value per completed round
  std::size_t skipped_queries = 0;      // queries without both classes
  // Final latent assignment: (query id, positive entity) -> interpretation id.
  std::map<std::pair<std::string, std::string>, std::string> assignment;
};

// Alternating optimization of the relaxed latent pairwise hinge program.
// Queries lacking a positive or negative candidate are skipped; throws when
// none remain.  The recorded objective never increases between rounds.
CombinerTrainResult train_combiner(const std::vector<CombinerQuery>& data,
                                   const CombinerOptions& options);

// Objective value for a fixed weight vector and latent assignment.
double combiner_objective(
    const FeatureVector& weights, const std::vector<CombinerQuery>& data,
    const std::map<std::pair<std::string, std::string>, std::string>& assignment,
    double margin, double C);

// Min-max normalizes the scores of a ranked list into [0,1]; flat lists map
// to all ones.  Raw linear scores can be negative, so set-retrieval
// thresholds operate on the normalized scores.
std::vector<RankedEntity> normalize_scores(std::vector<RankedEntity> ranked);

// Entities whose score reaches x times the top score.  Expects scores
// min-max normalized within the query (see normalize_scores).
std::set<std::string> threshold_relative(const std::vector<RankedEntity>& ranked, double x);

// Oracle cut maximizing prefix F1 against the gold set (ties to the smallest
// prefix, which may be empty).
std::set<std::string> threshold_ideal(const std::vector<RankedEntity>& ranked,
                                      const std::set<std::string>& gold);

}  // namespace entrank
