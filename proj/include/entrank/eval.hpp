#pragma once
// Ranking and set-retrieval metrics, interpolated precision-recall curves,
// a paired sign test, and the feature-ablation experiment runner.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "entrank/combiner.hpp"

namespace entrank {

using Ranking = std::vector<std::string>;
using GoldSet = std::set<std::string>;

double average_precision(const Ranking& ranked, const GoldSet& gold);
double reciprocal_rank(const Ranking& ranked, const GoldSet& gold);
// Binary gains, log2(rank+1) discount, ideal DCG from min(|gold|, 10) ones.
double ndcg_at_10(const Ranking& ranked, const GoldSet& gold);

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};
Prf set_prf(const std::set<std::string>& retrieved, const GoldSet& gold);

struct PrPoint {
  double recall = 0.0;
  double precision = 0.0;
};

// Macro-averaged precision/recall at rank cutoffs 1..10, interpolated so that
// precision at each point is the max precision at equal-or-higher recall.
std::vector<PrPoint> interpolated_pr_curve(const std::vector<Ranking>& rankings,
                                           const std::vector<GoldSet>& golds);

struct QueryEval {
  std::string id;
  double ap = 0.0;
  double rr = 0.0;
  double ndcg10 = 0.0;
  Prf relative;  // set metrics under the relative threshold
  Prf ideal;     // set metrics under the ideal (oracle) threshold
};

struct EvalResult {
  std::vector<QueryEval> per_query;  // queries with empty gold excluded
  double map = 0.0;
  double mrr = 0.0;
  double mean_ndcg10 = 0.0;
  double mean_f1_relative = 0.0;
  double mean_f1_ideal = 0.0;
  std::vector<PrPoint> pr_curve;
};

// Aggregates ranked outputs against gold sets; thresholdX is the relative
// threshold fraction.  Queries with empty gold sets are excluded from means.
EvalResult evaluate_rankings(const std::vector<std::string>& queryIds,
                             const std::vector<std::vector<RankedEntity>>& rankings,
                             const std::vector<GoldSet>& golds, double thresholdX);

// Two-sided paired sign test over per-query metric pairs.
struct SignTestResult {
  int wins = 0;    // a > b
  int losses = 0;  // a < b
  int ties = 0;
  double p_value = 1.0;
};
SignTestResult paired_sign_test(const std::vector<double>& a, const std::vector<double>& b);

enum class Ablation { full, no_qcn, no_qtn, no_qrn };
std::string ablation_name(Ablation a);
// Zeroes the ablated network's feature(s): f1 for no_qcn, f20 for no_qtn,
// f9 for no_qrn.
FeatureVector apply_ablation(const FeatureVector& phi, Ablation a);

struct AblationRow {
  Ablation ablation = Ablation::full;
  EvalResult result;
};

// Retrains the combiner on ablated features and evaluates each variant under
// the given inference mode ("ONE", "FEW" with kPrime, or "ALL").
std::vector<AblationRow> run_ablation(const std::vector<CombinerQuery>& trainData,
                                      const std::vector<CombinerQuery>& testData,
                                      const CombinerOptions& options,
                                      const std::vector<Ablation>& ablations,
                                      const std::string& mode, int kPrime, double thresholdX);

}  // namespace entrank
