#include "entrank/eval.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace entrank {

double average_precision(const Ranking& ranked, const GoldSet& gold) {
  if (gold.empty()) return 0.0;
  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t k = 0; k < ranked.size(); ++k) {
    if (gold.count(ranked[k])) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(k + 1);
    }
  }
  return sum / static_cast<double>(gold.size());
}

double reciprocal_rank(const Ranking& ranked, const GoldSet& gold) {
  for (std::size_t k = 0; k < ranked.size(); ++k) {
    if (gold.count(ranked[k])) return 1.0 / static_cast<double>(k + 1);
  }
  return 0.0;
}

double ndcg_at_10(const Ranking& ranked, const GoldSet& gold) {
  if (gold.empty()) return 0.0;
  double dcg = 0.0;
  const std::size_t depth = std::min<std::size_t>(10, ranked.size());
  for (std::size_t k = 0; k < depth; ++k) {
    if (gold.count(ranked[k])) dcg += 1.0 / std::log2(static_cast<double>(k) + 2.0);
  }
  double idcg = 0.0;
  const std::size_t ideal = std::min<std::size_t>(10, gold.size());
  for (std::size_t k = 0; k < ideal; ++k) idcg += 1.0 / std::log2(static_cast<double>(k) + 2.0);
  return idcg > 0.0 ? dcg / idcg : 0.0;
}

Prf set_prf(const std::set<std::string>& retrieved, const GoldSet& gold) {
  Prf out;
  std::size_t hits = 0;
  for (const auto& e : retrieved) hits += gold.count(e);
  if (!retrieved.empty()) out.precision = static_cast<double>(hits) / retrieved.size();
  if (!gold.empty()) out.recall = static_cast<double>(hits) / gold.size();
  if (out.precision + out.recall > 0.0)
    out.f1 = 2.0 * out.precision * out.recall / (out.precision + out.recall);
  return out;
}

std::vector<PrPoint> interpolated_pr_curve(const std::vector<Ranking>& rankings,
                                           const std::vector<GoldSet>& golds) {
  if (rankings.empty() || rankings.size() != golds.size())
    throw std::invalid_argument("interpolated_pr_curve: need a non-empty query set");
  constexpr std::size_t kCutoffs = 10;
  std::vector<PrPoint> points(kCutoffs);
  for (std::size_t k = 1; k <= kCutoffs; ++k) {
    double psum = 0.0, rsum = 0.0;
    for (std::size_t q = 0; q < rankings.size(); ++q) {
      std::size_t hits = 0;
      const std::size_t depth = std::min(k, rankings[q].size());
      for (std::size_t i = 0; i < depth; ++i) hits += golds[q].count(rankings[q][i]);
      psum += static_cast<double>(hits) / static_cast<double>(k);
      if (!golds[q].empty()) rsum += static_cast<double>(hits) / golds[q].size();
    }
    points[k - 1].precision = psum / static_cast<double>(rankings.size());
    points[k - 1].recall = rsum / static_cast<double>(rankings.size());
  }
  // Interpolation: precision at a point is the max precision at >= recall.
  for (std::size_t i = points.size(); i-- > 1;) {
    points[i - 1].precision = std::max(points[i - 1].precision, points[i].precision);
  }
  return points;
}

EvalResult evaluate_rankings(const std::vector<std::string>& queryIds,
                             const std::vector<std::vector<RankedEntity>>& rankings,
                             const std::vector<GoldSet>& golds, double thresholdX) {
  if (queryIds.size() != rankings.size() || queryIds.size() != golds.size())
    throw std::invalid_argument("evaluate_rankings: size mismatch");
  EvalResult out;
  std::vector<Ranking> entityLists;
  std::vector<GoldSet> keptGolds;
  for (std::size_t q = 0; q < rankings.size(); ++q) {
    if (golds[q].empty()) continue;  // excluded from all means
    Ranking list;
    for (const auto& r : rankings[q]) list.push_back(r.entity);
    QueryEval qe;
    qe.id = queryIds[q];
    qe.ap = average_precision(list, golds[q]);
    qe.rr = reciprocal_rank(list, golds[q]);
    qe.ndcg10 = ndcg_at_10(list, golds[q]);
    qe.relative = set_prf(threshold_relative(normalize_scores(rankings[q]), thresholdX), golds[q]);
    qe.ideal = set_prf(threshold_ideal(rankings[q], golds[q]), golds[q]);
    out.per_query.push_back(qe);
    entityLists.push_back(std::move(list));
    keptGolds.push_back(golds[q]);
  }
  const double n = static_cast<double>(out.per_query.size());
  if (n > 0) {
    for (const auto& qe : out.per_query) {
      out.map += qe.ap;
      out.mrr += qe.rr;
      out.mean_ndcg10 += qe.ndcg10;
      out.mean_f1_relative += qe.relative.f1;
      out.mean_f1_ideal += qe.ideal.f1;
    }
    out.map /= n;
    out.mrr /= n;
    out.mean_ndcg10 /= n;
    out.mean_f1_relative /= n;
    out.mean_f1_ideal /= n;
    out.pr_curve = interpolated_pr_curve(entityLists, keptGolds);
  }
  return out;
}

SignTestResult paired_sign_test(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("paired_sign_test: size mismatch");
  SignTestResult out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) {
      ++out.wins;
    } else if (a[i] < b[i]) {
      ++out.losses;
    } else {
      ++out.ties;
    }
  }
  const int n = out.wins + out.losses;  // ties discarded
  if (n == 0) {
    out.p_value = 1.0;
    return out;
  }
  // Two-sided exact binomial tail with p = 1/2.
  const int k = std::min(out.wins, out.losses);
  double tail = 0.0;
  for (int i = 0; i <= k; ++i) {
    double logChoose = 0.0;
    for (int j = 0; j < i; ++j)
      logChoose += std::log(static_cast<double>(n - j)) - std::log(static_cast<double>(i - j));
    tail += std::exp(logChoose - static_cast<double>(n) * std::log(2.0));
  }
  out.p_value = std::min(1.0, 2.0 * tail);
  return out;
}

std::string ablation_name(Ablation a) {
  switch (a) {
    case Ablation::full:
      return "full";
    case Ablation::no_qcn:
      return "noQCN";
    case Ablation::no_qtn:
      return "noQTN";
    case Ablation::no_qrn:
      return "noQRN";
  }
  return "?";
}

FeatureVector apply_ablation(const FeatureVector& phi, Ablation a) {
  FeatureVector out = phi;
  switch (a) {
    case Ablation::full:
      break;
    case Ablation::no_qcn:
      out(feat::qcn_sum) = 0.0;
      break;
    case Ablation::no_qtn:
      out(feat::qtn_best) = 0.0;
      break;
    case Ablation::no_qrn:
      out(feat::qrn_sum) = 0.0;
      break;
  }
  return out;
}

namespace {

std::vector<CombinerQuery> ablate_queries(const std::vector<CombinerQuery>& data, Ablation a) {
  std::vector<CombinerQuery> out = data;
  if (a == Ablation::full) return out;
  for (auto& q : out) {
    for (auto& [interpId, perEntity] : q.features) {
      for (auto& [entity, phi] : perEntity) phi = apply_ablation(phi, a);
    }
  }
  return out;
}

}  // namespace

std::vector<AblationRow> run_ablation(const std::vector<CombinerQuery>& trainData,
                                      const std::vector<CombinerQuery>& testData,
                                      const CombinerOptions& options,
                                      const std::vector<Ablation>& ablations,
                                      const std::string& mode, int kPrime, double thresholdX) {
  std::vector<AblationRow> table;
  for (const Ablation a : ablations) {
    const auto train = ablate_queries(trainData, a);
    const auto test = ablate_queries(testData, a);
    const CombinerTrainResult trained = train_combiner(train, options);

    std::vector<std::string> ids;
    std::vector<std::vector<RankedEntity>> rankings;
    std::vector<GoldSet> golds;
    for (const auto& q : test) {
      const ScoreMatrix s = build_score_matrix(trained.model.weights, q.features);
      std::vector<RankedEntity> ranking;
      if (mode == "ONE") {
        ranking = infer_one(s);
      } else if (mode == "FEW") {
        ranking = infer_few(s, kPrime).ranking;
      } else {
        ranking = infer_all(s);
      }
      ids.push_back(q.id);
      rankings.push_back(std::move(ranking));
      golds.push_back(q.gold);
    }
    table.push_back({a, evaluate_rankings(ids, rankings, golds, thresholdX)});
  }
  return table;
}

}  // namespace entrank
