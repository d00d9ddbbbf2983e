#include "entrank/combiner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "entrank/errors.hpp"
#include "entrank/jsonio.hpp"

namespace entrank {

using nlohmann::json;

std::set<std::string> ScoreMatrix::interpretation_ids() const {
  std::set<std::string> out;
  for (const auto& [id, row] : rows) out.insert(id);
  return out;
}

std::set<std::string> ScoreMatrix::entity_ids() const {
  std::set<std::string> out;
  for (const auto& [id, row] : rows)
    for (const auto& [entity, s] : row) out.insert(entity);
  return out;
}

double score(const FeatureVector& weights, const FeatureVector& phi) {
  return weights.dot(phi);
}

ScoreMatrix build_score_matrix(
    const FeatureVector& weights,
    const std::map<std::string, std::map<std::string, FeatureVector>>& features) {
  ScoreMatrix s;
  for (const auto& [interpId, perEntity] : features) {
    for (const auto& [entity, phi] : perEntity) s.rows[interpId][entity] = score(weights, phi);
  }
  return s;
}

namespace {

void sort_ranking(std::vector<RankedEntity>& ranking) {
  std::sort(ranking.begin(), ranking.end(), [](const RankedEntity& a, const RankedEntity& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.entity < b.entity;
  });
}

// Best score per entity over the given interpretation rows, with the
// lexicographically smallest interpretation winning ties.
std::map<std::string, RankedEntity> best_per_entity(const ScoreMatrix& s,
                                                    const std::set<std::string>& interpIds) {
  std::map<std::string, RankedEntity> best;
  for (const auto& id : interpIds) {
    const auto rowIt = s.rows.find(id);
    if (rowIt == s.rows.end()) continue;
    for (const auto& [entity, value] : rowIt->second) {
      auto it = best.find(entity);
      if (it == best.end() || value > it->second.score) {
        best[entity] = {entity, value, id};
      }
    }
  }
  return best;
}

}  // namespace

std::vector<RankedEntity> infer_all(const ScoreMatrix& s) {
  std::vector<RankedEntity> out;
  for (auto& [entity, ranked] : best_per_entity(s, s.interpretation_ids()))
    out.push_back(ranked);
  sort_ranking(out);
  return out;
}

std::vector<RankedEntity> infer_one(const ScoreMatrix& s) {
  if (s.empty()) return {};
  std::string bestId;
  double bestAggregate = -std::numeric_limits<double>::infinity();
  for (const auto& [id, row] : s.rows) {
    double aggregate = 0.0;
    for (const auto& [entity, value] : row) aggregate += value;
    if (bestId.empty() || aggregate > bestAggregate) {
      bestId = id;
      bestAggregate = aggregate;
    }
  }
  std::vector<RankedEntity> out;
  for (const auto& [entity, value] : s.rows.at(bestId)) out.push_back({entity, value, bestId});
  sort_ranking(out);
  return out;
}

FewResult infer_few(const ScoreMatrix& s, int kPrime) {
  if (kPrime < 1 || kPrime > 3)
    throw std::invalid_argument("infer_few: K' must be between 1 and 3");
  FewResult result;
  if (s.empty()) return result;

  const std::set<std::string> idSet = s.interpretation_ids();
  const std::vector<std::string> ids(idSet.begin(), idSet.end());
  const int n = static_cast<int>(ids.size());
  const int maxSize = std::min(kPrime, n);

  std::vector<std::string> bestSubset;
  double bestObjective = -std::numeric_limits<double>::infinity();

  std::vector<int> combo;
  const auto consider = [&]() {
    std::vector<std::string> subset;
    subset.reserve(combo.size());
    for (const int i : combo) subset.push_back(ids[static_cast<std::size_t>(i)]);
    double objective = 0.0;
    for (const auto& [entity, ranked] :
         best_per_entity(s, {subset.begin(), subset.end()}))
      objective += ranked.score;
    if (bestSubset.empty() || objective > bestObjective ||
        (objective == bestObjective && subset < bestSubset)) {
      bestSubset = std::move(subset);
      bestObjective = objective;
    }
  };
  // All non-empty subsets of size <= maxSize, generated per size.
  for (int size = 1; size <= maxSize; ++size) {
    combo.assign(static_cast<std::size_t>(size), 0);
    for (int i = 0; i < size; ++i) combo[static_cast<std::size_t>(i)] = i;
    while (true) {
      consider();
      int pos = size - 1;
      while (pos >= 0 && combo[static_cast<std::size_t>(pos)] == n - size + pos) --pos;
      if (pos < 0) break;
      ++combo[static_cast<std::size_t>(pos)];
      for (int i = pos + 1; i < size; ++i)
        combo[static_cast<std::size_t>(i)] = combo[static_cast<std::size_t>(i - 1)] + 1;
    }
  }

  result.subset = bestSubset;
  for (const auto& [entity, ranked] :
       best_per_entity(s, {bestSubset.begin(), bestSubset.end()}))
    result.ranking.push_back(ranked);
  sort_ranking(result.ranking);
  return result;
}

namespace {

struct PositiveCandidate {
  std::string entity;
  // Supporting interpretations, sorted by id, with their feature vectors.
  std::vector<std::pair<std::string, FeatureVector>> supporters;
  std::size_t assigned = 0;  // index into supporters
};

struct NegativePair {
  FeatureVector phi;
};

struct QueryConstraints {
  std::string id;
  std::vector<PositiveCandidate> positives;
  std::vector<NegativePair> negatives;  // every (I-, e2-) pair
};

double hinge_sum(const FeatureVector& w, const std::vector<QueryConstraints>& queries,
                 double margin) {
  double total = 0.0;
  for (const auto& q : queries) {
    std::vector<double> negScores;
    negScores.reserve(q.negatives.size());
    for (const auto& neg : q.negatives) negScores.push_back(w.dot(neg.phi));
    for (const auto& pos : q.positives) {
      const double posScore = w.dot(pos.supporters[pos.assigned].second);
      for (const double negScore : negScores) {
        const double violation = margin - posScore + negScore;
        if (violation > 0.0) total += violation;
      }
    }
  }
  return total;
}

double objective_value(const FeatureVector& w, const std::vector<QueryConstraints>& queries,
                       double margin, double C) {
  return 0.5 * w.squaredNorm() +
         (C / static_cast<double>(queries.size())) * hinge_sum(w, queries, margin);
}

// Places all latent mass on the supporting interpretation with the highest
// score; ties go to the lexicographically smallest id (supporters are sorted).
void assign_latent(const FeatureVector& w, std::vector<QueryConstraints>& queries) {
  for (auto& q : queries) {
    for (auto& pos : q.positives) {
      std::size_t best = 0;
      double bestScore = w.dot(pos.supporters[0].second);
      for (std::size_t i = 1; i < pos.supporters.size(); ++i) {
        const double s = w.dot(pos.supporters[i].second);
        if (s > bestScore) {
          best = i;
          bestScore = s;
        }
      }
      pos.assigned = best;
    }
  }
}

}  // namespace

CombinerTrainResult train_combiner(const std::vector<CombinerQuery>& data,
                                   const CombinerOptions& options) {
  std::vector<QueryConstraints> queries;
  std::size_t skipped = 0;
  for (const auto& q : data) {
    std::map<std::string, std::vector<std::pair<std::string, FeatureVector>>> supportersOf;
    QueryConstraints qc;
    qc.id = q.id;
    for (const auto& [interpId, perEntity] : q.features) {
      for (const auto& [entity, phi] : perEntity) {
        if (q.gold.count(entity)) {
          supportersOf[entity].emplace_back(interpId, phi);
        } else {
          qc.negatives.push_back({phi});
        }
      }
    }
    for (auto& [entity, supporters] : supportersOf) {
      PositiveCandidate pos;
      pos.entity = entity;
      pos.supporters = supporters;  // map iteration is id-sorted already
      qc.positives.push_back(std::move(pos));
    }
    if (qc.positives.empty() || qc.negatives.empty()) {
      ++skipped;
      continue;
    }
    queries.push_back(std::move(qc));
  }
  if (queries.empty())
    throw std::invalid_argument("train_combiner: no query with both positive and negative candidates");

  const double invQ = 1.0 / static_cast<double>(queries.size());
  FeatureVector w = FeatureVector::Zero();
  assign_latent(w, queries);
  std::vector<double> trace;
  double previous = objective_value(w, queries, options.margin, options.C);
  trace.push_back(previous);

  int round = 0;
  for (; round < options.max_rounds; ++round) {
    assign_latent(w, queries);

    // Subgradient descent on the convex w-subproblem with the schedule
    // restarting each round; keeping the best iterate makes the recorded
    // objective non-increasing and lets the alternation stall exactly.
    FeatureVector best = w;
    double bestValue = objective_value(w, queries, options.margin, options.C);
    FeatureVector current = w;
    for (int pass = 0; pass < options.passes_per_round; ++pass) {
      FeatureVector grad = current;
      for (const auto& q : queries) {
        for (const auto& pos : q.positives) {
          const FeatureVector& posPhi = pos.supporters[pos.assigned].second;
          const double posScore = current.dot(posPhi);
          for (const auto& neg : q.negatives) {
            if (options.margin - posScore + current.dot(neg.phi) > 0.0)
              grad += (options.C * invQ) * (neg.phi - posPhi);
          }
        }
      }
      const double eta = options.eta0 / (1.0 + static_cast<double>(pass));
      current -= eta * grad;
      const double value = objective_value(current, queries, options.margin, options.C);
      if (value < bestValue) {
        bestValue = value;
        best = current;
      }
    }
    w = best;
    trace.push_back(bestValue);
    if (previous - bestValue < options.tolerance) {
      ++round;
      break;
    }
    previous = bestValue;
  }

  assign_latent(w, queries);
  CombinerTrainResult result;
  result.model.weights = w;
  result.model.margin = options.margin;
  result.model.regularization = options.C;
  result.model.objective_trace = trace;
  result.model.rounds_run = round;
  result.objective_trace = trace;
  result.skipped_queries = skipped;
  for (const auto& q : queries) {
    for (const auto& pos : q.positives)
      result.assignment[{q.id, pos.entity}] = pos.supporters[pos.assigned].first;
  }
  return result;
}

double combiner_objective(
    const FeatureVector& weights, const std::vector<CombinerQuery>& data,
    const std::map<std::pair<std::string, std::string>, std::string>& assignment,
    double margin, double C) {
  std::vector<QueryConstraints> queries;
  for (const auto& q : data) {
    QueryConstraints qc;
    qc.id = q.id;
    std::map<std::string, std::vector<std::pair<std::string, FeatureVector>>> supportersOf;
    for (const auto& [interpId, perEntity] : q.features) {
      for (const auto& [entity, phi] : perEntity) {
        if (q.gold.count(entity)) {
          supportersOf[entity].emplace_back(interpId, phi);
        } else {
          qc.negatives.push_back({phi});
        }
      }
    }
    for (auto& [entity, supporters] : supportersOf) {
      PositiveCandidate pos;
      pos.entity = entity;
      pos.supporters = supporters;
      const auto it = assignment.find({q.id, entity});
      if (it == assignment.end())
        throw std::invalid_argument("combiner_objective: missing assignment for " + entity);
      bool found = false;
      for (std::size_t i = 0; i < pos.supporters.size(); ++i) {
        if (pos.supporters[i].first == it->second) {
          pos.assigned = i;
          found = true;
          break;
        }
      }
      if (!found)
        throw std::invalid_argument("combiner_objective: assigned interpretation does not support " +
                                    entity);
      qc.positives.push_back(std::move(pos));
    }
    if (!qc.positives.empty() && !qc.negatives.empty()) queries.push_back(std::move(qc));
  }
  if (queries.empty()) throw std::invalid_argument("combiner_objective: no usable query");
  return objective_value(weights, queries, margin, C);
}

std::vector<RankedEntity> normalize_scores(std::vector<RankedEntity> ranked) {
  if (ranked.empty()) return ranked;
  double lo = ranked.front().score, hi = ranked.front().score;
  for (const auto& r : ranked) {
    lo = std::min(lo, r.score);
    hi = std::max(hi, r.score);
  }
  const double range = hi - lo;
  for (auto& r : ranked) r.score = range > 0.0 ? (r.score - lo) / range : 1.0;
  return ranked;
}

std::set<std::string> threshold_relative(const std::vector<RankedEntity>& ranked, double x) {
  std::set<std::string> out;
  if (ranked.empty()) return out;
  double top = ranked.front().score;
  for (const auto& r : ranked) top = std::max(top, r.score);
  for (const auto& r : ranked) {
    if (r.score >= x * top) out.insert(r.entity);
  }
  return out;
}

std::set<std::string> threshold_ideal(const std::vector<RankedEntity>& ranked,
                                      const std::set<std::string>& gold) {
  std::size_t bestK = 0;
  double bestF1 = 0.0;
  std::size_t hits = 0;
  for (std::size_t k = 1; k <= ranked.size(); ++k) {
    hits += gold.count(ranked[k - 1].entity);
    if (hits == 0 || gold.empty()) continue;
    const double p = static_cast<double>(hits) / static_cast<double>(k);
    const double r = static_cast<double>(hits) / static_cast<double>(gold.size());
    const double f1 = 2.0 * p * r / (p + r);
    if (f1 > bestF1) {
      bestF1 = f1;
      bestK = k;
    }
  }
  std::set<std::string> out;
  for (std::size_t k = 0; k < bestK; ++k) out.insert(ranked[k].entity);
  return out;
}

CombinerModel CombinerModel::from_json_string(const std::string& text) {
  const json j = json::parse(text);
  CombinerModel model;
  const auto& weights = j.at("weights");
  for (int i = 0; i < kFeatureCount; ++i)
    model.weights(i) = weights.at(kFeatureNames[static_cast<std::size_t>(i)]).get<double>();
  model.margin = j.at("margin").get<double>();
  model.regularization = j.at("C").get<double>();
  if (j.contains("feature_min")) {
    FeatureVector lo, hi;
    for (int i = 0; i < kFeatureCount; ++i) {
      lo(i) = j.at("feature_min").at(static_cast<std::size_t>(i)).get<double>();
      hi(i) = j.at("feature_max").at(static_cast<std::size_t>(i)).get<double>();
    }
    model.scaler.set(lo, hi);
  }
  for (const auto& v : j.value("objective_trace", json::array()))
    model.objective_trace.push_back(v.get<double>());
  model.rounds_run = j.value("rounds", 0);
  return model;
}

std::string CombinerModel::to_json_string() const {
  json j;
  j["kind"] = "combiner";
  json weightsJson = json::object();
  for (int i = 0; i < kFeatureCount; ++i)
    weightsJson[kFeatureNames[static_cast<std::size_t>(i)]] = weights(i);
  j["weights"] = std::move(weightsJson);
  j["margin"] = margin;
  j["C"] = regularization;
  if (scaler.fitted()) {
    json lo = json::array(), hi = json::array();
    for (int i = 0; i < kFeatureCount; ++i) {
      lo.push_back(scaler.minima()(i));
      hi.push_back(scaler.maxima()(i));
    }
    j["feature_min"] = std::move(lo);
    j["feature_max"] = std::move(hi);
  }
  j["objective_trace"] = objective_trace;
  j["rounds"] = rounds_run;
  return j.dump(1);
}

void CombinerModel::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write combiner model: " + path.string());
  out << to_json_string();
}

CombinerModel CombinerModel::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open combiner model: " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return from_json_string(text);
}

}  // namespace entrank
