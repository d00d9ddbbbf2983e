#include "entrank/interp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace entrank {

const std::array<const char*, kFeatureCount> kFeatureNames = {
    "f01_qcn_sum",        "f02_linker_score",   "f03_mention_coverage",
    "f04_mention_length", "f05_e1_out_degree",  "f06_e2_in_degree",
    "f07_exact_alias",    "f08_e1_count",       "f09_qrn_sum",
    "f10_rel_word_jacc",  "f11_rel_stem_jacc",  "f12_rel_coverage",
    "f13_rel_emb_cos",    "f14_rel2_word_jacc", "f15_rel2_stem_jacc",
    "f16_rel2_coverage",  "f17_rel2_emb_cos",   "f18_rel_qrn_score",
    "f19_rel2_qrn_score", "f20_qtn_best",       "f21_is_direct",
    "f22_is_mediated",    "f23_interp_size",    "f24_query_length",
    "f25_mention_frac",   "f26_snippet_support", "f27_interp_rank"};

std::string Interpretation::id() const {
  switch (tmpl) {
    case Template::direct:
      return "D|" + e1 + "|" + r;
    case Template::mediated:
      return "M|" + e1 + "|" + r + "|" + r2;
    case Template::corpus_only:
      return "C";
  }
  return "?";
}

const std::set<std::string>& CandidateSet::candidates(const std::string& interpId) const {
  static const std::set<std::string> empty;
  const auto it = candidates_of.find(interpId);
  return it == candidates_of.end() ? empty : it->second;
}

bool CandidateSet::supports(const std::string& interpId, const std::string& entity) const {
  return candidates(interpId).count(entity) > 0;
}

CandidateSet enumerate_interpretations(const Tokens& query,
                                       const std::vector<LinkResult>& links,
                                       const KnowledgeGraph& kg, const SnippetIndex& index,
                                       const std::set<std::string>& snippetIds,
                                       std::size_t pruneLimit) {
  (void)query;
  CandidateSet out;
  const std::set<std::string> e1s = linked_entities(links);

  std::map<Interpretation, std::set<std::string>> kgInterps;
  for (const auto& e1 : e1s) {
    for (const auto& pe : neighborhood(kg, e1, 2)) {
      Interpretation interp;
      if (pe.path.size() == 1) {
        interp = {Template::direct, e1, pe.path[0], ""};
      } else {
        interp = {Template::mediated, e1, pe.path[0], pe.path[2]};
      }
      kgInterps[interp].insert(pe.entity);
    }
  }
  std::set<std::string> kgReachable;
  for (const auto& [interp, cands] : kgInterps) kgReachable.insert(cands.begin(), cands.end());

  const std::set<std::string> harvested =
      harvest_corpus_candidates(index, snippetIds, e1s, kg.mediators());
  std::set<std::string> corpusOnly;
  for (const auto& e : harvested) {
    if (!kgReachable.count(e)) corpusOnly.insert(e);
  }

  std::vector<std::pair<Interpretation, std::set<std::string>>> all(kgInterps.begin(),
                                                                    kgInterps.end());
  if (!corpusOnly.empty())
    all.emplace_back(Interpretation{Template::corpus_only, "", "", ""}, corpusOnly);

  // Descending candidate count, ties by interpretation id.
  std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    if (a.second.size() != b.second.size()) return a.second.size() > b.second.size();
    return a.first.id() < b.first.id();
  });
  if (all.size() > pruneLimit) all.resize(pruneLimit);

  for (const auto& [interp, cands] : all) {
    out.interpretations.push_back(interp);
    out.candidates_of[interp.id()] = cands;
    out.all_candidates.insert(cands.begin(), cands.end());
  }
  for (const auto& e2 : out.all_candidates) {
    std::set<std::string> supporting;
    for (const auto& id : snippetIds) {
      for (const auto& m : index.at(id).mentions) {
        if (m.entity == e2) {
          supporting.insert(id);
          break;
        }
      }
    }
    out.support[e2] = std::move(supporting);
  }
  return out;
}

QueryNetScores score_query_nets(const QuerySnippetNet& qcn, const QueryLabelNet& qtn,
                                const QueryLabelNet& qrn, const Tokens& query,
                                const SnippetIndex& index,
                                const std::set<std::string>& snippetIds) {
  QueryNetScores out;
  if (query.empty()) return out;
  const nn::Vector typeScores = qtn.score(query);
  for (std::size_t i = 0; i < qtn.labels.size(); ++i)
    out.qtn_by_type[qtn.labels[i]] = typeScores(static_cast<Eigen::Index>(i));
  const nn::Vector relScores = qrn.score(query);
  for (std::size_t i = 0; i < qrn.labels.size(); ++i)
    out.qrn_by_relation[qrn.labels[i]] = relScores(static_cast<Eigen::Index>(i));
  for (const auto& id : snippetIds) {
    const auto& tokens = index.at(id).tokens;
    if (!tokens.empty()) out.qcn_by_snippet[id] = qcn.score(query, tokens);
  }
  return out;
}

namespace {

double scaled_count(std::size_t n) {
  return static_cast<double>(n) / (static_cast<double>(n) + 1.0);
}

double lookup_or_zero(const std::map<std::string, double>& scores, const std::string& key) {
  const auto it = scores.find(key);
  return it == scores.end() ? 0.0 : it->second;
}

// Mean-embedding cosine mapped into [0,1]; 0 when either side is degenerate.
double embedding_cosine(const nn::EmbeddingTable& embeddings, const Tokens& a, const Tokens& b) {
  if (a.empty() || b.empty()) return 0.0;
  nn::Vector va = nn::Vector::Zero(embeddings.dim());
  for (const auto& t : a) va += embeddings.vectors.row(embeddings.row_of(t)).transpose();
  nn::Vector vb = nn::Vector::Zero(embeddings.dim());
  for (const auto& t : b) vb += embeddings.vectors.row(embeddings.row_of(t)).transpose();
  const double na = va.norm(), nb = vb.norm();
  if (na < 1e-12 || nb < 1e-12) return 0.0;
  return (va.dot(vb) / (na * nb) + 1.0) / 2.0;
}

double token_coverage(const Tokens& relTokens, const std::set<std::string>& queryWords) {
  if (relTokens.empty()) return 0.0;
  std::size_t covered = 0;
  for (const auto& t : relTokens) covered += queryWords.count(t);
  return static_cast<double>(covered) / static_cast<double>(relTokens.size());
}

}  // namespace

FeatureVector assemble_features(const Tokens& query, const CandidateSet& candidates,
                                const Interpretation& interp, const std::string& e2,
                                const QueryNetScores& nets, const KnowledgeGraph& kg,
                                const std::vector<LinkResult>& links,
                                const nn::EmbeddingTable& embeddings) {
  const std::string interpId = interp.id();
  if (!candidates.supports(interpId, e2))
    throw std::invalid_argument("assemble_features: " + e2 + " is not a candidate of " + interpId);

  FeatureVector phi = FeatureVector::Zero();
  const auto supportIt = candidates.support.find(e2);
  if (supportIt != candidates.support.end()) {
    double qcnSum = 0.0;
    for (const auto& id : supportIt->second) qcnSum += lookup_or_zero(nets.qcn_by_snippet, id);
    phi(feat::qcn_sum) = qcnSum;
    phi(feat::snippet_support) = scaled_count(supportIt->second.size());
  }

  // General, KG-independent block.
  phi(feat::interp_candidates) = scaled_count(candidates.candidates(interpId).size());
  phi(feat::query_length) = scaled_count(query.size());
  if (!query.empty()) {
    std::vector<bool> covered(query.size(), false);
    for (const auto& link : links) {
      for (std::size_t i = link.begin; i < link.end && i < query.size(); ++i) covered[i] = true;
    }
    phi(feat::mention_fraction) =
        static_cast<double>(std::count(covered.begin(), covered.end(), true)) /
        static_cast<double>(query.size());
  }

  if (interp.tmpl == Template::corpus_only) return phi;  // all KG blocks stay 0

  phi(interp.tmpl == Template::direct ? feat::is_direct : feat::is_mediated) = 1.0;

  // Entity-match block for the grounding e1.
  const LinkResult* bestLink = nullptr;
  std::size_t spanAmbiguity = 0;
  for (const auto& link : links) {
    if (link.entity != interp.e1) continue;
    if (!bestLink || link.score > bestLink->score ||
        (link.score == bestLink->score && link.begin < bestLink->begin)) {
      bestLink = &link;
    }
  }
  if (bestLink) {
    for (const auto& link : links) {
      if (link.begin == bestLink->begin && link.end == bestLink->end) ++spanAmbiguity;
    }
    phi(feat::linker_score) = bestLink->score;
    const double spanLen = static_cast<double>(bestLink->end - bestLink->begin);
    if (!query.empty())
      phi(feat::mention_coverage) = spanLen / static_cast<double>(query.size());
    phi(feat::mention_length) = spanLen / static_cast<double>(kMaxAliasTokens);
    phi(feat::exact_alias) = spanAmbiguity == 1 ? 1.0 : 0.0;
  }
  phi(feat::e1_out_degree) = scaled_count(kg.outgoing(interp.e1).size());
  phi(feat::e2_degree) = scaled_count(kg.incoming(e2).size());
  phi(feat::e1_count) = scaled_count(linked_entities(links).size());

  // Relation signals.
  const RelationsBetween rel = relations_between(kg, interp.e1, e2);
  double qrnSum = 0.0;
  for (const auto& r : rel.direct) qrnSum += lookup_or_zero(nets.qrn_by_relation, r);
  phi(feat::qrn_sum) = qrnSum;

  const auto queryWords = token_set(query);
  const auto queryStems = stemmed_token_set(query);
  const Tokens relTokens = name_tokens(interp.r);
  phi(feat::rel_word_jaccard) = jaccard(queryWords, token_set(relTokens));
  phi(feat::rel_stem_jaccard) = jaccard(queryStems, stemmed_token_set(relTokens));
  phi(feat::rel_coverage) = token_coverage(relTokens, queryWords);
  phi(feat::rel_embedding_cos) = embedding_cosine(embeddings, query, relTokens);
  phi(feat::rel_qrn_score) = lookup_or_zero(nets.qrn_by_relation, interp.r);
  if (interp.tmpl == Template::mediated) {
    const Tokens rel2Tokens = name_tokens(interp.r2);
    phi(feat::rel2_word_jaccard) = jaccard(queryWords, token_set(rel2Tokens));
    phi(feat::rel2_stem_jaccard) = jaccard(queryStems, stemmed_token_set(rel2Tokens));
    phi(feat::rel2_coverage) = token_coverage(rel2Tokens, queryWords);
    phi(feat::rel2_embedding_cos) = embedding_cosine(embeddings, query, rel2Tokens);
    phi(feat::rel2_qrn_score) = lookup_or_zero(nets.qrn_by_relation, interp.r2);
  }

  // Type signal: best QTN score over the candidate's asserted types.
  double best = 0.0;
  for (const auto& t : kg.types_of(e2))
    best = std::max(best, lookup_or_zero(nets.qtn_by_type, t));
  phi(feat::qtn_best) = best;

  // Baseline interpretation rank from the pruning order.
  for (std::size_t i = 0; i < candidates.interpretations.size(); ++i) {
    if (candidates.interpretations[i].id() == interpId) {
      phi(feat::interp_rank) = 1.0 / (1.0 + static_cast<double>(i));
      break;
    }
  }
  return phi;
}

void FeatureScaler::fit(const std::vector<FeatureVector>& data) {
  min_ = FeatureVector::Zero();
  max_ = FeatureVector::Zero();
  if (!data.empty()) {
    min_ = data.front();
    max_ = data.front();
    for (const auto& v : data) {
      min_ = min_.cwiseMin(v);
      max_ = max_.cwiseMax(v);
    }
  }
  fitted_ = true;
}

FeatureVector FeatureScaler::apply(const FeatureVector& v) const {
  if (!fitted_) throw std::logic_error("FeatureScaler: apply before fit");
  FeatureVector out = FeatureVector::Zero();
  for (int i = 0; i < kFeatureCount; ++i) {
    const double range = max_(i) - min_(i);
    if (range > 0.0) out(i) = std::clamp((v(i) - min_(i)) / range, 0.0, 1.0);
  }
  return out;
}

void FeatureScaler::set(const FeatureVector& min, const FeatureVector& max) {
  min_ = min;
  max_ = max;
  fitted_ = true;
}

}  // namespace entrank
