#pragma once
// Candidate interpretations per query, candidate answer gathering from KG
// neighborhoods and corpus snippets, and the 27-dimensional feature vector
// describing each (query, interpretation, candidate) triple.

#include <array>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "entrank/corpus.hpp"
#include "entrank/kg.hpp"
#include "entrank/linker.hpp"
#include "entrank/matchnets.hpp"

namespace entrank {

enum class Template { direct, mediated, corpus_only };

// A structured reading of the query: e1-r-e2, e1-r-m-r'-e2 (m existentially
// quantified over mediators), or the corpus-only candidate grouping.  The
// target type stays unbound; all feasible types are consulted during feature
// assembly.
struct Interpretation {
  Template tmpl = Template::corpus_only;
  std::string e1;  // empty for corpus_only
  std::string r;
  std::string r2;  // mediated only

  std::string id() const;
  auto operator<=>(const Interpretation&) const = default;
};

struct CandidateSet {
  std::string query_id;
  // Pruned, ordered by descending candidate count (ties by interpretation id);
  // the position in this vector is the interpretation's baseline rank.
  std::vector<Interpretation> interpretations;
  std::map<std::string, std::set<std::string>> candidates_of;  // interp id -> entities
  std::set<std::string> all_candidates;                        // E2, mediators excluded
  std::map<std::string, std::set<std::string>> support;        // entity -> snippet ids

  const std::set<std::string>& candidates(const std::string& interpId) const;
  bool supports(const std::string& interpId, const std::string& entity) const;
};

// One DIRECT interpretation per distinct (e1, r) with a non-empty endpoint
// set, one MEDIATED per distinct (e1, r, r'), and at most one CORPUS_ONLY
// interpretation carrying corpus-harvested candidates unreachable in the KG.
CandidateSet enumerate_interpretations(const Tokens& query,
                                       const std::vector<LinkResult>& links,
                                       const KnowledgeGraph& kg, const SnippetIndex& index,
                                       const std::set<std::string>& snippetIds,
                                       std::size_t pruneLimit);

inline constexpr int kFeatureCount = 27;
using FeatureVector = Eigen::Matrix<double, kFeatureCount, 1>;

namespace feat {
// Indices into FeatureVector; the serialized order is fixed.
enum : int {
  qcn_sum = 0,        // sum of QCN scores over the entity's supporting snippets
  linker_score,       // entity-match block
  mention_coverage,
  mention_length,
  e1_out_degree,
  e2_degree,
  exact_alias,
  e1_count,
  qrn_sum,            // sum of QRN scores over direct relations between e1 and e2
  rel_word_jaccard,   // relation-token block
  rel_stem_jaccard,
  rel_coverage,
  rel_embedding_cos,
  rel2_word_jaccard,
  rel2_stem_jaccard,
  rel2_coverage,
  rel2_embedding_cos,
  rel_qrn_score,
  rel2_qrn_score,
  qtn_best,           // best QTN score over the candidate's asserted types
  is_direct,          // general block
  is_mediated,
  interp_candidates,
  query_length,
  mention_fraction,
  snippet_support,
  interp_rank         // 1 / (1 + baseline interpretation rank)
};
}  // namespace feat

extern const std::array<const char*, kFeatureCount> kFeatureNames;

// Per-query network outputs, computed once and reused across (I, e2) pairs.
struct QueryNetScores {
  std::map<std::string, double> qtn_by_type;
  std::map<std::string, double> qrn_by_relation;
  std::map<std::string, double> qcn_by_snippet;
};

QueryNetScores score_query_nets(const QuerySnippetNet& qcn, const QueryLabelNet& qtn,
                                const QueryLabelNet& qrn, const Tokens& query,
                                const SnippetIndex& index,
                                const std::set<std::string>& snippetIds);

// Raw (un-normalized) feature vector for (query, interpretation, candidate).
// CORPUS_ONLY interpretations zero every KG-derived block.  Throws when e2 is
// not a candidate of the interpretation.
FeatureVector assemble_features(const Tokens& query, const CandidateSet& candidates,
                                const Interpretation& interp, const std::string& e2,
                                const QueryNetScores& nets, const KnowledgeGraph& kg,
                                const std::vector<LinkResult>& links,
                                const nn::EmbeddingTable& embeddings);

// Per-dimension min-max scaling fit on the training split; application clamps
// into [0,1] and maps constant dimensions to 0.
class FeatureScaler {
 public:
  void fit(const std::vector<FeatureVector>& data);
  FeatureVector apply(const FeatureVector& v) const;
  bool fitted() const { return fitted_; }

  const FeatureVector& minima() const { return min_; }
  const FeatureVector& maxima() const { return max_; }
  void set(const FeatureVector& min, const FeatureVector& max);

 private:
  FeatureVector min_ = FeatureVector::Zero();
  FeatureVector max_ = FeatureVector::Zero();
  bool fitted_ = false;
};

}  // namespace entrank
