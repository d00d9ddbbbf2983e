#pragma once
// Synthetic toy-world generator: emits a KG, an annotated snippet corpus, an
// alias dictionary, queries with planted gold answers, a stopword list and a
// manifest.  Generation is byte-identical for a fixed spec and seed.
//
// Query kinds:
//  * KG-answerable: a person e1 linked by an alias bigram, connected to gold
//    entities through one correct relation (direct or via a mediator) plus
//    wrong-relation distractor edges; evidence snippets mention e1 and the
//    gold with the relation's surface pattern between them.
//  * corpus-only: no linkable e1; the gold is only reachable through
//    snippets sharing the query's keywords, against distractor entities
//    whose snippets share fewer keywords.
//  * A fraction of KG-answerable queries carries one extra gold answer that
//    is reachable only through the corpus.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace entrank {

struct WorldSpec {
  int num_queries = 30;
  double corpus_only_fraction = 0.34;
  double mediated_fraction = 0.2;        // of KG-answerable queries
  double extra_corpus_gold_fraction = 0.3;  // of KG-answerable queries
  int golds_per_query = 2;
  int distractor_relations = 2;
  int snippets_per_entity = 2;
  int corpus_snippets_per_entity = 3;    // corpus-only gold/distractor evidence
  double test_fraction = 0.3;
  // false: no evidence snippets for test-split KG queries (their answers are
  // "rare in the corpus"); corpus-only queries always keep their evidence.
  bool corpus_covers_test = true;
  std::uint64_t seed = 7;
};

struct WorldPaths {
  std::filesystem::path kg;
  std::filesystem::path corpus;
  std::filesystem::path aliases;
  std::filesystem::path queries;
  std::filesystem::path stopwords;
  std::filesystem::path manifest;
};

WorldPaths world_paths(const std::filesystem::path& dir);

// Writes the full world into `dir` and returns its file paths.
WorldPaths generate_world(const WorldSpec& spec, const std::filesystem::path& dir);

// Checks the planted-gold contract: gold entities exist in the KG or corpus
// universe, mediators never appear in gold, every gold is reachable within
// two KG hops of a linked entity or mentioned in the corpus, and with
// corpus_only_fraction == 0 every gold is KG-reachable.  Returns the list of
// violations (empty when valid).
std::vector<std::string> validate_world(const std::filesystem::path& dir);

}  // namespace entrank
