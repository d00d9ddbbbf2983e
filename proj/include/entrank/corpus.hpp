#pragma once
// Entity-annotated snippet store.  Snippets are <=20-token windows with
// mention annotations; the index inverts them by entity and by token.
// Also hosts weak supervision labeling and relation pattern mining.
//
// Corpus file: JSONL, one snippet per line:
//   {"id": str, "doc": str, "tokens": [str],
//    "mentions": [{"start": int, "end": int, "entity": str, "conf": float}]}

#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "entrank/kg.hpp"
#include "entrank/text.hpp"

namespace entrank {

inline constexpr std::size_t kMaxSnippetTokens = 20;

struct Mention {
  std::size_t begin = 0;  // token span [begin, end)
  std::size_t end = 0;
  std::string entity;
  double confidence = 1.0;
  auto operator<=>(const Mention&) const = default;
};

struct Snippet {
  std::string id;
  std::string doc_id;
  Tokens tokens;                  // lowercase, at most kMaxSnippetTokens
  std::vector<Mention> mentions;  // in-bounds, non-overlapping, sorted by span
};

class SnippetIndex {
 public:
  static SnippetIndex load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;  // canonical JSONL, by id

  // Enforces the snippet invariants: lowercases tokens, truncates to the
  // 20-token window, drops mentions outside the window or overlapping an
  // earlier accepted mention.
  void add(Snippet snippet);

  const std::map<std::string, Snippet>& snippets() const { return snippets_; }
  const Snippet& at(const std::string& id) const;
  const std::map<std::string, std::set<std::string>>& by_entity() const { return by_entity_; }
  const std::map<std::string, std::set<std::string>>& by_token() const { return by_token_; }
  std::set<std::string> snippets_mentioning(const std::string& entity) const;

 private:
  std::map<std::string, Snippet> snippets_;
  std::map<std::string, std::set<std::string>> by_entity_;
  std::map<std::string, std::set<std::string>> by_token_;
};

using Stopwords = std::set<std::string>;
Stopwords load_stopwords(const std::filesystem::path& path);  // one word per line

// Union of entity hits over E1 and token hits over non-stopword query tokens,
// capped at `cap` snippets ranked by count of distinct matched query tokens
// (ties by snippet id).
std::set<std::string> snippets_for_query(const SnippetIndex& index, const Tokens& query,
                                         const std::set<std::string>& e1s,
                                         const Stopwords& stopwords, std::size_t cap);

// Entities mentioned in the given snippets, minus E1 and minus mediators.
std::set<std::string> harvest_corpus_candidates(const SnippetIndex& index,
                                                const std::set<std::string>& snippetIds,
                                                const std::set<std::string>& e1s,
                                                const std::set<std::string>& mediators);

enum class SnippetLabel { positive, negative };

struct WeakLabel {
  std::string snippet_id;
  std::string center_entity;
  SnippetLabel label = SnippetLabel::negative;
};

// Weak supervision for query-snippet relevance: a snippet sharing at least
// one non-stopword query token is positive when its center entity (mention
// midpoint nearest the window midpoint; ties to the earliest) is in the gold
// set, negative otherwise.  Snippets without mentions or shared tokens stay
// unlabeled.  One example per snippet.
std::vector<WeakLabel> weak_label(const SnippetIndex& index, const Tokens& query,
                                  const std::set<std::string>& goldSet,
                                  const Stopwords& stopwords);

// Stemmed token sequences per relation id, with occurrence counts.
struct RelationPatternTable {
  std::map<std::string, std::map<Tokens, std::size_t>> patterns;
};

// For every triple (s, r, o) and snippet mentioning both s and o, counts the
// stemmed token sequence strictly between the two mentions (1..maxLen tokens)
// for r; keeps sequences with count >= minCount.
RelationPatternTable mine_relation_patterns(const KnowledgeGraph& kg, const SnippetIndex& index,
                                            std::size_t minCount, std::size_t maxLen = 6);

}  // namespace entrank
