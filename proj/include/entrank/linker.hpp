#pragma once
// Query entity linker.  The default implementation is an alias dictionary
// (gazetteer): greedy longest-match-first over token n-grams, all candidate
// entities returned per matched span.
//
// Alias file: TSV `alias<TAB>entity<TAB>prior`, aliases matched lowercase.

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "entrank/text.hpp"

namespace entrank {

inline constexpr std::size_t kMaxAliasTokens = 5;

struct AliasEntry {
  std::string entity;
  double prior = 1.0;  // in (0, 1]
};

class AliasDictionary {
 public:
  static AliasDictionary load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  // Alias is lowercased and tokenized on whitespace.  Priors per alias must
  // stay <= 1 in total.
  void add(const std::string& alias, const std::string& entity, double prior);

  // Entries per alias token sequence, sorted by (prior desc, entity id).
  const std::map<Tokens, std::vector<AliasEntry>>& entries() const { return entries_; }

 private:
  std::map<Tokens, std::vector<AliasEntry>> entries_;
};

struct LinkResult {
  std::size_t begin = 0;  // token span [begin, end) in the query
  std::size_t end = 0;
  std::string entity;
  double score = 1.0;  // the alias prior
  auto operator<=>(const LinkResult&) const = default;
};

// Greedy longest-match-first, left to right, over n-grams up to
// kMaxAliasTokens.  Accepted spans never overlap; every candidate entity of a
// matched alias is returned for its span.  An empty result is valid.
std::vector<LinkResult> link(const AliasDictionary& dict, const Tokens& query);

std::set<std::string> linked_entities(const std::vector<LinkResult>& results);

}  // namespace entrank
