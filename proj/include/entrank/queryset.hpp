#pragma once
// Query records: id, tokens, gold entity set and train/dev/test split.
// File format: JSONL `{"id": str, "q": [tokens], "gold": [ids], "split": str}`.

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "entrank/text.hpp"

namespace entrank {

struct QueryRecord {
  std::string id;
  Tokens tokens;
  std::set<std::string> gold;
  std::string split;  // train | dev | test
};

std::vector<QueryRecord> load_queries(const std::filesystem::path& path);
void save_queries(const std::vector<QueryRecord>& queries, const std::filesystem::path& path);

// Stable 10% carve-out of the train split, by id hash (FNV-1a).
bool is_internal_dev(const std::string& id);

}  // namespace entrank
