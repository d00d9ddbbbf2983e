#include "entrank/queryset.hpp"

#include <fstream>

#include <json.hpp>

#include "entrank/errors.hpp"

namespace entrank {

using nlohmann::json;

std::vector<QueryRecord> load_queries(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open query file: " + path.string());
  std::vector<QueryRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      const json row = json::parse(line);
      QueryRecord q;
      q.id = row.at("id").get<std::string>();
      for (const auto& t : row.at("q")) q.tokens.push_back(to_lower(t.get<std::string>()));
      for (const auto& g : row.value("gold", json::array())) q.gold.insert(g.get<std::string>());
      q.split = row.value("split", "train");
      if (q.split != "train" && q.split != "dev" && q.split != "test")
        throw DataError("split must be train, dev or test");
      out.push_back(std::move(q));
    } catch (const json::exception& e) {
      throw DataError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

void save_queries(const std::vector<QueryRecord>& queries, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write query file: " + path.string());
  for (const auto& q : queries) {
    json row;
    row["id"] = q.id;
    row["q"] = q.tokens;
    row["gold"] = q.gold;
    row["split"] = q.split;
    out << row.dump() << '\n';
  }
}

bool is_internal_dev(const std::string& id) {
  std::uint64_t hash = 1469598103934665603ull;
  for (const unsigned char c : id) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash % 10 == 0;
}

}  // namespace entrank
