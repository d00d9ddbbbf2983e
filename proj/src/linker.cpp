#include "entrank/linker.hpp"

#include <algorithm>
#include <fstream>

#include "entrank/errors.hpp"

namespace entrank {

AliasDictionary AliasDictionary::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open alias file: " + path.string());
  AliasDictionary dict;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tab1 = line.find('\t');
    const auto tab2 = tab1 == std::string::npos ? std::string::npos : line.find('\t', tab1 + 1);
    if (tab2 == std::string::npos)
      throw DataError(path.string() + ":" + std::to_string(lineno) +
                      ": alias row needs alias, entity, prior");
    const std::string alias = line.substr(0, tab1);
    const std::string entity = line.substr(tab1 + 1, tab2 - tab1 - 1);
    double prior = 0.0;
    try {
      prior = std::stod(line.substr(tab2 + 1));
    } catch (const std::exception&) {
      throw DataError(path.string() + ":" + std::to_string(lineno) + ": bad prior");
    }
    try {
      dict.add(alias, entity, prior);
    } catch (const std::exception& e) {
      throw DataError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return dict;
}

void AliasDictionary::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write alias file: " + path.string());
  for (const auto& [alias, list] : entries_) {
    for (const auto& e : list) {
      out << join_tokens(alias) << '\t' << e.entity << '\t' << e.prior << '\n';
    }
  }
}

void AliasDictionary::add(const std::string& alias, const std::string& entity, double prior) {
  const Tokens key = whitespace_tokens(alias);
  if (key.empty()) throw DataError("empty alias");
  if (key.size() > kMaxAliasTokens)
    throw DataError("alias longer than " + std::to_string(kMaxAliasTokens) + " tokens: " + alias);
  if (!(prior > 0.0 && prior <= 1.0)) throw DataError("prior out of (0,1]: " + alias);
  auto& list = entries_[key];
  double total = prior;
  for (const auto& e : list) total += e.prior;
  if (total > 1.0 + 1e-9) throw DataError("priors for alias exceed 1: " + alias);
  list.push_back({entity, prior});
  std::sort(list.begin(), list.end(), [](const AliasEntry& a, const AliasEntry& b) {
    if (a.prior != b.prior) return a.prior > b.prior;
    return a.entity < b.entity;
  });
}

std::vector<LinkResult> link(const AliasDictionary& dict, const Tokens& query) {
  std::vector<LinkResult> out;
  std::size_t pos = 0;
  while (pos < query.size()) {
    std::size_t matched = 0;
    const std::vector<AliasEntry>* hit = nullptr;
    const std::size_t maxN = std::min(kMaxAliasTokens, query.size() - pos);
    for (std::size_t n = maxN; n >= 1; --n) {
      Tokens gram;
      gram.reserve(n);
      for (std::size_t i = 0; i < n; ++i) gram.push_back(to_lower(query[pos + i]));
      const auto it = dict.entries().find(gram);
      if (it != dict.entries().end()) {
        matched = n;
        hit = &it->second;
        break;
      }
    }
    if (hit) {
      for (const auto& e : *hit) out.push_back({pos, pos + matched, e.entity, e.prior});
      pos += matched;
    } else {
      ++pos;
    }
  }
  return out;
}

std::set<std::string> linked_entities(const std::vector<LinkResult>& results) {
  std::set<std::string> out;
  for (const auto& r : results) out.insert(r.entity);
  return out;
}

}  // namespace entrank
