#include "entrank/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "entrank/errors.hpp"

namespace entrank {

using nlohmann::json;

SnippetIndex SnippetIndex::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus file: " + path.string());
  SnippetIndex index;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json row;
    try {
      row = json::parse(line);
      Snippet s;
      s.id = row.at("id").get<std::string>();
      s.doc_id = row.value("doc", "");
      for (const auto& t : row.at("tokens")) s.tokens.push_back(t.get<std::string>());
      for (const auto& m : row.value("mentions", json::array())) {
        Mention mention;
        mention.begin = m.at("start").get<std::size_t>();
        mention.end = m.at("end").get<std::size_t>();
        mention.entity = m.at("entity").get<std::string>();
        mention.confidence = m.value("conf", 1.0);
        s.mentions.push_back(mention);
      }
      index.add(std::move(s));
    } catch (const json::exception& e) {
      throw DataError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return index;
}

void SnippetIndex::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write corpus file: " + path.string());
  for (const auto& [id, s] : snippets_) {
    json row;
    row["id"] = id;
    row["doc"] = s.doc_id;
    row["tokens"] = s.tokens;
    json mentions = json::array();
    for (const auto& m : s.mentions) {
      mentions.push_back(
          {{"start", m.begin}, {"end", m.end}, {"entity", m.entity}, {"conf", m.confidence}});
    }
    row["mentions"] = mentions;
    out << row.dump() << '\n';
  }
}

void SnippetIndex::add(Snippet snippet) {
  if (snippet.tokens.size() > kMaxSnippetTokens) snippet.tokens.resize(kMaxSnippetTokens);
  for (auto& t : snippet.tokens) t = to_lower(t);

  std::sort(snippet.mentions.begin(), snippet.mentions.end());
  std::vector<Mention> kept;
  for (const auto& m : snippet.mentions) {
    if (m.begin >= m.end || m.end > snippet.tokens.size()) continue;
    if (!std::isfinite(m.confidence)) continue;
    if (!kept.empty() && m.begin < kept.back().end) continue;  // overlap with accepted span
    kept.push_back(m);
  }
  snippet.mentions = std::move(kept);

  const std::string id = snippet.id;
  if (id.empty()) throw DataError("snippet with empty id");
  if (snippets_.count(id)) throw DataError("duplicate snippet id: " + id);
  for (const auto& t : snippet.tokens) by_token_[t].insert(id);
  for (const auto& m : snippet.mentions) by_entity_[m.entity].insert(id);
  snippets_[id] = std::move(snippet);
}

const Snippet& SnippetIndex::at(const std::string& id) const {
  const auto it = snippets_.find(id);
  if (it == snippets_.end()) throw DataError("unknown snippet id: " + id);
  return it->second;
}

std::set<std::string> SnippetIndex::snippets_mentioning(const std::string& entity) const {
  const auto it = by_entity_.find(entity);
  return it == by_entity_.end() ? std::set<std::string>{} : it->second;
}

Stopwords load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open stopword file: " + path.string());
  Stopwords out;
  std::string word;
  while (std::getline(in, word)) {
    if (!word.empty() && word.back() == '\r') word.pop_back();
    if (!word.empty()) out.insert(to_lower(word));
  }
  return out;
}

std::set<std::string> snippets_for_query(const SnippetIndex& index, const Tokens& query,
                                         const std::set<std::string>& e1s,
                                         const Stopwords& stopwords, std::size_t cap) {
  std::set<std::string> hits;
  for (const auto& e1 : e1s) {
    for (const auto& id : index.snippets_mentioning(e1)) hits.insert(id);
  }
  std::set<std::string> queryTokens;
  for (const auto& t : query) {
    if (!stopwords.count(t)) queryTokens.insert(t);
  }
  for (const auto& t : queryTokens) {
    const auto it = index.by_token().find(t);
    if (it == index.by_token().end()) continue;
    for (const auto& id : it->second) hits.insert(id);
  }
  if (hits.size() <= cap) return hits;

  // Keep the snippets matching the most distinct query tokens.
  std::vector<std::pair<std::size_t, std::string>> ranked;
  ranked.reserve(hits.size());
  for (const auto& id : hits) {
    const auto& tokens = index.at(id).tokens;
    const std::set<std::string> tokenSet(tokens.begin(), tokens.end());
    std::size_t matched = 0;
    for (const auto& t : queryTokens) matched += tokenSet.count(t);
    ranked.emplace_back(matched, id);
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::set<std::string> out;
  for (std::size_t i = 0; i < cap; ++i) out.insert(ranked[i].second);
  return out;
}

std::set<std::string> harvest_corpus_candidates(const SnippetIndex& index,
                                                const std::set<std::string>& snippetIds,
                                                const std::set<std::string>& e1s,
                                                const std::set<std::string>& mediators) {
  std::set<std::string> out;
  for (const auto& id : snippetIds) {
    for (const auto& m : index.at(id).mentions) {
      if (e1s.count(m.entity) || mediators.count(m.entity)) continue;
      out.insert(m.entity);
    }
  }
  return out;
}

namespace {

// Mention whose span midpoint is nearest the token-window midpoint; ties go
// to the earliest span.
const Mention* center_mention(const Snippet& s) {
  if (s.mentions.empty()) return nullptr;
  const double mid = static_cast<double>(s.tokens.size()) / 2.0;
  const Mention* best = nullptr;
  double bestDist = 0.0;
  for (const auto& m : s.mentions) {
    const double d = std::abs((static_cast<double>(m.begin) + static_cast<double>(m.end)) / 2.0 - mid);
    if (!best || d < bestDist) {
      best = &m;
      bestDist = d;
    }
  }
  return best;  // mentions are sorted by span, so the first minimum is earliest
}

}  // namespace

std::vector<WeakLabel> weak_label(const SnippetIndex& index, const Tokens& query,
                                  const std::set<std::string>& goldSet,
                                  const Stopwords& stopwords) {
  if (goldSet.empty()) throw std::invalid_argument("weak_label: empty gold set");
  std::set<std::string> queryTokens;
  for (const auto& t : query) {
    if (!stopwords.count(t)) queryTokens.insert(t);
  }
  std::vector<WeakLabel> out;
  for (const auto& [id, s] : index.snippets()) {
    const Mention* center = center_mention(s);
    if (!center) continue;
    const bool sharesToken = std::any_of(s.tokens.begin(), s.tokens.end(), [&](const auto& t) {
      return queryTokens.count(t) > 0;
    });
    if (!sharesToken) continue;
    out.push_back({id, center->entity,
                   goldSet.count(center->entity) ? SnippetLabel::positive
                                                 : SnippetLabel::negative});
  }
  return out;
}

RelationPatternTable mine_relation_patterns(const KnowledgeGraph& kg, const SnippetIndex& index,
                                            std::size_t minCount, std::size_t maxLen) {
  std::map<std::string, std::map<Tokens, std::size_t>> counts;
  for (const auto& triple : kg.triples()) {
    if (triple.subject == triple.object) continue;
    // Snippets mentioning both endpoints.
    const auto subjIds = index.snippets_mentioning(triple.subject);
    const auto objIds = index.snippets_mentioning(triple.object);
    std::vector<std::string> both;
    std::set_intersection(subjIds.begin(), subjIds.end(), objIds.begin(), objIds.end(),
                          std::back_inserter(both));
    for (const auto& id : both) {
      const Snippet& s = index.at(id);
      for (const auto& a : s.mentions) {
        if (a.entity != triple.subject) continue;
        for (const auto& b : s.mentions) {
          if (b.entity != triple.object) continue;
          const std::size_t gapBegin = std::min(a.end, b.end);
          const std::size_t gapEnd = std::max(a.begin, b.begin);
          if (gapBegin >= gapEnd) continue;  // adjacent or interleaved spans
          const std::size_t len = gapEnd - gapBegin;
          if (len > maxLen) continue;
          Tokens pattern;
          for (std::size_t i = gapBegin; i < gapEnd; ++i) pattern.push_back(stem(s.tokens[i]));
          ++counts[triple.relation][pattern];
        }
      }
    }
  }
  RelationPatternTable table;
  for (const auto& [rel, perPattern] : counts) {
    for (const auto& [pattern, count] : perPattern) {
      if (count >= minCount) table.patterns[rel][pattern] = count;
    }
  }
  return table;
}

}  // namespace entrank
