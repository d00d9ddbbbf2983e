#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>

#include "entrank/corpus.hpp"
#include "entrank/errors.hpp"

using namespace entrank;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path);
  out << content;
  return path;
}

Snippet make_snippet(std::string id, Tokens tokens,
                     std::vector<std::tuple<std::size_t, std::size_t, std::string>> mentions) {
  Snippet s;
  s.id = std::move(id);
  s.doc_id = "doc";
  s.tokens = std::move(tokens);
  for (const auto& [b, e, ent] : mentions) s.mentions.push_back({b, e, ent, 0.9});
  return s;
}

}  // namespace

TEST_CASE("empty corpus file loads to an empty index") {
  const auto path = write_temp("corpus_empty.jsonl", "");
  const auto index = SnippetIndex::load(path);
  CHECK(index.snippets().empty());
}

TEST_CASE("by-entity index points at the mentioning snippet") {
  const auto path = write_temp(
      "corpus_one.jsonl",
      R"({"id":"s1","doc":"d","tokens":["lorca","was","executed"],"mentions":[{"start":0,"end":1,"entity":"X","conf":0.8}]})"
      "\n");
  const auto index = SnippetIndex::load(path);
  CHECK(index.by_entity().at("X") == std::set<std::string>{"s1"});
  CHECK(index.by_token().at("executed") == std::set<std::string>{"s1"});
}

TEST_CASE("over-long snippets are truncated to the 20-token window") {
  Tokens tokens;
  for (int i = 0; i < 25; ++i) tokens.push_back("t" + std::to_string(i));
  SnippetIndex index;
  index.add(make_snippet("s1", tokens, {{0, 1, "A"}, {22, 23, "B"}}));
  const auto& stored = index.at("s1");
  CHECK(stored.tokens.size() == 20);
  // Mentions outside the window are dropped.
  REQUIRE(stored.mentions.size() == 1);
  CHECK(stored.mentions[0].entity == "A");
  // Round trip through the file keeps the truncation.
  const auto path = std::filesystem::temp_directory_path() / "corpus_trunc.jsonl";
  index.save(path);
  CHECK(SnippetIndex::load(path).at("s1").tokens.size() == 20);
}

TEST_CASE("overlapping mentions keep the earliest span") {
  SnippetIndex index;
  index.add(make_snippet("s1", {"a", "b", "c", "d"}, {{0, 2, "X"}, {1, 3, "Y"}, {3, 4, "Z"}}));
  const auto& stored = index.at("s1");
  REQUIRE(stored.mentions.size() == 2);
  CHECK(stored.mentions[0].entity == "X");
  CHECK(stored.mentions[1].entity == "Z");
}

TEST_CASE("duplicate snippet ids are rejected") {
  SnippetIndex index;
  index.add(make_snippet("s1", {"a"}, {}));
  CHECK_THROWS_AS(index.add(make_snippet("s1", {"b"}, {})), DataError);
}

TEST_CASE("malformed JSON names the line number") {
  const auto path = write_temp("corpus_bad.jsonl",
                               R"({"id":"s1","tokens":["a"]})"
                               "\nnot json\n");
  CHECK_THROWS_WITH_AS(SnippetIndex::load(path), doctest::Contains(":2:"), DataError);
}

TEST_CASE("index inversion holds for random snippet sets") {
  std::mt19937_64 rng(3);
  SnippetIndex index;
  std::uniform_int_distribution<int> entity(0, 5);
  for (int i = 0; i < 40; ++i) {
    Tokens tokens = {"w" + std::to_string(i % 7), "common"};
    index.add(make_snippet("s" + std::to_string(i), tokens,
                           {{0, 1, "E" + std::to_string(entity(rng))}}));
  }
  for (const auto& [id, s] : index.snippets()) {
    for (const auto& m : s.mentions) CHECK(index.by_entity().at(m.entity).count(id) == 1);
    for (const auto& t : s.tokens) CHECK(index.by_token().at(t).count(id) == 1);
  }
  for (const auto& [entity2, ids] : index.by_entity()) {
    for (const auto& id : ids) {
      const auto& mentions = index.at(id).mentions;
      CHECK(std::any_of(mentions.begin(), mentions.end(),
                        [&](const Mention& m) { return m.entity == entity2; }));
    }
  }
}

TEST_CASE("snippet retrieval is the union of entity and token hits") {
  SnippetIndex index;
  index.add(make_snippet("s1", {"unrelated", "words"}, {{0, 1, "E1"}}));   // entity hit only
  index.add(make_snippet("s2", {"civil", "war"}, {{0, 1, "Other"}}));      // token hit only
  index.add(make_snippet("s3", {"nothing", "shared"}, {{0, 1, "Other"}})); // no hit
  const Stopwords stop = {"the"};

  CHECK(snippets_for_query(index, {"zzz"}, {}, stop, 10).empty());
  const auto hits = snippets_for_query(index, {"civil", "war"}, {"E1"}, stop, 10);
  CHECK(hits == std::set<std::string>{"s1", "s2"});
}

TEST_CASE("retrieval matches a linear scan oracle and honors the cap") {
  std::mt19937_64 rng(11);
  SnippetIndex index;
  std::uniform_int_distribution<int> word(0, 9);
  for (int i = 0; i < 60; ++i) {
    index.add(make_snippet("s" + std::to_string(100 + i),
                           {"w" + std::to_string(word(rng)), "w" + std::to_string(word(rng))},
                           {{0, 1, "E" + std::to_string(i % 4)}}));
  }
  const Tokens query = {"w1", "w2", "the"};
  const Stopwords stop = {"the"};
  const std::set<std::string> e1s = {"E2"};

  // Oracle: scan every snippet with the same predicate.
  std::set<std::string> expected;
  for (const auto& [id, s] : index.snippets()) {
    bool hit = false;
    for (const auto& m : s.mentions) hit |= e1s.count(m.entity) > 0;
    for (const auto& t : s.tokens) hit |= (t == "w1" || t == "w2");
    if (hit) expected.insert(id);
  }
  CHECK(snippets_for_query(index, query, e1s, stop, 1000) == expected);

  const auto capped = snippets_for_query(index, query, e1s, stop, 5);
  CHECK(capped.size() == 5);
  for (const auto& id : capped) CHECK(expected.count(id) == 1);
}

TEST_CASE("the cap keeps snippets matching the most distinct query tokens") {
  SnippetIndex index;
  index.add(make_snippet("s1", {"alpha", "beta"}, {}));
  index.add(make_snippet("s2", {"alpha", "filler"}, {}));
  index.add(make_snippet("s3", {"beta", "filler"}, {}));
  const auto kept = snippets_for_query(index, {"alpha", "beta"}, {}, {}, 1);
  CHECK(kept == std::set<std::string>{"s1"});
}

TEST_CASE("corpus candidate harvest excludes query entities and mediators") {
  SnippetIndex index;
  index.add(make_snippet("s1", {"a", "b"}, {{0, 1, "e1"}}));
  index.add(make_snippet("s2", {"about", "yardbirds"}, {{1, 2, "The_Yardbirds"}, {0, 1, "M"}}));
  CHECK(harvest_corpus_candidates(index, {"s1"}, {"e1"}, {}).empty());
  CHECK(harvest_corpus_candidates(index, {"s1", "s2"}, {"e1"}, {"M"}) ==
        std::set<std::string>{"The_Yardbirds"});

  // Oracle comparison on the full index.
  std::set<std::string> all;
  std::set<std::string> ids;
  for (const auto& [id, s] : index.snippets()) {
    ids.insert(id);
    for (const auto& m : s.mentions) all.insert(m.entity);
  }
  all.erase("e1");
  all.erase("M");
  CHECK(harvest_corpus_candidates(index, ids, {"e1"}, {"M"}) == all);
}

TEST_CASE("weak labels reproduce the worked positive and negative snippets") {
  SnippetIndex index;
  index.add(make_snippet(
      "pos", {"lorca", "was", "executed", "in", "1936", "during", "the", "spanish", "civil", "war"},
      {{0, 1, "Federico_Garcia_Lorca"}}));
  index.add(make_snippet("neg",
                         {"the", "murder", "of", "the", "spanish", "poet", "by", "nationalists",
                          "in", "the", "civil", "war"},
                         {{7, 8, "Francoist_Spain"}}));
  const Tokens query = {"spanish", "poet", "died", "civil", "war"};
  const Stopwords stop = {"the", "of", "in", "by", "was", "during"};
  const auto labels = weak_label(index, query, {"Federico_Garcia_Lorca"}, stop);
  REQUIRE(labels.size() == 2);
  for (const auto& l : labels) {
    if (l.snippet_id == "pos") {
      CHECK(l.center_entity == "Federico_Garcia_Lorca");
      CHECK(l.label == SnippetLabel::positive);
    } else {
      CHECK(l.snippet_id == "neg");
      CHECK(l.center_entity == "Francoist_Spain");
      CHECK(l.label == SnippetLabel::negative);
    }
  }
}

TEST_CASE("snippets with no shared non-stopword token stay unlabeled") {
  SnippetIndex index;
  index.add(make_snippet("s1", {"totally", "different"}, {{0, 1, "G"}}));
  index.add(make_snippet("s2", {"the", "war"}, {}));  // no mentions at all
  const auto labels = weak_label(index, {"war", "poet"}, {"G"}, {"the"});
  CHECK(labels.empty());
}

TEST_CASE("weak labels partition: one example per snippet, positives in gold") {
  std::mt19937_64 rng(17);
  SnippetIndex index;
  std::uniform_int_distribution<int> entity(0, 5);
  for (int i = 0; i < 30; ++i) {
    index.add(make_snippet("s" + std::to_string(i),
                           {"war", "x" + std::to_string(i % 3), "y"},
                           {{0, 1, "E" + std::to_string(entity(rng))},
                            {2, 3, "E" + std::to_string(entity(rng))}}));
  }
  const std::set<std::string> gold = {"E1", "E3"};
  const auto labels = weak_label(index, {"war"}, gold, {});
  std::set<std::string> seen;
  for (const auto& l : labels) {
    CHECK(seen.insert(l.snippet_id).second);  // no snippet labeled twice
    if (l.label == SnippetLabel::positive) CHECK(gold.count(l.center_entity) == 1);
    if (l.label == SnippetLabel::negative) CHECK(gold.count(l.center_entity) == 0);
  }
}

TEST_CASE("center entity is the mention nearest the window midpoint") {
  SnippetIndex index;
  // Window of 6 tokens, midpoint 3: span [4,5) (mid 4.5) beats [0,2) (mid 1).
  index.add(make_snippet("s1", {"a", "b", "c", "d", "g", "f"}, {{0, 2, "FAR"}, {4, 5, "NEAR"}}));
  const auto labels = weak_label(index, {"c"}, {"NEAR"}, {});
  REQUIRE(labels.size() == 1);
  CHECK(labels[0].center_entity == "NEAR");
  CHECK(labels[0].label == SnippetLabel::positive);
}

TEST_CASE("relation pattern mining counts in-between token sequences") {
  KnowledgeGraph kg;
  kg.add_triple({"Y", "composer", "X"});
  SnippetIndex index;
  index.add(make_snippet("s1", {"x", "written", "by", "y"}, {{0, 1, "X"}, {3, 4, "Y"}}));
  const auto table = mine_relation_patterns(kg, index, 1);
  REQUIRE(table.patterns.count("composer") == 1);
  CHECK(table.patterns.at("composer").at({"written", "by"}) == 1);

  // No co-mentioning snippet -> empty table.
  KnowledgeGraph lonely;
  lonely.add_triple({"A", "r", "B"});
  CHECK(mine_relation_patterns(lonely, index, 1).patterns.empty());
}

TEST_CASE("pattern mining matches hand-enumerated counts and respects minCount") {
  KnowledgeGraph kg;
  kg.add_triple({"A", "r1", "B"});
  kg.add_triple({"C", "r2", "D"});
  SnippetIndex index;
  index.add(make_snippet("s1", {"a", "led", "b"}, {{0, 1, "A"}, {2, 3, "B"}}));
  index.add(make_snippet("s2", {"a", "led", "b", "x"}, {{0, 1, "A"}, {2, 3, "B"}}));
  index.add(make_snippet("s3", {"c", "led", "d"}, {{0, 1, "C"}, {2, 3, "D"}}));
  index.add(make_snippet("s4", {"c", "ran", "with", "d"}, {{0, 1, "C"}, {3, 4, "D"}}));
  // Gap longer than maxLen is ignored.
  index.add(make_snippet("s5", {"a", "1", "2", "3", "4", "5", "6", "7", "b"},
                         {{0, 1, "A"}, {8, 9, "B"}}));

  const auto all = mine_relation_patterns(kg, index, 1, 6);
  CHECK(all.patterns.at("r1").at({"led"}) == 2);
  CHECK(all.patterns.at("r2").at({"led"}) == 1);
  CHECK(all.patterns.at("r2").at({"ran", "with"}) == 1);
  CHECK(all.patterns.at("r1").count({"1", "2", "3", "4", "5", "6", "7"}) == 0);

  const auto filtered = mine_relation_patterns(kg, index, 2, 6);
  CHECK(filtered.patterns.at("r1").at({"led"}) == 2);
  CHECK(filtered.patterns.count("r2") == 0);
}

TEST_CASE("pattern counts are invariant to snippet file order") {
  KnowledgeGraph kg;
  kg.add_triple({"A", "r1", "B"});
  const std::string rowA =
      R"({"id":"s1","doc":"d","tokens":["a","led","b"],"mentions":[{"start":0,"end":1,"entity":"A","conf":1.0},{"start":2,"end":3,"entity":"B","conf":1.0}]})";
  const std::string rowB =
      R"({"id":"s2","doc":"d","tokens":["a","led","b"],"mentions":[{"start":0,"end":1,"entity":"A","conf":1.0},{"start":2,"end":3,"entity":"B","conf":1.0}]})";
  const auto p1 = write_temp("corpus_order1.jsonl", rowA + "\n" + rowB + "\n");
  const auto p2 = write_temp("corpus_order2.jsonl", rowB + "\n" + rowA + "\n");
  const auto t1 = mine_relation_patterns(kg, SnippetIndex::load(p1), 1);
  const auto t2 = mine_relation_patterns(kg, SnippetIndex::load(p2), 1);
  CHECK(t1.patterns == t2.patterns);
}
