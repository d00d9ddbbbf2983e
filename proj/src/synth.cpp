#include "entrank/synth.hpp"

#include <array>
#include <fstream>
#include <random>
#include <set>

#include <json.hpp>

#include "entrank/corpus.hpp"
#include "entrank/errors.hpp"
#include "entrank/interp.hpp"
#include "entrank/kg.hpp"
#include "entrank/linker.hpp"
#include "entrank/queryset.hpp"

namespace entrank {

using nlohmann::json;

namespace {

constexpr std::array<const char*, 10> kRelationWords = {
    "wrote", "leads", "owns", "founded", "directed",
    "plays", "joined", "built", "won", "sang"};

// Two-token corpus surface pattern per relation word.
constexpr std::array<std::array<const char*, 2>, 10> kRelationPatterns = {{
    {"written", "by"}, {"leader", "of"}, {"owner", "of"}, {"founder", "of"},
    {"directed", "by"}, {"player", "in"}, {"member", "of"}, {"builder", "of"},
    {"winner", "of"}, {"singer", "in"}}};

constexpr std::array<const char*, 8> kTypeWords = {
    "book", "band", "city", "team", "film", "award", "game", "park"};

constexpr std::array<const char*, 30> kFirstNames = {
    "mira", "arlo", "tess", "finn", "nola", "remy",  "sage", "vera", "colt", "jude",
    "wren", "otto", "isla", "dean", "lena", "bram",  "faye", "hugo", "oria", "zeke",
    "cora", "nash", "elsa", "troy", "june", "pavel", "rhea", "silas", "tova", "yann"};

constexpr std::array<const char*, 30> kLastNames = {
    "kell",   "marsh",  "voss",   "hartley", "quill",  "sorel",  "banner", "crane",
    "delmar", "eaves",  "fenwick", "garrow", "hollis", "ingram", "jarvis", "keaton",
    "lowell", "mercer", "norwood", "overton", "pressley", "quimby", "renner", "sutter",
    "thorne", "underhill", "varga", "whitlock", "yardley", "zeller"};

constexpr std::array<const char*, 40> kKeywords = {
    "storm",   "river",   "bridge",  "garden",  "castle",  "harbor",  "valley", "meadow",
    "lantern", "marble",  "copper",  "willow",  "ember",   "frost",   "summit", "canyon",
    "orchard", "quarry",  "harvest", "beacon",  "timber",  "cinder",  "breeze", "tundra",
    "lagoon",  "prairie", "granite", "thicket", "mesa",    "fjord",   "dune",   "glacier",
    "reef",    "savanna", "delta",   "bayou",   "moor",    "heath",   "shoal",  "knoll"};

constexpr std::array<const char*, 22> kStopwords = {
    "the", "a",  "an",  "of",   "in",   "on",  "was", "is",  "to",  "for", "by",
    "with", "who", "what", "which", "did", "does", "and", "or", "at", "from", "it"};

// Neutral snippet filler: never appears in any query, so it cannot create
// cross-query retrieval hits.
constexpr std::array<const char*, 4> kFillers = {"today", "once", "still", "often"};

std::string pad3(int n) {
  std::string s = std::to_string(n);
  while (s.size() < 3) s.insert(s.begin(), '0');
  return s;
}

std::string pick_filler(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> dist(0, kFillers.size() - 1);
  return kFillers[dist(rng)];
}

struct SnippetDraft {
  std::string doc;
  Tokens tokens;
  std::vector<Mention> mentions;
};

}  // namespace

WorldPaths world_paths(const std::filesystem::path& dir) {
  return {dir / "kg.tsv",      dir / "corpus.jsonl",  dir / "aliases.tsv",
          dir / "queries.jsonl", dir / "stopwords.txt", dir / "manifest.json"};
}

WorldPaths generate_world(const WorldSpec& spec, const std::filesystem::path& dir) {
  if (spec.num_queries < 1) throw DataError("world spec needs at least one query");
  std::filesystem::create_directories(dir);
  const WorldPaths paths = world_paths(dir);
  std::mt19937_64 rng(spec.seed);

  KnowledgeGraph kg;
  std::vector<QueryRecord> queries;
  std::vector<SnippetDraft> drafts;
  std::vector<std::pair<std::string, std::string>> aliasRows;  // alias, entity
  json manifestQueries = json::array();

  const int corpusOnly = static_cast<int>(
      std::lround(spec.corpus_only_fraction * static_cast<double>(spec.num_queries)));
  const int kgQueries = spec.num_queries - corpusOnly;
  // Seeded permutation decides which keyword pair each corpus-only query
  // gets; pairs stay disjoint across queries.
  std::vector<std::string> keywordPool(kKeywords.begin(), kKeywords.end());
  std::shuffle(keywordPool.begin(), keywordPool.end(), rng);

  // Shared relation/type universe: relation ids reused across queries so the
  // relation scorer can generalize to the test split.
  for (std::size_t w = 0; w < kRelationWords.size(); ++w) {
    kg.add_relation_object_type("/d/person/" + std::string(kRelationWords[w]),
                                "/t/" + std::string(kTypeWords[w % kTypeWords.size()]));
  }

  for (int i = 0; i < kgQueries; ++i) {
    const std::string person = "P" + pad3(i);
    const std::string first = kFirstNames[static_cast<std::size_t>(i) % kFirstNames.size()];
    std::string last = kLastNames[static_cast<std::size_t>(i) % kLastNames.size()];
    if (i >= static_cast<int>(kLastNames.size()))
      last += std::to_string(i / static_cast<int>(kLastNames.size()));
    aliasRows.emplace_back(first + " " + last, person);

    // Correct relations cycle over a 7-element orbit so every relation (and
    // its type) shows up in both the train and test splits.
    const std::size_t relIdx = static_cast<std::size_t>(i * 3) % 7;
    const std::string relWord = kRelationWords[relIdx];
    const std::string typeWord = kTypeWords[relIdx % kTypeWords.size()];
    const std::string relation = "/d/person/" + relWord;
    const std::string type = "/t/" + typeWord;
    const bool mediated =
        spec.mediated_fraction > 0.0 &&
        (i % std::max(1, static_cast<int>(std::lround(1.0 / spec.mediated_fraction)))) == 3;
    const bool isTest = (i % 10) >= 10 - static_cast<int>(std::lround(spec.test_fraction * 10.0));
    const bool withEvidence = spec.corpus_covers_test || !isTest;

    QueryRecord query;
    query.id = "q" + pad3(i);
    query.tokens = {first, last, relWord, typeWord};
    query.split = isTest ? "test" : "train";

    std::string kind = mediated ? "kg_mediated" : "kg_direct";
    const std::string mediator = "V" + pad3(i);
    if (mediated) {
      kg.add_mediator(mediator);
      kg.add_triple({person, "/d/person/knows", mediator});
    }
    for (int g = 0; g < spec.golds_per_query; ++g) {
      const std::string gold = "G" + pad3(i) + "g" + std::to_string(g);
      query.gold.insert(gold);
      kg.add_type(gold, type);
      if (mediated) {
        // The second hop reuses the person relation id, so the relation
        // scorer's training coverage carries over to mediated paths.
        kg.add_triple({mediator, relation, gold});
      } else {
        kg.add_triple({person, relation, gold});
      }
      if (withEvidence) {
        const auto& pattern = kRelationPatterns[relIdx];
        for (int s = 0; s < spec.snippets_per_entity; ++s) {
          SnippetDraft d;
          d.doc = "doc_" + query.id;
          d.tokens = {first, last, pattern[0], pattern[1], "n" + pad3(i) + "g" + std::to_string(g),
                      pick_filler(rng)};
          d.mentions = {{0, 2, person, 0.9}, {4, 5, gold, 0.9}};
          drafts.push_back(std::move(d));
        }
      }
    }
    for (int k = 0; k < spec.distractor_relations; ++k) {
      const std::size_t wrongIdx = (relIdx + static_cast<std::size_t>(k) + 1) % kRelationWords.size();
      const std::string wrongRel = "/d/person/" + std::string(kRelationWords[wrongIdx]);
      const std::string wrongType = "/t/" + std::string(kTypeWords[wrongIdx % kTypeWords.size()]);
      for (int g = 0; g < spec.golds_per_query; ++g) {
        const std::string distractor = "W" + pad3(i) + "d" + std::to_string(k) + std::to_string(g);
        kg.add_triple({person, wrongRel, distractor});
        kg.add_type(distractor, wrongType);
        if (withEvidence) {
          const auto& pattern = kRelationPatterns[wrongIdx];
          for (int s = 0; s < spec.snippets_per_entity; ++s) {
            SnippetDraft d;
            d.doc = "doc_" + query.id;
            d.tokens = {first, last, pattern[0], pattern[1],
                        "w" + pad3(i) + std::to_string(k) + std::to_string(g),
                        pick_filler(rng)};
            d.mentions = {{0, 2, person, 0.9}, {4, 5, distractor, 0.9}};
            drafts.push_back(std::move(d));
          }
        }
      }
    }
    // Some queries carry one extra gold answer only the corpus can reach.
    // Never planted in fully KG-answerable worlds (corpus_only_fraction 0).
    const bool extraGold =
        spec.extra_corpus_gold_fraction > 0.0 && spec.corpus_only_fraction > 0.0 && !mediated &&
        (i % std::max(1, static_cast<int>(std::lround(1.0 / spec.extra_corpus_gold_fraction)))) == 1;
    if (extraGold && withEvidence) {
      const std::string gold = "G" + pad3(i) + "x";
      query.gold.insert(gold);
      kg.add_type(gold, type);  // present in the KG universe, but not linked to e1
      kind += "+corpus";
      const auto& pattern = kRelationPatterns[relIdx];
      for (int s = 0; s < spec.corpus_snippets_per_entity; ++s) {
        SnippetDraft d;
        d.doc = "doc_" + query.id;
        d.tokens = {first, last, pattern[0], pattern[1], "n" + pad3(i) + "x", pick_filler(rng)};
        d.mentions = {{0, 2, person, 0.9}, {4, 5, gold, 0.9}};
        drafts.push_back(std::move(d));
      }
    }
    queries.push_back(query);
    manifestQueries.push_back({{"id", query.id},
                               {"kind", kind},
                               {"gold", query.gold},
                               {"split", query.split}});
  }

  for (int c = 0; c < corpusOnly; ++c) {
    const std::string k1 = keywordPool[static_cast<std::size_t>(2 * c) % keywordPool.size()];
    const std::string k2 = keywordPool[static_cast<std::size_t>(2 * c + 1) % keywordPool.size()];
    const std::string gold = "CG" + pad3(c);
    const bool isTest = (c % 10) >= 10 - static_cast<int>(std::lround(spec.test_fraction * 10.0));

    QueryRecord query;
    query.id = "c" + pad3(c);
    query.tokens = {k1, k2};
    query.split = isTest ? "test" : "train";
    query.gold.insert(gold);

    for (int s = 0; s < spec.corpus_snippets_per_entity; ++s) {
      SnippetDraft d;
      d.doc = "doc_" + query.id;
      d.tokens = {k1, "cg" + pad3(c) + "m", k2};
      d.mentions = {{1, 2, gold, 0.9}};
      drafts.push_back(std::move(d));
    }
    // Distractors straddle the gold id lexicographically so blind ties do
    // not land the gold on top by accident.  Distractor snippets match one
    // query keyword, gold snippets match two.
    for (const std::string& distractor : {"CA" + pad3(c), "CZ" + pad3(c)}) {
      for (int s = 0; s < spec.corpus_snippets_per_entity; ++s) {
        SnippetDraft d;
        d.doc = "doc_" + query.id;
        d.tokens = {k1, to_lower(distractor) + "m", pick_filler(rng)};
        d.mentions = {{1, 2, distractor, 0.9}};
        drafts.push_back(std::move(d));
      }
    }
    queries.push_back(query);
    manifestQueries.push_back({{"id", query.id},
                               {"kind", "corpus_only"},
                               {"gold", query.gold},
                               {"split", query.split}});
  }

  kg.save(paths.kg);
  {
    SnippetIndex index;
    for (std::size_t i = 0; i < drafts.size(); ++i) {
      Snippet s;
      s.id = "s" + std::to_string(10000 + i).substr(1);
      s.doc_id = drafts[i].doc;
      s.tokens = drafts[i].tokens;
      s.mentions = drafts[i].mentions;
      index.add(std::move(s));
    }
    index.save(paths.corpus);
  }
  {
    std::ofstream out(paths.aliases);
    for (const auto& [alias, entity] : aliasRows) out << alias << '\t' << entity << "\t0.9\n";
  }
  save_queries(queries, paths.queries);
  {
    std::ofstream out(paths.stopwords);
    for (const char* w : kStopwords) out << w << '\n';
  }
  {
    json manifest;
    manifest["spec"] = {{"num_queries", spec.num_queries},
                       {"corpus_only_fraction", spec.corpus_only_fraction},
                       {"mediated_fraction", spec.mediated_fraction},
                       {"extra_corpus_gold_fraction", spec.extra_corpus_gold_fraction},
                       {"golds_per_query", spec.golds_per_query},
                       {"distractor_relations", spec.distractor_relations},
                       {"snippets_per_entity", spec.snippets_per_entity},
                       {"corpus_snippets_per_entity", spec.corpus_snippets_per_entity},
                       {"test_fraction", spec.test_fraction},
                       {"corpus_covers_test", spec.corpus_covers_test},
                       {"seed", spec.seed}};
    manifest["queries"] = std::move(manifestQueries);
    std::ofstream out(paths.manifest);
    out << manifest.dump(1) << '\n';
  }
  return paths;
}

std::vector<std::string> validate_world(const std::filesystem::path& dir) {
  const WorldPaths paths = world_paths(dir);
  std::vector<std::string> violations;
  const KnowledgeGraph kg = KnowledgeGraph::load(paths.kg);
  const SnippetIndex index = SnippetIndex::load(paths.corpus);
  const AliasDictionary dict = AliasDictionary::load(paths.aliases);
  const auto queries = load_queries(paths.queries);

  std::ifstream manifestIn(paths.manifest);
  if (!manifestIn) throw DataError("cannot open manifest: " + paths.manifest.string());
  const json manifest = json::parse(manifestIn);
  const bool kgOnly = manifest.at("spec").at("corpus_only_fraction").get<double>() == 0.0;

  std::set<std::string> corpusEntities;
  for (const auto& [entity, ids] : index.by_entity()) corpusEntities.insert(entity);

  for (const auto& q : queries) {
    std::set<std::string> reachable;
    for (const auto& e1 : linked_entities(link(dict, q.tokens))) {
      for (const auto& pe : neighborhood(kg, e1, 2)) reachable.insert(pe.entity);
    }
    for (const auto& g : q.gold) {
      if (kg.is_mediator(g)) violations.push_back(q.id + ": gold " + g + " is a mediator");
      if (!kg.has_entity(g) && !corpusEntities.count(g))
        violations.push_back(q.id + ": gold " + g + " outside KG and corpus universe");
      if (!reachable.count(g) && !corpusEntities.count(g))
        violations.push_back(q.id + ": gold " + g + " neither KG-reachable nor corpus-mentioned");
      if (kgOnly && !reachable.count(g))
        violations.push_back(q.id + ": gold " + g + " not reachable within two hops");
    }
  }
  return violations;
}

}  // namespace entrank
