#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "entrank/interp.hpp"

using namespace entrank;

namespace {

Snippet make_snippet(std::string id, Tokens tokens,
                     std::vector<std::tuple<std::size_t, std::size_t, std::string>> mentions) {
  Snippet s;
  s.id = std::move(id);
  s.doc_id = "doc";
  s.tokens = std::move(tokens);
  for (const auto& [b, e, ent] : mentions) s.mentions.push_back({b, e, ent, 0.9});
  return s;
}

// An embedding table with deterministic contents for cosine features.
nn::EmbeddingTable tiny_embeddings() {
  nn::Rng rng(12);
  return nn::EmbeddingTable::random({"band", "member", "jimmy", "page"}, 4, rng);
}

}  // namespace

TEST_CASE("no links and no snippets produce an empty candidate set") {
  KnowledgeGraph kg;
  SnippetIndex index;
  const auto cs = enumerate_interpretations({"who", "is"}, {}, kg, index, {}, 64);
  CHECK(cs.interpretations.empty());
  CHECK(cs.all_candidates.empty());
}

TEST_CASE("a single-edge world yields one direct interpretation") {
  KnowledgeGraph kg;
  kg.add_triple({"Jimmy_Page", "/music/musical_group/member", "The_Yardbirds"});
  kg.add_type("The_Yardbirds", "/music/musical_group");
  SnippetIndex index;
  const std::vector<LinkResult> links = {{1, 3, "Jimmy_Page", 0.9}};
  const auto cs = enumerate_interpretations({"band", "jimmy", "page"}, links, kg, index, {}, 64);
  REQUIRE(cs.interpretations.size() == 1);
  const auto& interp = cs.interpretations[0];
  CHECK(interp.tmpl == Template::direct);
  CHECK(interp.e1 == "Jimmy_Page");
  CHECK(interp.r == "/music/musical_group/member");
  CHECK(cs.candidates(interp.id()) == std::set<std::string>{"The_Yardbirds"});
  CHECK(cs.all_candidates == std::set<std::string>{"The_Yardbirds"});
}

TEST_CASE("mediated paths become mediated interpretations without the mediator") {
  KnowledgeGraph kg;
  kg.add_triple({"e1", "r", "m"});
  kg.add_triple({"m", "rp", "e2"});
  kg.add_mediator("m");
  SnippetIndex index;
  const std::vector<LinkResult> links = {{0, 1, "e1", 1.0}};
  const auto cs = enumerate_interpretations({"q"}, links, kg, index, {}, 64);
  REQUIRE(cs.interpretations.size() == 1);
  CHECK(cs.interpretations[0].tmpl == Template::mediated);
  CHECK(cs.interpretations[0].r == "r");
  CHECK(cs.interpretations[0].r2 == "rp");
  CHECK(cs.all_candidates.count("m") == 0);
}

TEST_CASE("corpus-only candidates form a single extra interpretation") {
  KnowledgeGraph kg;
  kg.add_triple({"e1", "r", "kgCand"});
  SnippetIndex index;
  index.add(make_snippet("s1", {"about", "stuff"}, {{0, 1, "corpusCand"}, {1, 2, "kgCand"}}));
  const std::vector<LinkResult> links = {{0, 1, "e1", 1.0}};
  const auto cs = enumerate_interpretations({"q"}, links, kg, index, {"s1"}, 64);
  REQUIRE(cs.interpretations.size() == 2);
  // KG-reachable entities never join the corpus-only group.
  CHECK(cs.candidates("C") == std::set<std::string>{"corpusCand"});
  CHECK(cs.all_candidates == std::set<std::string>{"corpusCand", "kgCand"});
  // Snippet support is tracked per entity.
  CHECK(cs.support.at("kgCand") == std::set<std::string>{"s1"});
  CHECK(cs.support.at("corpusCand") == std::set<std::string>{"s1"});
}

TEST_CASE("candidate union matches the module oracles on a random world") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    KnowledgeGraph kg;
    std::uniform_int_distribution<int> node(0, 11), rel(0, 3);
    for (int i = 0; i < 25; ++i)
      kg.add_triple({"n" + std::to_string(node(rng)), "r" + std::to_string(rel(rng)),
                     "n" + std::to_string(node(rng))});
    kg.add_mediator("n3");
    SnippetIndex index;
    for (int i = 0; i < 6; ++i)
      index.add(make_snippet("s" + std::to_string(i), {"w" + std::to_string(i % 3)},
                             {{0, 1, "n" + std::to_string(node(rng))}}));
    std::set<std::string> snippetIds;
    for (const auto& [id, s] : index.snippets()) snippetIds.insert(id);
    const std::vector<LinkResult> links = {{0, 1, "n0", 1.0}, {1, 2, "n7", 0.8}};

    const auto cs = enumerate_interpretations({"a", "b"}, links, kg, index, snippetIds, 1000);

    std::set<std::string> expected;
    for (const auto& e1 : {std::string("n0"), std::string("n7")}) {
      for (const auto& pe : neighborhood(kg, e1, 2)) expected.insert(pe.entity);
    }
    for (const auto& e2 :
         harvest_corpus_candidates(index, snippetIds, {"n0", "n7"}, kg.mediators()))
      expected.insert(e2);
    CHECK(cs.all_candidates == expected);
    for (const auto& g : cs.all_candidates) CHECK(!kg.is_mediator(g));
  }
}

TEST_CASE("interpretations are pruned by descending candidate count") {
  KnowledgeGraph kg;
  kg.add_triple({"e1", "big", "a"});
  kg.add_triple({"e1", "big", "b"});
  kg.add_triple({"e1", "big", "c"});
  kg.add_triple({"e1", "small", "d"});
  SnippetIndex index;
  const std::vector<LinkResult> links = {{0, 1, "e1", 1.0}};
  const auto cs = enumerate_interpretations({"q"}, links, kg, index, {}, 1);
  REQUIRE(cs.interpretations.size() == 1);
  CHECK(cs.interpretations[0].r == "big");
  CHECK(cs.all_candidates == std::set<std::string>{"a", "b", "c"});
}

TEST_CASE("assemble_features: spec-pinned values on a single-relation world") {
  KnowledgeGraph kg;
  kg.add_triple({"Jimmy_Page", "member", "The_Yardbirds"});
  kg.add_type("The_Yardbirds", "/music/musical_group");
  SnippetIndex index;
  index.add(make_snippet("s1", {"about", "page", "work"}, {{1, 2, "The_Yardbirds"}}));
  const Tokens query = {"band", "jimmy", "page"};
  const std::vector<LinkResult> links = {{1, 3, "Jimmy_Page", 0.9}};
  const auto cs = enumerate_interpretations(query, links, kg, index, {"s1"}, 64);
  REQUIRE(cs.interpretations.size() == 1);
  const auto& interp = cs.interpretations[0];

  QueryNetScores nets;
  nets.qrn_by_relation["member"] = 0.8;
  nets.qtn_by_type["/music/musical_group"] = 0.7;
  nets.qcn_by_snippet["s1"] = 0.6;

  const FeatureVector phi = assemble_features(query, cs, interp, "The_Yardbirds", nets, kg,
                                              links, tiny_embeddings());
  CHECK(phi(feat::qcn_sum) == doctest::Approx(0.6));
  CHECK(phi(feat::qrn_sum) == doctest::Approx(0.8));  // single-term sum
  CHECK(phi(feat::rel_qrn_score) == doctest::Approx(0.8));
  CHECK(phi(feat::qtn_best) == doctest::Approx(0.7));
  CHECK(phi(feat::linker_score) == doctest::Approx(0.9));
  CHECK(phi(feat::mention_coverage) == doctest::Approx(2.0 / 3.0));
  CHECK(phi(feat::is_direct) == 1.0);
  CHECK(phi(feat::is_mediated) == 0.0);
  CHECK(phi(feat::interp_rank) == doctest::Approx(1.0));  // rank 0 -> 1/(1+0)
  CHECK(phi(feat::snippet_support) == doctest::Approx(0.5));  // one snippet -> 1/2
  CHECK(phi(feat::mention_fraction) == doctest::Approx(2.0 / 3.0));

  // Unknown relations and types contribute zero.
  QueryNetScores empty;
  const FeatureVector bare = assemble_features(query, cs, interp, "The_Yardbirds", empty, kg,
                                               links, tiny_embeddings());
  CHECK(bare(feat::qcn_sum) == 0.0);
  CHECK(bare(feat::qrn_sum) == 0.0);
  CHECK(bare(feat::qtn_best) == 0.0);

  CHECK_THROWS_AS(assemble_features(query, cs, interp, "not_a_candidate", nets, kg, links,
                                    tiny_embeddings()),
                  std::invalid_argument);
}

TEST_CASE("corpus-only vectors zero every KG block") {
  KnowledgeGraph kg;
  kg.add_type("corpusCand", "/t/thing");  // even typed entities score zero here
  SnippetIndex index;
  index.add(make_snippet("s1", {"alpha", "beta"}, {{0, 1, "corpusCand"}}));
  const auto cs = enumerate_interpretations({"alpha", "beta"}, {}, kg, index, {"s1"}, 64);
  REQUIRE(cs.interpretations.size() == 1);
  CHECK(cs.interpretations[0].tmpl == Template::corpus_only);

  QueryNetScores nets;
  nets.qtn_by_type["/t/thing"] = 0.9;
  nets.qcn_by_snippet["s1"] = 0.4;
  const FeatureVector phi =
      assemble_features({"alpha", "beta"}, cs, cs.interpretations[0], "corpusCand", nets, kg, {},
                        tiny_embeddings());
  CHECK(phi(feat::qcn_sum) == doctest::Approx(0.4));
  for (const int i : {feat::linker_score, feat::mention_coverage, feat::mention_length,
                      feat::e1_out_degree, feat::e2_degree, feat::exact_alias, feat::e1_count,
                      feat::qrn_sum, feat::rel_word_jaccard, feat::rel_stem_jaccard,
                      feat::rel_coverage, feat::rel_embedding_cos, feat::rel2_word_jaccard,
                      feat::rel2_stem_jaccard, feat::rel2_coverage, feat::rel2_embedding_cos,
                      feat::rel_qrn_score, feat::rel2_qrn_score, feat::qtn_best,
                      feat::is_direct, feat::is_mediated, feat::interp_rank}) {
    CHECK(phi(i) == 0.0);
  }
  // KG-independent general surrogates survive.
  CHECK(phi(feat::interp_candidates) > 0.0);
  CHECK(phi(feat::query_length) > 0.0);
  CHECK(phi(feat::snippet_support) > 0.0);
}

TEST_CASE("min-max normalization: pinned examples") {
  FeatureScaler scaler;
  std::vector<FeatureVector> data;
  for (const double v : {0.0, 5.0, 10.0}) {
    FeatureVector f = FeatureVector::Zero();
    f(0) = v;
    f(1) = 3.0;  // constant column
    data.push_back(f);
  }
  scaler.fit(data);
  CHECK(scaler.apply(data[0])(0) == doctest::Approx(0.0));
  CHECK(scaler.apply(data[1])(0) == doctest::Approx(0.5));
  CHECK(scaler.apply(data[2])(0) == doctest::Approx(1.0));
  // Constant dimensions map to zero.
  CHECK(scaler.apply(data[1])(1) == 0.0);
  // Values beyond the training range clamp into [0,1].
  FeatureVector above = FeatureVector::Zero();
  above(0) = 99.0;
  CHECK(scaler.apply(above)(0) == 1.0);
  above(0) = -99.0;
  CHECK(scaler.apply(above)(0) == 0.0);
}

TEST_CASE("normalized vectors stay inside the unit cube") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> dist(-3.0, 3.0);
  std::vector<FeatureVector> data;
  for (int i = 0; i < 50; ++i) {
    FeatureVector f;
    for (int j = 0; j < kFeatureCount; ++j) f(j) = dist(rng);
    data.push_back(f);
  }
  FeatureScaler scaler;
  scaler.fit(data);
  for (const auto& f : data) {
    const FeatureVector scaled = scaler.apply(f);
    CHECK(scaled.minCoeff() >= 0.0);
    CHECK(scaled.maxCoeff() <= 1.0);
  }
  FeatureScaler unfitted;
  CHECK_THROWS_AS(unfitted.apply(data[0]), std::logic_error);
}

TEST_CASE("every gold reachable within two hops lands in the candidate set") {
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 10; ++trial) {
    KnowledgeGraph kg;
    std::uniform_int_distribution<int> node(0, 9), rel(0, 2);
    for (int i = 0; i < 20; ++i)
      kg.add_triple({"n" + std::to_string(node(rng)), "r" + std::to_string(rel(rng)),
                     "n" + std::to_string(node(rng))});
    SnippetIndex index;
    const std::vector<LinkResult> links = {{0, 1, "n0", 1.0}};
    const auto cs = enumerate_interpretations({"q"}, links, kg, index, {}, 1000);
    for (const auto& pe : neighborhood(kg, "n0", 2)) {
      CHECK(cs.all_candidates.count(pe.entity) == 1);
    }
  }
}
