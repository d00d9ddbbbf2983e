// Command-line harness: build indices, train models, rank queries, evaluate
// rankings, run ablations, tune hyperparameters, and generate synthetic
// worlds.  Exit codes: 0 success, 1 usage error, 2 data error.

#include <iostream>

#include <CLI11.hpp>

#include "entrank/config.hpp"
#include "entrank/errors.hpp"
#include "entrank/pipeline.hpp"
#include "entrank/synth.hpp"

namespace {

entrank::RunConfig resolve_config(const std::string& configPath,
                                  const std::vector<std::string>& overrides) {
  entrank::RunConfig config;
  if (!configPath.empty()) config = entrank::load_config(configPath);
  entrank::apply_overrides(config, overrides);
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"entity ranking over a knowledge graph and annotated web corpus"};
  app.require_subcommand(1);

  std::string configPath;
  std::vector<std::string> overrides;
  app.add_option("-c,--config", configPath, "key=value config file");
  app.add_option("-s,--set", overrides, "config override key=value (repeatable)");

  auto* build = app.add_subcommand("build", "load inputs and write canonical indices");
  std::string buildOut = "build_artifacts";
  build->add_option("--out", buildOut, "output directory");

  auto* train = app.add_subcommand("train", "train the three nets and the score combiner");

  auto* rank = app.add_subcommand("rank", "rank candidate entities for each query");
  std::string rankOut = "ranked.tsv";
  rank->add_option("--out", rankOut, "ranked output TSV");

  auto* evalCmd = app.add_subcommand("eval", "evaluate a ranked output file");
  std::string evalRanked = "ranked.tsv";
  std::string evalReport = "report";
  evalCmd->add_option("--ranked", evalRanked, "ranked TSV produced by rank");
  evalCmd->add_option("--report", evalReport, "report file prefix");

  auto* ablate = app.add_subcommand("ablate", "retrain the combiner with each net removed");
  std::string ablateReport = "ablation.tsv";
  ablate->add_option("--report", ablateReport, "ablation table file");

  auto* tune = app.add_subcommand("tune", "grid search margin, C, threshold and K' on dev");
  std::string tuneReport = "tune.json";
  tune->add_option("--report", tuneReport, "tuning report file");

  auto* synth = app.add_subcommand("synth", "generate a synthetic toy world");
  std::string synthOut = "world";
  entrank::WorldSpec spec;
  bool validate = false;
  synth->add_option("--out", synthOut, "output directory");
  synth->add_option("--queries", spec.num_queries, "number of queries");
  synth->add_option("--corpus-only-fraction", spec.corpus_only_fraction,
                    "fraction of queries answerable only through the corpus");
  synth->add_option("--mediated-fraction", spec.mediated_fraction,
                    "fraction of KG queries using a mediator path");
  synth->add_option("--extra-corpus-gold-fraction", spec.extra_corpus_gold_fraction,
                    "fraction of KG queries with one corpus-only extra gold");
  synth->add_option("--golds", spec.golds_per_query, "gold answers per KG query");
  synth->add_option("--distractors", spec.distractor_relations, "wrong relations per KG query");
  synth->add_option("--snippets", spec.snippets_per_entity, "evidence snippets per KG entity");
  synth->add_option("--corpus-snippets", spec.corpus_snippets_per_entity,
                    "evidence snippets per corpus-only entity");
  synth->add_option("--test-fraction", spec.test_fraction, "fraction of queries in the test split");
  synth->add_option("--world-seed", spec.seed, "generator seed");
  synth->add_flag("--no-test-corpus{false}", spec.corpus_covers_test,
                  "omit evidence snippets for test-split golds");
  synth->add_flag("--validate", validate, "validate the generated world");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (synth->parsed()) {
      entrank::generate_world(spec, synthOut);
      std::cout << "synth: world written to " << synthOut << "\n";
      if (validate) {
        const auto violations = entrank::validate_world(synthOut);
        for (const auto& v : violations) std::cerr << "violation: " << v << "\n";
        if (!violations.empty()) return 2;
        std::cout << "synth: manifest validated\n";
      }
      return 0;
    }
    const entrank::RunConfig config = resolve_config(configPath, overrides);
    if (build->parsed()) {
      entrank::cmd_build(config, buildOut, std::cout);
    } else if (train->parsed()) {
      entrank::cmd_train(config, std::cout);
    } else if (rank->parsed()) {
      entrank::cmd_rank(config, rankOut, std::cout);
    } else if (evalCmd->parsed()) {
      entrank::cmd_eval(config, evalRanked, evalReport, std::cout);
    } else if (ablate->parsed()) {
      entrank::cmd_ablate(config, ablateReport, std::cout);
    } else if (tune->parsed()) {
      entrank::cmd_tune(config, tuneReport, std::cout);
    }
  } catch (const entrank::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
