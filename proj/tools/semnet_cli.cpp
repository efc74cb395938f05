// semnet: corpus generation, meaning learning, network construction, fluency
// simulation, feature extraction, and model selection from one binary.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "semnet/corpus.hpp"
#include "semnet/fluency.hpp"
#include "semnet/graphstats.hpp"
#include "semnet/learner.hpp"
#include "semnet/modelselect.hpp"
#include "semnet/netbuild.hpp"
#include "semnet/network.hpp"
#include "semnet/rng.hpp"
#include "semnet/sweep.hpp"
#include "semnet/walker.hpp"

namespace {

using namespace semnet;

std::size_t default_pairs(const std::string& mode) {
  return mode == "incremental" ? 28000 : 120000;
}

std::size_t clamp_pairs(std::size_t requested, std::size_t corpus_size) {
  if (requested > corpus_size) {
    std::cerr << "note: corpus has " << corpus_size << " pairs, training on all of them\n";
    return corpus_size;
  }
  return requested;
}

PatchModel parse_model(const std::string& name) {
  return name == "categorical" ? PatchModel::categorical : PatchModel::associative;
}

// the feature columns the classifier consumes; identifiers and the label stay out
const std::vector<std::string> kRegressionFeatures = {
    "n_vertices",         "n_edges",          "sparsity",
    "clustering_coefficient", "avg_path_length", "gamma",
    "lambda",             "sigma",            "n_hdbscan_clusters",
    "weighted_precision", "weighted_recall",  "weighted_fscore",
    "n_naive_clusters",   "n_singletons"};

Design design_from_features(const std::vector<NetworkFeatures>& rows) {
  Design d;
  d.feature_names = kRegressionFeatures;
  for (const auto& f : rows) {
    d.rows.push_back({static_cast<double>(f.n_vertices), static_cast<double>(f.n_edges),
                      f.sparsity, f.clustering_coefficient, f.avg_path_length, f.gamma,
                      f.lambda, f.sigma, static_cast<double>(f.n_hdbscan_clusters),
                      f.weighted_precision, f.weighted_recall, f.weighted_fscore,
                      static_cast<double>(f.n_naive_clusters),
                      static_cast<double>(f.n_singletons)});
    d.labels.push_back(f.mvt_label ? 1 : 0);
  }
  return d;
}

struct GenArgs {
  SynthConfig config;
  std::size_t min_len = 2, max_len = 4;
  std::string out, norms_out;
};

void cmd_gen_corpus(const GenArgs& args) {
  SynthConfig config = args.config;
  config.utterance_len_range = {args.min_len, args.max_len};
  SynthCorpus synth = generate_synthetic_corpus(config);

  std::ofstream corpus_out(args.out);
  if (!corpus_out) throw std::runtime_error("cannot open for writing: " + args.out);
  serialize_corpus(synth.pairs, corpus_out);

  std::ofstream norms_out(args.norms_out);
  if (!norms_out) throw std::runtime_error("cannot open for writing: " + args.norms_out);
  serialize_norms(synth.norms, norms_out);

  std::cout << "wrote " << synth.pairs.size() << " pairs to " << args.out << " ("
            << synth.gold.animal_words.size() << " category words + cue \""
            << synth.gold.cue_word << "\"), norms to " << args.norms_out << "\n";
}

struct TrainArgs {
  std::string corpus, mode = "batch", out;
  std::size_t pairs = 0;  // 0 = mode default
};

void cmd_train(const TrainArgs& args) {
  auto corpus = load_corpus(args.corpus);
  std::size_t n =
      clamp_pairs(args.pairs ? args.pairs : default_pairs(args.mode), corpus.size());
  LearnerState learner;
  for (std::size_t i = 0; i < n; ++i) learner.process(corpus[i]);
  save_meanings(learner, args.out);
  std::cout << "trained on " << n << " pairs; " << learner.vocabulary().size()
            << " words observed; meanings written to " << args.out << "\n";
}

struct BuildArgs {
  std::string mode = "batch", norms, cue = "animal", out;
  std::string meanings;      // batch input
  std::string corpus;        // incremental input
  std::string meanings_out;  // incremental optional
  double rho = 0.8, rho_animal = 0.4;
  std::size_t pairs = 0;
  std::uint64_t seed = 1;
  ClusterParams cluster_params;
};

void cmd_build_net(const BuildArgs& args) {
  CategoryNorms norms = load_norms(args.norms);
  NetworkMeta meta;
  meta.mode = args.mode;
  meta.rho = args.rho;
  meta.rho_animal = args.rho_animal;
  meta.cue = args.cue;

  if (args.mode == "batch") {
    if (args.meanings.empty())
      throw std::runtime_error("build-net --mode batch needs --meanings");
    LearnerSnapshot snap = load_meanings_file(args.meanings);
    MeaningTableView view(snap.meanings);
    std::vector<std::string> vocab;
    for (const auto& [w, cats] : norms.memberships)
      if (view.has(w)) vocab.push_back(w);
    if (!view.has(args.cue))
      throw std::runtime_error("cue word has no learned meaning: " + args.cue);
    vocab.push_back(args.cue);
    SemanticNetwork net = build_batch_network(view, vocab, meta);
    save_network(net, args.out);
    std::cout << "batch network: " << net.n_nodes() << " nodes, " << net.n_edges()
              << " edges; written to " << args.out << "\n";
    return;
  }

  if (args.corpus.empty())
    throw std::runtime_error("build-net --mode incremental needs --corpus");
  auto corpus = load_corpus(args.corpus);
  std::size_t n =
      clamp_pairs(args.pairs ? args.pairs : default_pairs(args.mode), corpus.size());

  LearnerState learner;
  ClusterState clusters(args.cluster_params);
  SemanticNetwork net(meta);
  Rng rng(derive_seed(args.seed, "inc-edges"));
  CosineCache cache;
  for (std::size_t i = 0; i < n; ++i) {
    learner.process(corpus[i]);
    std::vector<std::string> updated;
    for (const auto& w : corpus[i].utterance)
      if (w == args.cue || norms.contains(w)) updated.push_back(w);
    std::sort(updated.begin(), updated.end());
    updated.erase(std::unique(updated.begin(), updated.end()), updated.end());
    if (updated.empty()) continue;
    cache.reset();
    update_incremental_network(net, clusters, updated, learner, rng, &cache);
  }
  save_network(net, args.out);
  if (!args.meanings_out.empty()) save_meanings(learner, args.meanings_out);
  std::cout << "incremental network: " << net.n_nodes() << " nodes, " << net.n_edges()
            << " edges after " << n << " pairs; written to " << args.out << "\n";
}

struct WalkArgs {
  std::string network, start, out;
  std::size_t walks = 300, steps = 70;
  std::uint64_t seed = 1;
};

void cmd_walk(const WalkArgs& args) {
  SemanticNetwork net = load_network_file(args.network);
  std::string start = args.start.empty() ? net.meta().cue : args.start;
  auto walks = run_ensemble(net, start, args.steps, args.walks, args.seed);
  save_walks(walks, args.out);
  std::size_t total_retrievals = 0;
  for (const auto& w : walks) total_retrievals += w.retrievals.size();
  std::cout << walks.size() << " walks of " << args.steps << " steps from \"" << start
            << "\"; mean unique retrievals "
            << static_cast<double>(total_retrievals) / static_cast<double>(walks.size())
            << "; written to " << args.out << "\n";
}

struct AnalyzeArgs {
  std::string walks, norms, meanings, cue = "animal", model = "associative", out;
  MvtOptions mvt;
};

void cmd_analyze(const AnalyzeArgs& args) {
  auto walks = load_walks_file(args.walks);
  CategoryNorms norms = load_norms(args.norms);
  LearnerSnapshot snap = load_meanings_file(args.meanings);
  MeaningTableView view(snap.meanings);
  FluencyReport report =
      analyze_walks(walks, norms, view, args.cue, parse_model(args.model), args.mvt);
  save_report(report, args.out);
  std::cout << "mvt adheres: " << (report.mvt.adheres ? "yes" : "no")
            << (report.mvt.indeterminate ? " (indeterminate)" : "")
            << "; report written to " << args.out << "\n";
}

struct FeaturesArgs {
  std::string network, meanings, norms, report, out;
  int mvt_label = -1;  // -1 = take it from --report
  FeatureOptions options;
};

void cmd_features(const FeaturesArgs& args) {
  SemanticNetwork net = load_network_file(args.network);
  LearnerSnapshot snap = load_meanings_file(args.meanings);
  MeaningTableView view(snap.meanings);
  CategoryNorms norms = load_norms(args.norms);

  bool label = false;
  if (args.mvt_label >= 0) {
    label = args.mvt_label != 0;
  } else if (!args.report.empty()) {
    std::ifstream in(args.report);
    if (!in) throw std::runtime_error("cannot open report: " + args.report);
    nlohmann::json j = nlohmann::json::parse(in);
    label = j.at("mvt").at("adheres").get<bool>();
  } else {
    throw std::runtime_error("features needs --mvt-label or --report");
  }

  NetworkFeatures row = extract_features(net, view, norms, label, args.options);
  write_features_csv({row}, args.out);
  std::cout << "features for " << row.n_vertices << "-node network written to "
            << args.out << "\n";
}

struct RegressArgs {
  std::string features, out;
  SelectOptions options;
};

void cmd_regress(const RegressArgs& args) {
  auto rows = read_features_csv_file(args.features);
  Design design = design_from_features(rows);
  Rng rng(derive_seed(args.options.seed, "balance"));
  Design balanced = balanced_sample(design, rng);
  StandardizeReport report = standardize(balanced);
  ModelSelection sel = select_model(balanced, args.options);
  sel.dropped_constant_features = report.dropped;
  save_model(sel, args.out);
  std::cout << "selected " << sel.features.size() << " of "
            << balanced.feature_names.size() << " features (cv accuracy "
            << sel.skf_accuracy << ", train " << sel.train_accuracy << "):";
  for (const auto& f : sel.features) std::cout << " " << f;
  std::cout << "\nmodel written to " << args.out << "\n";
}

struct SweepArgs {
  std::string corpus, norms, out, reports_dir;
  SweepSpec spec;
  std::string model = "associative";
  std::size_t pairs = 0;
};

void cmd_sweep(const SweepArgs& args) {
  auto corpus = load_corpus(args.corpus);
  CategoryNorms norms = load_norms(args.norms);
  std::size_t n =
      clamp_pairs(args.pairs ? args.pairs : default_pairs(args.spec.mode), corpus.size());
  corpus.resize(n);

  SweepSpec spec = args.spec;
  spec.patch_model = parse_model(args.model);
  SweepResult result = run_sweep(spec, corpus, norms);
  write_features_csv(result.rows, args.out);

  std::size_t n_adhere = 0;
  for (const auto& row : result.rows) n_adhere += row.mvt_label ? 1 : 0;
  std::cerr << "sweep: kept " << result.rows.size() << " of "
            << spec.rho_grid.size() * spec.rho_animal_grid.size() << " points ("
            << result.skipped.size() << " below the reachability floor); "
            << n_adhere << " adhere to the foraging pattern\n";

  if (!args.reports_dir.empty()) {
    std::filesystem::create_directories(args.reports_dir);
    for (std::size_t s = 0; s < result.reports.size(); ++s) {
      char name[32];
      std::snprintf(name, sizeof(name), "row_%04zu.json", s);
      save_report(result.reports[s],
                  (std::filesystem::path(args.reports_dir) / name).string());
    }
    nlohmann::json skipped = nlohmann::json::array();
    for (const auto& p : result.skipped)
      skipped.push_back({{"rho", p.rho},
                         {"rho_animal", p.rho_animal},
                         {"n_reachable", p.n_reachable}});
    std::ofstream sk((std::filesystem::path(args.reports_dir) / "skipped.json").string());
    if (!sk) throw std::runtime_error("cannot write skipped.json in " + args.reports_dir);
    sk << skipped.dump(2) << "\n";
  }
  std::cout << "features for " << result.rows.size() << " networks written to "
            << args.out << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"semantic network fluency workbench"};
  app.require_subcommand(1);
  app.set_config("--config", "", "read option defaults from an INI file");

  GenArgs gen;
  auto* cmd_gen = app.add_subcommand("gen-corpus", "generate a synthetic corpus + norms");
  cmd_gen->add_option("--out", gen.out, "corpus output path")->required();
  cmd_gen->add_option("--norms-out", gen.norms_out, "category norms output path")
      ->required();
  cmd_gen->add_option("--categories", gen.config.n_categories, "animal categories")
      ->capture_default_str();
  cmd_gen->add_option("--words-per-category", gen.config.words_per_category, "")
      ->capture_default_str();
  cmd_gen->add_option("--root-features", gen.config.root_features, "hypernym features")
      ->capture_default_str();
  cmd_gen->add_option("--features-per-category", gen.config.features_per_category, "")
      ->capture_default_str();
  cmd_gen->add_option("--word-features", gen.config.word_specific_features,
                      "word-specific features")
      ->capture_default_str();
  cmd_gen->add_option("--overlap-words", gen.config.overlap_words,
                      "bridge words per category pair")
      ->capture_default_str();
  cmd_gen->add_option("--pairs", gen.config.n_pairs, "utterance-scene pairs")
      ->capture_default_str();
  cmd_gen->add_option("--min-len", gen.min_len, "")->capture_default_str();
  cmd_gen->add_option("--max-len", gen.max_len, "")->capture_default_str();
  cmd_gen->add_option("--cue-rate", gen.config.cue_rate, "")->capture_default_str();
  cmd_gen->add_option("--distractor-rate", gen.config.distractor_rate, "")
      ->capture_default_str();
  cmd_gen->add_option("--noise", gen.config.scene_noise_rate, "scene noise rate")
      ->capture_default_str();
  cmd_gen->add_option("--seed", gen.config.seed, "")->capture_default_str();
  cmd_gen->callback([&] { cmd_gen_corpus(gen); });

  TrainArgs train;
  auto* cmd_tr = app.add_subcommand("train", "learn word meanings from a corpus");
  cmd_tr->add_option("--corpus", train.corpus, "")->required();
  cmd_tr->add_option("--mode", train.mode, "batch|incremental (sets the pair default)")
      ->check(CLI::IsMember({"batch", "incremental"}))
      ->capture_default_str();
  cmd_tr->add_option("--pairs", train.pairs, "pairs to train on (default per mode)");
  cmd_tr->add_option("--out", train.out, "meanings JSON")->required();
  cmd_tr->callback([&] { cmd_train(train); });

  BuildArgs build;
  auto* cmd_bn = app.add_subcommand("build-net", "build a semantic network");
  cmd_bn->add_option("--mode", build.mode, "batch|incremental")
      ->check(CLI::IsMember({"batch", "incremental"}))
      ->capture_default_str();
  cmd_bn->add_option("--norms", build.norms, "category norms CSV")->required();
  cmd_bn->add_option("--cue", build.cue, "")->capture_default_str();
  cmd_bn->add_option("--rho", build.rho, "word-word threshold")->capture_default_str();
  cmd_bn->add_option("--rho-animal", build.rho_animal, "cue-edge threshold")
      ->capture_default_str();
  cmd_bn->add_option("--meanings", build.meanings, "meanings JSON (batch mode)");
  cmd_bn->add_option("--corpus", build.corpus, "corpus (incremental mode)");
  cmd_bn->add_option("--pairs", build.pairs, "pairs to process (default per mode)");
  cmd_bn->add_option("--seed", build.seed, "")->capture_default_str();
  cmd_bn->add_option("--budget-fraction", build.cluster_params.budget_fraction,
                     "candidate comparisons per step / n(n-1)/2")
      ->capture_default_str();
  cmd_bn->add_option("--cluster-alpha", build.cluster_params.alpha, "")
      ->capture_default_str();
  cmd_bn->add_option("--cluster-beta", build.cluster_params.beta, "")
      ->capture_default_str();
  cmd_bn->add_option("--meanings-out", build.meanings_out,
                     "also save final meanings (incremental mode)");
  cmd_bn->add_option("--out", build.out, "network JSON")->required();
  cmd_bn->callback([&] { cmd_build_net(build); });

  WalkArgs walk;
  auto* cmd_wk = app.add_subcommand("walk", "run a weighted random-walk ensemble");
  cmd_wk->add_option("--network", walk.network, "")->required();
  cmd_wk->add_option("--start", walk.start, "start node (default: network cue)");
  cmd_wk->add_option("--walks", walk.walks, "")->capture_default_str();
  cmd_wk->add_option("--steps", walk.steps, "")->capture_default_str();
  cmd_wk->add_option("--seed", walk.seed, "")->capture_default_str();
  cmd_wk->add_option("--out", walk.out, "walks JSON")->required();
  cmd_wk->callback([&] { cmd_walk(walk); });

  AnalyzeArgs analyze;
  auto* cmd_an = app.add_subcommand("analyze", "switch and foraging analysis of walks");
  cmd_an->add_option("--walks", analyze.walks, "")->required();
  cmd_an->add_option("--norms", analyze.norms, "")->required();
  cmd_an->add_option("--meanings", analyze.meanings, "")->required();
  cmd_an->add_option("--cue", analyze.cue, "")->capture_default_str();
  cmd_an->add_option("--model", analyze.model, "patch model")
      ->check(CLI::IsMember({"associative", "categorical"}))
      ->capture_default_str();
  cmd_an->add_option("--alpha", analyze.mvt.alpha, "significance level")
      ->capture_default_str();
  cmd_an->add_option("--max-position", analyze.mvt.max_position, "")
      ->capture_default_str();
  cmd_an->add_option("--min-samples", analyze.mvt.min_samples, "")->capture_default_str();
  cmd_an->add_option("--out", analyze.out, "report JSON")->required();
  cmd_an->callback([&] { cmd_analyze(analyze); });

  FeaturesArgs features;
  auto* cmd_ft = app.add_subcommand("features", "extract one network's feature row");
  cmd_ft->add_option("--network", features.network, "")->required();
  cmd_ft->add_option("--meanings", features.meanings, "")->required();
  cmd_ft->add_option("--norms", features.norms, "")->required();
  cmd_ft->add_option("--report", features.report, "analysis report JSON (label source)");
  cmd_ft->add_option("--mvt-label", features.mvt_label, "0/1 label, overrides --report");
  cmd_ft->add_option("--er-samples", features.options.er_samples, "")
      ->capture_default_str();
  cmd_ft->add_option("--min-cluster-size", features.options.min_cluster_size, "")
      ->capture_default_str();
  cmd_ft->add_option("--seed", features.options.seed, "")->capture_default_str();
  cmd_ft->add_option("--out", features.out, "features CSV")->required();
  cmd_ft->callback([&] { cmd_features(features); });

  RegressArgs regress;
  auto* cmd_rg = app.add_subcommand("regress", "select the best feature subset");
  cmd_rg->add_option("--features", regress.features, "features CSV")->required();
  cmd_rg->add_option("--folds", regress.options.n_folds, "")->capture_default_str();
  cmd_rg->add_option("--seed", regress.options.seed, "")->capture_default_str();
  cmd_rg->add_option("--l2", regress.options.l2, "")->capture_default_str();
  cmd_rg->add_option("--threads", regress.options.n_threads, "0 = all cores")
      ->capture_default_str();
  cmd_rg->add_option("--out", regress.out, "model JSON")->required();
  cmd_rg->callback([&] { cmd_regress(regress); });

  SweepArgs sweep;
  auto* cmd_sw = app.add_subcommand("sweep", "threshold grid sweep with walks + features");
  cmd_sw->add_option("--corpus", sweep.corpus, "")->required();
  cmd_sw->add_option("--norms", sweep.norms, "")->required();
  cmd_sw->add_option("--mode", sweep.spec.mode, "batch|incremental")
      ->check(CLI::IsMember({"batch", "incremental"}))
      ->capture_default_str();
  cmd_sw->add_option("--pairs", sweep.pairs, "pairs to train on (default per mode)");
  cmd_sw->add_option("--cue", sweep.spec.cue, "")->capture_default_str();
  cmd_sw->add_option("--min-reachable", sweep.spec.min_reachable, "")
      ->capture_default_str();
  cmd_sw->add_option("--walks", sweep.spec.n_walks, "")->capture_default_str();
  cmd_sw->add_option("--steps", sweep.spec.n_steps, "")->capture_default_str();
  cmd_sw->add_option("--seed", sweep.spec.master_seed, "")->capture_default_str();
  cmd_sw->add_option("--model", sweep.model, "patch model")
      ->check(CLI::IsMember({"associative", "categorical"}))
      ->capture_default_str();
  cmd_sw->add_option("--er-samples", sweep.spec.er_samples, "")->capture_default_str();
  cmd_sw->add_option("--min-cluster-size", sweep.spec.min_cluster_size, "")
      ->capture_default_str();
  cmd_sw->add_option("--budget-fraction", sweep.spec.cluster_params.budget_fraction, "")
      ->capture_default_str();
  cmd_sw->add_option("--cluster-alpha", sweep.spec.cluster_params.alpha, "")
      ->capture_default_str();
  cmd_sw->add_option("--cluster-beta", sweep.spec.cluster_params.beta, "")
      ->capture_default_str();
  cmd_sw->add_option("--threads", sweep.spec.n_threads, "0 = all cores")
      ->capture_default_str();
  cmd_sw->add_option("--out", sweep.out, "features CSV")->required();
  cmd_sw->add_option("--reports-dir", sweep.reports_dir,
                     "also write per-point reports + skipped.json here");
  cmd_sw->callback([&] { cmd_sweep(sweep); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
