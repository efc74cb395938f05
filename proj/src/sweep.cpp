#include "semnet/sweep.hpp"

#include <algorithm>
#include <exception>
#include <set>
#include <stdexcept>

#include "semnet/pool.hpp"
#include "semnet/walker.hpp"

namespace semnet {

std::vector<double> decile_grid() {
  std::vector<double> g;
  g.reserve(11);
  for (int k = 0; k <= 10; ++k) g.push_back(k / 10.0);
  return g;
}

namespace {

void validate_spec(const SweepSpec& spec) {
  if (spec.rho_grid.empty() || spec.rho_animal_grid.empty())
    throw std::invalid_argument("sweep: empty threshold grid");
  for (double v : spec.rho_grid)
    if (!(v >= 0.0 && v <= 1.0))
      throw std::invalid_argument("sweep: rho grid values must lie in [0,1]");
  for (double v : spec.rho_animal_grid)
    if (!(v >= 0.0 && v <= 1.0))
      throw std::invalid_argument("sweep: rho_animal grid values must lie in [0,1]");
  if (spec.min_reachable < 1)
    throw std::invalid_argument("sweep: min_reachable must be at least 1");
  if (spec.mode != "batch" && spec.mode != "incremental")
    throw std::invalid_argument("sweep: mode must be \"batch\" or \"incremental\"");
  if (spec.n_walks == 0 || spec.n_steps == 0)
    throw std::invalid_argument("sweep: walks and steps must be positive");
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec, const std::vector<UtteranceScenePair>& corpus,
                      const CategoryNorms& norms) {
  validate_spec(spec);
  if (corpus.empty()) throw std::invalid_argument("sweep: empty corpus");

  std::set<std::string> norm_words;
  for (const auto& [w, cats] : norms.memberships) norm_words.insert(w);

  std::size_t n_ra = spec.rho_animal_grid.size();
  std::size_t n_points = spec.rho_grid.size() * n_ra;
  auto meta_for = [&](std::size_t idx) {
    NetworkMeta meta;
    meta.mode = spec.mode;
    meta.rho = spec.rho_grid[idx / n_ra];
    meta.rho_animal = spec.rho_animal_grid[idx % n_ra];
    meta.cue = spec.cue;
    return meta;
  };

  WorkerPool pool(spec.n_threads);
  LearnerState learner;
  std::vector<SemanticNetwork> nets(n_points);

  if (spec.mode == "batch") {
    for (const auto& pair : corpus) learner.process(pair);
    if (!learner.has(spec.cue))
      throw std::runtime_error("sweep: cue word never occurs in the corpus: " + spec.cue);
    std::vector<std::string> vocab;
    for (const auto& w : norm_words)
      if (learner.has(w)) vocab.push_back(w);
    vocab.push_back(spec.cue);
    std::sort(vocab.begin(), vocab.end());
    vocab.erase(std::unique(vocab.begin(), vocab.end()), vocab.end());
    for (const auto& w : vocab) learner.vec(w);  // warm the cache before sharing

    pool.run(n_points, [&](std::size_t, std::size_t idx) {
      nets[idx] = build_batch_network(learner, vocab, meta_for(idx));
    });
  } else {
    // per-point networks co-evolve against one shared cluster state; phase 4
    // runs once per pair because assignments depend only on the meanings
    ClusterState cluster_state(spec.cluster_params);
    for (std::size_t idx = 0; idx < n_points; ++idx) nets[idx].meta() = meta_for(idx);
    std::vector<Rng> rngs;
    rngs.reserve(n_points);
    for (std::size_t idx = 0; idx < n_points; ++idx)
      rngs.emplace_back(derive_seed(spec.master_seed, "sweep-edges", idx));
    std::vector<CosineCache> caches(pool.n_workers());

    for (const auto& pair : corpus) {
      learner.process(pair);
      std::vector<std::string> updated;
      for (const auto& w : pair.utterance)
        if (w == spec.cue || norm_words.count(w) != 0) updated.push_back(w);
      std::sort(updated.begin(), updated.end());
      updated.erase(std::unique(updated.begin(), updated.end()), updated.end());
      if (updated.empty()) continue;
      for (const auto& w : updated) learner.vec(w);  // warm before the parallel phase
      for (auto& cache : caches) cache.reset();
      pool.run(n_points, [&](std::size_t worker, std::size_t idx) {
        update_network_edges(nets[idx], cluster_state, updated, learner, rngs[idx],
                             &caches[worker]);
      });
      update_cluster_assignments(cluster_state, updated, learner);
    }
    if (!learner.has(spec.cue))
      throw std::runtime_error("sweep: cue word never occurs in the corpus: " + spec.cue);
  }

  SweepResult result;
  std::vector<std::size_t> surviving;
  for (std::size_t idx = 0; idx < n_points; ++idx) {
    std::size_t reach = nets[idx].reachable_from(spec.cue);
    if (reach < spec.min_reachable)
      result.skipped.push_back(
          {nets[idx].meta().rho, nets[idx].meta().rho_animal, reach});
    else
      surviving.push_back(idx);
  }
  if (surviving.empty())
    throw std::runtime_error(
        "sweep: every grid point was filtered out (cue-reachable set below " +
        std::to_string(spec.min_reachable) +
        "); lower the thresholds or use a richer corpus");

  std::size_t n_survive = surviving.size();
  result.rows.resize(n_survive);
  result.reports.resize(n_survive);
  std::vector<std::exception_ptr> errors(n_survive);
  pool.run(n_survive, [&](std::size_t, std::size_t s) {
    try {
      std::size_t idx = surviving[s];
      const SemanticNetwork& net = nets[idx];
      std::vector<WalkRecord> walks =
          run_ensemble(net, spec.cue, spec.n_steps, spec.n_walks,
                       derive_seed(spec.master_seed, "sweep-walks", idx));
      FluencyReport report = analyze_walks(walks, norms, learner, spec.cue,
                                           spec.patch_model, spec.mvt_options);
      FeatureOptions fopts;
      fopts.er_samples = spec.er_samples;
      fopts.min_cluster_size = spec.min_cluster_size;
      fopts.seed = derive_seed(spec.master_seed, "sweep-features", idx);
      result.rows[s] = extract_features(net, learner, norms, report.mvt.adheres, fopts);
      result.reports[s] = std::move(report);
    } catch (...) {
      errors[s] = std::current_exception();
    }
  });
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return result;
}

}  // namespace semnet
