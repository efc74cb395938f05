#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "semnet/corpus.hpp"
#include "semnet/fluency.hpp"
#include "semnet/graphstats.hpp"
#include "semnet/netbuild.hpp"

namespace semnet {

// 0.0, 0.1, ..., 1.0
std::vector<double> decile_grid();

struct SweepSpec {
  std::vector<double> rho_grid = decile_grid();
  std::vector<double> rho_animal_grid = decile_grid();
  std::size_t min_reachable = 30;  // smallest usable cue-reachable set
  std::size_t n_walks = 300;
  std::size_t n_steps = 70;
  std::uint64_t master_seed = 1;
  std::string mode = "batch";  // "batch" or "incremental"
  std::string cue = "animal";
  PatchModel patch_model = PatchModel::associative;
  ClusterParams cluster_params;  // incremental mode only
  MvtOptions mvt_options;
  std::size_t er_samples = 20;
  std::size_t min_cluster_size = 3;
  std::size_t n_threads = 0;  // 0 = hardware concurrency
};

struct SkippedPoint {
  double rho = 0.0;
  double rho_animal = 0.0;
  std::size_t n_reachable = 0;
};

struct SweepResult {
  std::vector<NetworkFeatures> rows;   // surviving points, rho-major order
  std::vector<FluencyReport> reports;  // aligned with rows
  std::vector<SkippedPoint> skipped;
};

// Train on the corpus under spec.mode, realize one network per (rho,
// rho_animal) grid point, drop points whose cue-reachable node count falls
// below min_reachable, then walk, analyze, and extract features for each
// survivor. Network vocabulary is the norms words that occur in the corpus
// plus the cue. Seed streams are derived per point from the master seed, so
// output is identical for any n_threads. Throws if every point is filtered
// out or the cue never occurs.
SweepResult run_sweep(const SweepSpec& spec, const std::vector<UtteranceScenePair>& corpus,
                      const CategoryNorms& norms);

}  // namespace semnet
