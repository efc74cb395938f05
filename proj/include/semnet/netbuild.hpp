#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "semnet/learner.hpp"
#include "semnet/meanings.hpp"
#include "semnet/network.hpp"
#include "semnet/rng.hpp"

namespace semnet {

// Exhaustive pairwise construction from final meanings. Every word in `words`
// becomes a node (isolated nodes allowed); an edge appears iff the cosine of
// the endpoints' meaning vectors reaches the applicable threshold (meta.rho,
// or meta.rho_animal when the cue is an endpoint). Throws if any word has no
// meaning, listing the missing ones.
SemanticNetwork build_batch_network(const MeaningView& meanings,
                                    const std::vector<std::string>& words,
                                    const NetworkMeta& meta);

// fraction of batch edges absent from the incremental network; 0 when the
// batch network has no edges
double missing_edge_fraction(const SemanticNetwork& incremental,
                             const SemanticNetwork& batch);

struct ClusterParams {
  double alpha = 1.0;          // pseudo-count for opening a new cluster
  double beta = 10.0;          // sharpness of prototype similarity
  double budget_fraction = 0.08;  // candidate comparisons per step, as a
                                  // fraction of n(n-1)/2
};

struct Cluster {
  std::set<std::string> members;
  SparseVec prototype;  // mean of members' current vectors
};

// Online prototype clustering over word meanings. Every word the incremental
// flow has seen belongs to exactly one cluster; empty clusters are dropped.
class ClusterState {
 public:
  explicit ClusterState(ClusterParams params = {}) : params_(params) {}

  const ClusterParams& params() const { return params_; }
  const std::vector<Cluster>& clusters() const { return clusters_; }
  std::size_t total_words() const { return member_of_.size(); }
  std::optional<std::size_t> cluster_of(const std::string& w) const;

  std::size_t create_cluster(const std::string& w);
  void insert_word(const std::string& w, std::size_t target);
  void move_word(const std::string& w, std::size_t target);
  void detach_word(const std::string& w);
  void drop_empty_clusters();
  void recompute_prototype(std::size_t k, const MeaningView& meanings);

 private:
  ClusterParams params_;
  std::vector<Cluster> clusters_;
  std::map<std::string, std::size_t> member_of_;
};

struct ClusterProbabilities {
  std::vector<double> existing;  // aligned with state.clusters()
  double novel = 1.0;
};

// P(cluster k | word) proportional to n_k * exp(beta * cosine(word, prototype_k));
// a new cluster scores alpha. Normalized; with no clusters novel = 1.
ClusterProbabilities assign_cluster_probabilities(const SparseVec& word_vec,
                                                  const ClusterState& state);

// Per-step cosine memo; entries are valid only while the underlying meanings
// do not change, so callers reset it after every training pair.
class CosineCache {
 public:
  void reset() { memo_.clear(); }
  double get(const std::string& a, const std::string& b, const MeaningView& meanings);

 private:
  std::map<std::pair<std::string, std::string>, double> memo_;
};

struct UpdateStats {
  std::size_t budget = 0;                 // candidate allowance this step
  std::size_t candidate_comparisons = 0;  // <= budget
  std::size_t edge_refreshes = 0;         // maintenance of existing edges
};

// Phases 1-3 of one incremental step for the words updated by the latest
// training pair: refresh each updated word's incident edges, then compare it
// against budgeted samples drawn from clusters in proportion to
// assign_cluster_probabilities, adding edges that reach threshold. Cluster
// membership is not modified.
UpdateStats update_network_edges(SemanticNetwork& net, const ClusterState& state,
                                 const std::vector<std::string>& updated_words,
                                 const MeaningView& meanings, Rng& rng,
                                 CosineCache* cache = nullptr);

// Phase 4: reassign each updated word to its argmax cluster (possibly a fresh
// one), then recompute the prototypes of every cluster whose membership or
// member meanings changed.
void update_cluster_assignments(ClusterState& state,
                                const std::vector<std::string>& updated_words,
                                const MeaningView& meanings);

// One full incremental step.
UpdateStats update_incremental_network(SemanticNetwork& net, ClusterState& state,
                                       const std::vector<std::string>& updated_words,
                                       const MeaningView& meanings, Rng& rng,
                                       CosineCache* cache = nullptr);

}  // namespace semnet
