#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "semnet/corpus.hpp"
#include "semnet/learner.hpp"
#include "semnet/network.hpp"
#include "semnet/rng.hpp"

namespace semnet {

// mean local clustering coefficient; nodes with degree < 2 contribute 0
double clustering_coefficient(const SemanticNetwork& net);

// mean shortest-path length (unweighted hops) over all pairs of the largest
// connected component; throws if the network has no edges
double average_path_length(const SemanticNetwork& net);

struct ErBaseline {
  double c_random = 0.0;
  double l_random = 0.0;
  std::size_t n_samples = 0;
};

// Erdos-Renyi G(n,m) reference: means of C and L (L on each sample's largest
// component) over `samples` sampled graphs.
ErBaseline er_baseline(std::size_t n, std::size_t m, std::size_t samples, Rng& rng);

struct SmallWorld {
  double gamma = 0.0;   // C / C_random
  double lambda = 0.0;  // L / L_random
  double sigma = 0.0;   // gamma / lambda; > 1 reads as small-world
};

// throws if the baseline C or L is zero (no triangles in any sample)
SmallWorld small_worldness(const SemanticNetwork& net, const ErBaseline& baseline);

struct HdbscanResult {
  std::vector<std::vector<std::string>> clusters;  // each sorted; ordered by first member
  std::vector<std::string> noise;
};

// Density-based clustering: cosine distance (1 - cosine), mutual-reachability
// core distances with min_samples = min_cluster_size, single-linkage over the
// mutual-reachability MST, condensed tree, stability-based extraction. Fewer
// points than min_cluster_size yields all noise.
HdbscanResult hdbscan_clusters(const std::map<std::string, std::vector<double>>& vectors,
                               std::size_t min_cluster_size);

// same pipeline over meaning vectors selected by name
HdbscanResult hdbscan_clusters(const std::vector<std::string>& words,
                               const MeaningView& meanings, std::size_t min_cluster_size);

// same pipeline with shortest-path hop counts on the network as the metric
HdbscanResult hdbscan_clusters_graph(const SemanticNetwork& net,
                                     std::size_t min_cluster_size,
                                     const std::set<std::string>& exclude = {});

struct NaiveClusters {
  std::vector<std::vector<std::string>> clusters;  // components of size >= 2
  std::vector<std::string> singletons;             // words only reachable via the cue
};

// delete the cue node, read off connected components
NaiveClusters naive_clusters(const SemanticNetwork& net, const std::string& cue);

struct ClusterScore {
  std::string label;  // plurality category
  double precision = 0.0;
  double recall = 0.0;
  double fscore = 0.0;
  std::size_t size = 0;
};

struct ClusterQuality {
  std::vector<ClusterScore> per_cluster;
  double weighted_precision = 0.0;  // size-weighted means
  double weighted_recall = 0.0;
  double weighted_fscore = 0.0;
};

// Each cluster is labeled with the plurality category of its members
// (lexicographic tie break); recall counts category members present in
// `network_words`. Throws if a member is missing from the norms.
ClusterQuality cluster_quality(const std::vector<std::vector<std::string>>& clusters,
                               const CategoryNorms& norms,
                               const std::set<std::string>& network_words);

struct NetworkFeatures {
  double rho = 0.0;
  double rho_animal = 0.0;
  std::string mode;
  std::size_t n_vertices = 0;
  std::size_t n_edges = 0;
  double sparsity = 0.0;  // 2 * n_edges / n_vertices
  double clustering_coefficient = 0.0;
  double avg_path_length = 0.0;
  double gamma = 0.0;
  double lambda = 0.0;
  double sigma = 0.0;
  std::size_t n_hdbscan_clusters = 0;
  double weighted_precision = 0.0;
  double weighted_recall = 0.0;
  double weighted_fscore = 0.0;
  std::size_t n_naive_clusters = 0;
  std::size_t n_singletons = 0;
  bool mvt_label = false;
};

struct FeatureOptions {
  std::size_t er_samples = 20;
  std::size_t min_cluster_size = 3;
  std::uint64_t seed = 1;  // stream for the ER baseline
};

// Assemble the full feature row for one network. HDBSCAN and the quality
// scores run over the network's non-cue nodes.
NetworkFeatures extract_features(const SemanticNetwork& net, const MeaningView& meanings,
                                 const CategoryNorms& norms, bool mvt_label,
                                 const FeatureOptions& options = {});

// CSV with a fixed header; floats at 17 significant digits, '.' decimal
void write_features_csv(const std::vector<NetworkFeatures>& rows, std::ostream& out);
void write_features_csv(const std::vector<NetworkFeatures>& rows, const std::string& path);
std::vector<NetworkFeatures> read_features_csv(std::istream& in);
std::vector<NetworkFeatures> read_features_csv_file(const std::string& path);

}  // namespace semnet
