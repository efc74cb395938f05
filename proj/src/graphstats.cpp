#include "semnet/graphstats.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace semnet {

namespace {

struct PlainGraph {
  std::vector<std::string> names;
  std::vector<std::vector<std::size_t>> adj;  // sorted neighbor ids

  explicit PlainGraph(const SemanticNetwork& net) {
    std::map<std::string, std::size_t> ids;
    for (const auto& [u, nbrs] : net.adjacency()) {
      ids[u] = names.size();
      names.push_back(u);
    }
    adj.resize(names.size());
    for (const auto& [u, nbrs] : net.adjacency())
      for (const auto& [v, w] : nbrs) adj[ids[u]].push_back(ids[v]);
  }

  PlainGraph(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges)
      : adj(n) {
    for (const auto& [a, b] : edges) {
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
    for (auto& nbrs : adj) std::sort(nbrs.begin(), nbrs.end());
  }

  std::size_t size() const { return adj.size(); }
};

double plain_clustering(const PlainGraph& g) {
  if (g.size() == 0) throw std::invalid_argument("clustering_coefficient: empty graph");
  double total = 0.0;
  for (std::size_t u = 0; u < g.size(); ++u) {
    const auto& nu = g.adj[u];
    if (nu.size() < 2) continue;
    std::size_t links = 0;
    for (std::size_t a = 0; a < nu.size(); ++a)
      for (std::size_t b = a + 1; b < nu.size(); ++b)
        if (std::binary_search(g.adj[nu[a]].begin(), g.adj[nu[a]].end(), nu[b])) ++links;
    double possible = 0.5 * static_cast<double>(nu.size()) *
                      static_cast<double>(nu.size() - 1);
    total += static_cast<double>(links) / possible;
  }
  return total / static_cast<double>(g.size());
}

std::vector<std::vector<std::size_t>> plain_components(const PlainGraph& g) {
  std::vector<std::vector<std::size_t>> comps;
  std::vector<char> seen(g.size(), 0);
  for (std::size_t s = 0; s < g.size(); ++s) {
    if (seen[s]) continue;
    std::vector<std::size_t> comp;
    std::deque<std::size_t> frontier{s};
    seen[s] = 1;
    while (!frontier.empty()) {
      std::size_t u = frontier.front();
      frontier.pop_front();
      comp.push_back(u);
      for (std::size_t v : g.adj[u])
        if (!seen[v]) {
          seen[v] = 1;
          frontier.push_back(v);
        }
    }
    comps.push_back(std::move(comp));
  }
  return comps;
}

// mean hop distance over pairs of the largest component; 0 edges -> throws
double plain_path_length(const PlainGraph& g) {
  std::size_t n_edges = 0;
  for (const auto& nbrs : g.adj) n_edges += nbrs.size();
  n_edges /= 2;
  if (n_edges == 0)
    throw std::runtime_error("average_path_length: undefined on an edgeless graph");

  auto comps = plain_components(g);
  const std::vector<std::size_t>* largest = &comps.front();
  for (const auto& c : comps)
    if (c.size() > largest->size()) largest = &c;

  std::vector<char> in_comp(g.size(), 0);
  for (std::size_t u : *largest) in_comp[u] = 1;

  double total = 0.0;
  std::size_t pairs = 0;
  std::vector<int> dist(g.size());
  for (std::size_t src : *largest) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[src] = 0;
    std::deque<std::size_t> frontier{src};
    while (!frontier.empty()) {
      std::size_t u = frontier.front();
      frontier.pop_front();
      for (std::size_t v : g.adj[u])
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          frontier.push_back(v);
        }
    }
    for (std::size_t v : *largest)
      if (v > src) {
        total += dist[v];
        ++pairs;
      }
  }
  return total / static_cast<double>(pairs);
}

}  // namespace

double clustering_coefficient(const SemanticNetwork& net) {
  return plain_clustering(PlainGraph(net));
}

double average_path_length(const SemanticNetwork& net) {
  return plain_path_length(PlainGraph(net));
}

ErBaseline er_baseline(std::size_t n, std::size_t m, std::size_t samples, Rng& rng) {
  if (n < 2) throw std::invalid_argument("er_baseline: need at least 2 nodes");
  std::size_t max_edges = n * (n - 1) / 2;
  if (m == 0 || m > max_edges)
    throw std::invalid_argument("er_baseline: edge count outside [1, n(n-1)/2]");
  if (samples == 0) throw std::invalid_argument("er_baseline: need at least one sample");

  // pair index -> (i,j) decode table
  std::vector<std::pair<std::size_t, std::size_t>> all_pairs;
  all_pairs.reserve(max_edges);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) all_pairs.emplace_back(i, j);

  ErBaseline out;
  out.n_samples = samples;
  double c_total = 0.0, l_total = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    auto picks = sample_without_replacement(max_edges, m, rng);
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    edges.reserve(m);
    for (std::size_t p : picks) edges.push_back(all_pairs[p]);
    PlainGraph g(n, edges);
    c_total += plain_clustering(g);
    l_total += plain_path_length(g);
  }
  out.c_random = c_total / static_cast<double>(samples);
  out.l_random = l_total / static_cast<double>(samples);
  return out;
}

SmallWorld small_worldness(const SemanticNetwork& net, const ErBaseline& baseline) {
  if (baseline.c_random == 0.0)
    throw std::runtime_error(
        "small_worldness: baseline clustering coefficient is zero (no triangles in any "
        "sampled graph)");
  if (baseline.l_random == 0.0)
    throw std::runtime_error("small_worldness: baseline path length is zero");
  SmallWorld sw;
  sw.gamma = clustering_coefficient(net) / baseline.c_random;
  sw.lambda = average_path_length(net) / baseline.l_random;
  sw.sigma = sw.gamma / sw.lambda;
  return sw;
}

NaiveClusters naive_clusters(const SemanticNetwork& net, const std::string& cue) {
  if (!net.has_node(cue))
    throw std::runtime_error("naive_clusters: cue node not in network: " + cue);

  std::set<std::string> remaining;
  for (const auto& [u, nbrs] : net.adjacency())
    if (u != cue) remaining.insert(u);

  NaiveClusters out;
  while (!remaining.empty()) {
    std::string start = *remaining.begin();
    std::vector<std::string> comp;
    std::deque<std::string> frontier{start};
    remaining.erase(start);
    while (!frontier.empty()) {
      std::string u = frontier.front();
      frontier.pop_front();
      comp.push_back(u);
      for (const auto& [v, w] : net.neighbors(u)) {
        if (v == cue) continue;
        auto it = remaining.find(v);
        if (it != remaining.end()) {
          remaining.erase(it);
          frontier.push_back(v);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    if (comp.size() >= 2)
      out.clusters.push_back(std::move(comp));
    else
      out.singletons.push_back(comp.front());
  }
  std::sort(out.clusters.begin(), out.clusters.end());
  std::sort(out.singletons.begin(), out.singletons.end());
  return out;
}

ClusterQuality cluster_quality(const std::vector<std::vector<std::string>>& clusters,
                               const CategoryNorms& norms,
                               const std::set<std::string>& network_words) {
  if (clusters.empty())
    throw std::invalid_argument("cluster_quality: no clusters to score");

  // category -> number of its members present in the network
  std::map<std::string, std::size_t> present;
  for (const auto& w : network_words) {
    auto it = norms.memberships.find(w);
    if (it == norms.memberships.end()) continue;
    for (const auto& c : it->second) ++present[c];
  }

  ClusterQuality out;
  std::size_t total_size = 0;
  double wp = 0.0, wr = 0.0, wf = 0.0;
  for (const auto& cluster : clusters) {
    if (cluster.empty()) throw std::invalid_argument("cluster_quality: empty cluster");
    std::map<std::string, std::size_t> counts;
    for (const auto& w : cluster)
      for (const auto& c : norms.categories_of(w)) ++counts[c];
    auto best = counts.begin();
    for (auto it = counts.begin(); it != counts.end(); ++it)
      if (it->second > best->second) best = it;  // map order breaks ties low

    ClusterScore score;
    score.label = best->first;
    score.size = cluster.size();
    score.precision = static_cast<double>(best->second) / static_cast<double>(cluster.size());
    std::size_t denom = present.count(score.label) ? present.at(score.label) : 0;
    score.recall = denom ? static_cast<double>(best->second) / static_cast<double>(denom) : 0.0;
    score.fscore = score.precision + score.recall > 0.0
                       ? 2.0 * score.precision * score.recall /
                             (score.precision + score.recall)
                       : 0.0;
    total_size += score.size;
    wp += score.precision * static_cast<double>(score.size);
    wr += score.recall * static_cast<double>(score.size);
    wf += score.fscore * static_cast<double>(score.size);
    out.per_cluster.push_back(std::move(score));
  }
  out.weighted_precision = wp / static_cast<double>(total_size);
  out.weighted_recall = wr / static_cast<double>(total_size);
  out.weighted_fscore = wf / static_cast<double>(total_size);
  return out;
}

NetworkFeatures extract_features(const SemanticNetwork& net, const MeaningView& meanings,
                                 const CategoryNorms& norms, bool mvt_label,
                                 const FeatureOptions& options) {
  NetworkFeatures f;
  f.rho = net.meta().rho;
  f.rho_animal = net.meta().rho_animal;
  f.mode = net.meta().mode;
  f.n_vertices = net.n_nodes();
  f.n_edges = net.n_edges();
  if (f.n_vertices == 0) throw std::invalid_argument("extract_features: empty network");
  f.sparsity = 2.0 * static_cast<double>(f.n_edges) / static_cast<double>(f.n_vertices);
  f.clustering_coefficient = clustering_coefficient(net);
  f.avg_path_length = average_path_length(net);

  Rng er_rng(derive_seed(options.seed, "er-baseline"));
  ErBaseline baseline = er_baseline(f.n_vertices, f.n_edges, options.er_samples, er_rng);
  SmallWorld sw = small_worldness(net, baseline);
  f.gamma = sw.gamma;
  f.lambda = sw.lambda;
  f.sigma = sw.sigma;

  std::vector<std::string> words;
  std::set<std::string> word_set;
  for (const auto& [u, nbrs] : net.adjacency())
    if (u != net.meta().cue) {
      words.push_back(u);
      word_set.insert(u);
    }
  HdbscanResult h = hdbscan_clusters(words, meanings, options.min_cluster_size);
  f.n_hdbscan_clusters = h.clusters.size();
  if (!h.clusters.empty()) {
    ClusterQuality q = cluster_quality(h.clusters, norms, word_set);
    f.weighted_precision = q.weighted_precision;
    f.weighted_recall = q.weighted_recall;
    f.weighted_fscore = q.weighted_fscore;
  }

  NaiveClusters nc = naive_clusters(net, net.meta().cue);
  f.n_naive_clusters = nc.clusters.size();
  f.n_singletons = nc.singletons.size();
  f.mvt_label = mvt_label;
  return f;
}

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

constexpr const char* kFeatureHeader =
    "rho,rho_animal,mode,n_vertices,n_edges,sparsity,clustering_coefficient,"
    "avg_path_length,gamma,lambda,sigma,n_hdbscan_clusters,weighted_precision,"
    "weighted_recall,weighted_fscore,n_naive_clusters,n_singletons,mvt_label";

}  // namespace

void write_features_csv(const std::vector<NetworkFeatures>& rows, std::ostream& out) {
  out << kFeatureHeader << "\n";
  for (const auto& f : rows) {
    out << fmt17(f.rho) << "," << fmt17(f.rho_animal) << "," << f.mode << ","
        << f.n_vertices << "," << f.n_edges << "," << fmt17(f.sparsity) << ","
        << fmt17(f.clustering_coefficient) << "," << fmt17(f.avg_path_length) << ","
        << fmt17(f.gamma) << "," << fmt17(f.lambda) << "," << fmt17(f.sigma) << ","
        << f.n_hdbscan_clusters << "," << fmt17(f.weighted_precision) << ","
        << fmt17(f.weighted_recall) << "," << fmt17(f.weighted_fscore) << ","
        << f.n_naive_clusters << "," << f.n_singletons << ","
        << (f.mvt_label ? 1 : 0) << "\n";
  }
}

void write_features_csv(const std::vector<NetworkFeatures>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_features_csv(rows, out);
}

std::vector<NetworkFeatures> read_features_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("features CSV: empty input");
  if (line != kFeatureHeader)
    throw std::runtime_error("features CSV: unexpected header: " + line);

  std::vector<NetworkFeatures> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 18)
      throw ParseError(line_no, "features CSV row needs 18 cells");
    NetworkFeatures f;
    std::size_t i = 0;
    f.rho = std::stod(cells[i++]);
    f.rho_animal = std::stod(cells[i++]);
    f.mode = cells[i++];
    f.n_vertices = std::stoul(cells[i++]);
    f.n_edges = std::stoul(cells[i++]);
    f.sparsity = std::stod(cells[i++]);
    f.clustering_coefficient = std::stod(cells[i++]);
    f.avg_path_length = std::stod(cells[i++]);
    f.gamma = std::stod(cells[i++]);
    f.lambda = std::stod(cells[i++]);
    f.sigma = std::stod(cells[i++]);
    f.n_hdbscan_clusters = std::stoul(cells[i++]);
    f.weighted_precision = std::stod(cells[i++]);
    f.weighted_recall = std::stod(cells[i++]);
    f.weighted_fscore = std::stod(cells[i++]);
    f.n_naive_clusters = std::stoul(cells[i++]);
    f.n_singletons = std::stoul(cells[i++]);
    f.mvt_label = cells[i++] == "1";
    rows.push_back(std::move(f));
  }
  return rows;
}

std::vector<NetworkFeatures> read_features_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open features CSV: " + path);
  return read_features_csv(in);
}

}  // namespace semnet
