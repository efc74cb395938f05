#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>

namespace semnet {

struct NetworkMeta {
  std::string mode;        // "batch" or "incremental"
  double rho = 0.8;        // word-word edge threshold
  double rho_animal = 0.4; // threshold for edges touching the cue word
  std::string cue = "animal";
};

// Undirected weighted graph over words. Weights are cosine similarities in
// [0,1]; self loops are rejected. Node and neighbor iteration is in sorted
// order, which keeps serialization and downstream sampling canonical.
class SemanticNetwork {
 public:
  SemanticNetwork() = default;
  explicit SemanticNetwork(NetworkMeta meta) : meta_(std::move(meta)) {}

  const NetworkMeta& meta() const { return meta_; }
  NetworkMeta& meta() { return meta_; }

  void add_node(const std::string& w);
  bool has_node(const std::string& w) const { return adj_.count(w) != 0; }
  std::size_t n_nodes() const { return adj_.size(); }
  std::size_t n_edges() const { return n_edges_; }

  void set_edge(const std::string& a, const std::string& b, double weight);
  void remove_edge(const std::string& a, const std::string& b);
  bool has_edge(const std::string& a, const std::string& b) const;
  std::optional<double> weight(const std::string& a, const std::string& b) const;

  const std::map<std::string, double>& neighbors(const std::string& w) const;
  const std::map<std::string, std::map<std::string, double>>& adjacency() const {
    return adj_;
  }

  // rho_animal if either endpoint is the cue word, else rho
  double threshold_for(const std::string& a, const std::string& b) const {
    return (a == meta_.cue || b == meta_.cue) ? meta_.rho_animal : meta_.rho;
  }

  // nodes reachable from start, start included; 0 if start is absent
  std::size_t reachable_from(const std::string& start) const;

 private:
  std::map<std::string, std::map<std::string, double>> adj_;
  NetworkMeta meta_;
  std::size_t n_edges_ = 0;
};

// JSON: {"meta": {...}, "nodes": [...], "edges": [[a, b, weight], ...]} with
// nodes sorted and edges sorted lexicographically (a < b within each edge).
void save_network(const SemanticNetwork& net, std::ostream& out);
void save_network(const SemanticNetwork& net, const std::string& path);
SemanticNetwork load_network(std::istream& in);
SemanticNetwork load_network_file(const std::string& path);

}  // namespace semnet
