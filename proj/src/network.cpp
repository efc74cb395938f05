#include "semnet/network.hpp"

#include <deque>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace semnet {

void SemanticNetwork::add_node(const std::string& w) { adj_[w]; }

void SemanticNetwork::set_edge(const std::string& a, const std::string& b, double weight) {
  if (a == b) throw std::invalid_argument("set_edge: self loop on " + a);
  if (weight < 0.0 || weight > 1.0)
    throw std::invalid_argument("set_edge: weight outside [0,1]");
  auto& na = adj_[a];
  adj_[b];
  if (na.emplace(b, weight).second) {
    adj_[b].emplace(a, weight);
    ++n_edges_;
  } else {
    na[b] = weight;
    adj_[b][a] = weight;
  }
}

void SemanticNetwork::remove_edge(const std::string& a, const std::string& b) {
  auto ia = adj_.find(a);
  if (ia == adj_.end() || ia->second.erase(b) == 0) return;
  adj_.at(b).erase(a);
  --n_edges_;
}

bool SemanticNetwork::has_edge(const std::string& a, const std::string& b) const {
  auto ia = adj_.find(a);
  return ia != adj_.end() && ia->second.count(b) != 0;
}

std::optional<double> SemanticNetwork::weight(const std::string& a,
                                              const std::string& b) const {
  auto ia = adj_.find(a);
  if (ia == adj_.end()) return std::nullopt;
  auto ib = ia->second.find(b);
  if (ib == ia->second.end()) return std::nullopt;
  return ib->second;
}

const std::map<std::string, double>& SemanticNetwork::neighbors(
    const std::string& w) const {
  auto it = adj_.find(w);
  if (it == adj_.end()) throw std::runtime_error("network has no node: " + w);
  return it->second;
}

std::size_t SemanticNetwork::reachable_from(const std::string& start) const {
  auto it = adj_.find(start);
  if (it == adj_.end()) return 0;
  std::set<std::string> seen{start};
  std::deque<const std::string*> frontier{&it->first};
  while (!frontier.empty()) {
    const std::string& u = *frontier.front();
    frontier.pop_front();
    for (const auto& [v, w] : adj_.at(u))
      if (seen.insert(v).second) frontier.push_back(&adj_.find(v)->first);
  }
  return seen.size();
}

void save_network(const SemanticNetwork& net, std::ostream& out) {
  nlohmann::json nodes = nlohmann::json::array();
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [u, nbrs] : net.adjacency()) {
    nodes.push_back(u);
    for (const auto& [v, w] : nbrs)
      if (u < v) edges.push_back(nlohmann::json::array({u, v, w}));
  }
  nlohmann::json doc{
      {"meta",
       {{"mode", net.meta().mode},
        {"rho", net.meta().rho},
        {"rho_animal", net.meta().rho_animal},
        {"cue", net.meta().cue}}},
      {"nodes", std::move(nodes)},
      {"edges", std::move(edges)}};
  out << doc.dump(2) << "\n";
}

void save_network(const SemanticNetwork& net, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  save_network(net, out);
}

SemanticNetwork load_network(std::istream& in) {
  nlohmann::json doc = nlohmann::json::parse(in);
  NetworkMeta meta;
  const auto& m = doc.at("meta");
  meta.mode = m.at("mode").get<std::string>();
  meta.rho = m.at("rho").get<double>();
  meta.rho_animal = m.at("rho_animal").get<double>();
  meta.cue = m.at("cue").get<std::string>();
  SemanticNetwork net(meta);
  for (const auto& n : doc.at("nodes")) net.add_node(n.get<std::string>());
  for (const auto& e : doc.at("edges")) {
    if (!e.is_array() || e.size() != 3)
      throw std::runtime_error("network edge must be [a, b, weight]");
    net.set_edge(e[0].get<std::string>(), e[1].get<std::string>(), e[2].get<double>());
  }
  return net;
}

SemanticNetwork load_network_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open network file: " + path);
  return load_network(in);
}

}  // namespace semnet
