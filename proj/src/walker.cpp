#include "semnet/walker.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <stdexcept>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace semnet {

namespace {

// compact indexed copy of the graph for fast repeated sampling
struct WalkIndex {
  std::vector<std::string> names;                    // id -> node, sorted
  std::map<std::string, std::size_t> ids;
  std::vector<std::vector<std::size_t>> nbr;         // neighbor ids, sorted
  std::vector<std::vector<double>> cum;              // cumulative weights

  explicit WalkIndex(const SemanticNetwork& net) {
    for (const auto& [u, nbrs] : net.adjacency()) {
      ids[u] = names.size();
      names.push_back(u);
    }
    nbr.resize(names.size());
    cum.resize(names.size());
    for (const auto& [u, nbrs] : net.adjacency()) {
      std::size_t ui = ids[u];
      double running = 0.0;
      for (const auto& [v, w] : nbrs) {
        running += w;
        nbr[ui].push_back(ids[v]);
        cum[ui].push_back(running);
      }
    }
  }

  std::size_t step(std::size_t u, Rng& rng) const {
    const auto& c = cum[u];
    double r = rng.uniform() * c.back();
    auto it = std::upper_bound(c.begin(), c.end(), r);
    if (it == c.end()) --it;  // r == total weight edge case
    return nbr[u][it - c.begin()];
  }
};

std::vector<std::string> walk_with_index(const WalkIndex& index, std::size_t start,
                                         std::size_t steps, Rng& rng) {
  std::vector<std::string> out;
  out.reserve(steps + 1);
  std::size_t cur = start;
  out.push_back(index.names[cur]);
  for (std::size_t s = 0; s < steps; ++s) {
    cur = index.step(cur, rng);
    out.push_back(index.names[cur]);
  }
  return out;
}

std::size_t require_start(const WalkIndex& index, const SemanticNetwork& net,
                          const std::string& start) {
  auto it = index.ids.find(start);
  if (it == index.ids.end())
    throw std::runtime_error("walk start node not in network: " + start);
  if (net.neighbors(start).empty())
    throw std::runtime_error("walk start node has no neighbors: " + start);
  return it->second;
}

}  // namespace

std::vector<std::string> random_walk(const SemanticNetwork& net, const std::string& start,
                                     std::size_t steps, Rng& rng) {
  WalkIndex index(net);
  return walk_with_index(index, require_start(index, net, start), steps, rng);
}

std::vector<Retrieval> extract_retrievals(const std::vector<std::string>& steps) {
  std::vector<Retrieval> out;
  std::unordered_set<std::string> seen;
  std::size_t last_first_visit = 0;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (!seen.insert(steps[i]).second) continue;
    Retrieval r;
    r.word = steps[i];
    if (!out.empty()) r.irt = i - last_first_visit;
    last_first_visit = i;
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<WalkRecord> run_ensemble(const SemanticNetwork& net, const std::string& start,
                                     std::size_t steps, std::size_t n_walks,
                                     std::uint64_t master_seed) {
  WalkIndex index(net);
  std::size_t start_id = require_start(index, net, start);
  std::vector<WalkRecord> out;
  out.reserve(n_walks);
  for (std::size_t i = 0; i < n_walks; ++i) {
    WalkRecord rec;
    rec.seed = derive_seed(master_seed, "walk", i);
    Rng rng(rec.seed);
    rec.steps = walk_with_index(index, start_id, steps, rng);
    rec.retrievals = extract_retrievals(rec.steps);
    out.push_back(std::move(rec));
  }
  return out;
}

void save_walks(const std::vector<WalkRecord>& walks, std::ostream& out) {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& w : walks) {
    nlohmann::json retrievals = nlohmann::json::array();
    for (const auto& r : w.retrievals) {
      nlohmann::json jr{{"word", r.word}};
      if (r.irt) jr["irt"] = *r.irt;
      retrievals.push_back(std::move(jr));
    }
    doc.push_back(nlohmann::json{
        {"seed", w.seed}, {"steps", w.steps}, {"retrievals", std::move(retrievals)}});
  }
  out << doc.dump(2) << "\n";
}

void save_walks(const std::vector<WalkRecord>& walks, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  save_walks(walks, out);
}

std::vector<WalkRecord> load_walks(std::istream& in) {
  nlohmann::json doc = nlohmann::json::parse(in);
  std::vector<WalkRecord> out;
  for (const auto& jw : doc) {
    WalkRecord w;
    w.seed = jw.at("seed").get<std::uint64_t>();
    w.steps = jw.at("steps").get<std::vector<std::string>>();
    for (const auto& jr : jw.at("retrievals")) {
      Retrieval r;
      r.word = jr.at("word").get<std::string>();
      if (jr.contains("irt")) r.irt = jr.at("irt").get<std::size_t>();
      w.retrievals.push_back(std::move(r));
    }
    out.push_back(std::move(w));
  }
  return out;
}

std::vector<WalkRecord> load_walks_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open walks file: " + path);
  return load_walks(in);
}

}  // namespace semnet
