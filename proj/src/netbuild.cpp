#include "semnet/netbuild.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace semnet {

SemanticNetwork build_batch_network(const MeaningView& meanings,
                                    const std::vector<std::string>& words,
                                    const NetworkMeta& meta) {
  std::set<std::string> unique(words.begin(), words.end());
  std::vector<std::string> missing;
  for (const auto& w : unique)
    if (!meanings.has(w)) missing.push_back(w);
  if (!missing.empty()) {
    std::string msg = "build_batch_network: no learned meaning for:";
    for (const auto& w : missing) msg += " " + w;
    throw std::runtime_error(msg);
  }

  SemanticNetwork net(meta);
  std::vector<std::string> order(unique.begin(), unique.end());
  for (const auto& w : order) net.add_node(w);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const SparseVec& vi = meanings.vec(order[i]);
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      double c = cosine(vi, meanings.vec(order[j]));
      if (c >= net.threshold_for(order[i], order[j])) net.set_edge(order[i], order[j], c);
    }
  }
  return net;
}

double missing_edge_fraction(const SemanticNetwork& incremental,
                             const SemanticNetwork& batch) {
  if (batch.n_edges() == 0) return 0.0;
  std::size_t missing = 0;
  for (const auto& [u, nbrs] : batch.adjacency())
    for (const auto& [v, w] : nbrs)
      if (u < v && !incremental.has_edge(u, v)) ++missing;
  return static_cast<double>(missing) / static_cast<double>(batch.n_edges());
}

std::optional<std::size_t> ClusterState::cluster_of(const std::string& w) const {
  auto it = member_of_.find(w);
  if (it == member_of_.end()) return std::nullopt;
  return it->second;
}

std::size_t ClusterState::create_cluster(const std::string& w) {
  if (member_of_.count(w))
    throw std::logic_error("create_cluster: word already clustered: " + w);
  clusters_.push_back(Cluster{{w}, SparseVec{}});
  member_of_[w] = clusters_.size() - 1;
  return clusters_.size() - 1;
}

void ClusterState::insert_word(const std::string& w, std::size_t target) {
  if (member_of_.count(w))
    throw std::logic_error("insert_word: word already clustered: " + w);
  clusters_.at(target).members.insert(w);
  member_of_[w] = target;
}

void ClusterState::move_word(const std::string& w, std::size_t target) {
  auto it = member_of_.find(w);
  if (it == member_of_.end())
    throw std::logic_error("move_word: word not clustered: " + w);
  if (it->second == target) return;
  clusters_.at(it->second).members.erase(w);
  clusters_.at(target).members.insert(w);
  it->second = target;
}

void ClusterState::detach_word(const std::string& w) {
  auto it = member_of_.find(w);
  if (it == member_of_.end())
    throw std::logic_error("detach_word: word not clustered: " + w);
  clusters_.at(it->second).members.erase(w);
  member_of_.erase(it);
}

void ClusterState::drop_empty_clusters() {
  std::vector<Cluster> kept;
  kept.reserve(clusters_.size());
  std::vector<std::size_t> remap(clusters_.size());
  for (std::size_t k = 0; k < clusters_.size(); ++k) {
    if (clusters_[k].members.empty()) continue;
    remap[k] = kept.size();
    kept.push_back(std::move(clusters_[k]));
  }
  if (kept.size() == clusters_.size()) return;
  clusters_ = std::move(kept);
  for (auto& [w, k] : member_of_) k = remap[k];
}

void ClusterState::recompute_prototype(std::size_t k, const MeaningView& meanings) {
  Cluster& cl = clusters_.at(k);
  if (cl.members.empty())
    throw std::logic_error("recompute_prototype: empty cluster");
  std::map<std::uint32_t, double> acc;
  for (const auto& m : cl.members)
    for (const auto& [id, p] : meanings.vec(m).entries) acc[id] += p;
  SparseVec proto;
  proto.entries.reserve(acc.size());
  double inv = 1.0 / static_cast<double>(cl.members.size());
  for (const auto& [id, s] : acc) proto.entries.emplace_back(id, s * inv);
  proto.finalize();
  cl.prototype = std::move(proto);
}

ClusterProbabilities assign_cluster_probabilities(const SparseVec& word_vec,
                                                  const ClusterState& state) {
  ClusterProbabilities out;
  const auto& clusters = state.clusters();
  if (clusters.empty()) return out;  // novel = 1
  out.existing.resize(clusters.size());
  double total = state.params().alpha;
  for (std::size_t k = 0; k < clusters.size(); ++k) {
    double score = static_cast<double>(clusters[k].members.size()) *
                   std::exp(state.params().beta * cosine(word_vec, clusters[k].prototype));
    out.existing[k] = score;
    total += score;
  }
  for (double& p : out.existing) p /= total;
  out.novel = state.params().alpha / total;
  return out;
}

double CosineCache::get(const std::string& a, const std::string& b,
                        const MeaningView& meanings) {
  auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  double c = cosine(meanings.vec(a), meanings.vec(b));
  memo_.emplace(std::move(key), c);
  return c;
}

namespace {

std::vector<std::string> sorted_unique(const std::vector<std::string>& words) {
  std::set<std::string> s(words.begin(), words.end());
  return {s.begin(), s.end()};
}

double pair_cosine(const std::string& a, const std::string& b,
                   const MeaningView& meanings, CosineCache* cache) {
  if (cache) return cache->get(a, b, meanings);
  return cosine(meanings.vec(a), meanings.vec(b));
}

}  // namespace

UpdateStats update_network_edges(SemanticNetwork& net, const ClusterState& state,
                                 const std::vector<std::string>& updated_words,
                                 const MeaningView& meanings, Rng& rng,
                                 CosineCache* cache) {
  UpdateStats stats;
  auto updated = sorted_unique(updated_words);
  for (const auto& w : updated)
    if (!meanings.has(w))
      throw std::runtime_error("update_network_edges: word has no meaning yet: " + w);

  // words participating in this step's budget: everything already clustered
  // plus updated words that have not joined a cluster yet
  std::size_t n = state.total_words();
  for (const auto& w : updated)
    if (!state.cluster_of(w)) ++n;
  double max_pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  stats.budget = static_cast<std::size_t>(std::floor(state.params().budget_fraction * max_pairs));

  std::size_t remaining = stats.budget;
  for (const auto& w_u : updated) {
    net.add_node(w_u);
    const SparseVec& wvec = meanings.vec(w_u);

    // refresh existing incident edges against the word's new meaning
    std::vector<std::string> nbrs;
    for (const auto& [v, wt] : net.neighbors(w_u)) nbrs.push_back(v);
    for (const auto& v : nbrs) {
      double c = pair_cosine(w_u, v, meanings, cache);
      ++stats.edge_refreshes;
      if (c >= net.threshold_for(w_u, v))
        net.set_edge(w_u, v, c);
      else
        net.remove_edge(w_u, v);
    }

    if (remaining == 0 || state.clusters().empty()) continue;

    ClusterProbabilities probs = assign_cluster_probabilities(wvec, state);

    // per-cluster eligible pools: members that are not w_u and not already
    // adjacent to it
    const auto& current_nbrs = net.neighbors(w_u);
    std::vector<std::vector<std::string>> eligible(state.clusters().size());
    for (std::size_t k = 0; k < state.clusters().size(); ++k)
      for (const auto& m : state.clusters()[k].members)
        if (m != w_u && current_nbrs.count(m) == 0) eligible[k].push_back(m);

    // proportional allocation n_k = round(p_k * budget), clamped to pool size
    // and to the remaining allowance; whatever the rounding leaves unused is
    // handed to clusters that still have eligible members (highest p first) so
    // that a full budget degenerates to the exhaustive batch comparison
    std::vector<std::size_t> draw(state.clusters().size(), 0);
    std::size_t word_remaining = remaining;
    for (std::size_t k = 0; k < draw.size() && word_remaining > 0; ++k) {
      auto want = static_cast<std::size_t>(std::llround(probs.existing[k] *
                                                        static_cast<double>(remaining)));
      draw[k] = std::min({want, eligible[k].size(), word_remaining});
      word_remaining -= draw[k];
    }
    if (word_remaining > 0) {
      std::vector<std::size_t> order(draw.size());
      for (std::size_t k = 0; k < draw.size(); ++k) order[k] = k;
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return probs.existing[a] > probs.existing[b];
      });
      bool progress = true;
      while (word_remaining > 0 && progress) {
        progress = false;
        for (std::size_t k : order) {
          if (word_remaining == 0) break;
          if (draw[k] < eligible[k].size()) {
            ++draw[k];
            --word_remaining;
            progress = true;
          }
        }
      }
    }

    for (std::size_t k = 0; k < draw.size(); ++k) {
      if (draw[k] == 0) continue;
      auto picks = sample_without_replacement(eligible[k].size(), draw[k], rng);
      for (std::size_t idx : picks) {
        const std::string& v = eligible[k][idx];
        double c = pair_cosine(w_u, v, meanings, cache);
        ++stats.candidate_comparisons;
        if (c >= net.threshold_for(w_u, v)) net.set_edge(w_u, v, c);
      }
    }
    remaining = stats.budget - stats.candidate_comparisons;
  }
  return stats;
}

void update_cluster_assignments(ClusterState& state,
                                const std::vector<std::string>& updated_words,
                                const MeaningView& meanings) {
  auto updated = sorted_unique(updated_words);

  // affected: clusters a word left, joined, or stayed in with a changed
  // meaning; all need their prototype refreshed
  std::set<std::size_t> affected;
  for (const auto& w : updated) {
    const SparseVec& wvec = meanings.vec(w);
    auto current = state.cluster_of(w);
    if (state.clusters().empty()) {
      affected.insert(state.create_cluster(w));
      continue;
    }
    ClusterProbabilities probs = assign_cluster_probabilities(wvec, state);
    std::size_t best = 0;
    double best_p = -1.0;
    for (std::size_t k = 0; k < probs.existing.size(); ++k) {
      if (probs.existing[k] > best_p) {
        best_p = probs.existing[k];
        best = k;
      }
    }
    if (probs.novel > best_p) {
      if (current) {
        affected.insert(*current);
        state.detach_word(w);
      }
      affected.insert(state.create_cluster(w));
    } else if (current) {
      affected.insert(*current);
      if (*current != best) state.move_word(w, best);
      affected.insert(best);
    } else {
      state.insert_word(w, best);
      affected.insert(best);
    }
  }

  for (std::size_t k : affected)
    if (!state.clusters()[k].members.empty()) state.recompute_prototype(k, meanings);
  state.drop_empty_clusters();
}

UpdateStats update_incremental_network(SemanticNetwork& net, ClusterState& state,
                                       const std::vector<std::string>& updated_words,
                                       const MeaningView& meanings, Rng& rng,
                                       CosineCache* cache) {
  UpdateStats stats = update_network_edges(net, state, updated_words, meanings, rng, cache);
  update_cluster_assignments(state, updated_words, meanings);
  return stats;
}

}  // namespace semnet
