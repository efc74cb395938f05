#include <algorithm>
#include <deque>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "semnet/graphstats.hpp"
#include "semnet/meanings.hpp"

namespace semnet {

namespace {

// child < n is a point, child >= n is a cluster id
struct CondensedRow {
  std::size_t parent = 0;
  std::size_t child = 0;
  double lambda = 0.0;
  std::size_t size = 0;
};

double to_lambda(double distance) { return 1.0 / std::max(distance, 1e-12); }

struct Dendrogram {
  // row i merges children[i] at distance[i] into node n + i
  std::vector<std::pair<std::size_t, std::size_t>> children;
  std::vector<double> distance;
  std::vector<std::size_t> size;
};

// directed union-find: the parent side of a union stays the representative
struct TopUnionFind {
  std::vector<std::size_t> up;
  explicit TopUnionFind(std::size_t n) : up(n) { std::iota(up.begin(), up.end(), 0); }
  std::size_t find(std::size_t x) {
    while (up[x] != x) {
      up[x] = up[up[x]];
      x = up[x];
    }
    return x;
  }
  void attach(std::size_t parent, std::size_t child) { up[find(child)] = find(parent); }
};

Dendrogram single_linkage(std::size_t n, const std::vector<std::vector<double>>& mreach) {
  // Prim MST over the complete mutual-reachability graph
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> best_from(n, 0);
  std::vector<char> in_tree(n, 0);
  in_tree[0] = 1;
  for (std::size_t j = 1; j < n; ++j) {
    best[j] = mreach[0][j];
    best_from[j] = 0;
  }
  struct MstEdge {
    std::size_t a, b;
    double w;
  };
  std::vector<MstEdge> edges;
  edges.reserve(n - 1);
  for (std::size_t step = 1; step < n; ++step) {
    std::size_t pick = n;
    for (std::size_t j = 0; j < n; ++j)
      if (!in_tree[j] && (pick == n || best[j] < best[pick])) pick = j;
    edges.push_back({best_from[pick], pick, best[pick]});
    in_tree[pick] = 1;
    for (std::size_t j = 0; j < n; ++j)
      if (!in_tree[j] && mreach[pick][j] < best[j]) {
        best[j] = mreach[pick][j];
        best_from[j] = pick;
      }
  }
  std::stable_sort(edges.begin(), edges.end(),
                   [](const MstEdge& x, const MstEdge& y) { return x.w < y.w; });

  Dendrogram dend;
  dend.children.reserve(n - 1);
  TopUnionFind uf(2 * n - 1);
  std::vector<std::size_t> node_of(2 * n - 1);   // uf root -> dendrogram node id
  std::vector<std::size_t> size_of(2 * n - 1, 1);
  std::iota(node_of.begin(), node_of.end(), 0);
  std::size_t next = n;
  for (const auto& e : edges) {
    std::size_t ra = uf.find(e.a);
    std::size_t rb = uf.find(e.b);
    dend.children.emplace_back(node_of[ra], node_of[rb]);
    dend.distance.push_back(e.w);
    dend.size.push_back(size_of[ra] + size_of[rb]);
    uf.attach(ra, rb);
    std::size_t r = uf.find(ra);
    node_of[r] = next++;
    size_of[r] = dend.size.back();
  }
  return dend;
}

std::vector<CondensedRow> condense(const Dendrogram& dend, std::size_t n,
                                   std::size_t min_cluster_size) {
  std::size_t root = 2 * n - 2;
  std::vector<CondensedRow> rows;
  std::vector<std::size_t> relabel(2 * n - 1, 0);
  std::vector<char> ignore(2 * n - 1, 0);
  relabel[root] = n;  // condensed cluster ids start at n
  std::size_t next_label = n + 1;

  // level-order walk so a node's relabel is fixed before it is visited
  std::vector<std::size_t> order;
  std::deque<std::size_t> frontier{root};
  while (!frontier.empty()) {
    std::size_t u = frontier.front();
    frontier.pop_front();
    order.push_back(u);
    if (u >= n) {
      frontier.push_back(dend.children[u - n].first);
      frontier.push_back(dend.children[u - n].second);
    }
  }

  auto count_of = [&](std::size_t node) {
    return node < n ? std::size_t{1} : dend.size[node - n];
  };
  // all leaves of `side` fall out of `parent_label` at `lambda`
  auto shed = [&](std::size_t side, std::size_t parent_label, double lambda) {
    std::deque<std::size_t> q{side};
    while (!q.empty()) {
      std::size_t u = q.front();
      q.pop_front();
      ignore[u] = 1;
      if (u < n) {
        rows.push_back({parent_label, u, lambda, 1});
      } else {
        q.push_back(dend.children[u - n].first);
        q.push_back(dend.children[u - n].second);
      }
    }
  };

  for (std::size_t node : order) {
    if (node < n || ignore[node]) continue;
    auto [left, right] = dend.children[node - n];
    double lambda = to_lambda(dend.distance[node - n]);
    std::size_t lc = count_of(left), rc = count_of(right);
    std::size_t label = relabel[node];
    if (lc >= min_cluster_size && rc >= min_cluster_size) {
      relabel[left] = next_label;
      rows.push_back({label, next_label, lambda, lc});
      ++next_label;
      relabel[right] = next_label;
      rows.push_back({label, next_label, lambda, rc});
      ++next_label;
    } else if (lc < min_cluster_size && rc < min_cluster_size) {
      shed(left, label, lambda);
      shed(right, label, lambda);
    } else if (lc < min_cluster_size) {
      relabel[right] = label;
      shed(left, label, lambda);
    } else {
      relabel[left] = label;
      shed(right, label, lambda);
    }
  }
  return rows;
}

HdbscanResult hdbscan_from_distances(const std::vector<std::string>& names,
                                     const std::vector<std::vector<double>>& dist,
                                     std::size_t min_cluster_size) {
  if (min_cluster_size < 2)
    throw std::invalid_argument("hdbscan: min_cluster_size must be at least 2");
  std::size_t n = names.size();
  HdbscanResult out;
  if (n < min_cluster_size) {
    out.noise = names;
    std::sort(out.noise.begin(), out.noise.end());
    return out;
  }

  // core distance: min_samples-th smallest including self, min_samples = mcs
  std::vector<double> core(n);
  std::vector<double> scratch;
  for (std::size_t i = 0; i < n; ++i) {
    scratch = dist[i];
    std::nth_element(scratch.begin(), scratch.begin() + (min_cluster_size - 1),
                     scratch.end());
    core[i] = scratch[min_cluster_size - 1];
  }
  std::vector<std::vector<double>> mreach(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double m = std::max({core[i], core[j], dist[i][j]});
      mreach[i][j] = m;
      mreach[j][i] = m;
    }

  Dendrogram dend = single_linkage(n, mreach);
  std::vector<CondensedRow> rows = condense(dend, n, min_cluster_size);

  std::size_t max_id = n;
  for (const auto& r : rows) max_id = std::max({max_id, r.parent, r.child});

  // stability: sum of (lambda - birth lambda of parent) over all child rows
  std::vector<double> birth(max_id + 1, 0.0);
  for (const auto& r : rows)
    if (r.child >= n) birth[r.child] = r.lambda;
  std::vector<double> stability(max_id + 1, 0.0);
  for (const auto& r : rows)
    stability[r.parent] += (r.lambda - birth[r.parent]) * static_cast<double>(r.size);

  // excess-of-mass selection, deepest clusters first, root included
  std::vector<std::vector<std::size_t>> cluster_children(max_id + 1);
  for (const auto& r : rows)
    if (r.child >= n) cluster_children[r.parent].push_back(r.child);
  std::vector<char> is_cluster(max_id + 1, 0);
  for (std::size_t c = n; c <= max_id; ++c) is_cluster[c] = 1;
  for (std::size_t c = max_id + 1; c-- > n;) {
    double subtree = 0.0;
    for (std::size_t ch : cluster_children[c]) subtree += stability[ch];
    if (subtree > stability[c]) {
      is_cluster[c] = 0;
      stability[c] = subtree;
    } else {
      std::deque<std::size_t> q(cluster_children[c].begin(), cluster_children[c].end());
      while (!q.empty()) {
        std::size_t u = q.front();
        q.pop_front();
        is_cluster[u] = 0;
        for (std::size_t ch : cluster_children[u]) q.push_back(ch);
      }
    }
  }

  // collapse unselected children onto parents; a point's representative is its
  // lowest selected ancestor, or the root
  TopUnionFind uf(max_id + 1);
  for (const auto& r : rows)
    if (!(r.child >= n && is_cluster[r.child])) uf.attach(r.parent, r.child);

  double max_root_child_lambda = 0.0;
  for (const auto& r : rows)
    if (r.parent == n) max_root_child_lambda = std::max(max_root_child_lambda, r.lambda);
  std::vector<double> point_lambda(n, 0.0);
  for (const auto& r : rows)
    if (r.child < n) point_lambda[r.child] = r.lambda;

  std::map<std::size_t, std::vector<std::string>> members;
  for (std::size_t p = 0; p < n; ++p) {
    std::size_t rep = uf.find(p);
    bool member;
    if (rep == n)  // root: only a lone selected root keeps its points
      member = is_cluster[n] && point_lambda[p] >= max_root_child_lambda;
    else
      member = true;
    if (member)
      members[rep].push_back(names[p]);
    else
      out.noise.push_back(names[p]);
  }
  for (auto& [id, words] : members) {
    std::sort(words.begin(), words.end());
    out.clusters.push_back(std::move(words));
  }
  std::sort(out.clusters.begin(), out.clusters.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  std::sort(out.noise.begin(), out.noise.end());
  return out;
}

}  // namespace

HdbscanResult hdbscan_clusters(const std::map<std::string, std::vector<double>>& vectors,
                               std::size_t min_cluster_size) {
  std::vector<std::string> names;
  std::vector<const std::vector<double>*> vecs;
  for (const auto& [name, v] : vectors) {
    names.push_back(name);
    vecs.push_back(&v);
  }
  std::size_t n = names.size();
  std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double d = 1.0 - cosine(*vecs[i], *vecs[j]);
      dist[i][j] = d;
      dist[j][i] = d;
    }
  return hdbscan_from_distances(names, dist, min_cluster_size);
}

HdbscanResult hdbscan_clusters(const std::vector<std::string>& words,
                               const MeaningView& meanings,
                               std::size_t min_cluster_size) {
  std::vector<std::string> names = words;
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  for (const auto& w : names)
    if (!meanings.has(w))
      throw std::runtime_error("hdbscan: no meaning vector for word: " + w);
  std::size_t n = names.size();
  std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double d = 1.0 - cosine(meanings.vec(names[i]), meanings.vec(names[j]));
      dist[i][j] = d;
      dist[j][i] = d;
    }
  return hdbscan_from_distances(names, dist, min_cluster_size);
}

HdbscanResult hdbscan_clusters_graph(const SemanticNetwork& net,
                                     std::size_t min_cluster_size,
                                     const std::set<std::string>& exclude) {
  std::vector<std::string> names;
  for (const auto& [u, nbrs] : net.adjacency())
    if (exclude.count(u) == 0) names.push_back(u);
  std::map<std::string, std::size_t> ids;
  for (std::size_t i = 0; i < names.size(); ++i) ids[names[i]] = i;

  constexpr double kUnreachable = 1e6;
  std::size_t n = names.size();
  std::vector<std::vector<double>> dist(n, std::vector<double>(n, kUnreachable));
  for (std::size_t s = 0; s < n; ++s) {
    dist[s][s] = 0.0;
    std::deque<std::string> frontier{names[s]};
    std::map<std::string, std::size_t> hops{{names[s], 0}};
    while (!frontier.empty()) {
      std::string u = frontier.front();
      frontier.pop_front();
      for (const auto& [v, w] : net.neighbors(u)) {
        if (exclude.count(v) || hops.count(v)) continue;
        hops[v] = hops[u] + 1;
        dist[s][ids[v]] = static_cast<double>(hops[v]);
        frontier.push_back(v);
      }
    }
  }
  return hdbscan_from_distances(names, dist, min_cluster_size);
}

}  // namespace semnet
