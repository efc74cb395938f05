#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "semnet/network.hpp"
#include "semnet/rng.hpp"

namespace semnet {

struct Retrieval {
  std::string word;
  // steps since the previous first visit; absent for the walk's first node
  std::optional<std::size_t> irt;
};

struct WalkRecord {
  std::uint64_t seed = 0;
  std::vector<std::string> steps;     // visited nodes, start first
  std::vector<Retrieval> retrievals;  // first visits in order
};

// Weighted random walk: from each node the next node is chosen among its
// neighbors with probability proportional to edge weight. The returned
// sequence has steps+1 entries (start included). Throws if start is missing
// or isolated.
std::vector<std::string> random_walk(const SemanticNetwork& net, const std::string& start,
                                     std::size_t steps, Rng& rng);

// First-visit retrievals with inter-retrieval step counts.
std::vector<Retrieval> extract_retrievals(const std::vector<std::string>& steps);

// n_walks independent walks from start; walk i runs on its own stream seeded
// derive_seed(master_seed, "walk", i), so the ensemble is reproducible and
// order-independent.
std::vector<WalkRecord> run_ensemble(const SemanticNetwork& net, const std::string& start,
                                     std::size_t steps, std::size_t n_walks,
                                     std::uint64_t master_seed);

// JSON: [{"seed": ..., "steps": [...], "retrievals": [{"word": w, "irt": n}, ...]}]
// (irt omitted on each walk's first retrieval)
void save_walks(const std::vector<WalkRecord>& walks, std::ostream& out);
void save_walks(const std::vector<WalkRecord>& walks, const std::string& path);
std::vector<WalkRecord> load_walks(std::istream& in);
std::vector<WalkRecord> load_walks_file(const std::string& path);

}  // namespace semnet
