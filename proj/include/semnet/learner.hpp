#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "semnet/corpus.hpp"
#include "semnet/meanings.hpp"
#include "semnet/stats.hpp"

namespace semnet {

// Read access to per-word meaning distributions. Implemented both by the live
// learner (vectors change every pair) and by an immutable MeaningTable
// snapshot. Vectors handed out by one view share a feature id space; never mix
// vectors across views.
class MeaningView {
 public:
  virtual ~MeaningView() = default;
  virtual bool has(const std::string& word) const = 0;
  virtual const SparseVec& vec(const std::string& word) const = 0;
};

class MeaningTableView : public MeaningView {
 public:
  explicit MeaningTableView(const MeaningTable& table) : table_(table) {}
  bool has(const std::string& word) const override { return table_.contains(word); }
  const SparseVec& vec(const std::string& word) const override {
    return table_.vector_of(word);
  }

 private:
  const MeaningTable& table_;
};

// Per-pair word/feature alignment probabilities. For every feature row the
// probabilities over the utterance's distinct words sum to 1.
struct AlignmentTable {
  std::vector<std::string> words;          // distinct utterance words, sorted
  std::vector<std::string> features;       // scene features, sorted
  std::vector<std::vector<double>> probs;  // probs[feature][word]
};

// Incremental cross-situational learner. Meanings P(f|w) are kept as running
// association sums: assoc[w][f] accumulates the alignment mass ever granted to
// the cell, and P(f|w) = assoc[w][f] / sum_f' assoc[w][f']. Cells with no
// accumulated mass (unseen word, unseen feature, or never co-occurred) read as
// the uniform prior 1/(|observed features| + 1); the +1 holds out mass for
// the not-yet-seen remainder of the feature space.
class LearnerState : public MeaningView {
 public:
  // alignment probabilities for one pair under the current (time t) meanings;
  // does not modify state
  AlignmentTable align(const UtteranceScenePair& pair) const;

  // fold one pair's alignment table into the association sums; advances t
  void update(const AlignmentTable& table);

  void process(const UtteranceScenePair& pair) { update(align(pair)); }

  std::uint64_t t() const { return t_; }
  std::size_t n_features() const { return features_.size(); }
  std::size_t vocabulary_size() const { return words_.size(); }
  std::vector<std::string> vocabulary() const;

  bool has(const std::string& word) const override { return words_.count(word) != 0; }
  // current normalized meaning vector; cached until the word is next updated
  const SparseVec& vec(const std::string& word) const override;

  double probability(const std::string& word, const std::string& feature) const;
  double association(const std::string& word, const std::string& feature) const;
  double association_total(const std::string& word) const;

  std::vector<double> meaning_vector(const std::string& word,
                                     const std::vector<std::string>& feature_order) const;

  // immutable snapshot over lexicographically sorted features
  MeaningTable snapshot() const;

 private:
  struct WordStats {
    std::vector<std::uint32_t> feat_ids;  // sorted
    std::vector<KahanSum> sums;           // parallel to feat_ids
    KahanSum total;
  };

  double prior() const { return 1.0 / (static_cast<double>(features_.size()) + 1.0); }
  double previous_probability(const WordStats* ws, const std::string& feature) const;

  std::vector<std::string> features_;                 // id -> name, observation order
  std::map<std::string, std::uint32_t> feature_ids_;  // name -> id
  std::map<std::string, WordStats> words_;
  std::uint64_t t_ = 0;

  mutable std::map<std::string, SparseVec> vec_cache_;
};

struct LearnerSnapshot {
  std::uint64_t t = 0;
  MeaningTable meanings;
};

// JSON round trip: {"t": ..., "meanings": {word: {feature: probability}}}
void save_meanings(const LearnerState& state, std::ostream& out);
void save_meanings(const LearnerState& state, const std::string& path);
LearnerSnapshot load_meanings(std::istream& in);
LearnerSnapshot load_meanings_file(const std::string& path);

}  // namespace semnet
