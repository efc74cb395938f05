#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace semnet {

// Sparse probability vector over an interned feature space. Entries are sorted
// by feature id and strictly positive; norm is cached because cosine is the
// hot operation of network construction.
struct SparseVec {
  std::vector<std::pair<std::uint32_t, double>> entries;
  double norm = 0.0;

  void finalize();  // sorts entries, recomputes norm
  double sum() const;
};

// cosine of two sparse vectors in the same feature space, in [0,1] for
// non-negative inputs; throws if either vector is all-zero
double cosine(const SparseVec& a, const SparseVec& b);

// dense counterpart used at API edges and in tests
double cosine(const std::vector<double>& a, const std::vector<double>& b);

// Snapshot of learned word meanings in a shared feature space.
class MeaningTable {
 public:
  MeaningTable() = default;
  MeaningTable(std::vector<std::string> features,
               std::map<std::string, SparseVec> words);

  const std::vector<std::string>& features() const { return features_; }
  const std::map<std::string, SparseVec>& words() const { return words_; }
  bool contains(const std::string& word) const { return words_.count(word) != 0; }
  const SparseVec& vector_of(const std::string& word) const;

  // P(feature|word); 0 for a feature the word has no mass on
  double probability(const std::string& word, const std::string& feature) const;

  // densify one word over an arbitrary feature ordering; unknown word throws
  std::vector<double> dense_vector(const std::string& word,
                                   const std::vector<std::string>& feature_order) const;

 private:
  std::vector<std::string> features_;                  // id -> name
  std::map<std::string, std::uint32_t> feature_ids_;   // name -> id
  std::map<std::string, SparseVec> words_;
};

}  // namespace semnet
