#include "semnet/meanings.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace semnet {

void SparseVec::finalize() {
  std::sort(entries.begin(), entries.end());
  double ss = 0.0;
  for (const auto& [id, v] : entries) ss += v * v;
  norm = std::sqrt(ss);
}

double SparseVec::sum() const {
  double s = 0.0;
  for (const auto& [id, v] : entries) s += v;
  return s;
}

double cosine(const SparseVec& a, const SparseVec& b) {
  if (a.norm == 0.0 || b.norm == 0.0)
    throw std::invalid_argument("cosine: zero vector");
  double dot = 0.0;
  auto ia = a.entries.begin();
  auto ib = b.entries.begin();
  while (ia != a.entries.end() && ib != b.entries.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      dot += ia->second * ib->second;
      ++ia;
      ++ib;
    }
  }
  double c = dot / (a.norm * b.norm);
  return std::clamp(c, 0.0, 1.0);
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("cosine: dimension mismatch");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) throw std::invalid_argument("cosine: zero vector");
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), 0.0, 1.0);
}

MeaningTable::MeaningTable(std::vector<std::string> features,
                           std::map<std::string, SparseVec> words)
    : features_(std::move(features)), words_(std::move(words)) {
  for (std::uint32_t i = 0; i < features_.size(); ++i) feature_ids_[features_[i]] = i;
}

const SparseVec& MeaningTable::vector_of(const std::string& word) const {
  auto it = words_.find(word);
  if (it == words_.end())
    throw std::runtime_error("meaning table has no entry for word: " + word);
  return it->second;
}

double MeaningTable::probability(const std::string& word, const std::string& feature) const {
  const SparseVec& v = vector_of(word);
  auto fit = feature_ids_.find(feature);
  if (fit == feature_ids_.end()) return 0.0;
  auto eit = std::lower_bound(v.entries.begin(), v.entries.end(),
                              std::make_pair(fit->second, 0.0));
  if (eit == v.entries.end() || eit->first != fit->second) return 0.0;
  return eit->second;
}

std::vector<double> MeaningTable::dense_vector(
    const std::string& word, const std::vector<std::string>& feature_order) const {
  const SparseVec& v = vector_of(word);
  std::map<std::uint32_t, double> by_id;
  for (const auto& [id, p] : v.entries) by_id[id] = p;
  std::vector<double> out(feature_order.size(), 0.0);
  for (std::size_t i = 0; i < feature_order.size(); ++i) {
    auto fit = feature_ids_.find(feature_order[i]);
    if (fit == feature_ids_.end()) continue;
    auto vit = by_id.find(fit->second);
    if (vit != by_id.end()) out[i] = vit->second;
  }
  return out;
}

}  // namespace semnet
