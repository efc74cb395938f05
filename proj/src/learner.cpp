#include "semnet/learner.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace semnet {

double LearnerState::previous_probability(const WordStats* ws,
                                          const std::string& feature) const {
  if (ws == nullptr) return prior();
  auto fit = feature_ids_.find(feature);
  if (fit == feature_ids_.end()) return prior();
  auto it = std::lower_bound(ws->feat_ids.begin(), ws->feat_ids.end(), fit->second);
  if (it == ws->feat_ids.end() || *it != fit->second) return prior();
  return ws->sums[it - ws->feat_ids.begin()].value() / ws->total.value();
}

AlignmentTable LearnerState::align(const UtteranceScenePair& pair) const {
  if (pair.utterance.empty()) throw std::invalid_argument("align: empty utterance");
  if (pair.scene.empty()) throw std::invalid_argument("align: empty scene");

  AlignmentTable table;
  std::set<std::string> distinct(pair.utterance.begin(), pair.utterance.end());
  table.words.assign(distinct.begin(), distinct.end());
  table.features.assign(pair.scene.begin(), pair.scene.end());

  std::vector<const WordStats*> stats;
  stats.reserve(table.words.size());
  for (const auto& w : table.words) {
    auto it = words_.find(w);
    stats.push_back(it == words_.end() ? nullptr : &it->second);
  }

  table.probs.resize(table.features.size());
  for (std::size_t fi = 0; fi < table.features.size(); ++fi) {
    auto& row = table.probs[fi];
    row.resize(table.words.size());
    double denom = 0.0;
    for (std::size_t wi = 0; wi < table.words.size(); ++wi) {
      row[wi] = previous_probability(stats[wi], table.features[fi]);
      denom += row[wi];
    }
    for (double& p : row) p /= denom;
  }
  return table;
}

void LearnerState::update(const AlignmentTable& table) {
  for (const auto& f : table.features)
    if (feature_ids_.emplace(f, static_cast<std::uint32_t>(features_.size())).second)
      features_.push_back(f);

  for (std::size_t wi = 0; wi < table.words.size(); ++wi) {
    WordStats& ws = words_[table.words[wi]];
    for (std::size_t fi = 0; fi < table.features.size(); ++fi) {
      double add = table.probs[fi][wi];
      std::uint32_t id = feature_ids_.at(table.features[fi]);
      auto it = std::lower_bound(ws.feat_ids.begin(), ws.feat_ids.end(), id);
      std::size_t pos = it - ws.feat_ids.begin();
      if (it == ws.feat_ids.end() || *it != id) {
        ws.feat_ids.insert(it, id);
        ws.sums.insert(ws.sums.begin() + pos, KahanSum{});
      }
      ws.sums[pos].add(add);
      ws.total.add(add);
    }
    vec_cache_.erase(table.words[wi]);
  }
  ++t_;
}

std::vector<std::string> LearnerState::vocabulary() const {
  std::vector<std::string> out;
  out.reserve(words_.size());
  for (const auto& [w, s] : words_) out.push_back(w);
  return out;
}

const SparseVec& LearnerState::vec(const std::string& word) const {
  auto cit = vec_cache_.find(word);
  if (cit != vec_cache_.end()) return cit->second;
  auto it = words_.find(word);
  if (it == words_.end())
    throw std::runtime_error("learner has never observed word: " + word);
  const WordStats& ws = it->second;
  SparseVec v;
  v.entries.reserve(ws.feat_ids.size());
  double total = ws.total.value();
  for (std::size_t i = 0; i < ws.feat_ids.size(); ++i)
    v.entries.emplace_back(ws.feat_ids[i], ws.sums[i].value() / total);
  v.finalize();
  return vec_cache_.emplace(word, std::move(v)).first->second;
}

double LearnerState::probability(const std::string& word, const std::string& feature) const {
  auto it = words_.find(word);
  if (it == words_.end())
    throw std::runtime_error("learner has never observed word: " + word);
  auto fit = feature_ids_.find(feature);
  if (fit == feature_ids_.end()) return 0.0;
  const WordStats& ws = it->second;
  auto pit = std::lower_bound(ws.feat_ids.begin(), ws.feat_ids.end(), fit->second);
  if (pit == ws.feat_ids.end() || *pit != fit->second) return 0.0;
  return ws.sums[pit - ws.feat_ids.begin()].value() / ws.total.value();
}

double LearnerState::association(const std::string& word, const std::string& feature) const {
  auto it = words_.find(word);
  if (it == words_.end()) return 0.0;
  auto fit = feature_ids_.find(feature);
  if (fit == feature_ids_.end()) return 0.0;
  const WordStats& ws = it->second;
  auto pit = std::lower_bound(ws.feat_ids.begin(), ws.feat_ids.end(), fit->second);
  if (pit == ws.feat_ids.end() || *pit != fit->second) return 0.0;
  return ws.sums[pit - ws.feat_ids.begin()].value();
}

double LearnerState::association_total(const std::string& word) const {
  auto it = words_.find(word);
  return it == words_.end() ? 0.0 : it->second.total.value();
}

std::vector<double> LearnerState::meaning_vector(
    const std::string& word, const std::vector<std::string>& feature_order) const {
  auto it = words_.find(word);
  if (it == words_.end())
    throw std::runtime_error("learner has never observed word: " + word);
  std::vector<double> out(feature_order.size(), 0.0);
  for (std::size_t i = 0; i < feature_order.size(); ++i)
    out[i] = probability(word, feature_order[i]);
  return out;
}

MeaningTable LearnerState::snapshot() const {
  std::vector<std::string> sorted_features = features_;
  std::sort(sorted_features.begin(), sorted_features.end());
  std::map<std::uint32_t, std::uint32_t> remap;  // old id -> sorted id
  {
    std::map<std::string, std::uint32_t> sorted_ids;
    for (std::uint32_t i = 0; i < sorted_features.size(); ++i)
      sorted_ids[sorted_features[i]] = i;
    for (const auto& [name, id] : feature_ids_) remap[id] = sorted_ids.at(name);
  }

  std::map<std::string, SparseVec> out_words;
  for (const auto& [word, ws] : words_) {
    SparseVec v;
    v.entries.reserve(ws.feat_ids.size());
    double total = ws.total.value();
    for (std::size_t i = 0; i < ws.feat_ids.size(); ++i)
      v.entries.emplace_back(remap.at(ws.feat_ids[i]), ws.sums[i].value() / total);
    v.finalize();
    out_words[word] = std::move(v);
  }
  return MeaningTable(std::move(sorted_features), std::move(out_words));
}

void save_meanings(const LearnerState& state, std::ostream& out) {
  MeaningTable table = state.snapshot();
  nlohmann::json meanings = nlohmann::json::object();
  for (const auto& [word, v] : table.words()) {
    nlohmann::json entry = nlohmann::json::object();
    for (const auto& [id, p] : v.entries) entry[table.features()[id]] = p;
    meanings[word] = std::move(entry);
  }
  nlohmann::json doc{{"t", state.t()}, {"meanings", std::move(meanings)}};
  out << doc.dump(2) << "\n";
}

void save_meanings(const LearnerState& state, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  save_meanings(state, out);
}

LearnerSnapshot load_meanings(std::istream& in) {
  nlohmann::json doc = nlohmann::json::parse(in);
  if (!doc.contains("t") || !doc.contains("meanings"))
    throw std::runtime_error("meanings JSON must contain 't' and 'meanings'");

  std::set<std::string> feature_set;
  for (const auto& [word, entry] : doc.at("meanings").items())
    for (const auto& [feature, p] : entry.items()) feature_set.insert(feature);

  std::vector<std::string> features(feature_set.begin(), feature_set.end());
  std::map<std::string, std::uint32_t> ids;
  for (std::uint32_t i = 0; i < features.size(); ++i) ids[features[i]] = i;

  std::map<std::string, SparseVec> words;
  for (const auto& [word, entry] : doc.at("meanings").items()) {
    SparseVec v;
    for (const auto& [feature, p] : entry.items())
      v.entries.emplace_back(ids.at(feature), p.get<double>());
    v.finalize();
    words[word] = std::move(v);
  }

  LearnerSnapshot snap;
  snap.t = doc.at("t").get<std::uint64_t>();
  snap.meanings = MeaningTable(std::move(features), std::move(words));
  return snap;
}

LearnerSnapshot load_meanings_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open meanings file: " + path);
  return load_meanings(in);
}

}  // namespace semnet
