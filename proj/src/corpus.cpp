#include "semnet/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "semnet/rng.hpp"

namespace semnet {

namespace {

std::vector<std::string> split_tokens(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream iss(s);
  std::string tok;
  while (iss >> tok) out.push_back(tok);
  return out;
}

bool is_blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

}  // namespace

std::vector<UtteranceScenePair> parse_corpus(std::istream& in) {
  std::vector<UtteranceScenePair> pairs;
  std::string line;
  std::size_t line_no = 0;
  bool have_utterance = false;
  std::size_t utterance_line = 0;
  UtteranceScenePair current;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line[0] == '#') continue;
    if (is_blank(line)) {
      if (have_utterance)
        throw ParseError(utterance_line, "utterance record has no S: line before blank line");
      continue;
    }
    if (line.rfind("U:", 0) == 0) {
      if (have_utterance)
        throw ParseError(line_no, "U: line follows an utterance that never got its S: line");
      current.utterance = split_tokens(line.substr(2));
      if (current.utterance.empty()) throw ParseError(line_no, "empty utterance");
      utterance_line = line_no;
      have_utterance = true;
    } else if (line.rfind("S:", 0) == 0) {
      if (!have_utterance)
        throw ParseError(line_no, "S: line without a preceding U: line");
      auto feats = split_tokens(line.substr(2));
      if (feats.empty()) throw ParseError(line_no, "empty scene");
      current.scene = std::set<std::string>(feats.begin(), feats.end());
      pairs.push_back(std::move(current));
      current = UtteranceScenePair{};
      have_utterance = false;
    } else {
      throw ParseError(line_no, "expected U:, S:, comment, or blank line");
    }
  }
  if (have_utterance)
    throw ParseError(utterance_line, "utterance record has no S: line before end of file");
  return pairs;
}

std::vector<UtteranceScenePair> load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus file: " + path);
  return parse_corpus(in);
}

void serialize_corpus(const std::vector<UtteranceScenePair>& pairs, std::ostream& out) {
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (i) out << "\n";
    out << "U:";
    for (const auto& w : pairs[i].utterance) out << " " << w;
    out << "\nS:";
    for (const auto& f : pairs[i].scene) out << " " << f;
    out << "\n";
  }
}

const std::set<std::string>& CategoryNorms::categories_of(const std::string& word) const {
  auto it = memberships.find(word);
  if (it == memberships.end())
    throw std::runtime_error("word not present in category norms: " + word);
  return it->second;
}

CategoryNorms parse_norms(std::istream& in) {
  CategoryNorms norms;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
      throw ParseError(line_no, "expected exactly one comma in 'word,category' row");
    std::string word = line.substr(0, comma);
    std::string category = line.substr(comma + 1);
    if (!category.empty() && category.back() == '\r') category.pop_back();
    if (word.empty() || category.empty())
      throw ParseError(line_no, "empty word or category in norms row");
    norms.memberships[word].insert(category);
  }
  return norms;
}

CategoryNorms load_norms(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open norms file: " + path);
  return parse_norms(in);
}

void serialize_norms(const CategoryNorms& norms, std::ostream& out) {
  for (const auto& [word, cats] : norms.memberships)
    for (const auto& c : cats) out << word << "," << c << "\n";
}

namespace {

std::string pad2(std::size_t v) {
  return (v < 10 ? "0" : "") + std::to_string(v);
}

}  // namespace

SynthCorpus generate_synthetic_corpus(const SynthConfig& config) {
  if (config.n_categories == 0 || config.words_per_category == 0)
    throw std::invalid_argument("generate_synthetic_corpus: need at least one category and word");
  if (config.utterance_len_range.first == 0 ||
      config.utterance_len_range.first > config.utterance_len_range.second)
    throw std::invalid_argument("generate_synthetic_corpus: bad utterance length range");
  if (config.cue_rate < 0.0 || config.cue_rate > 1.0 ||
      config.distractor_rate < 0.0 || config.distractor_rate > 1.0 ||
      config.scene_noise_rate < 0.0 || config.scene_noise_rate > 1.0)
    throw std::invalid_argument("generate_synthetic_corpus: rates must lie in [0,1]");

  if (config.root_features == 0)
    throw std::invalid_argument("generate_synthetic_corpus: need at least one root feature");

  SynthCorpus out;
  out.gold.cue_word = "animal";
  out.gold.root_feature = "ANIMAL";
  std::vector<std::string> root_tier;
  for (std::size_t i = 0; i < config.root_features; ++i) {
    static const char* kHypernyms[] = {"ANIMAL", "ORGANISM", "ENTITY"};
    root_tier.push_back(i < 3 ? kHypernyms[i] : "ROOT_" + std::to_string(i));
  }

  const std::size_t k_cats = config.n_categories;
  const std::size_t wpc = config.words_per_category;

  // Bridge memberships: the first word(s) of category k also belong to
  // category k+1 (cyclically) and carry a slice of category features from
  // each side, so they sit between the two category cliques. Each bridge of
  // a pair takes its own slice, keeping bridges dissimilar to one another.
  std::size_t overlap = 0;
  if (k_cats >= 2) overlap = std::min(config.overlap_words, wpc > 1 ? wpc - 1 : 0);
  const std::size_t fpc = config.features_per_category;

  std::vector<std::string> animal_words;
  for (std::size_t k = 0; k < k_cats; ++k) {
    std::string cat_name = "cat" + std::to_string(k);
    for (std::size_t j = 0; j < wpc; ++j) {
      std::string word = "c" + std::to_string(k) + "w" + pad2(j);
      animal_words.push_back(word);
      std::set<std::string> feats(root_tier.begin(), root_tier.end());
      if (j < overlap) {
        std::size_t half = std::max<std::size_t>(1, fpc / 2 / std::max<std::size_t>(overlap, 1));
        for (std::size_t i = 0; i < half; ++i) {
          std::size_t slot = (j * half + i) % fpc;
          feats.insert("F" + std::to_string(k) + "_" + std::to_string(slot));
          feats.insert("F" + std::to_string((k + 1) % k_cats) + "_" + std::to_string(slot));
        }
      } else {
        for (std::size_t i = 0; i < fpc; ++i)
          feats.insert("F" + std::to_string(k) + "_" + std::to_string(i));
      }
      for (std::size_t i = 0; i < config.word_specific_features; ++i)
        feats.insert("FW_" + word + "_" + std::to_string(i));
      out.gold.meanings[word] = std::move(feats);
      out.gold.animal_words.insert(word);
      out.norms.memberships[word].insert(cat_name);
      if (j < overlap)
        out.norms.memberships[word].insert("cat" + std::to_string((k + 1) % k_cats));
    }
  }
  out.gold.meanings[out.gold.cue_word] =
      std::set<std::string>(root_tier.begin(), root_tier.end());

  const std::size_t n_distractors = std::max<std::size_t>(24, 2 * k_cats * wpc);
  std::vector<std::string> distractor_words;
  for (std::size_t i = 0; i < n_distractors; ++i) {
    std::string word = "d" + pad2(i);
    distractor_words.push_back(word);
    std::set<std::string> feats;
    for (std::size_t j = 0; j < 3; ++j)
      feats.insert("FD_" + std::to_string(i) + "_" + std::to_string(j));
    out.gold.meanings[word] = std::move(feats);
  }

  std::vector<std::string> feature_pool;
  {
    std::set<std::string> all;
    for (const auto& [w, feats] : out.gold.meanings) all.insert(feats.begin(), feats.end());
    feature_pool.assign(all.begin(), all.end());
  }

  Rng rng(derive_seed(config.seed, "synth-corpus"));
  const auto [len_min, len_max] = config.utterance_len_range;
  out.pairs.reserve(config.n_pairs);

  for (std::size_t p = 0; p < config.n_pairs; ++p) {
    UtteranceScenePair pair;
    std::size_t len = len_min + rng.uniform_index(len_max - len_min + 1);
    pair.utterance.push_back(animal_words[rng.uniform_index(animal_words.size())]);
    if (rng.uniform() < config.cue_rate && pair.utterance.size() < len)
      pair.utterance.push_back(out.gold.cue_word);
    while (pair.utterance.size() < len) {
      if (rng.uniform() < config.distractor_rate)
        pair.utterance.push_back(distractor_words[rng.uniform_index(distractor_words.size())]);
      else
        break;
    }

    std::set<std::string> gold_union;
    for (const auto& w : pair.utterance) {
      const auto& feats = out.gold.meanings.at(w);
      gold_union.insert(feats.begin(), feats.end());
    }
    if (config.scene_noise_rate == 0.0) {
      pair.scene = gold_union;
    } else {
      for (const auto& f : gold_union)
        if (rng.uniform() >= config.scene_noise_rate) pair.scene.insert(f);
      // additions are drawn once per gold feature so E[added] matches E[dropped]
      for (std::size_t i = 0; i < gold_union.size(); ++i)
        if (rng.uniform() < config.scene_noise_rate)
          pair.scene.insert(feature_pool[rng.uniform_index(feature_pool.size())]);
      if (pair.scene.empty()) {
        auto it = gold_union.begin();
        std::advance(it, rng.uniform_index(gold_union.size()));
        pair.scene.insert(*it);
      }
    }
    out.pairs.push_back(std::move(pair));
  }
  return out;
}

}  // namespace semnet
