#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace semnet {

// One training observation: the words of an utterance paired with the feature
// set describing the scene it was produced in.
struct UtteranceScenePair {
  std::vector<std::string> utterance;  // token order as heard; may repeat
  std::set<std::string> scene;         // non-empty
};

struct ParseError : std::runtime_error {
  ParseError(std::size_t line, const std::string& what_arg)
      : std::runtime_error("line " + std::to_string(line) + ": " + what_arg),
        line_number(line) {}
  std::size_t line_number;
};

// Text format: records of
//   U: w1 w2 ...
//   S: f1 f2 ...
// separated by one blank line; '#' starts a comment line.
std::vector<UtteranceScenePair> parse_corpus(std::istream& in);
std::vector<UtteranceScenePair> load_corpus(const std::string& path);
void serialize_corpus(const std::vector<UtteranceScenePair>& pairs, std::ostream& out);

// Word -> category memberships from a "word,category" CSV (no header).
struct CategoryNorms {
  std::map<std::string, std::set<std::string>> memberships;

  const std::set<std::string>& categories_of(const std::string& word) const;
  bool contains(const std::string& word) const {
    return memberships.count(word) != 0;
  }
};

CategoryNorms parse_norms(std::istream& in);
CategoryNorms load_norms(const std::string& path);
void serialize_norms(const CategoryNorms& norms, std::ostream& out);

// Ground-truth meanings used by the generator and by learning diagnostics.
struct GoldLexicon {
  std::map<std::string, std::set<std::string>> meanings;  // word -> gold features
  std::set<std::string> animal_words;                     // excludes the cue word
  std::string cue_word;
  std::string root_feature;
};

struct SynthConfig {
  std::size_t n_categories = 6;
  std::size_t words_per_category = 12;
  std::size_t root_features = 3;  // hypernym features shared by every animal word
  std::size_t features_per_category = 4;
  std::size_t word_specific_features = 1;
  std::size_t overlap_words = 2;  // bridge words per category pair
  std::size_t n_pairs = 28000;
  std::pair<std::size_t, std::size_t> utterance_len_range = {2, 4};
  double cue_rate = 0.12;        // chance the cue word joins an utterance
  double distractor_rate = 0.25; // chance each filler slot holds a distractor
  double scene_noise_rate = 0.0;
  std::uint64_t seed = 1;
};

struct SynthCorpus {
  std::vector<UtteranceScenePair> pairs;
  GoldLexicon gold;
  CategoryNorms norms;
};

// Animal-domain vocabulary with a three-tier feature hierarchy (a root tier
// of hypernym features shared by every animal word, per-category features,
// per-word features) plus distractor words drawn from a disjoint pool. The
// cue word means exactly the root tier. The
// first words of each category are bridge words: they belong to two adjacent
// categories and split their category features between them, giving the
// overlapping memberships that switch analysis needs. Each utterance holds
// exactly one animal word so the root feature's credit is never divided
// between animal words.
SynthCorpus generate_synthetic_corpus(const SynthConfig& config);

}  // namespace semnet
