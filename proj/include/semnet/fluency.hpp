#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "semnet/corpus.hpp"
#include "semnet/learner.hpp"
#include "semnet/stats.hpp"
#include "semnet/walker.hpp"

namespace semnet {

// Patch boundary criterion. The associative model starts a new patch when a
// word shares no category with the word retrieved just before it; the
// categorical model starts one when a word shares no category with every word
// of the current patch (tracked as the running intersection of member
// category sets).
enum class PatchModel { associative, categorical };

struct SwitchAnnotation {
  bool is_associative_switch = false;
  bool is_categorical_switch = false;
  bool is_categorical_only = false;  // categorical and not associative
  std::size_t current_patch_id = 0;  // under the chosen model
  bool is_cue = false;
};

// One annotation per retrieval. The cue word never enters patch logic: its
// flags stay false and it leaves the running patch untouched. Both switch
// criteria are always evaluated (the associative flag pairwise, the
// categorical flag via its own running-intersection tracker), so an
// associative switch is always also a categorical switch; the model parameter
// only decides which switches open a new patch.
std::vector<SwitchAnnotation> annotate_switches(const std::vector<Retrieval>& retrievals,
                                                const CategoryNorms& norms,
                                                PatchModel model, const std::string& cue);

enum class ProfileValue { irt, cosine };

// Raw per-transition samples grouped by patch entry position. Position 1 is
// the transition entering a new patch; position k >= 2 is the k-th item inside
// a patch; position -k is the k-th transition counting back from the next
// switch. The walk's opening transition out of the cue enters only the
// long-term mean, not position 1: no patch was left there.
struct PositionSamples {
  std::map<int, std::vector<double>> samples;
  double long_term_mean = 0.0;  // over every transition in the walk set
  std::size_t n_transitions = 0;
};

PositionSamples collect_position_samples(
    const std::vector<WalkRecord>& walks,
    const std::vector<std::vector<SwitchAnnotation>>& annotations, ProfileValue value,
    const MeaningView* meanings = nullptr);

struct PositionStat {
  double mean_ratio = 0.0;  // position mean / long-term mean
  double sem = 0.0;         // standard error on the same scale
  std::size_t n = 0;
};

struct PatchProfile {
  std::map<int, PositionStat> positions;
  double long_term_mean = 0.0;
};

PatchProfile summarize_profile(const PositionSamples& samples);

struct MvtOptions {
  double alpha = 0.05;
  int max_position = 5;          // highest within-patch position tested
  std::size_t min_samples = 10;  // positions with fewer samples are not tested
};

struct MvtVerdict {
  bool adheres = false;
  bool indeterminate = false;  // not enough position-1 samples to test
  bool monotonicity_ok = false;
  TTestResult pos1;                  // H1: position-1 mean > long-term mean
  std::map<int, TTestResult> inner;  // same test per within-patch position
};

// Marginal-value-theorem check: position-1 transitions significantly slower
// than the long-term mean, no within-patch position significantly slower, and
// within-patch means non-decreasing from position 2 upward.
MvtVerdict mvt_adherence(const PositionSamples& samples, const MvtOptions& options = {});

struct QuartileStat {
  double associative_frac = 0.0;
  double associative_sem = 0.0;
  double categorical_only_frac = 0.0;
  double categorical_only_sem = 0.0;
  std::size_t n_items = 0;  // pooled non-cue retrievals in this quartile
};

// Retrieval indices of each walk split into four equal bins; fractions are
// means of per-walk proportions, errors are standard errors across walks.
std::array<QuartileStat, 4> quartile_switch_proportions(
    const std::vector<WalkRecord>& walks,
    const std::vector<std::vector<SwitchAnnotation>>& annotations);

struct MeanSem {
  double mean = 0.0;
  double sem = 0.0;
  std::size_t n = 0;
};

struct SwitchDurations {
  std::optional<MeanSem> within_patch;
  std::optional<MeanSem> associative;
  std::optional<MeanSem> categorical_only;
};

// Mean IRT by transition type; types never observed stay empty.
SwitchDurations switch_type_durations(
    const std::vector<WalkRecord>& walks,
    const std::vector<std::vector<SwitchAnnotation>>& annotations);

struct FluencyReport {
  MvtVerdict mvt;
  PatchProfile irt_profile;
  PatchProfile cosine_profile;
  std::array<QuartileStat, 4> quartiles;
  SwitchDurations durations;
};

// Full analysis of a walk ensemble. Patch positions follow `model`; meanings
// feed the cosine profile.
FluencyReport analyze_walks(const std::vector<WalkRecord>& walks,
                            const CategoryNorms& norms, const MeaningView& meanings,
                            const std::string& cue,
                            PatchModel model = PatchModel::associative,
                            const MvtOptions& options = {});

void save_report(const FluencyReport& report, std::ostream& out);
void save_report(const FluencyReport& report, const std::string& path);

}  // namespace semnet
