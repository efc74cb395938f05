#include "semnet/fluency.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace semnet {

namespace {

bool disjoint(const std::set<std::string>& a, const std::set<std::string>& b) {
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib)
      ++ia;
    else if (*ib < *ia)
      ++ib;
    else
      return false;
  }
  return true;
}

std::set<std::string> intersect(const std::set<std::string>& a,
                                const std::set<std::string>& b) {
  std::set<std::string> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::inserter(out, out.begin()));
  return out;
}

}  // namespace

std::vector<SwitchAnnotation> annotate_switches(const std::vector<Retrieval>& retrievals,
                                                const CategoryNorms& norms,
                                                PatchModel model, const std::string& cue) {
  std::vector<SwitchAnnotation> out(retrievals.size());

  const std::set<std::string>* prev_cats = nullptr;  // last non-cue word
  std::set<std::string> cat_patch;   // running intersection, categorical tracker
  std::set<std::string> model_patch; // running intersection under chosen model
  bool any_word = false;
  std::size_t patch_id = 0;

  for (std::size_t i = 0; i < retrievals.size(); ++i) {
    SwitchAnnotation& a = out[i];
    if (retrievals[i].word == cue) {
      a.is_cue = true;
      a.current_patch_id = patch_id;
      continue;
    }
    const auto& cats = norms.categories_of(retrievals[i].word);
    if (!any_word) {
      any_word = true;
      cat_patch = cats;
      model_patch = cats;
      a.current_patch_id = patch_id;
      prev_cats = &cats;
      continue;
    }

    a.is_associative_switch = disjoint(cats, *prev_cats);

    auto cat_common = intersect(cat_patch, cats);
    a.is_categorical_switch = cat_common.empty();
    if (a.is_categorical_switch)
      cat_patch = cats;
    else
      cat_patch = std::move(cat_common);
    a.is_categorical_only = a.is_categorical_switch && !a.is_associative_switch;

    bool model_switch = model == PatchModel::associative ? a.is_associative_switch
                                                         : a.is_categorical_switch;
    if (model_switch) {
      ++patch_id;
      model_patch = cats;
    } else {
      auto common = intersect(model_patch, cats);
      model_patch = common.empty() ? cats : std::move(common);
    }
    a.current_patch_id = patch_id;
    prev_cats = &cats;
  }
  return out;
}

PositionSamples collect_position_samples(
    const std::vector<WalkRecord>& walks,
    const std::vector<std::vector<SwitchAnnotation>>& annotations, ProfileValue value,
    const MeaningView* meanings) {
  if (walks.size() != annotations.size())
    throw std::invalid_argument("collect_position_samples: walks/annotations size mismatch");
  if (value == ProfileValue::cosine && meanings == nullptr)
    throw std::invalid_argument("collect_position_samples: cosine profile needs meanings");

  PositionSamples out;
  KahanSum total;

  for (std::size_t wi = 0; wi < walks.size(); ++wi) {
    const auto& retrievals = walks[wi].retrievals;
    const auto& ann = annotations[wi];
    if (retrievals.size() != ann.size())
      throw std::invalid_argument("collect_position_samples: annotation length mismatch");

    // transition value entering retrieval i
    std::vector<double> incoming(retrievals.size(), 0.0);
    std::vector<bool> has_incoming(retrievals.size(), false);
    for (std::size_t i = 1; i < retrievals.size(); ++i) {
      double v;
      if (value == ProfileValue::irt) {
        if (!retrievals[i].irt)
          throw std::invalid_argument("collect_position_samples: missing irt");
        v = static_cast<double>(*retrievals[i].irt);
      } else {
        v = cosine(meanings->vec(retrievals[i - 1].word),
                   meanings->vec(retrievals[i].word));
      }
      incoming[i] = v;
      has_incoming[i] = true;
      total.add(v);
      ++out.n_transitions;
    }

    // non-cue retrievals in order, with their original indices
    std::vector<std::size_t> items;
    for (std::size_t i = 0; i < retrievals.size(); ++i)
      if (!ann[i].is_cue) items.push_back(i);
    if (items.empty()) continue;

    // within-patch index of each item under the model's patch ids
    std::vector<int> pos_in_patch(items.size(), 0);
    for (std::size_t m = 0; m < items.size(); ++m) {
      if (m == 0 || ann[items[m]].current_patch_id != ann[items[m - 1]].current_patch_id)
        pos_in_patch[m] = 1;
      else
        pos_in_patch[m] = pos_in_patch[m - 1] + 1;
    }

    for (std::size_t m = 0; m < items.size(); ++m) {
      std::size_t i = items[m];
      if (!has_incoming[i]) continue;
      bool first_patch = ann[i].current_patch_id == 0;
      if (pos_in_patch[m] == 1) {
        if (!first_patch) out.samples[1].push_back(incoming[i]);
      } else {
        out.samples[pos_in_patch[m]].push_back(incoming[i]);
      }
    }

    // negative positions: walk back over the patch preceding each entry
    for (std::size_t m = 1; m < items.size(); ++m) {
      if (pos_in_patch[m] != 1) continue;
      int back = -1;
      for (std::size_t q = m; q-- > 0;) {
        std::size_t i = items[q];
        if (has_incoming[i]) out.samples[back].push_back(incoming[i]);
        --back;
        if (pos_in_patch[q] == 1) break;  // reached the start of that patch
      }
    }
  }

  if (out.n_transitions > 0)
    out.long_term_mean = total.value() / static_cast<double>(out.n_transitions);
  return out;
}

PatchProfile summarize_profile(const PositionSamples& samples) {
  PatchProfile profile;
  profile.long_term_mean = samples.long_term_mean;
  for (const auto& [pos, vals] : samples.samples) {
    if (vals.empty()) continue;
    PositionStat st;
    st.n = vals.size();
    st.mean_ratio = mean(vals) / samples.long_term_mean;
    st.sem = vals.size() >= 2 ? standard_error(vals) / samples.long_term_mean : 0.0;
    profile.positions[pos] = st;
  }
  return profile;
}

MvtVerdict mvt_adherence(const PositionSamples& samples, const MvtOptions& options) {
  MvtVerdict v;
  auto pos1 = samples.samples.find(1);
  if (pos1 == samples.samples.end() || pos1->second.size() < 2) {
    v.indeterminate = true;
    return v;
  }
  v.pos1 = one_sided_t_test(pos1->second, samples.long_term_mean);
  bool pos1_above = v.pos1.p < options.alpha;

  bool inner_ok = true;
  std::vector<std::pair<int, double>> inner_means;
  for (const auto& [pos, vals] : samples.samples) {
    if (pos < 2 || pos > options.max_position) continue;
    if (vals.size() < std::max<std::size_t>(options.min_samples, 2)) continue;
    auto test = one_sided_t_test(vals, samples.long_term_mean);
    if (test.p < options.alpha) inner_ok = false;
    inner_means.emplace_back(pos, mean(vals));
    v.inner[pos] = test;
  }

  v.monotonicity_ok = true;
  for (std::size_t i = 1; i < inner_means.size(); ++i)
    if (inner_means[i].second < inner_means[i - 1].second - 1e-12)
      v.monotonicity_ok = false;

  v.adheres = pos1_above && inner_ok && v.monotonicity_ok;
  return v;
}

std::array<QuartileStat, 4> quartile_switch_proportions(
    const std::vector<WalkRecord>& walks,
    const std::vector<std::vector<SwitchAnnotation>>& annotations) {
  if (walks.size() != annotations.size())
    throw std::invalid_argument("quartile_switch_proportions: size mismatch");

  std::array<QuartileStat, 4> out{};
  std::array<std::vector<double>, 4> assoc_fracs, cat_only_fracs;

  for (std::size_t wi = 0; wi < walks.size(); ++wi) {
    const auto& ann = annotations[wi];
    std::vector<std::size_t> items;
    for (std::size_t i = 0; i < ann.size(); ++i)
      if (!ann[i].is_cue) items.push_back(i);
    if (items.empty()) continue;

    std::array<std::size_t, 4> n{}, na{}, nc{};
    for (std::size_t m = 0; m < items.size(); ++m) {
      std::size_t q = m * 4 / items.size();
      ++n[q];
      if (ann[items[m]].is_associative_switch) ++na[q];
      if (ann[items[m]].is_categorical_only) ++nc[q];
    }
    for (std::size_t q = 0; q < 4; ++q) {
      if (n[q] == 0) continue;
      out[q].n_items += n[q];
      assoc_fracs[q].push_back(static_cast<double>(na[q]) / static_cast<double>(n[q]));
      cat_only_fracs[q].push_back(static_cast<double>(nc[q]) / static_cast<double>(n[q]));
    }
  }

  for (std::size_t q = 0; q < 4; ++q) {
    if (assoc_fracs[q].empty()) continue;
    out[q].associative_frac = mean(assoc_fracs[q]);
    out[q].categorical_only_frac = mean(cat_only_fracs[q]);
    if (assoc_fracs[q].size() >= 2) {
      out[q].associative_sem = standard_error(assoc_fracs[q]);
      out[q].categorical_only_sem = standard_error(cat_only_fracs[q]);
    }
  }
  return out;
}

SwitchDurations switch_type_durations(
    const std::vector<WalkRecord>& walks,
    const std::vector<std::vector<SwitchAnnotation>>& annotations) {
  if (walks.size() != annotations.size())
    throw std::invalid_argument("switch_type_durations: size mismatch");

  std::vector<double> within, assoc, cat_only;
  for (std::size_t wi = 0; wi < walks.size(); ++wi) {
    const auto& retrievals = walks[wi].retrievals;
    const auto& ann = annotations[wi];
    for (std::size_t i = 1; i < retrievals.size(); ++i) {
      if (ann[i].is_cue || !retrievals[i].irt) continue;
      bool first_item = true;  // first non-cue retrieval has no transition type
      for (std::size_t j = i; j-- > 0;)
        if (!ann[j].is_cue) {
          first_item = false;
          break;
        }
      if (first_item) continue;
      auto v = static_cast<double>(*retrievals[i].irt);
      if (ann[i].is_associative_switch)
        assoc.push_back(v);
      else if (ann[i].is_categorical_only)
        cat_only.push_back(v);
      else
        within.push_back(v);
    }
  }

  auto pack = [](const std::vector<double>& xs) -> std::optional<MeanSem> {
    if (xs.empty()) return std::nullopt;
    MeanSem m;
    m.mean = mean(xs);
    m.sem = xs.size() >= 2 ? standard_error(xs) : 0.0;
    m.n = xs.size();
    return m;
  };
  SwitchDurations d;
  d.within_patch = pack(within);
  d.associative = pack(assoc);
  d.categorical_only = pack(cat_only);
  return d;
}

FluencyReport analyze_walks(const std::vector<WalkRecord>& walks,
                            const CategoryNorms& norms, const MeaningView& meanings,
                            const std::string& cue, PatchModel model,
                            const MvtOptions& options) {
  std::vector<std::vector<SwitchAnnotation>> annotations;
  annotations.reserve(walks.size());
  for (const auto& w : walks)
    annotations.push_back(annotate_switches(w.retrievals, norms, model, cue));

  FluencyReport report;
  auto irt_samples = collect_position_samples(walks, annotations, ProfileValue::irt);
  report.irt_profile = summarize_profile(irt_samples);
  report.mvt = mvt_adherence(irt_samples, options);
  auto cos_samples =
      collect_position_samples(walks, annotations, ProfileValue::cosine, &meanings);
  report.cosine_profile = summarize_profile(cos_samples);
  report.quartiles = quartile_switch_proportions(walks, annotations);
  report.durations = switch_type_durations(walks, annotations);
  return report;
}

namespace {

nlohmann::json test_to_json(const TTestResult& t) {
  return {{"statistic", t.statistic}, {"p", t.p}, {"n", t.n}, {"degenerate", t.degenerate}};
}

nlohmann::json profile_to_json(const PatchProfile& p) {
  nlohmann::json positions = nlohmann::json::object();
  for (const auto& [pos, st] : p.positions)
    positions[std::to_string(pos)] = {
        {"mean_irt_ratio", st.mean_ratio}, {"sem", st.sem}, {"n", st.n}};
  return {{"positions", std::move(positions)}, {"long_term_mean", p.long_term_mean}};
}

nlohmann::json duration_to_json(const std::optional<MeanSem>& d) {
  if (!d) return nullptr;
  return {{"mean", d->mean}, {"sem", d->sem}, {"n", d->n}};
}

}  // namespace

void save_report(const FluencyReport& report, std::ostream& out) {
  nlohmann::json inner = nlohmann::json::object();
  for (const auto& [pos, t] : report.mvt.inner) inner[std::to_string(pos)] = test_to_json(t);

  nlohmann::json quartiles = nlohmann::json::array();
  for (const auto& q : report.quartiles)
    quartiles.push_back({{"associative_frac", q.associative_frac},
                         {"associative_sem", q.associative_sem},
                         {"categorical_only_frac", q.categorical_only_frac},
                         {"categorical_only_sem", q.categorical_only_sem},
                         {"n_items", q.n_items}});

  nlohmann::json doc{
      {"mvt",
       {{"adheres", report.mvt.adheres},
        {"indeterminate", report.mvt.indeterminate},
        {"monotonicity_ok", report.mvt.monotonicity_ok},
        {"pos1_test", test_to_json(report.mvt.pos1)},
        {"per_position_tests", std::move(inner)}}},
      {"profile",
       {{"irt", profile_to_json(report.irt_profile)},
        {"cosine", profile_to_json(report.cosine_profile)}}},
      {"quartiles", std::move(quartiles)},
      {"durations",
       {{"within_patch", duration_to_json(report.durations.within_patch)},
        {"associative", duration_to_json(report.durations.associative)},
        {"categorical_only", duration_to_json(report.durations.categorical_only)}}}};
  out << doc.dump(2) << "\n";
}

void save_report(const FluencyReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  save_report(report, out);
}

}  // namespace semnet
