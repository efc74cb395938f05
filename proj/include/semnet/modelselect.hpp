#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "semnet/rng.hpp"

namespace semnet {

// Row-major design matrix with binary labels.
struct Design {
  std::vector<std::string> feature_names;
  std::vector<std::vector<double>> rows;  // each row has feature_names.size() cells
  std::vector<int> labels;                // 0 or 1
};

// Downsample the majority class to the minority count, keeping row order.
// Throws if either class is absent.
Design balanced_sample(const Design& design, Rng& rng);

struct StandardizeReport {
  std::vector<std::string> dropped;  // constant columns removed from the design
  std::vector<double> means;         // per kept column
  std::vector<double> sds;           // sample standard deviations
};

// Z-score each column in place with the sample standard deviation; constant
// columns are dropped and reported. Throws if fewer than 2 rows or if every
// column is constant.
StandardizeReport standardize(Design& design);

struct LogisticModel {
  std::vector<double> coefficients;
  double intercept = 0.0;
  std::size_t iterations = 0;
};

// negative log likelihood plus 0.5 * l2 * |coefficients|^2 (intercept free)
double logistic_loss(const std::vector<std::vector<double>>& rows,
                     const std::vector<int>& labels,
                     const std::vector<double>& coefficients, double intercept,
                     double l2);

// gradient as [d/d intercept, d/d coefficients...]
std::vector<double> logistic_gradient(const std::vector<std::vector<double>>& rows,
                                      const std::vector<int>& labels,
                                      const std::vector<double>& coefficients,
                                      double intercept, double l2);

// Newton iterations with backtracking until the gradient max-norm drops below
// 1e-8; throws if that does not happen within the iteration cap.
LogisticModel fit_logistic(const std::vector<std::vector<double>>& rows,
                           const std::vector<int>& labels, double l2 = 1e-4);

double logistic_probability(const LogisticModel& model, const std::vector<double>& row);

// Fold id per row: each class is shuffled, then dealt round robin with the
// fold pointer carried across classes, so fold sizes differ by at most one
// both overall and within each class.
std::vector<std::size_t> stratified_folds(const std::vector<int>& labels,
                                          std::size_t n_folds, std::uint64_t seed);

// Mean of per-fold test accuracies for the given feature columns, training on
// the complement of each fold. Prediction threshold is p >= 0.5.
double cv_accuracy(const Design& design, const std::vector<std::size_t>& fold_of,
                   std::size_t n_folds, const std::vector<std::size_t>& columns,
                   double l2 = 1e-4);

struct SelectOptions {
  std::size_t n_folds = 3;
  std::uint64_t seed = 1;
  double l2 = 1e-4;
  std::size_t max_features = 16;  // exhaustive search cap
  std::size_t n_threads = 0;      // 0 = hardware concurrency
};

struct ModelSelection {
  std::vector<std::string> features;  // chosen subset, design order
  LogisticModel model;                // refit on the full design
  double train_accuracy = 0.0;
  double skf_accuracy = 0.0;          // cross-validated accuracy of the subset
  std::vector<std::string> dropped_constant_features;
};

// Exhaustive search over non-empty feature subsets with shared folds; best
// cross-validated accuracy wins, ties broken by fewer features, then by the
// lexicographically smaller name list.
ModelSelection select_model(const Design& design, const SelectOptions& options = {});

void save_model(const ModelSelection& selection, std::ostream& out);
void save_model(const ModelSelection& selection, const std::string& path);

}  // namespace semnet
