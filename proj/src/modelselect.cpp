#include "semnet/modelselect.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <stdexcept>

#include "json.hpp"
#include "semnet/pool.hpp"
#include "semnet/stats.hpp"

namespace semnet {

namespace {

void check_design(const Design& d) {
  if (d.rows.size() != d.labels.size())
    throw std::invalid_argument("design rows and labels differ in length");
  for (const auto& row : d.rows)
    if (row.size() != d.feature_names.size())
      throw std::invalid_argument("design row width does not match feature names");
  for (int y : d.labels)
    if (y != 0 && y != 1) throw std::invalid_argument("labels must be 0 or 1");
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

double log1pexp(double z) {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

// in-place Gaussian elimination with partial pivoting
std::vector<double> solve_linear(std::vector<std::vector<double>> a,
                                 std::vector<double> b) {
  std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
    if (std::fabs(a[pivot][col]) < 1e-300)
      throw std::runtime_error("singular normal equations in logistic fit");
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (std::size_t r = col + 1; r < n; ++r) {
      double f = a[r][col] / a[col][col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
    x[i] = s / a[i][i];
  }
  return x;
}

}  // namespace

Design balanced_sample(const Design& design, Rng& rng) {
  check_design(design);
  std::vector<std::size_t> zeros, ones;
  for (std::size_t i = 0; i < design.labels.size(); ++i)
    (design.labels[i] == 0 ? zeros : ones).push_back(i);
  if (zeros.empty() || ones.empty())
    throw std::runtime_error("balanced_sample: both classes must be present");

  auto& majority = zeros.size() >= ones.size() ? zeros : ones;
  std::size_t keep = std::min(zeros.size(), ones.size());
  if (majority.size() > keep) {
    auto picks = sample_without_replacement(majority.size(), keep, rng);
    std::sort(picks.begin(), picks.end());
    std::vector<std::size_t> kept;
    kept.reserve(keep);
    for (std::size_t p : picks) kept.push_back(majority[p]);
    majority = std::move(kept);
  }

  std::vector<std::size_t> indices;
  indices.reserve(2 * keep);
  indices.insert(indices.end(), zeros.begin(), zeros.end());
  indices.insert(indices.end(), ones.begin(), ones.end());
  std::sort(indices.begin(), indices.end());

  Design out;
  out.feature_names = design.feature_names;
  for (std::size_t i : indices) {
    out.rows.push_back(design.rows[i]);
    out.labels.push_back(design.labels[i]);
  }
  return out;
}

StandardizeReport standardize(Design& design) {
  check_design(design);
  if (design.rows.size() < 2)
    throw std::runtime_error("standardize: need at least 2 rows");

  std::size_t n_cols = design.feature_names.size();
  StandardizeReport report;
  std::vector<std::size_t> kept;
  for (std::size_t c = 0; c < n_cols; ++c) {
    std::vector<double> col;
    col.reserve(design.rows.size());
    for (const auto& row : design.rows) col.push_back(row[c]);
    double m = mean(col);
    double sd = sample_sd(col);
    if (sd == 0.0) {
      report.dropped.push_back(design.feature_names[c]);
      continue;
    }
    kept.push_back(c);
    report.means.push_back(m);
    report.sds.push_back(sd);
  }
  if (kept.empty()) throw std::runtime_error("standardize: every column is constant");

  std::vector<std::string> names;
  for (std::size_t c : kept) names.push_back(design.feature_names[c]);
  for (auto& row : design.rows) {
    std::vector<double> out;
    out.reserve(kept.size());
    for (std::size_t k = 0; k < kept.size(); ++k)
      out.push_back((row[kept[k]] - report.means[k]) / report.sds[k]);
    row = std::move(out);
  }
  design.feature_names = std::move(names);
  return report;
}

double logistic_loss(const std::vector<std::vector<double>>& rows,
                     const std::vector<int>& labels,
                     const std::vector<double>& coefficients, double intercept,
                     double l2) {
  KahanSum loss;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    double z = intercept;
    for (std::size_t j = 0; j < coefficients.size(); ++j)
      z += coefficients[j] * rows[i][j];
    loss.add(log1pexp(z) - labels[i] * z);
  }
  double penalty = 0.0;
  for (double w : coefficients) penalty += w * w;
  return loss.value() + 0.5 * l2 * penalty;
}

std::vector<double> logistic_gradient(const std::vector<std::vector<double>>& rows,
                                      const std::vector<int>& labels,
                                      const std::vector<double>& coefficients,
                                      double intercept, double l2) {
  std::vector<KahanSum> g(coefficients.size() + 1);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    double z = intercept;
    for (std::size_t j = 0; j < coefficients.size(); ++j)
      z += coefficients[j] * rows[i][j];
    double r = sigmoid(z) - labels[i];
    g[0].add(r);
    for (std::size_t j = 0; j < coefficients.size(); ++j) g[j + 1].add(r * rows[i][j]);
  }
  std::vector<double> out(coefficients.size() + 1, 0.0);
  out[0] = g[0].value();
  for (std::size_t j = 0; j < coefficients.size(); ++j)
    out[j + 1] = g[j + 1].value() + l2 * coefficients[j];
  return out;
}

LogisticModel fit_logistic(const std::vector<std::vector<double>>& rows,
                           const std::vector<int>& labels, double l2) {
  if (rows.empty()) throw std::invalid_argument("fit_logistic: no rows");
  if (rows.size() != labels.size())
    throw std::invalid_argument("fit_logistic: rows and labels differ in length");
  std::size_t n_features = rows.front().size();
  for (const auto& row : rows)
    if (row.size() != n_features)
      throw std::invalid_argument("fit_logistic: ragged rows");

  LogisticModel model;
  model.coefficients.assign(n_features, 0.0);
  constexpr std::size_t kMaxIter = 200;
  constexpr double kTol = 1e-8;

  double loss = logistic_loss(rows, labels, model.coefficients, model.intercept, l2);
  for (std::size_t iter = 0; iter < kMaxIter; ++iter) {
    std::vector<double> grad =
        logistic_gradient(rows, labels, model.coefficients, model.intercept, l2);
    double gmax = 0.0;
    for (double g : grad) gmax = std::max(gmax, std::fabs(g));
    if (gmax < kTol) {
      model.iterations = iter;
      return model;
    }

    std::size_t dim = n_features + 1;
    std::vector<std::vector<double>> hess(dim, std::vector<double>(dim, 0.0));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      double z = model.intercept;
      for (std::size_t j = 0; j < n_features; ++j)
        z += model.coefficients[j] * rows[i][j];
      double p = sigmoid(z);
      double s = p * (1.0 - p);
      hess[0][0] += s;
      for (std::size_t j = 0; j < n_features; ++j) {
        hess[0][j + 1] += s * rows[i][j];
        for (std::size_t k = j; k < n_features; ++k)
          hess[j + 1][k + 1] += s * rows[i][j] * rows[i][k];
      }
    }
    for (std::size_t j = 1; j < dim; ++j) hess[j][j] += l2;
    for (std::size_t j = 0; j < dim; ++j)
      for (std::size_t k = 0; k < j; ++k) hess[j][k] = hess[k][j];

    std::vector<double> neg_grad(dim);
    for (std::size_t j = 0; j < dim; ++j) neg_grad[j] = -grad[j];
    std::vector<double> step = solve_linear(hess, neg_grad);

    double t = 1.0;
    while (true) {
      std::vector<double> w = model.coefficients;
      double b = model.intercept + t * step[0];
      for (std::size_t j = 0; j < n_features; ++j) w[j] += t * step[j + 1];
      double trial = logistic_loss(rows, labels, w, b, l2);
      if (trial <= loss + 1e-12) {
        model.coefficients = std::move(w);
        model.intercept = b;
        loss = trial;
        break;
      }
      t *= 0.5;
      if (t < 1e-12)
        throw std::runtime_error("logistic fit: backtracking failed to reduce the loss");
    }
  }
  throw std::runtime_error("logistic fit did not reach gradient tolerance 1e-8 within " +
                           std::to_string(kMaxIter) + " iterations");
}

double logistic_probability(const LogisticModel& model, const std::vector<double>& row) {
  if (row.size() != model.coefficients.size())
    throw std::invalid_argument("logistic_probability: row width mismatch");
  double z = model.intercept;
  for (std::size_t j = 0; j < row.size(); ++j) z += model.coefficients[j] * row[j];
  return sigmoid(z);
}

std::vector<std::size_t> stratified_folds(const std::vector<int>& labels,
                                          std::size_t n_folds, std::uint64_t seed) {
  if (n_folds < 2) throw std::invalid_argument("stratified_folds: need at least 2 folds");
  std::vector<std::size_t> fold_of(labels.size(), 0);
  Rng rng(seed);
  std::size_t next_fold = 0;
  for (int cls : {0, 1}) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == cls) idx.push_back(i);
    if (idx.size() < n_folds)
      throw std::runtime_error("stratified_folds: class " + std::to_string(cls) +
                               " has " + std::to_string(idx.size()) +
                               " rows, fewer than " + std::to_string(n_folds) + " folds");
    shuffle(idx, rng);
    for (std::size_t i : idx) {
      fold_of[i] = next_fold;
      next_fold = (next_fold + 1) % n_folds;
    }
  }
  return fold_of;
}

double cv_accuracy(const Design& design, const std::vector<std::size_t>& fold_of,
                   std::size_t n_folds, const std::vector<std::size_t>& columns,
                   double l2) {
  check_design(design);
  if (fold_of.size() != design.rows.size())
    throw std::invalid_argument("cv_accuracy: fold assignment length mismatch");
  KahanSum acc;
  for (std::size_t f = 0; f < n_folds; ++f) {
    std::vector<std::vector<double>> train_x, test_x;
    std::vector<int> train_y, test_y;
    for (std::size_t i = 0; i < design.rows.size(); ++i) {
      std::vector<double> row;
      row.reserve(columns.size());
      for (std::size_t c : columns) row.push_back(design.rows[i][c]);
      if (fold_of[i] == f) {
        test_x.push_back(std::move(row));
        test_y.push_back(design.labels[i]);
      } else {
        train_x.push_back(std::move(row));
        train_y.push_back(design.labels[i]);
      }
    }
    if (test_x.empty() || train_x.empty())
      throw std::runtime_error("cv_accuracy: a fold is empty; too few rows");
    LogisticModel model = fit_logistic(train_x, train_y, l2);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < test_x.size(); ++i) {
      int pred = logistic_probability(model, test_x[i]) >= 0.5 ? 1 : 0;
      if (pred == test_y[i]) ++correct;
    }
    acc.add(static_cast<double>(correct) / static_cast<double>(test_x.size()));
  }
  return acc.value() / static_cast<double>(n_folds);
}

ModelSelection select_model(const Design& design, const SelectOptions& options) {
  check_design(design);
  std::size_t n_features = design.feature_names.size();
  if (n_features == 0) throw std::invalid_argument("select_model: no features");
  if (n_features > options.max_features)
    throw std::runtime_error("select_model: exhaustive search capped at " +
                             std::to_string(options.max_features) + " features, got " +
                             std::to_string(n_features));

  std::vector<std::size_t> fold_of =
      stratified_folds(design.labels, options.n_folds, derive_seed(options.seed, "skf"));

  auto columns_of = [&](std::uint32_t mask) {
    std::vector<std::size_t> columns;
    for (std::size_t j = 0; j < n_features; ++j)
      if (mask & (1u << j)) columns.push_back(j);
    return columns;
  };

  // subset fits are independent; the reduction below runs in mask order so
  // the winner is schedule-independent
  std::uint32_t n_masks = (1u << n_features) - 1;
  std::vector<double> accuracy(n_masks, 0.0);
  std::vector<std::exception_ptr> errors(n_masks);
  WorkerPool pool(options.n_threads);
  pool.run(n_masks, [&](std::size_t, std::size_t task) {
    try {
      accuracy[task] = cv_accuracy(design, fold_of, options.n_folds,
                                   columns_of(static_cast<std::uint32_t>(task + 1)),
                                   options.l2);
    } catch (...) {
      errors[task] = std::current_exception();
    }
  });
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  bool have_best = false;
  double best_acc = 0.0;
  std::vector<std::size_t> best_columns;
  std::vector<std::string> best_names;
  for (std::uint32_t mask = 1; mask <= n_masks; ++mask) {
    std::vector<std::size_t> columns = columns_of(mask);
    std::vector<std::string> names;
    for (std::size_t c : columns) names.push_back(design.feature_names[c]);
    double acc = accuracy[mask - 1];
    bool better = !have_best || acc > best_acc ||
                  (acc == best_acc && columns.size() < best_columns.size()) ||
                  (acc == best_acc && columns.size() == best_columns.size() &&
                   names < best_names);
    if (better) {
      have_best = true;
      best_acc = acc;
      best_columns = columns;
      best_names = names;
    }
  }

  std::vector<std::vector<double>> x;
  x.reserve(design.rows.size());
  for (const auto& row : design.rows) {
    std::vector<double> r;
    r.reserve(best_columns.size());
    for (std::size_t c : best_columns) r.push_back(row[c]);
    x.push_back(std::move(r));
  }
  ModelSelection sel;
  sel.features = best_names;
  sel.model = fit_logistic(x, design.labels, options.l2);
  sel.skf_accuracy = best_acc;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    int pred = logistic_probability(sel.model, x[i]) >= 0.5 ? 1 : 0;
    if (pred == design.labels[i]) ++correct;
  }
  sel.train_accuracy = static_cast<double>(correct) / static_cast<double>(x.size());
  return sel;
}

void save_model(const ModelSelection& selection, std::ostream& out) {
  nlohmann::json j;
  j["features"] = selection.features;
  j["intercept"] = selection.model.intercept;
  nlohmann::json coeffs = nlohmann::json::object();
  for (std::size_t i = 0; i < selection.features.size(); ++i)
    coeffs[selection.features[i]] = selection.model.coefficients[i];
  j["coefficients"] = coeffs;
  j["train_accuracy"] = selection.train_accuracy;
  j["skf_accuracy"] = selection.skf_accuracy;
  j["dropped_constant_features"] = selection.dropped_constant_features;
  out << j.dump(2) << "\n";
}

void save_model(const ModelSelection& selection, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  save_model(selection, out);
}

}  // namespace semnet
