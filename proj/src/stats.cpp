#include "semnet/stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace semnet {

double mean(const std::vector<double>& xs) {
  if (xs.empty()) throw std::invalid_argument("mean: empty sample");
  KahanSum s;
  for (double x : xs) s.add(x);
  return s.value() / static_cast<double>(xs.size());
}

double sample_sd(const std::vector<double>& xs) {
  if (xs.size() < 2) throw std::invalid_argument("sample_sd: need at least 2 samples");
  double m = mean(xs);
  KahanSum ss;
  for (double x : xs) ss.add((x - m) * (x - m));
  return std::sqrt(ss.value() / static_cast<double>(xs.size() - 1));
}

double standard_error(const std::vector<double>& xs) {
  return sample_sd(xs) / std::sqrt(static_cast<double>(xs.size()));
}

namespace {

// Lentz's algorithm for the continued fraction of I_x(a,b).
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-16;
  constexpr double kTiny = 1e-300;

  double qab = a + b;
  double qap = a + 1.0;
  double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  throw std::runtime_error("incomplete_beta: continued fraction did not converge");
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (a <= 0.0 || b <= 0.0) throw std::invalid_argument("incomplete_beta: a,b must be positive");
  if (x < 0.0 || x > 1.0) throw std::invalid_argument("incomplete_beta: x outside [0,1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                    a * std::log(x) + b * std::log1p(-x);
  double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_cf(a, b, x) / a;
  }
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double student_t_sf(double t, double df) {
  if (df <= 0.0) throw std::invalid_argument("student_t_sf: df must be positive");
  double x = df / (df + t * t);
  double tail = 0.5 * incomplete_beta(0.5 * df, 0.5, x);
  return t >= 0.0 ? tail : 1.0 - tail;
}

TTestResult one_sided_t_test(const std::vector<double>& samples, double reference) {
  if (samples.size() < 2)
    throw std::invalid_argument("one_sided_t_test: need at least 2 samples, got " +
                                std::to_string(samples.size()));
  TTestResult r;
  r.n = samples.size();
  double m = mean(samples);
  double sd = sample_sd(samples);
  if (sd == 0.0) {
    r.degenerate = true;
    r.statistic = m > reference ? std::numeric_limits<double>::infinity()
                                : (m == reference ? 0.0 : -std::numeric_limits<double>::infinity());
    r.p = m > reference ? 0.0 : 1.0;
    return r;
  }
  double se = sd / std::sqrt(static_cast<double>(r.n));
  r.statistic = (m - reference) / se;
  r.p = student_t_sf(r.statistic, static_cast<double>(r.n - 1));
  return r;
}

}  // namespace semnet
