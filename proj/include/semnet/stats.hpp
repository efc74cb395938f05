#pragma once

#include <cstddef>
#include <vector>

namespace semnet {

// Kahan compensated accumulator; keeps long running sums (association scores,
// prototype components) accurate to ~1 ulp regardless of summand count.
struct KahanSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double x) {
    double y = x - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

double mean(const std::vector<double>& xs);
// sample standard deviation (n-1 denominator); xs.size() >= 2
double sample_sd(const std::vector<double>& xs);
// sample_sd / sqrt(n)
double standard_error(const std::vector<double>& xs);

// Regularized incomplete beta I_x(a,b), continued-fraction evaluation.
double incomplete_beta(double a, double b, double x);

// Upper-tail probability of Student's t with df degrees of freedom.
double student_t_sf(double t, double df);

struct TTestResult {
  double statistic = 0.0;
  double p = 1.0;
  std::size_t n = 0;
  bool degenerate = false;  // zero-variance sample
};

// One-sample one-sided test of H1: mean(samples) > reference.
// Zero-variance samples short-circuit: p = 0 if mean > reference, else p = 1.
TTestResult one_sided_t_test(const std::vector<double>& samples, double reference);

}  // namespace semnet
