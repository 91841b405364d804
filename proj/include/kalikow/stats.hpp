#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>

namespace kalikow::stats {

class InsufficientData : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RateTestResult {
  double z = 0.0;
  bool passed = false;
};

/// Poisson count test: z = (count - rate L) / sqrt(rate L), passing iff
/// |z| < standard normal quantile(1 - alpha/2).
RateTestResult rate_test(std::size_t count, double expected_rate, double horizon_length,
                         double alpha);

/// Kolmogorov limiting survival function Q(x) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 x^2),
/// truncated at 20 terms.
double kolmogorov_survival(double x);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value
/// Q(sqrt(n m / (n + m)) D). Needs at least 20 observations per sample.
KsResult ks_two_sample(std::span<const double> xs, std::span<const double> ys);

struct MannWhitneyResult {
  double u = 0.0;          // U statistic of xs
  double z = 0.0;          // normal approximation, tie-corrected
  double p_greater = 1.0;  // one-sided p for "xs tend to exceed ys"
};

MannWhitneyResult mann_whitney(std::span<const double> xs, std::span<const double> ys);

/// Standard normal quantile and survival, backed by Boost.Math.
double normal_quantile(double p);
double normal_survival(double z);

double mean(std::span<const double> xs);
double variance(std::span<const double> xs);
double median(std::span<const double> xs);

}  // namespace kalikow::stats
