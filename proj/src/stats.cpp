#include "kalikow/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/distributions/normal.hpp>

namespace kalikow::stats {

double normal_quantile(double p) {
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

double normal_survival(double z) {
  return boost::math::cdf(boost::math::complement(boost::math::normal_distribution<double>(), z));
}

RateTestResult rate_test(std::size_t count, double expected_rate, double horizon_length,
                         double alpha) {
  if (!(expected_rate > 0.0) || !(horizon_length > 0.0)) {
    throw std::invalid_argument("rate test needs a positive expected count");
  }
  const double expected = expected_rate * horizon_length;
  RateTestResult r;
  r.z = (static_cast<double>(count) - expected) / std::sqrt(expected);
  r.passed = std::abs(r.z) < normal_quantile(1.0 - alpha / 2.0);
  return r;
}

double kolmogorov_survival(double x) {
  // The alternating series converges too slowly below ~0.2 for 20 terms;
  // Q is 1 to double precision there anyway.
  if (x < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 20; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += (k % 2 == 1) ? term : -term;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() < 20 || ys.size() < 20) {
    throw InsufficientData("two-sample KS needs at least 20 observations per sample");
  }
  std::vector<double> a(xs.begin(), xs.end());
  std::vector<double> b(ys.begin(), ys.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double n = static_cast<double>(a.size());
  const double m = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
  }
  KsResult r;
  r.statistic = d;
  r.p_value = kolmogorov_survival(std::sqrt(n * m / (n + m)) * d);
  return r;
}

MannWhitneyResult mann_whitney(std::span<const double> xs, std::span<const double> ys) {
  if (xs.empty() || ys.empty()) throw InsufficientData("Mann-Whitney needs non-empty samples");
  struct Obs {
    double value;
    bool from_x;
  };
  std::vector<Obs> all;
  all.reserve(xs.size() + ys.size());
  for (double x : xs) all.push_back({x, true});
  for (double y : ys) all.push_back({y, false});
  std::sort(all.begin(), all.end(), [](const Obs& l, const Obs& r) { return l.value < r.value; });

  const double n1 = static_cast<double>(xs.size());
  const double n2 = static_cast<double>(ys.size());
  const double total = n1 + n2;
  double rank_sum_x = 0.0;
  double tie_term = 0.0;
  for (std::size_t k = 0; k < all.size();) {
    std::size_t end = k;
    while (end < all.size() && all[end].value == all[k].value) ++end;
    const double tied = static_cast<double>(end - k);
    const double avg_rank = (static_cast<double>(k + 1) + static_cast<double>(end)) / 2.0;
    for (std::size_t q = k; q < end; ++q) {
      if (all[q].from_x) rank_sum_x += avg_rank;
    }
    tie_term += tied * tied * tied - tied;
    k = end;
  }
  MannWhitneyResult r;
  r.u = rank_sum_x - n1 * (n1 + 1.0) / 2.0;
  const double mu = n1 * n2 / 2.0;
  const double var = n1 * n2 / 12.0 * ((total + 1.0) - tie_term / (total * (total - 1.0)));
  if (var <= 0.0) {
    r.z = 0.0;
    r.p_greater = 0.5;
    return r;
  }
  r.z = (r.u - mu) / std::sqrt(var);
  r.p_greater = normal_survival(r.z);
  return r;
}

double mean(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double variance(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double mu = mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - mu) * (x - mu);
  return s / static_cast<double>(xs.size() - 1);
}

double median(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  std::vector<double> v(xs.begin(), xs.end());
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 == 1 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

}  // namespace kalikow::stats
