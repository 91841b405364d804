#pragma once

// Helpers shared by the unit tests: a scripted model and statistical oracles
// that do not go through the library's own statistics code.

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "kalikow/model.hpp"

namespace kalikow::testing {

/// A model whose neighborhood choice and empty-neighborhood rate are given by
/// callbacks; phi^v is the clipped count, as for the Hawkes instantiations.
class ScriptedModel final : public KalikowModel {
 public:
  using Chooser = std::function<NeighborhoodTemplate(const NeuronId&, RandomStream&)>;

  ScriptedModel(double bound, Chooser chooser, std::function<double(const NeuronId&)> phi0)
      : bound_(bound), chooser_(std::move(chooser)), phi0_(std::move(phi0)) {}

  double bound() const override { return bound_; }
  NeighborhoodTemplate sample_neighborhood(const NeuronId& i, RandomStream& rng) const override {
    return chooser_(i, rng);
  }
  double phi_empty(const NeuronId& i) const override { return phi0_(i); }
  ValidationReport validate() const override {
    ValidationReport r;
    r.mass_ok = r.phi_empty_ok = r.sparsity_ok = true;
    return r;
  }
  std::string fingerprint() const override { return "scripted"; }

 protected:
  double phi_local(const NeuronId&, const NeighborhoodTemplate&,
                   std::span<const Spike> accepted) const override {
    return std::min(static_cast<double>(accepted.size()), bound_);
  }

 private:
  double bound_;
  Chooser chooser_;
  std::function<double(const NeuronId&)> phi0_;
};

inline double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// Kolmogorov limiting survival function, summed until terms vanish.
inline double kolmogorov_q(double x) {
  if (x <= 0.0) return 1.0;
  if (x < 0.3) return 1.0;
  double s = 0.0;
  for (int k = 1; k < 200; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    s += (k % 2 ? term : -term);
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * s, 0.0, 1.0);
}

/// One-sample KS p-value of `xs` against `cdf`.
inline double ks_one_sample_p(std::vector<double> xs, const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double f = cdf(xs[k]);
    d = std::max({d, std::abs(static_cast<double>(k + 1) / n - f),
                  std::abs(f - static_cast<double>(k) / n)});
  }
  return kolmogorov_q(std::sqrt(n) * d);
}

inline double poisson_pmf(unsigned k, double mean) {
  return std::exp(k * std::log(mean) - mean - std::lgamma(k + 1.0));
}

/// Pearson chi-square statistic; cells with expected count < 5 are pooled
/// into their neighbour. Returns (statistic, degrees of freedom).
inline std::pair<double, int> chi_square(const std::vector<double>& observed,
                                         const std::vector<double>& expected) {
  std::vector<double> o, e;
  double acc_o = 0.0, acc_e = 0.0;
  for (std::size_t k = 0; k < observed.size(); ++k) {
    acc_o += observed[k];
    acc_e += expected[k];
    if (acc_e >= 5.0) {
      o.push_back(acc_o);
      e.push_back(acc_e);
      acc_o = acc_e = 0.0;
    }
  }
  if (acc_e > 0.0 && !e.empty()) {
    o.back() += acc_o;
    e.back() += acc_e;
  }
  double stat = 0.0;
  for (std::size_t k = 0; k < o.size(); ++k) stat += (o[k] - e[k]) * (o[k] - e[k]) / e[k];
  return {stat, static_cast<int>(o.size()) - 1};
}

inline double chi_square_critical(int dof, double alpha) {
  return boost::math::quantile(boost::math::complement(boost::math::chi_squared(dof), alpha));
}

}  // namespace kalikow::testing
