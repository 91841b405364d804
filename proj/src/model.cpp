#include "kalikow/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "kalikow/format.hpp"

namespace kalikow {

namespace {

constexpr double kMassTolerance = 1e-12;

std::string hex_digest(const std::string& canonical) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(canonical)));
  return buf;
}

bool inside(const std::vector<Region>& regions, const Spike& s) {
  return std::any_of(regions.begin(), regions.end(), [&](const Region& r) {
    return r.neuron == s.neuron && r.interval.contains(s.time);
  });
}

}  // namespace

double KalikowModel::phi_v(const NeuronId& i, const NeighborhoodTemplate& v, double anchor,
                           std::span<const Spike> accepted) const {
  if (v.empty()) {
    if (!accepted.empty()) {
      throw ContractViolation("points supplied for an empty neighborhood");
    }
    return phi_empty(i);
  }
  const auto regions = v.shifted(anchor);
  for (const auto& s : accepted) {
    if (!inside(regions, s)) {
      throw ContractViolation("point " + format_real(s.time) + " on " + to_string(s.neuron) +
                              " lies outside the shifted neighborhood");
    }
  }
  const double value = phi_local(i, v, accepted);
  if (!(value >= 0.0 && value <= bound())) {
    throw ContractViolation("local intensity " + format_real(value) + " outside [0, M]");
  }
  return value;
}

// ---------------------------------------------------------------------------
// FiniteHawkesModel

FiniteHawkesModel::FiniteHawkesModel(std::vector<NeuronId> neurons,
                                     std::vector<std::vector<double>> weights,
                                     std::vector<double> nu, double memory, double bound)
    : neurons_(std::move(neurons)),
      weights_(std::move(weights)),
      nu_(std::move(nu)),
      memory_(memory),
      bound_(bound) {
  const std::size_t n = neurons_.size();
  if (n == 0) throw std::invalid_argument("finite model needs at least one neuron");
  if (weights_.size() != n || nu_.size() != n) {
    throw std::invalid_argument("weights and nu must match the neuron count");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!index_.emplace(neurons_[i], i).second) {
      throw std::invalid_argument("duplicate neuron " + to_string(neurons_[i]));
    }
    if (weights_[i].size() != n) throw std::invalid_argument("weight matrix must be square");
    for (double w : weights_[i]) {
      if (!(w >= 0.0) || !std::isfinite(w)) {
        throw std::invalid_argument("weights must be finite and non-negative");
      }
    }
    if (!(nu_[i] >= 0.0) || !std::isfinite(nu_[i])) {
      throw std::invalid_argument("spontaneous rates must be finite and non-negative");
    }
  }
  if (!(memory_ > 0.0) || !std::isfinite(memory_)) {
    throw std::invalid_argument("memory window A must be positive");
  }
  if (!(bound_ > 0.0) || !std::isfinite(bound_)) {
    throw std::invalid_argument("bound M must be positive");
  }
}

FiniteHawkesModel FiniteHawkesModel::coupled(std::vector<NeuronId> neurons,
                                             std::vector<std::vector<double>> weights,
                                             double bound) {
  if (weights.empty()) throw std::invalid_argument("finite model needs at least one neuron");
  const double row = std::accumulate(weights[0].begin(), weights[0].end(), 0.0);
  for (const auto& r : weights) {
    if (std::abs(std::accumulate(r.begin(), r.end(), 0.0) - row) > 1e-12) {
      throw std::invalid_argument("coupled parameters need equal weight row sums");
    }
  }
  const double lambda_empty = 1.0 - row;
  if (!(lambda_empty > 0.0 && lambda_empty < 1.0)) {
    throw std::invalid_argument("coupled parameters need 0 < row sum < 1");
  }
  const double nu = 0.9 * bound * lambda_empty;
  const double memory = 0.9 / (bound * (1.0 - lambda_empty));
  std::vector<double> nus(neurons.size(), nu);
  return FiniteHawkesModel(std::move(neurons), std::move(weights), std::move(nus), memory, bound);
}

std::size_t FiniteHawkesModel::index_of(const NeuronId& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw std::out_of_range("neuron " + to_string(id) + " not in model");
  return it->second;
}

double FiniteHawkesModel::lambda_empty(const NeuronId& i) const {
  const auto& row = weights_[index_of(i)];
  return 1.0 - std::accumulate(row.begin(), row.end(), 0.0);
}

double FiniteHawkesModel::phi_empty(const NeuronId& i) const {
  return nu_[index_of(i)] / lambda_empty(i);
}

NeighborhoodTemplate FiniteHawkesModel::sample_neighborhood(const NeuronId& i,
                                                            RandomStream& rng) const {
  const std::size_t row = index_of(i);
  double u = rng.uniform();
  const double empty_mass = lambda_empty(i);
  if (u < empty_mass) return {};
  u -= empty_mass;
  std::size_t chosen = neurons_.size();
  for (std::size_t j = 0; j < neurons_.size(); ++j) {
    const double w = weights_[row][j];
    if (w <= 0.0) continue;
    chosen = j;
    if (u < w) break;
    u -= w;
  }
  if (chosen == neurons_.size()) return {};
  return NeighborhoodTemplate::single(neurons_[chosen], TimeInterval{-memory_, 0.0});
}

std::vector<std::pair<double, NeighborhoodTemplate>> FiniteHawkesModel::neighborhood_family(
    const NeuronId& i) const {
  const std::size_t row = index_of(i);
  std::vector<std::pair<double, NeighborhoodTemplate>> out;
  for (std::size_t j = 0; j < neurons_.size(); ++j) {
    if (weights_[row][j] > 0.0) {
      out.emplace_back(weights_[row][j],
                       NeighborhoodTemplate::single(neurons_[j], TimeInterval{-memory_, 0.0}));
    }
  }
  return out;
}

double FiniteHawkesModel::phi_local(const NeuronId&, const NeighborhoodTemplate&,
                                    std::span<const Spike> accepted) const {
  return std::min(static_cast<double>(accepted.size()), bound_);
}

double FiniteHawkesModel::hawkes_intensity(const NeuronId& i, double t,
                                           std::span<const Spike> history) const {
  const std::size_t row = index_of(i);
  std::vector<double> counts(neurons_.size(), 0.0);
  for (const auto& s : history) {
    if (!(s.time >= t - memory_ && s.time < t)) continue;
    if (auto it = index_.find(s.neuron); it != index_.end()) counts[it->second] += 1.0;
  }
  double rate = nu_[row];
  for (std::size_t j = 0; j < neurons_.size(); ++j) {
    rate += weights_[row][j] * std::min(counts[j], bound_);
  }
  return rate;
}

double FiniteHawkesModel::reconstructed_intensity(const NeuronId& i, double t,
                                                  std::span<const Spike> history) const {
  const double empty_mass = lambda_empty(i);
  double rate = empty_mass > 0.0 ? empty_mass * phi_empty(i) : 0.0;
  std::vector<Spike> inside_v;
  for (const auto& [mass, v] : neighborhood_family(i)) {
    const auto regions = v.shifted(t);
    inside_v.clear();
    for (const auto& s : history) {
      if (inside(regions, s)) inside_v.push_back(s);
    }
    rate += mass * phi_v(i, v, t, inside_v);
  }
  return rate;
}

ValidationReport FiniteHawkesModel::validate() const {
  ValidationReport report;
  report.min_lambda_empty = std::numeric_limits<double>::infinity();
  double worst_mass_error = 0.0;
  bool phi_ok = true;
  for (std::size_t i = 0; i < neurons_.size(); ++i) {
    const double empty_mass = lambda_empty(neurons_[i]);
    double total = empty_mass;
    double zeta = 0.0;
    for (const auto& [mass, v] : neighborhood_family(neurons_[i])) {
      total += mass;
      zeta += mass * v.total_length() * bound_;
    }
    if (std::abs(total - 1.0) >= worst_mass_error) {
      worst_mass_error = std::abs(total - 1.0);
      report.lambda_mass = total;
    }
    report.min_lambda_empty = std::min(report.min_lambda_empty, empty_mass);
    report.sparsity = std::max(report.sparsity, zeta);
    if (empty_mass <= 0.0) {
      phi_ok = false;
      report.messages.push_back("lambda(empty) <= 0 for neuron " + to_string(neurons_[i]) +
                                " (weight row sum must be < 1)");
      continue;
    }
    const double phi0 = nu_[i] / empty_mass;
    report.max_phi_empty = std::max(report.max_phi_empty, phi0);
    if (phi0 > bound_) {
      phi_ok = false;
      report.messages.push_back("phi^empty = " + format_real(phi0) + " exceeds M for neuron " +
                                to_string(neurons_[i]));
    }
  }
  report.mass_ok = worst_mass_error <= kMassTolerance;
  report.phi_empty_ok = phi_ok;
  report.sparsity_ok = report.sparsity < 1.0;
  if (!report.sparsity_ok) {
    report.messages.push_back("sparsity condition violated: zeta = " +
                              format_real(report.sparsity) + " >= 1");
  }
  return report;
}

std::string FiniteHawkesModel::fingerprint() const {
  std::string canonical = "finite;M=" + format_real(bound_) + ";A=" + format_real(memory_);
  for (std::size_t i = 0; i < neurons_.size(); ++i) {
    canonical += ";" + to_string(neurons_[i]) + ":nu=" + format_real(nu_[i]) + ":w=";
    for (double w : weights_[i]) canonical += format_real(w) + ",";
  }
  return hex_digest(canonical);
}

// ---------------------------------------------------------------------------
// LatticeGaussianHawkesModel

LatticeGaussianHawkesModel::LatticeGaussianHawkesModel(double sigma, double lambda_empty,
                                                       double bound)
    : sigma_(sigma), lambda_empty_(lambda_empty), bound_(bound) {
  if (!(sigma_ > 0.0) || !std::isfinite(sigma_)) throw std::invalid_argument("sigma must be > 0");
  if (!(lambda_empty_ >= 0.0 && lambda_empty_ <= 1.0)) {
    throw std::invalid_argument("lambda_empty must lie in [0, 1]");
  }
  if (!(bound_ > 0.0) || !std::isfinite(bound_)) throw std::invalid_argument("M must be > 0");
  nu_ = 0.9 * bound_ * lambda_empty_;
  memory_ = lambda_empty_ < 1.0 ? 0.9 / (bound_ * (1.0 - lambda_empty_))
                                : std::numeric_limits<double>::infinity();
}

NeighborhoodTemplate LatticeGaussianHawkesModel::sample_neighborhood(const NeuronId& i,
                                                                     RandomStream& rng) const {
  if (rng.uniform() < lambda_empty_) return {};
  const double wx = sigma_ * rng.normal();
  const double wy = sigma_ * rng.normal();
  const NeuronId j{i.x + static_cast<std::int64_t>(std::round(wx)),
                   i.y + static_cast<std::int64_t>(std::round(wy))};
  return NeighborhoodTemplate::single(j, TimeInterval{-memory_, 0.0});
}

double LatticeGaussianHawkesModel::cell_probability(std::int64_t k) const {
  // Phi(b) - Phi(a) = (erfc(-b/sqrt2) - erfc(-a/sqrt2)) / 2
  const double a = (static_cast<double>(k) - 0.5) / (sigma_ * std::sqrt(2.0));
  const double b = (static_cast<double>(k) + 0.5) / (sigma_ * std::sqrt(2.0));
  if (k > 0) return 0.5 * (std::erfc(a) - std::erfc(b));
  return 0.5 * (std::erfc(-b) - std::erfc(-a));
}

double LatticeGaussianHawkesModel::phi_local(const NeuronId&, const NeighborhoodTemplate&,
                                             std::span<const Spike> accepted) const {
  return std::min(static_cast<double>(accepted.size()), bound_);
}

ValidationReport LatticeGaussianHawkesModel::validate() const {
  ValidationReport report;
  // The per-axis kernel sums to 1 over Z; truncate where the tail is below
  // double precision.
  const auto reach = static_cast<std::int64_t>(std::ceil(12.0 * sigma_)) + 2;
  double axis = 0.0;
  for (std::int64_t k = -reach; k <= reach; ++k) axis += cell_probability(k);
  report.lambda_mass = lambda_empty_ + (1.0 - lambda_empty_) * axis * axis;
  report.mass_ok = std::abs(report.lambda_mass - 1.0) <= kMassTolerance;
  report.min_lambda_empty = lambda_empty_;
  report.sparsity = lambda_empty_ < 1.0 ? (1.0 - lambda_empty_) * memory_ * bound_ : 0.0;
  report.sparsity_ok = report.sparsity < 1.0;
  if (lambda_empty_ > 0.0) {
    report.max_phi_empty = nu_ / lambda_empty_;
    report.phi_empty_ok = report.max_phi_empty <= bound_;
  } else {
    report.phi_empty_ok = false;
    report.messages.push_back("lambda(empty) must be > 0");
  }
  if (!report.mass_ok) report.messages.push_back("neighborhood mass does not sum to 1");
  if (!report.sparsity_ok) {
    report.messages.push_back("sparsity condition violated: zeta = " +
                              format_real(report.sparsity) + " >= 1");
  }
  return report;
}

std::string LatticeGaussianHawkesModel::fingerprint() const {
  return hex_digest("lattice-gaussian;M=" + format_real(bound_) + ";sigma=" + format_real(sigma_) +
                    ";lambda_empty=" + format_real(lambda_empty_));
}

}  // namespace kalikow
