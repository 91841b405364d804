#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kalikow/random.hpp"
#include "kalikow/types.hpp"

namespace kalikow {

class InvalidModel : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Outcome of checking a model's decomposition and sparsity conditions.
struct ValidationReport {
  double lambda_mass = 0.0;       // worst-case lambda_i(empty) + sum_v lambda_i(v)
  bool mass_ok = false;           // |mass - 1| <= 1e-12
  double min_lambda_empty = 0.0;  // inf_i lambda_i(empty)
  double max_phi_empty = 0.0;     // sup_i phi_i^empty
  bool phi_empty_ok = false;      // phi^empty <= M and lambda(empty) > 0
  double sparsity = 0.0;          // zeta = sup_i sum_{v != empty} lambda_i(v) l(v) M
  bool sparsity_ok = false;       // zeta < 1
  std::vector<std::string> messages;

  bool ok() const { return mass_ok && phi_empty_ok && sparsity_ok; }
};

/// A process admitting a Kalikow decomposition with bound M:
///   phi_i = lambda_i(empty) phi_i^empty + sum_{v != empty} lambda_i(v) phi_i^v
/// where each phi_i^v reads only the points inside the neighborhood v.
///
/// Implementations are immutable after construction; all randomness comes
/// from the caller's stream.
class KalikowModel {
 public:
  virtual ~KalikowModel() = default;

  virtual double bound() const = 0;

  /// Draws a neighborhood for neuron i according to lambda_i.
  virtual NeighborhoodTemplate sample_neighborhood(const NeuronId& i, RandomStream& rng) const = 0;

  virtual double phi_empty(const NeuronId& i) const = 0;

  /// Local intensity phi_i^v at `anchor`. `accepted` must hold exactly the
  /// accepted points inside v shifted to `anchor`; a point outside it is a
  /// ContractViolation. The result is always in [0, M].
  double phi_v(const NeuronId& i, const NeighborhoodTemplate& v, double anchor,
               std::span<const Spike> accepted) const;

  virtual ValidationReport validate() const = 0;

  /// Stable digest of the model parameters.
  virtual std::string fingerprint() const = 0;

 protected:
  /// phi_i^v for a non-empty v; inputs are already checked.
  virtual double phi_local(const NeuronId& i, const NeighborhoodTemplate& v,
                           std::span<const Spike> accepted) const = 0;
};

/// Clipped Hawkes intensity on a finite network,
///   phi_i(t) = nu_i + sum_j w_ij min(N^j_[t-A, t), M),
/// decomposed with lambda_i(empty) = 1 - sum_j w_ij, phi_i^empty =
/// nu_i / lambda_i(empty), lambda_i({(j,[-A,0))}) = w_ij and phi_i^v the
/// clipped count of j in the window.
class FiniteHawkesModel final : public KalikowModel {
 public:
  /// weights[i][j] is the influence of neurons[j] on neurons[i].
  FiniteHawkesModel(std::vector<NeuronId> neurons, std::vector<std::vector<double>> weights,
                    std::vector<double> nu, double memory, double bound);

  /// Parameters coupled as in the lattice experiments: every row of `weights`
  /// must share lambda(empty) = 1 - row sum, then nu = 0.9 M lambda(empty)
  /// and A = 0.9 / (M (1 - lambda(empty))).
  static FiniteHawkesModel coupled(std::vector<NeuronId> neurons,
                                   std::vector<std::vector<double>> weights, double bound);

  double bound() const override { return bound_; }
  NeighborhoodTemplate sample_neighborhood(const NeuronId& i, RandomStream& rng) const override;
  double phi_empty(const NeuronId& i) const override;
  ValidationReport validate() const override;
  std::string fingerprint() const override;

  /// Direct evaluation of the clipped Hawkes intensity. Points at or after t
  /// are outside the window and ignored.
  double hawkes_intensity(const NeuronId& i, double t, std::span<const Spike> history) const;

  /// The same intensity assembled from the decomposition: each enumerated
  /// neighborhood is shifted to t, its points extracted, and phi_v applied.
  double reconstructed_intensity(const NeuronId& i, double t,
                                 std::span<const Spike> history) const;

  /// The non-empty part of lambda_i: (lambda_i(v), v) for every j with w_ij > 0.
  std::vector<std::pair<double, NeighborhoodTemplate>> neighborhood_family(const NeuronId& i) const;

  double lambda_empty(const NeuronId& i) const;

  std::size_t size() const { return neurons_.size(); }
  const std::vector<NeuronId>& neurons() const { return neurons_; }
  std::size_t index_of(const NeuronId& id) const;
  double weight(std::size_t i, std::size_t j) const { return weights_[i][j]; }
  double nu(std::size_t i) const { return nu_[i]; }
  double memory() const { return memory_; }

 protected:
  double phi_local(const NeuronId& i, const NeighborhoodTemplate& v,
                   std::span<const Spike> accepted) const override;

 private:
  std::vector<NeuronId> neurons_;
  std::map<NeuronId, std::size_t> index_;
  std::vector<std::vector<double>> weights_;
  std::vector<double> nu_;
  double memory_;
  double bound_;
};

/// Translation-invariant clipped Hawkes model on Z^2. The weights are a
/// discretized centred Gaussian of standard deviation sigma scaled by
/// 1 - lambda(empty); nu and A are derived from (M, lambda(empty)) as
///   nu = 0.9 M lambda(empty),  A = 0.9 / (M (1 - lambda(empty))).
/// The neighborhood family is infinite and only ever sampled.
class LatticeGaussianHawkesModel final : public KalikowModel {
 public:
  LatticeGaussianHawkesModel(double sigma, double lambda_empty, double bound);

  double bound() const override { return bound_; }
  NeighborhoodTemplate sample_neighborhood(const NeuronId& i, RandomStream& rng) const override;
  double phi_empty(const NeuronId&) const override { return nu_ / lambda_empty_; }
  ValidationReport validate() const override;
  std::string fingerprint() const override;

  double sigma() const { return sigma_; }
  double lambda_empty() const { return lambda_empty_; }
  double nu() const { return nu_; }
  /// Window length A; +inf when lambda(empty) = 1 (no window is ever drawn).
  double memory() const { return memory_; }

  /// P(round(W) = k) for one coordinate, W ~ N(0, sigma^2), rounding half
  /// away from zero.
  double cell_probability(std::int64_t k) const;

 protected:
  double phi_local(const NeuronId& i, const NeighborhoodTemplate& v,
                   std::span<const Spike> accepted) const override;

 private:
  double sigma_;
  double lambda_empty_;
  double bound_;
  double nu_;
  double memory_;
};

}  // namespace kalikow
