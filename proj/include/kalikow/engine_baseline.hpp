#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "kalikow/model.hpp"

namespace kalikow {

/// Spike times per neuron, indexed like FiniteHawkesModel::neurons().
using SpikeTrains = std::vector<std::vector<double>>;

class CeilingViolated : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The intensity of neuron `i` at time s >= t assuming no spike in [t, s):
///   nu_i + sum_j w_ij min(N^j_[s-A, t), M).
/// `trains` must hold only spikes before t.
double intensity_without_new_spikes(const FiniteHawkesModel& model, const SpikeTrains& trains,
                                    std::size_t i, double s, double t);

/// Smallest T >= t with int_t^T phi_abs_i(s, t) ds = target, given the
/// sorted spike history before t. +inf if the integral stays below target.
double next_event_time(const FiniteHawkesModel& model, const SpikeTrains& history,
                       std::size_t i, double t, double target);

/// Event scheduling by inversion: every neuron draws E ~ Exp(1) and solves
/// int_t^T phi_abs(s, t) ds = E exactly over the piecewise-constant segments
/// of phi_abs; the earliest neuron spikes. Starts from an empty past at t0.
SpikeTrains simulate_ogata_inverse(const FiniteHawkesModel& model, double t0, double t1,
                                   std::uint64_t seed);

/// Thinning against a constant ceiling (default 2M): every neuron proposes
/// t + Exp(ceiling); the earliest proposal is kept with probability
/// phi_abs / ceiling.
SpikeTrains simulate_ogata_thinning(const FiniteHawkesModel& model, double t0, double t1,
                                    std::uint64_t seed, std::optional<double> ceiling = {});

/// Kalikow thinning run jointly on every neuron: rate-M candidate streams are
/// merged in time order, each candidate draws its neighborhood and is
/// accepted with probability phi^v / M, reading the already-marked past.
SpikeTrains simulate_kalikow_full(const FiniteHawkesModel& model, double t0, double t1,
                                  std::uint64_t seed);

}  // namespace kalikow
