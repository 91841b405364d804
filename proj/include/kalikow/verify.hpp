#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace kalikow::verify {

/// Outcome of one acceptance criterion. `passed` already includes the
/// runtime budget.
struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  double budget_seconds = 0.0;
};

/// Lattice model with lambda(empty) = 1: accepted rate is Poisson(0.9 M).
CriterionResult poisson_reduction(std::uint64_t seed);
/// Single self-exciting neuron: backward-forward vs inversion oracle.
CriterionResult oracle_equivalence(std::uint64_t seed);
/// Inversion vs thinning vs full Kalikow thinning on a 3-neuron chain.
CriterionResult baseline_equivalence(std::uint64_t seed);
/// Decomposed intensity equals the direct clipped Hawkes intensity.
CriterionResult decomposition_identity(std::uint64_t seed);
/// Dominating branching tree at zeta = 0.9.
CriterionResult branching(std::uint64_t seed);
/// M = 2, sigma = 1, lambda(empty) = 0.25 run statistics.
CriterionResult reference_run(std::uint64_t seed);
/// Spread and cost trends across sigma, M and lambda(empty).
CriterionResult parameter_trends(std::uint64_t seed);
/// Exact fill disjointness and byte-identical reruns on random configs.
CriterionResult soundness_determinism(std::uint64_t seed);

/// Suites: poisson (1, 8), oracle (2, 3, 4), branching (5), figures (6, 7),
/// all. Throws std::invalid_argument on an unknown name.
std::vector<CriterionResult> run_suite(const std::string& suite, std::uint64_t seed);

std::string format_line(const CriterionResult& r);
std::string to_json(const std::vector<CriterionResult>& results);

}  // namespace kalikow::verify
