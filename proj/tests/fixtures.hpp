#pragma once

// Generators shared by the unit tests and the acceptance binary.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "champion/champion_oracle.hpp"
#include "champion/lot_sizing.hpp"

namespace champion::testing {

// Cost table of a scalar family J(u, w) on the grid u = 0..grid-1 that is
// unimodal in u for every w:
//   J(u, w) = c_w |u - u*_w| + a_w max(0, u - u*_w)^2 + b_w max(0, u*_w - u)^2
// with c_w > 0, so u*_w is the unique per-outcome minimizer.
struct UnimodalFamily {
  FinitePerformanceTable table;
  std::vector<std::int64_t> minimizers;  // u*_w per outcome
};

inline UnimodalFamily random_unimodal_family(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> grid_size(2, 15), outcome_count(1, 25);
  std::uniform_real_distribution<double> slope(0.25, 3.0), curvature(0.0, 1.0);
  const int grid = grid_size(rng);
  const int outcomes = outcome_count(rng);
  std::uniform_int_distribution<int> argmin(0, grid - 1);

  std::vector<std::string> labels;
  for (int u = 0; u < grid; ++u) labels.push_back(std::to_string(u));
  std::vector<std::vector<double>> costs(static_cast<std::size_t>(grid), std::vector<double>(outcomes));
  std::vector<std::int64_t> minimizers;
  for (int w = 0; w < outcomes; ++w) {
    const int star = argmin(rng);
    const double c = slope(rng), a = curvature(rng), b = curvature(rng);
    minimizers.push_back(star);
    for (int u = 0; u < grid; ++u) {
      const double right = u > star ? u - star : 0.0;
      const double left = u < star ? star - u : 0.0;
      costs[static_cast<std::size_t>(u)][static_cast<std::size_t>(w)] =
          c * (right + left) + a * right * right + b * left * left;
    }
  }
  return {FinitePerformanceTable::equiprobable(std::move(labels), std::move(costs)), std::move(minimizers)};
}

// Small lot-sizing instance drawn from the ranges used by the oracle
// equivalence checks.
inline LotSizingInstance random_small_instance(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> periods(1, 8), demand(0, 20), stock(-10, 10), pick(0, 2), pick2(0, 1);
  const double setups[] = {0.0, 16.0, 64.0};
  const double penalties[] = {1.0, 9.0};
  LotSizingInstance inst;
  inst.demands.resize(static_cast<std::size_t>(periods(rng)));
  for (auto& d : inst.demands) d = demand(rng);
  inst.initial_inventory = stock(rng);
  inst.rates = CostRates{setups[pick(rng)], 1.0, penalties[pick2(rng)]};
  return inst;
}

}  // namespace champion::testing
