#pragma once

// Omega Median Algorithm: sample M paths, solve the deterministic problem on
// each path, and take the median of the resulting per-path solutions.

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <span>
#include <utility>
#include <vector>

#include "champion/error.hpp"
#include "champion/parallel.hpp"
#include "champion/rng.hpp"

namespace champion {

// One demand realization d_1..d_N.
class SamplePath {
 public:
  SamplePath() = default;
  explicit SamplePath(std::vector<std::int64_t> demands) : demands_(std::move(demands)) {
    for (auto d : demands_) {
      if (d < 0) throw InvalidInput("sample path demands must be non-negative");
    }
  }

  std::span<const std::int64_t> demands() const noexcept { return demands_; }
  std::size_t length() const noexcept { return demands_.size(); }
  std::int64_t operator[](std::size_t i) const { return demands_[i]; }

  friend bool operator==(const SamplePath&, const SamplePath&) = default;

 private:
  std::vector<std::int64_t> demands_;
};

// Sorted sample of integer per-path solutions with the empirical cdf G_M and
// ccdf Gbar_M.
class EmpiricalDistribution {
 public:
  EmpiricalDistribution() = default;
  explicit EmpiricalDistribution(std::vector<std::int64_t> values) : values_(std::move(values)) {
    if (values_.empty()) throw InvalidInput("empirical distribution needs at least one value");
    std::sort(values_.begin(), values_.end());
  }

  std::span<const std::int64_t> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  std::size_t count_at_most(std::int64_t u) const {
    return static_cast<std::size_t>(std::upper_bound(values_.begin(), values_.end(), u) - values_.begin());
  }
  std::size_t count_at_least(std::int64_t u) const {
    return static_cast<std::size_t>(values_.end() - std::lower_bound(values_.begin(), values_.end(), u));
  }

  // Distinct values with G_M evaluated at each, ascending.
  std::vector<std::pair<std::int64_t, double>> cdf_steps() const {
    std::vector<std::pair<std::int64_t, double>> steps;
    const double m = static_cast<double>(values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (i + 1 == values_.size() || values_[i + 1] != values_[i]) {
        steps.emplace_back(values_[i], static_cast<double>(i + 1) / m);
      }
    }
    return steps;
  }

  friend bool operator==(const EmpiricalDistribution&, const EmpiricalDistribution&) = default;

 private:
  std::vector<std::int64_t> values_;
};

struct OmegaMedianEstimate {
  std::int64_t value = 0;
  double cdf_at_value = 0.0;
  double ccdf_at_value = 0.0;
  std::size_t sample_count = 0;

  friend bool operator==(const OmegaMedianEstimate&, const OmegaMedianEstimate&) = default;
};

// Whether to order at all: yes iff at least half of the per-path solutions are
// strictly positive.
struct GateDecision {
  bool place_order = false;
  double positive_fraction = 0.0;

  friend bool operator==(const GateDecision&, const GateDecision&) = default;
};

namespace detail {
inline void require_non_empty(const EmpiricalDistribution& dist) {
  if (dist.empty()) throw InvalidInput("empirical distribution is empty");
}
}  // namespace detail

/// G_M(u): fraction of values <= u.
inline double empirical_cdf(const EmpiricalDistribution& dist, std::int64_t u) {
  detail::require_non_empty(dist);
  return static_cast<double>(dist.count_at_most(u)) / static_cast<double>(dist.size());
}

/// Gbar_M(u): fraction of values >= u.
inline double empirical_ccdf(const EmpiricalDistribution& dist, std::int64_t u) {
  detail::require_non_empty(dist);
  return static_cast<double>(dist.count_at_least(u)) / static_cast<double>(dist.size());
}

/// Median of the sample: a value with G_M >= 1/2 and Gbar_M >= 1/2. When two
/// adjacent values qualify (even M) the lower one is returned.
inline OmegaMedianEstimate omega_median(const EmpiricalDistribution& dist) {
  detail::require_non_empty(dist);
  const std::size_t m = dist.size();
  // Index (M-1)/2 is the lowest sorted position with count_le >= M/2.
  const std::int64_t value = dist.values()[(m - 1) / 2];
  return OmegaMedianEstimate{value, empirical_cdf(dist, value), empirical_ccdf(dist, value), m};
}

inline GateDecision order_gate(const EmpiricalDistribution& dist) {
  detail::require_non_empty(dist);
  const std::size_t positive = dist.count_at_least(1);
  return GateDecision{2 * positive >= dist.size(),
                      static_cast<double>(positive) / static_cast<double>(dist.size())};
}

// A demand model draws a path of length N from an independent stream.
template <class M>
concept PathModel = requires(const M& model, std::size_t n, std::uint64_t stream_seed) {
  { model.sample(n, stream_seed) } -> std::convertible_to<SamplePath>;
};

// A per-path solver maps a path to its integer solution. It is called
// concurrently and must not keep mutable state.
template <class S>
concept PathSolver = requires(const S& solver, const SamplePath& path) {
  { solver(path) } -> std::convertible_to<std::int64_t>;
};

/// Seed of the i-th sample path under a master seed.
inline std::uint64_t path_stream_seed(std::uint64_t master_seed, std::size_t path_index) {
  return derive_seed(master_seed, {static_cast<std::uint64_t>(path_index)});
}

/// Steps 1-2: draw M paths and solve each. Output is in path-index order and
/// does not depend on `threads`.
template <PathModel Model, PathSolver Solver>
std::vector<std::int64_t> solve_sample_paths(const Model& model, const Solver& solver, std::size_t samples,
                                             std::size_t horizon, std::uint64_t seed, std::size_t threads = 1) {
  if (samples == 0) throw InvalidInput("sample count M must be >= 1");
  if (horizon == 0) throw InvalidInput("horizon N must be >= 1");
  std::vector<std::int64_t> solutions(samples);
  parallel_for(samples, threads, [&](std::size_t i) {
    const SamplePath path = model.sample(horizon, path_stream_seed(seed, i));
    try {
      solutions[i] = solver(path);
    } catch (const SolverError&) {
      throw;
    } catch (const std::exception& e) {
      throw SolverError(i, e.what());
    }
  });
  return solutions;
}

struct OmaResult {
  GateDecision gate;
  OmegaMedianEstimate median;
  EmpiricalDistribution distribution;
};

/// Full algorithm: sample, solve, then gate and median over the same sample.
template <PathModel Model, PathSolver Solver>
OmaResult run_oma(const Model& model, const Solver& solver, std::size_t samples, std::size_t horizon,
                  std::uint64_t seed, std::size_t threads = 1) {
  EmpiricalDistribution dist(solve_sample_paths(model, solver, samples, horizon, seed, threads));
  return OmaResult{order_gate(dist), omega_median(dist), std::move(dist)};
}

struct ConvergenceRow {
  std::size_t samples = 0;
  std::size_t trials = 0;
  std::size_t agreements = 0;
  double agreement = 0.0;
};

struct ConvergenceStudy {
  std::int64_t reference_median = 0;
  std::size_t reference_samples = 0;
  std::vector<ConvergenceRow> rows;
};

/// For each M in the grid, runs `trials` independent estimates and reports
/// how often they equal a reference median computed once with
/// `reference_samples` paths (0 selects 100 * max(grid)).
template <PathModel Model, PathSolver Solver>
ConvergenceStudy convergence_study(const Model& model, const Solver& solver, std::span<const std::size_t> grid,
                                   std::size_t trials, std::size_t horizon, std::uint64_t seed,
                                   std::size_t reference_samples = 0, std::size_t threads = 1) {
  if (grid.empty()) throw InvalidInput("convergence grid must be non-empty");
  if (trials == 0) throw InvalidInput("trials must be >= 1");
  const std::size_t max_m = *std::max_element(grid.begin(), grid.end());
  if (reference_samples == 0) reference_samples = 100 * max_m;

  ConvergenceStudy study;
  study.reference_samples = reference_samples;
  const std::uint64_t ref_seed = derive_seed(seed, {0x5245464552454E43ULL});
  study.reference_median =
      omega_median(EmpiricalDistribution(
                       solve_sample_paths(model, solver, reference_samples, horizon, ref_seed, threads)))
          .value;

  for (std::size_t m : grid) {
    std::vector<std::int64_t> medians(trials);
    parallel_for(trials, threads, [&](std::size_t t) {
      const std::uint64_t trial_seed = derive_seed(seed, {static_cast<std::uint64_t>(m), t});
      medians[t] = omega_median(EmpiricalDistribution(solve_sample_paths(model, solver, m, horizon, trial_seed)))
                       .value;
    });
    const auto hits = static_cast<std::size_t>(std::count(medians.begin(), medians.end(), study.reference_median));
    study.rows.push_back({m, trials, hits, static_cast<double>(hits) / static_cast<double>(trials)});
  }
  return study;
}

}  // namespace champion
