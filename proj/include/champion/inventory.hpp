#pragma once

// Periodic-review inventory with fixed setup cost and full backlogging:
// Poisson demand models, (s,S) benchmark policies evaluated exactly by
// renewal-reward, and the rolling-horizon champion policy built on OMA.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

#include "champion/error.hpp"
#include "champion/lot_sizing.hpp"
#include "champion/oma.hpp"
#include "champion/rng.hpp"

namespace champion {

// Probability mass on {0, 1, ..., size-1}.
class DiscretePmf {
 public:
  DiscretePmf() = default;
  explicit DiscretePmf(std::vector<double> mass) : mass_(std::move(mass)) {
    if (mass_.empty()) throw InvalidInput("pmf needs at least one point");
    double total = 0.0;
    for (double m : mass_) {
      if (!(m >= 0.0)) throw InvalidInput("pmf entries must be non-negative");
      total += m;
    }
    if (!(total > 0.0)) throw InvalidInput("pmf has zero total mass");
    cdf_.resize(mass_.size());
    double run = 0.0;
    for (std::size_t k = 0; k < mass_.size(); ++k) {
      mass_[k] /= total;
      run += mass_[k];
      cdf_[k] = run;
    }
    cdf_.back() = 1.0;
  }

  std::span<const double> mass() const noexcept { return mass_; }
  std::size_t support_size() const noexcept { return mass_.size(); }
  double operator[](std::size_t k) const { return k < mass_.size() ? mass_[k] : 0.0; }

  double mean() const {
    double m = 0.0;
    for (std::size_t k = 0; k < mass_.size(); ++k) m += static_cast<double>(k) * mass_[k];
    return m;
  }

  // Inverse-cdf draw from a uniform in [0, 1).
  std::int64_t quantile(double uniform) const {
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), uniform);
    return static_cast<std::int64_t>(std::min<std::ptrdiff_t>(it - cdf_.begin(),
                                                              static_cast<std::ptrdiff_t>(cdf_.size() - 1)));
  }

 private:
  std::vector<double> mass_;
  std::vector<double> cdf_;
};

inline constexpr double kPoissonTailMass = 1e-9;

/// Poisson(mu) cut at the first k whose cdf reaches 1 - 1e-9, renormalized.
/// The discarded tail is returned through `tail_mass` when requested.
inline DiscretePmf poisson_pmf(double mu, double* tail_mass = nullptr) {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw InvalidInput("Poisson mean must be positive");
  std::vector<double> mass;
  // log-space start keeps large means from underflowing exp(-mu)
  double log_term = -mu;
  double cdf = 0.0;
  for (std::size_t k = 0;; ++k) {
    if (k > 0) log_term += std::log(mu) - std::log(static_cast<double>(k));
    const double term = std::exp(log_term);
    mass.push_back(term);
    cdf += term;
    if (cdf >= 1.0 - kPoissonTailMass && static_cast<double>(k) >= mu) break;
    if (k > 100000) throw InvalidInput("Poisson mean too large for truncated pmf");
  }
  if (tail_mass) *tail_mass = std::max(0.0, 1.0 - cdf);
  return DiscretePmf(std::move(mass));
}

enum class DemandFamily { poisson, deterministic };

// Independent per-period demands with means mu_1..mu_N. The deterministic
// family always realizes round(mu_i) and exists for degenerate fixtures.
class DemandModel {
 public:
  DemandModel() = default;
  explicit DemandModel(std::vector<double> means, DemandFamily family = DemandFamily::poisson)
      : family_(family), means_(std::move(means)) {
    std::map<double, std::shared_ptr<const DiscretePmf>> built;
    for (double mu : means_) {
      if (family_ == DemandFamily::poisson) {
        if (!(mu > 0.0)) throw InvalidInput("Poisson period means must be positive");
        auto& slot = built[mu];
        if (!slot) slot = std::make_shared<const DiscretePmf>(poisson_pmf(mu));
        pmfs_.push_back(slot);
      } else if (!(mu >= 0.0) || std::round(mu) != mu) {
        throw InvalidInput("deterministic demands must be non-negative integers");
      }
    }
  }

  static DemandModel stationary(double mu, std::size_t periods, DemandFamily family = DemandFamily::poisson) {
    return DemandModel(std::vector<double>(periods, mu), family);
  }

  std::size_t length() const noexcept { return means_.size(); }
  DemandFamily family() const noexcept { return family_; }
  std::span<const double> means() const noexcept { return means_; }

  // Periods [offset, offset + count), sharing the cached pmfs.
  DemandModel slice(std::size_t offset, std::size_t count) const {
    if (offset + count > means_.size()) throw InvalidInput("demand model slice out of range");
    DemandModel out;
    out.family_ = family_;
    out.means_.assign(means_.begin() + offset, means_.begin() + offset + count);
    if (family_ == DemandFamily::poisson) {
      out.pmfs_.assign(pmfs_.begin() + offset, pmfs_.begin() + offset + count);
    }
    return out;
  }

  SamplePath sample(std::size_t periods, std::uint64_t stream_seed) const {
    if (periods > means_.size()) throw InvalidInput("requested path longer than the demand model");
    std::vector<std::int64_t> demands(periods);
    SplitMix64 rng(stream_seed);
    for (std::size_t i = 0; i < periods; ++i) {
      demands[i] = family_ == DemandFamily::poisson ? pmfs_[i]->quantile(rng.uniform())
                                                    : static_cast<std::int64_t>(means_[i]);
    }
    return SamplePath(std::move(demands));
  }

 private:
  DemandFamily family_ = DemandFamily::poisson;
  std::vector<double> means_;
  std::vector<std::shared_ptr<const DiscretePmf>> pmfs_;
};

inline SamplePath sample_path(const DemandModel& model, std::size_t periods, std::uint64_t stream_seed) {
  return model.sample(periods, stream_seed);
}

// Order up to `order_up_to` whenever pre-order inventory is at or below
// `reorder_point`.
struct SsPolicy {
  std::int64_t reorder_point = 0;  // s
  std::int64_t order_up_to = 1;    // S

  SsPolicy() = default;
  SsPolicy(std::int64_t s, std::int64_t S) : reorder_point(s), order_up_to(S) {
    if (!(s < S)) throw InvalidInput("(s,S) policy requires s < S");
  }

  std::int64_t order(std::int64_t inventory) const {
    return inventory <= reorder_point ? order_up_to - inventory : 0;
  }

  friend bool operator==(const SsPolicy&, const SsPolicy&) = default;
};

using PolicySchedule = std::vector<SsPolicy>;

namespace detail {

// E[H(y - D)] for every post-order level y in [lo, hi].
inline std::vector<double> expected_period_cost(const DiscretePmf& pmf, const CostRates& rates, std::int64_t lo,
                                                std::int64_t hi) {
  std::vector<double> g(static_cast<std::size_t>(hi - lo + 1), 0.0);
  const auto mass = pmf.mass();
  for (std::int64_t y = lo; y <= hi; ++y) {
    double e = 0.0;
    for (std::size_t d = 0; d < mass.size(); ++d) {
      e += mass[d] * maintenance_cost(y - static_cast<std::int64_t>(d), rates);
    }
    g[static_cast<std::size_t>(y - lo)] = e;
  }
  return g;
}

// Renewal mass m(k) = expected number of periods in a cycle whose cumulative
// demand since the cycle start equals k, for k < count.
inline std::vector<double> renewal_mass(const DiscretePmf& pmf, std::size_t count) {
  const double stay = pmf[0];
  if (stay >= 1.0 - 1e-15) throw InvalidInput("demand pmf has zero mean; (s,S) cycles never end");
  std::vector<double> m(count, 0.0);
  for (std::size_t k = 0; k < count; ++k) {
    double acc = k == 0 ? 1.0 : 0.0;
    const std::size_t top = std::min(k, pmf.support_size() - 1);
    for (std::size_t i = 1; i <= top; ++i) acc += pmf[i] * m[k - i];
    m[k] = acc / (1.0 - stay);
  }
  return m;
}

}  // namespace detail

/// Long-run average cost per period of an (s,S) policy under i.i.d. demand:
/// expected cycle cost over expected cycle length, where a cycle starts each
/// time inventory is raised to S.
inline double evaluate_ss_exact(const SsPolicy& policy, const DiscretePmf& pmf, const CostRates& rates) {
  if (!(pmf.mean() > 0.0)) throw InvalidInput("demand pmf has zero mean; (s,S) cycles never end");
  const auto span = static_cast<std::size_t>(policy.order_up_to - policy.reorder_point);
  const std::vector<double> m = detail::renewal_mass(pmf, span);
  const std::vector<double> g =
      detail::expected_period_cost(pmf, rates, policy.reorder_point + 1, policy.order_up_to);
  double cycle_cost = rates.setup;
  double cycle_length = 0.0;
  for (std::size_t k = 0; k < span; ++k) {
    cycle_cost += m[k] * g[span - 1 - k];
    cycle_length += m[k];
  }
  return cycle_cost / cycle_length;
}

struct SsSearchBounds {
  std::int64_t reorder_min = 0;
  std::int64_t reorder_max = 0;
  std::int64_t max_span = 1;  // largest S - s considered
};

/// s in [-5 mu, 5 mu], S - s up to 10 mu + ceil(2 sqrt(2 K mu / h)).
inline SsSearchBounds default_ss_bounds(double mu, const CostRates& rates) {
  if (!(rates.holding > 0.0)) throw InvalidInput("default (s,S) bounds need h > 0");
  const auto reach = static_cast<std::int64_t>(std::ceil(5.0 * mu));
  const auto eoq = static_cast<std::int64_t>(std::ceil(2.0 * std::sqrt(2.0 * rates.setup * mu / rates.holding)));
  return {-reach, reach, static_cast<std::int64_t>(std::ceil(10.0 * mu)) + eoq};
}

/// Exhaustive grid minimization of evaluate_ss_exact. Ties go to the
/// lexicographically smaller (s, S). Throws BoundaryError if the minimizer
/// lies on the edge of the grid.
inline SsPolicy optimal_ss(const DiscretePmf& pmf, const CostRates& rates, const SsSearchBounds& bounds) {
  if (bounds.reorder_min > bounds.reorder_max || bounds.max_span < 1) throw InvalidInput("empty (s,S) search grid");
  const auto max_span = static_cast<std::size_t>(bounds.max_span);
  const std::vector<double> m = detail::renewal_mass(pmf, max_span);
  const std::int64_t y_lo = bounds.reorder_min + 1;
  const std::int64_t y_hi = bounds.reorder_max + bounds.max_span;
  const std::vector<double> g = detail::expected_period_cost(pmf, rates, y_lo, y_hi);

  std::int64_t best_s = 0, best_S = 0;
  double best = std::numeric_limits<double>::infinity();
  bool found = false;
  // For fixed S the cycle sums grow one term at a time as s decreases.
  for (std::int64_t S = y_lo; S <= y_hi; ++S) {
    double cost = rates.setup;
    double length = 0.0;
    for (std::size_t k = 0; k < max_span; ++k) {
      const std::int64_t y = S - static_cast<std::int64_t>(k);
      if (y < y_lo) break;
      cost += m[k] * g[static_cast<std::size_t>(y - y_lo)];
      length += m[k];
      const std::int64_t s = y - 1;
      if (s > bounds.reorder_max) continue;
      const double avg = cost / length;
      if (!found || detail::strictly_less(avg, best) ||
          (detail::near(avg, best) && std::tie(s, S) < std::tie(best_s, best_S))) {
        found = true;
        best = avg;
        best_s = s;
        best_S = S;
      }
    }
  }
  if (best_s == bounds.reorder_min || best_s == bounds.reorder_max || best_S - best_s == bounds.max_span) {
    throw BoundaryError("optimal (s,S) lies on the search boundary; widen the bounds");
  }
  return SsPolicy(best_s, best_S);
}

inline SsPolicy optimal_ss(const DiscretePmf& pmf, const CostRates& rates) {
  return optimal_ss(pmf, rates, default_ss_bounds(pmf.mean(), rates));
}

// Thread-safe memo of optimal (s,S) per stationary Poisson mean and cost rates.
class SsTableCache {
 public:
  SsPolicy lookup(double mu, const CostRates& rates) {
    const Key key{mu, rates.setup, rates.holding, rates.penalty};
    std::lock_guard lock(mutex_);
    if (auto it = table_.find(key); it != table_.end()) return it->second;
    ++computations_;
    const SsPolicy policy = optimal_ss(poisson_pmf(mu), rates);
    table_.emplace(key, policy);
    return policy;
  }

  std::size_t computations() const {
    std::lock_guard lock(mutex_);
    return computations_;
  }

 private:
  using Key = std::tuple<double, double, double, double>;
  mutable std::mutex mutex_;
  std::map<Key, SsPolicy> table_;
  std::size_t computations_ = 0;
};

/// Per-period (s_i, S_i) taken as the stationary optimum for mean mu_i.
inline PolicySchedule heuristic_schedule(std::span<const double> means, const CostRates& rates, SsTableCache& cache) {
  PolicySchedule schedule;
  schedule.reserve(means.size());
  for (double mu : means) schedule.push_back(cache.lookup(mu, rates));
  return schedule;
}

inline PolicySchedule heuristic_schedule(std::span<const double> means, const CostRates& rates) {
  SsTableCache cache;
  return heuristic_schedule(means, rates, cache);
}

// Which sample supplies the order quantity once the gate says "order".
enum class MedianSource {
  forced,    // median of per-path solutions with a mandatory period-1 order
  positive,  // median of the positive unconstrained per-path solutions
};

struct ChampionStepConfig {
  std::size_t samples = 100;    // M
  std::size_t lookahead = 0;    // 0 means the whole forecast
  CostRates rates{64.0, 1.0, 9.0};
  MedianSource median_source = MedianSource::forced;
  std::size_t threads = 1;
};

struct ChampionDecision {
  std::int64_t order = 0;
  GateDecision gate;
  EmpiricalDistribution unconstrained;       // per-path u1, used by the gate
  std::optional<EmpiricalDistribution> sized;  // sample the quantity median came from
  std::optional<OmegaMedianEstimate> median;
};

/// One rolling-horizon decision: M sampled forecasts, each solved as a
/// lot-sizing problem from the current inventory. Order iff at least half
/// of the per-path first orders are positive; the quantity is then the
/// median of the sample selected by `median_source`.
inline ChampionDecision champion_decision(std::int64_t inventory, const DemandModel& forecast,
                                          const ChampionStepConfig& cfg, std::uint64_t seed) {
  if (cfg.samples == 0) throw InvalidInput("champion step needs M >= 1");
  if (forecast.length() == 0) throw InvalidInput("champion step needs a non-empty forecast");
  const std::size_t horizon = cfg.lookahead == 0 ? forecast.length() : std::min(cfg.lookahead, forecast.length());

  auto make_solver = [&](bool force) {
    return [&, force](const SamplePath& path) {
      LotSizingInstance inst{{path.demands().begin(), path.demands().end()}, inventory, cfg.rates};
      return omega_solution(inst, force);
    };
  };

  ChampionDecision out;
  out.unconstrained = EmpiricalDistribution(
      solve_sample_paths(forecast, make_solver(false), cfg.samples, horizon, seed, cfg.threads));
  out.gate = order_gate(out.unconstrained);
  if (!out.gate.place_order) return out;

  if (cfg.median_source == MedianSource::forced) {
    out.sized = EmpiricalDistribution(
        solve_sample_paths(forecast, make_solver(true), cfg.samples, horizon, seed, cfg.threads));
  } else {
    std::vector<std::int64_t> positive;
    for (auto u : out.unconstrained.values()) {
      if (u > 0) positive.push_back(u);
    }
    out.sized = EmpiricalDistribution(std::move(positive));
  }
  out.median = omega_median(*out.sized);
  out.order = out.median->value;
  return out;
}

inline std::int64_t champion_policy_step(std::int64_t inventory, const DemandModel& forecast,
                                         const ChampionStepConfig& cfg, std::uint64_t seed) {
  return champion_decision(inventory, forecast, cfg, seed).order;
}

// Rolling-horizon champion policy over a known sequence of period means.
class ChampionPolicy {
 public:
  ChampionPolicy(DemandModel means, ChampionStepConfig cfg, std::uint64_t seed)
      : model_(std::move(means)), cfg_(cfg), seed_(seed) {}

  std::int64_t order(std::size_t period, std::int64_t inventory) const {
    const DemandModel forecast = model_.slice(period, model_.length() - period);
    return champion_policy_step(inventory, forecast, cfg_, derive_seed(seed_, {period}));
  }

  const DemandModel& model() const noexcept { return model_; }

 private:
  DemandModel model_;
  ChampionStepConfig cfg_;
  std::uint64_t seed_;
};

using Policy = std::variant<SsPolicy, PolicySchedule, ChampionPolicy>;

struct SimulationRecord {
  std::vector<std::int64_t> orders;
  std::vector<std::int64_t> inventories;  // post-demand x_i
  std::vector<double> maintenance_costs;
  std::vector<double> setup_costs;
  double total_maintenance = 0.0;
  double total_setup = 0.0;
  double total_cost = 0.0;
  std::uint64_t demand_digest = 0;  // fingerprint of the realization consumed
};

/// FNV-1a over the demand values; used to show two runs saw the same path.
inline std::uint64_t path_digest(const SamplePath& path) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (auto d : path.demands()) {
    auto v = static_cast<std::uint64_t>(d);
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xFFu;
      h *= 0x100000001B3ULL;
    }
  }
  return h;
}

/// Plays a policy against one realization. Each period the policy sees the
/// pre-order inventory x_{i-1}, the order arrives immediately, then demand
/// d_i is subtracted and H(x_i) + K * 1(u_i > 0) is charged.
inline SimulationRecord simulate_policy(const Policy& policy, const SamplePath& path, std::int64_t initial_inventory,
                                        const CostRates& rates) {
  const std::size_t n = path.length();
  if (n == 0) throw InvalidInput("simulation needs at least one period");
  if (const auto* sched = std::get_if<PolicySchedule>(&policy); sched && sched->size() < n) {
    throw InvalidInput("policy schedule shorter than the sample path");
  }
  if (const auto* champ = std::get_if<ChampionPolicy>(&policy); champ && champ->model().length() < n) {
    throw InvalidInput("champion forecast shorter than the sample path");
  }

  SimulationRecord rec;
  rec.demand_digest = path_digest(path);
  std::int64_t x = initial_inventory;
  for (std::size_t i = 0; i < n; ++i) {
    const std::int64_t u = std::visit(
        [&](const auto& p) -> std::int64_t {
          using P = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<P, SsPolicy>) return p.order(x);
          else if constexpr (std::is_same_v<P, PolicySchedule>) return p[i].order(x);
          else return p.order(i, x);
        },
        policy);
    x = x + u - path[i];
    const double maintenance = maintenance_cost(x, rates);
    const double setup = u > 0 ? rates.setup : 0.0;
    rec.orders.push_back(u);
    rec.inventories.push_back(x);
    rec.maintenance_costs.push_back(maintenance);
    rec.setup_costs.push_back(setup);
    rec.total_maintenance += maintenance;
    rec.total_setup += setup;
  }
  rec.total_cost = rec.total_maintenance + rec.total_setup;
  return rec;
}

}  // namespace champion
