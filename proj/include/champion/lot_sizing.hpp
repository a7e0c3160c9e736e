#pragma once

// Dynamic lot-sizing with fixed setup cost, linear holding and backlog costs,
// and the requirement that orders plus initial stock exactly cover demand
// ("zero inventory at last"). This is the deterministic per-path problem
// solved inside the rolling-horizon champion policy.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "champion/error.hpp"

namespace champion {

struct CostRates {
  double setup = 0.0;    // K, charged once per period with a positive order
  double holding = 0.0;  // h, per item held per period
  double penalty = 0.0;  // p, per item backlogged per period
};

/// H(x) = h * max(x, 0) + p * max(-x, 0)
inline double maintenance_cost(std::int64_t inventory, const CostRates& rates) {
  return inventory >= 0 ? rates.holding * static_cast<double>(inventory)
                        : rates.penalty * static_cast<double>(-inventory);
}

struct LotSizingInstance {
  std::vector<std::int64_t> demands;
  std::int64_t initial_inventory = 0;  // negative means backlog carried in
  CostRates rates;

  std::size_t periods() const noexcept { return demands.size(); }
  std::int64_t total_demand() const { return std::accumulate(demands.begin(), demands.end(), std::int64_t{0}); }
  // Orders can make the terminal inventory zero only if initial stock does not
  // already exceed total demand.
  bool terminal_feasible() const { return initial_inventory <= total_demand(); }

  void validate() const {
    if (demands.empty()) throw InvalidInput("lot-sizing instance needs N >= 1 periods");
    for (auto d : demands) {
      if (d < 0) throw InvalidInput("demands must be non-negative");
    }
    if (!(rates.setup >= 0.0) || !(rates.holding >= 0.0) || !(rates.penalty >= 0.0)) {
      throw InvalidInput("cost rates K, h, p must be non-negative");
    }
  }
};

struct LotSizingPlan {
  std::vector<std::int64_t> orders;       // u_1..u_N
  std::vector<std::int64_t> inventories;  // x_1..x_N, post-demand
  double total_cost = 0.0;
  bool feasible = true;  // false only when initial stock exceeds total demand
};

/// Runs the inventory recursion x_i = x_{i-1} - d_i + u_i and sums
/// H(x_i) + K * 1(u_i > 0). Used both to build plans and to audit them.
inline LotSizingPlan evaluate_orders(const LotSizingInstance& inst, std::vector<std::int64_t> orders) {
  if (orders.size() != inst.periods()) throw InvalidInput("order vector length must equal N");
  LotSizingPlan plan;
  plan.inventories.resize(orders.size());
  std::int64_t x = inst.initial_inventory;
  for (std::size_t i = 0; i < orders.size(); ++i) {
    if (orders[i] < 0) throw InvalidInput("orders must be non-negative");
    x = x - inst.demands[i] + orders[i];
    plan.inventories[i] = x;
    plan.total_cost += maintenance_cost(x, inst.rates) + (orders[i] > 0 ? inst.rates.setup : 0.0);
  }
  plan.orders = std::move(orders);
  plan.feasible = plan.inventories.back() == 0;
  return plan;
}

namespace detail {

inline bool strictly_less(double a, double b) { return a < b - 1e-9 * std::max(1.0, std::abs(b)); }
inline bool near(double a, double b) { return !strictly_less(a, b) && !strictly_less(b, a); }

// The regeneration-interval DP. In an optimal plan every unit of demand is
// served by exactly one order and each order covers a consecutive block of
// periods, so inventory is zero at block boundaries. Initial stock is used
// first-in-first-out; what it does not cover is the "net" demand below.
class IntervalDp {
 public:
  explicit IntervalDp(const LotSizingInstance& inst) : rates_(inst.rates), n_(inst.periods()) {
    net_.assign(inst.demands.begin(), inst.demands.end());
    const std::int64_t x0 = inst.initial_inventory;
    if (x0 < 0) {
      net_[0] += -x0;
    } else {
      std::int64_t stock = x0;
      for (std::size_t i = 0; i < n_; ++i) {
        const std::int64_t used = std::min(stock, net_[i]);
        net_[i] -= used;
        stock -= used;
        stock_holding_ += rates_.holding * static_cast<double>(stock);
      }
    }

    prefix_.assign(n_ + 1, 0);
    for (std::size_t i = 0; i < n_; ++i) prefix_[i + 1] = prefix_[i] + net_[i];
    prefix2_.assign(n_ + 1, 0);
    for (std::size_t i = 0; i < n_; ++i) prefix2_[i + 1] = prefix2_[i] + prefix_[i + 1];

    suffix_.assign(n_ + 1, 0.0);
    for (std::size_t j = n_; j-- > 0;) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t k = j; k < n_; ++k) {
        const double c = block_cost(j, k, best_order_period(j, k)) + suffix_[k + 1];
        best = std::min(best, c);
      }
      suffix_[j] = best;
    }
  }

  double optimal_cost() const { return stock_holding_ + suffix_[0]; }
  double stock_holding() const { return stock_holding_; }
  double suffix(std::size_t j) const { return suffix_[j]; }
  std::int64_t net_demand(std::size_t j, std::size_t k) const { return prefix_[k + 1] - prefix_[j]; }
  std::size_t periods() const { return n_; }

  // Setup plus backlog and holding cost of serving net demand in periods
  // j..k from a single order placed in period t (j <= t <= k). Zero when the
  // block carries no demand.
  double block_cost(std::size_t j, std::size_t k, std::size_t t) const {
    if (net_demand(j, k) == 0) return 0.0;
    const auto jj = static_cast<std::int64_t>(j), kk = static_cast<std::int64_t>(k), tt = static_cast<std::int64_t>(t);
    const std::int64_t backlog = (prefix2_[t] - prefix2_[j]) - (tt - jj) * prefix_[j];
    const std::int64_t held = (kk - tt) * prefix_[k + 1] - (prefix2_[k] - prefix2_[t]);
    return rates_.setup + rates_.penalty * static_cast<double>(backlog) + rates_.holding * static_cast<double>(held);
  }

  // Moving the order from t to t+1 changes the cost by
  // p * D(j..t) - h * D(t+1..k), which is non-decreasing in t; the earliest t
  // where it is non-negative is the earliest optimal order period.
  std::size_t best_order_period(std::size_t j, std::size_t k, std::size_t lo = 0) const {
    std::size_t a = std::max(j, lo), b = k;
    while (a < b) {
      const std::size_t mid = a + (b - a) / 2;
      if (move_later_delta(j, k, mid) >= 0.0) b = mid; else a = mid + 1;
    }
    return a;
  }

  // Plan with the deterministic tie-break: smallest u_1, then earliest orders.
  std::vector<std::int64_t> reconstruct() const {
    std::vector<std::int64_t> orders(n_, 0);
    const double target = suffix_[0];

    // First block: distinguish ordering in period 1 from ordering later.
    std::size_t first_k = n_;
    std::size_t first_t = 0;
    std::int64_t first_u1 = std::numeric_limits<std::int64_t>::max();
    for (std::size_t k = 0; k < n_; ++k) {
      const std::int64_t demand = net_demand(0, k);
      if (demand == 0) {
        if (near(suffix_[k + 1], target) && 0 < first_u1) {
          first_u1 = 0; first_k = k; first_t = 0;
        }
        continue;
      }
      if (k >= 1) {
        const std::size_t t = best_order_period(0, k, 1);
        if (near(block_cost(0, k, t) + suffix_[k + 1], target) && 0 < first_u1) {
          first_u1 = 0; first_k = k; first_t = t;
        }
      }
      if (near(block_cost(0, k, 0) + suffix_[k + 1], target) && demand < first_u1) {
        first_u1 = demand; first_k = k; first_t = 0;
      }
    }
    if (first_k == n_) throw Error("lot-sizing reconstruction failed (internal)");
    if (net_demand(0, first_k) > 0) orders[first_t] = net_demand(0, first_k);

    std::size_t j = first_k + 1;
    while (j < n_) {
      std::size_t pick_k = n_, pick_t = n_;
      for (std::size_t k = j; k < n_; ++k) {
        const std::size_t t = best_order_period(j, k);
        if (!near(block_cost(j, k, t) + suffix_[k + 1], suffix_[j])) continue;
        const std::size_t eff_t = net_demand(j, k) == 0 ? n_ : t;
        if (pick_k == n_ || eff_t < pick_t) {
          pick_k = k; pick_t = eff_t;
        }
      }
      if (pick_k == n_) throw Error("lot-sizing reconstruction failed (internal)");
      if (pick_t < n_) orders[pick_t] = net_demand(j, pick_k);
      j = pick_k + 1;
    }
    return orders;
  }

 private:
  double move_later_delta(std::size_t j, std::size_t k, std::size_t t) const {
    return rates_.penalty * static_cast<double>(prefix_[t + 1] - prefix_[j]) -
           rates_.holding * static_cast<double>(prefix_[k + 1] - prefix_[t + 1]);
  }

  CostRates rates_;
  std::size_t n_;
  std::vector<std::int64_t> net_;
  std::vector<std::int64_t> prefix_;   // prefix_[i] = net demand of periods 0..i-1
  std::vector<std::int64_t> prefix2_;  // prefix2_[i] = sum_{m<i} prefix_[m+1]
  std::vector<double> suffix_;         // optimal cost of periods j..N-1 from zero stock
  double stock_holding_ = 0.0;
};

inline LotSizingPlan no_order_plan(const LotSizingInstance& inst) {
  LotSizingPlan plan = evaluate_orders(inst, std::vector<std::int64_t>(inst.periods(), 0));
  plan.feasible = false;
  return plan;
}

}  // namespace detail

/// Cost-minimal plan in O(N^2 log N). If initial stock exceeds total demand
/// the terminal constraint cannot hold; the no-order plan is returned with
/// `feasible == false`.
inline LotSizingPlan solve(const LotSizingInstance& inst) {
  inst.validate();
  if (!inst.terminal_feasible()) return detail::no_order_plan(inst);
  const detail::IntervalDp dp(inst);
  return evaluate_orders(inst, dp.reconstruct());
}

/// Exhaustive DP over integer inventory levels; validation oracle for solve.
inline LotSizingPlan solve_bruteforce(const LotSizingInstance& inst) {
  inst.validate();
  const std::int64_t total = inst.total_demand();
  if (inst.periods() > 12 || total > 200) {
    throw SizeError("solve_bruteforce is limited to N <= 12 and total demand <= 200");
  }
  if (!inst.terminal_feasible()) return detail::no_order_plan(inst);

  const std::int64_t x0 = inst.initial_inventory;
  const std::int64_t lo = -(total + std::max<std::int64_t>(-x0, 0));
  const std::int64_t hi = total + std::max<std::int64_t>(x0, 0);
  const auto width = static_cast<std::size_t>(hi - lo + 1);
  const std::size_t n = inst.periods();
  constexpr double inf = std::numeric_limits<double>::infinity();

  // value[i][x - lo]: optimal cost of periods i..N-1 entering with inventory x.
  std::vector<std::vector<double>> value(n + 1, std::vector<double>(width, inf));
  value[n][static_cast<std::size_t>(-lo)] = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    for (std::int64_t x = lo; x <= hi; ++x) {
      double best = inf;
      for (std::int64_t next = std::max(lo, x - inst.demands[i]); next <= hi; ++next) {
        const double tail = value[i + 1][static_cast<std::size_t>(next - lo)];
        if (tail == inf) continue;
        const std::int64_t u = next - x + inst.demands[i];
        const double c = (u > 0 ? inst.rates.setup : 0.0) + maintenance_cost(next, inst.rates) + tail;
        best = std::min(best, c);
      }
      value[i][static_cast<std::size_t>(x - lo)] = best;
    }
  }

  // Walk forward, taking the smallest optimal order at each stage.
  std::vector<std::int64_t> orders(n, 0);
  std::int64_t x = x0;
  for (std::size_t i = 0; i < n; ++i) {
    const double target = value[i][static_cast<std::size_t>(x - lo)];
    for (std::int64_t next = std::max(lo, x - inst.demands[i]); next <= hi; ++next) {
      const double tail = value[i + 1][static_cast<std::size_t>(next - lo)];
      if (tail == inf) continue;
      const std::int64_t u = next - x + inst.demands[i];
      const double c = (u > 0 ? inst.rates.setup : 0.0) + maintenance_cost(next, inst.rates) + tail;
      if (detail::near(c, target)) {
        orders[i] = u;
        x = next;
        break;
      }
    }
  }
  return evaluate_orders(inst, std::move(orders));
}

struct FirstOrderCost {
  double cost = 0.0;
  bool feasible = true;  // false when the residual cannot end at zero inventory
};

/// J_N(u1): cost of period 1 under order u1 plus the optimal cost of periods
/// 2..N starting from x1 = x0 - d1 + u1 under the terminal constraint.
inline FirstOrderCost cost_of_first_order(std::int64_t u1, const LotSizingInstance& inst) {
  inst.validate();
  if (u1 < 0) throw InvalidInput("first-period order must be non-negative");
  const std::int64_t x1 = inst.initial_inventory - inst.demands[0] + u1;
  FirstOrderCost out;
  out.cost = maintenance_cost(x1, inst.rates) + (u1 > 0 ? inst.rates.setup : 0.0);
  if (inst.periods() == 1) {
    out.feasible = x1 == 0;
    return out;
  }
  LotSizingInstance rest{{inst.demands.begin() + 1, inst.demands.end()}, x1, inst.rates};
  if (!rest.terminal_feasible()) {
    const LotSizingPlan idle = detail::no_order_plan(rest);
    out.cost += idle.total_cost;
    out.feasible = false;
    return out;
  }
  out.cost += detail::IntervalDp(rest).optimal_cost();
  return out;
}

/// First-period order of an optimal plan (the per-path solution). With
/// `force_order`, the smallest minimizer of J_N(u1) over u1 >= 1.
inline std::int64_t omega_solution(const LotSizingInstance& inst, bool force_order) {
  inst.validate();
  if (!force_order) return solve(inst).orders.front();

  // Total demand already covered by stock: any order breaks the terminal
  // constraint, so the smallest possible order is returned.
  if (inst.total_demand() - inst.initial_inventory < 1) return 1;

  // With u1 >= 1 the setup cost is sunk and the period-1 order is a linear
  // arc with lower bound 1. Minimizers therefore sit either at the bound or
  // at an order that covers a whole block of net demand from period 1.
  const detail::IntervalDp dp(inst);
  std::int64_t best_u = 1;
  double best = cost_of_first_order(1, inst).cost;
  for (std::size_t k = 0; k < dp.periods(); ++k) {
    const std::int64_t u = dp.net_demand(0, k);
    if (u <= 1) continue;
    const double c = dp.stock_holding() + dp.block_cost(0, k, 0) + dp.suffix(k + 1);
    if (detail::strictly_less(c, best) || (detail::near(c, best) && u < best_u)) {
      best = c;
      best_u = u;
    }
  }
  return best_u;
}

struct KConvexityTriple {
  std::int64_t u = 0, u_mid = 0, u_high = 0;
};

struct KConvexityViolation {
  KConvexityTriple triple;
  double shortfall = 0.0;  // how far K + J(u'') falls below the chord bound
};

/// Checks K + J(u'') >= J(u') + (u''-u')/(u'-u) * (J(u') - J(u)) for each
/// triple 0 < u < u' < u''. Returns those violated by more than 1e-9.
inline std::vector<KConvexityViolation> k_convexity_probe(const LotSizingInstance& inst,
                                                          const std::vector<KConvexityTriple>& triples) {
  std::vector<KConvexityViolation> violations;
  for (const auto& tr : triples) {
    if (!(0 < tr.u && tr.u < tr.u_mid && tr.u_mid < tr.u_high)) {
      throw InvalidInput("k-convexity triples need 0 < u < u' < u''");
    }
    const double j0 = cost_of_first_order(tr.u, inst).cost;
    const double j1 = cost_of_first_order(tr.u_mid, inst).cost;
    const double j2 = cost_of_first_order(tr.u_high, inst).cost;
    const auto gap_low = static_cast<double>(tr.u_mid - tr.u);
    const auto gap_high = static_cast<double>(tr.u_high - tr.u_mid);
    // Multiplied through by (u' - u) > 0 so integer costs stay exact.
    const double lhs = (inst.rates.setup + j2) * gap_low;
    const double rhs = j1 * gap_low + gap_high * (j1 - j0);
    if (lhs - rhs < -1e-9 * gap_low) violations.push_back({tr, (rhs - lhs) / gap_low});
  }
  return violations;
}

// Text record: `N x0 K h p d_1 ... d_N`, whitespace or comma separated,
// '#' comments allowed.
inline LotSizingInstance read_instance(std::istream& in) {
  std::string text, line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::replace(line.begin(), line.end(), ',', ' ');
    text += line + ' ';
  }
  std::istringstream tokens(text);
  long long n = 0, x0 = 0;
  LotSizingInstance inst;
  if (!(tokens >> n >> x0 >> inst.rates.setup >> inst.rates.holding >> inst.rates.penalty)) {
    throw InvalidInput("instance record must start with N x0 K h p");
  }
  if (n < 1) throw InvalidInput("instance record needs N >= 1");
  inst.initial_inventory = x0;
  for (long long i = 0; i < n; ++i) {
    long long d = 0;
    if (!(tokens >> d)) throw InvalidInput("instance record has fewer than N demands");
    inst.demands.push_back(d);
  }
  if (std::string extra; tokens >> extra) throw InvalidInput("instance record has trailing data: " + extra);
  inst.validate();
  return inst;
}

inline void write_instance(std::ostream& out, const LotSizingInstance& inst) {
  out << inst.periods() << ' ' << inst.initial_inventory << ' ' << inst.rates.setup << ' ' << inst.rates.holding
      << ' ' << inst.rates.penalty << '\n';
  for (std::size_t i = 0; i < inst.periods(); ++i) out << (i ? " " : "") << inst.demands[i];
  out << '\n';
}

}  // namespace champion
