#pragma once

// Brute-force checks of champion-solution definitions on small finite
// problems: a cost table J[solution][outcome] with outcome probabilities.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "champion/error.hpp"

namespace champion {

// Slack for comparing accumulated outcome probabilities against 1/2; sums of
// equal fractions such as 7 * (1/14) can land a few ulps below.
inline constexpr double kProbabilityTolerance = 1e-12;

class FinitePerformanceTable {
 public:
  FinitePerformanceTable(std::vector<std::string> solutions, std::vector<std::string> outcomes,
                         std::vector<double> probabilities, std::vector<std::vector<double>> costs)
      : solutions_(std::move(solutions)),
        outcomes_(std::move(outcomes)),
        probabilities_(std::move(probabilities)),
        costs_(std::move(costs)) {
    if (solutions_.empty()) throw InvalidInput("table needs at least one solution");
    if (outcomes_.empty()) throw InvalidInput("table needs at least one outcome");
    if (probabilities_.size() != outcomes_.size()) throw InvalidInput("one probability per outcome required");
    if (costs_.size() != solutions_.size()) throw InvalidInput("cost matrix needs one row per solution");
    for (const auto& row : costs_) {
      if (row.size() != outcomes_.size()) throw InvalidInput("cost matrix needs one column per outcome");
    }
    double total = 0.0;
    for (double p : probabilities_) {
      if (!(p >= 0.0)) throw InvalidInput("outcome probabilities must be non-negative");
      total += p;
    }
    if (std::abs(total - 1.0) > kProbabilityTolerance) throw InvalidInput("outcome probabilities must sum to 1");
  }

  // Equiprobable outcomes labelled w1..wn.
  static FinitePerformanceTable equiprobable(std::vector<std::string> solutions,
                                             std::vector<std::vector<double>> costs) {
    const std::size_t n = costs.empty() ? 0 : costs.front().size();
    std::vector<std::string> outcomes;
    for (std::size_t w = 0; w < n; ++w) outcomes.push_back("w" + std::to_string(w + 1));
    std::vector<double> probs(n, n == 0 ? 0.0 : 1.0 / static_cast<double>(n));
    // Absorb rounding so the probabilities sum to one exactly.
    if (n > 0) {
      double rest = 1.0;
      for (std::size_t w = 0; w + 1 < n; ++w) rest -= probs[w];
      probs[n - 1] = rest;
    }
    return FinitePerformanceTable(std::move(solutions), std::move(outcomes), std::move(probs), std::move(costs));
  }

  std::size_t solution_count() const noexcept { return solutions_.size(); }
  std::size_t outcome_count() const noexcept { return outcomes_.size(); }
  const std::vector<std::string>& solutions() const noexcept { return solutions_; }
  const std::vector<std::string>& outcomes() const noexcept { return outcomes_; }
  double probability(std::size_t outcome) const { return probabilities_.at(outcome); }
  double cost(std::size_t solution, std::size_t outcome) const { return costs_.at(solution).at(outcome); }

  std::size_t index_of(const std::string& label) const {
    for (std::size_t i = 0; i < solutions_.size(); ++i) {
      if (solutions_[i] == label) return i;
    }
    throw InvalidInput("unknown solution label: " + label);
  }

  double expected_cost(std::size_t solution) const {
    double e = 0.0;
    for (std::size_t w = 0; w < outcomes_.size(); ++w) e += probabilities_[w] * costs_.at(solution)[w];
    return e;
  }

 private:
  std::vector<std::string> solutions_;
  std::vector<std::string> outcomes_;
  std::vector<double> probabilities_;
  std::vector<std::vector<double>> costs_;
};

/// Pr[J(a, w) <= J(b, w)]. Ties count as wins for both sides.
inline double pairwise_win_prob(const FinitePerformanceTable& table, std::size_t a, std::size_t b) {
  if (a >= table.solution_count() || b >= table.solution_count()) throw InvalidInput("solution index out of range");
  double prob = 0.0;
  for (std::size_t w = 0; w < table.outcome_count(); ++w) {
    if (table.cost(a, w) <= table.cost(b, w)) prob += table.probability(w);
  }
  return prob;
}

inline double pairwise_win_prob(const FinitePerformanceTable& table, const std::string& a, const std::string& b) {
  return pairwise_win_prob(table, table.index_of(a), table.index_of(b));
}

/// First solution (in label order) that beats every other solution with
/// probability at least 1/2, if any.
inline std::optional<std::size_t> find_champion(const FinitePerformanceTable& table) {
  const std::size_t n = table.solution_count();
  for (std::size_t c = 0; c < n; ++c) {
    bool champion = true;
    for (std::size_t u = 0; u < n && champion; ++u) {
      if (u != c && pairwise_win_prob(table, c, u) < 0.5 - kProbabilityTolerance) champion = false;
    }
    if (champion) return c;
  }
  return std::nullopt;
}

inline std::optional<std::string> find_champion_label(const FinitePerformanceTable& table) {
  if (auto c = find_champion(table)) return table.solutions()[*c];
  return std::nullopt;
}

/// Ordered pairs (u', u'') where u' wins with probability >= 1/2 yet has the
/// strictly larger expected cost. An empty result means the non-singularity
/// condition holds.
inline std::vector<std::pair<std::string, std::string>> verify_nonsingularity(const FinitePerformanceTable& table) {
  const std::size_t n = table.solution_count();
  std::vector<double> mean(n);
  for (std::size_t u = 0; u < n; ++u) mean[u] = table.expected_cost(u);

  std::vector<std::pair<std::string, std::string>> violations;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b || pairwise_win_prob(table, a, b) < 0.5 - kProbabilityTolerance) continue;
      const double tol = 1e-12 * std::max({1.0, std::abs(mean[a]), std::abs(mean[b])});
      if (mean[a] > mean[b] + tol) violations.emplace_back(table.solutions()[a], table.solutions()[b]);
    }
  }
  return violations;
}

namespace detail {
inline double parse_probability(const std::string& token) {
  try {
    const auto slash = token.find('/');
    if (slash == std::string::npos) return std::stod(token);
    return std::stod(token.substr(0, slash)) / std::stod(token.substr(slash + 1));
  } catch (const std::logic_error&) {
    throw InvalidInput("bad probability token: " + token);
  }
}
}  // namespace detail

// Plain-text table: the first non-comment line lists solution labels; each
// further line is one outcome, written as `[label] probability cost...`.
// Probabilities may be given as fractions (`1/3`). '#' starts a comment.
inline FinitePerformanceTable read_performance_table(std::istream& in) {
  std::vector<std::string> solutions;
  std::vector<std::string> outcomes;
  std::vector<double> probs;
  std::vector<std::vector<double>> by_outcome;

  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream tokens(line);
    std::vector<std::string> row;
    for (std::string tok; tokens >> tok;) row.push_back(tok);
    if (row.empty()) continue;

    if (solutions.empty()) {
      solutions = row;
      continue;
    }
    std::size_t first = 0;
    if (row.size() == solutions.size() + 2) {
      outcomes.push_back(row[0]);
      first = 1;
    } else if (row.size() == solutions.size() + 1) {
      outcomes.push_back("w" + std::to_string(outcomes.size() + 1));
    } else {
      throw InvalidInput("outcome row has " + std::to_string(row.size()) + " fields, expected " +
                         std::to_string(solutions.size() + 1));
    }
    probs.push_back(detail::parse_probability(row[first]));
    std::vector<double> costs;
    for (std::size_t k = first + 1; k < row.size(); ++k) {
      try {
        costs.push_back(std::stod(row[k]));
      } catch (const std::logic_error&) {
        throw InvalidInput("bad cost token: " + row[k]);
      }
    }
    by_outcome.push_back(std::move(costs));
  }
  if (solutions.empty()) throw InvalidInput("table has no header row");

  std::vector<std::vector<double>> costs(solutions.size(), std::vector<double>(by_outcome.size()));
  for (std::size_t w = 0; w < by_outcome.size(); ++w) {
    for (std::size_t s = 0; s < solutions.size(); ++s) costs[s][w] = by_outcome[w][s];
  }
  return FinitePerformanceTable(std::move(solutions), std::move(outcomes), std::move(probs), std::move(costs));
}

}  // namespace champion
