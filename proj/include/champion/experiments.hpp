#pragma once

// Configuration-driven experiments: SS-vs-CS cost comparisons, convergence of
// the median estimate in M, and the empirical cdf of per-path solutions.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "champion/error.hpp"
#include "champion/inventory.hpp"
#include "champion/oma.hpp"
#include "champion/parallel.hpp"
#include "champion/rng.hpp"

namespace champion {

// Raised when a run breaks one of its own bookkeeping invariants.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

enum class Regime { stationary, nonstationary };

struct ExperimentConfig {
  Regime regime = Regime::stationary;
  double mu = 20.0;  // stationary mean
  std::vector<double> mean_set{10, 15, 20, 25, 30, 35, 40, 45, 50, 55, 60, 65, 70, 75};
  DemandFamily family = DemandFamily::poisson;
  std::size_t instances = 20;
  std::size_t periods = 50;   // episode length N
  std::size_t samples = 100;  // OMA sample count M
  std::size_t lookahead = 0;  // 0 = remaining periods of the episode
  CostRates rates{64.0, 1.0, 9.0};
  std::int64_t initial_inventory = 0;
  std::uint64_t seed = 0;
  std::string output_dir = ".";
  MedianSource median_source = MedianSource::forced;
  std::size_t threads = 1;
  // convergence study
  std::vector<std::size_t> m_grid{10, 50, 100, 500, 1000};
  std::size_t trials = 50;
  std::size_t reference_samples = 0;  // 0 = 100 * max(m_grid)

  void validate() const {
    auto need = [](bool ok, const char* field, const char* why) {
      if (!ok) throw ConfigError(std::string("config field '") + field + "' " + why);
    };
    need(instances >= 1, "instances", "must be >= 1");
    need(periods >= 1, "periods", "must be >= 1");
    need(samples >= 1, "samples", "must be >= 1");
    need(trials >= 1, "trials", "must be >= 1");
    need(!m_grid.empty(), "m_grid", "must be non-empty");
    for (auto m : m_grid) need(m >= 1, "m_grid", "entries must be >= 1");
    need(rates.setup >= 0 && rates.holding >= 0 && rates.penalty >= 0, "K/h/p", "must be non-negative");
    if (regime == Regime::stationary) {
      need(family == DemandFamily::deterministic ? mu >= 0 : mu > 0, "mu", "must be positive");
    } else {
      need(!mean_set.empty(), "mean_set", "must be non-empty");
      for (double m : mean_set) need(m > 0, "mean_set", "entries must be positive");
    }
  }
};

// Reads a JSON experiment document. `seed` is mandatory; everything else
// falls back to the defaults above.
inline ExperimentConfig parse_config(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  static const std::vector<std::string> known{
      "regime", "mu", "mean_set", "family", "instances", "periods", "samples", "lookahead", "K", "h", "p", "x0",
      "seed", "output_dir", "median_source", "threads", "m_grid", "trials", "reference_samples"};
  for (const auto& [key, value] : doc.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) throw ConfigError("unknown config field '" + key + "'");
  }

  ExperimentConfig cfg;
  auto get = [&](const char* field, auto& target) {
    if (!doc.contains(field)) return;
    try {
      doc.at(field).get_to(target);
    } catch (const nlohmann::json::exception&) {
      throw ConfigError(std::string("config field '") + field + "' has the wrong type");
    }
  };

  if (!doc.contains("seed")) throw ConfigError("config field 'seed' is required");
  get("seed", cfg.seed);
  std::string regime = "stationary", family = "poisson", source = "forced";
  get("regime", regime);
  get("family", family);
  get("median_source", source);
  if (regime == "stationary") cfg.regime = Regime::stationary;
  else if (regime == "nonstationary") cfg.regime = Regime::nonstationary;
  else throw ConfigError("config field 'regime' must be 'stationary' or 'nonstationary'");
  if (family == "poisson") cfg.family = DemandFamily::poisson;
  else if (family == "deterministic") cfg.family = DemandFamily::deterministic;
  else throw ConfigError("config field 'family' must be 'poisson' or 'deterministic'");
  if (source == "forced") cfg.median_source = MedianSource::forced;
  else if (source == "positive") cfg.median_source = MedianSource::positive;
  else throw ConfigError("config field 'median_source' must be 'forced' or 'positive'");

  get("mu", cfg.mu);
  get("mean_set", cfg.mean_set);
  get("instances", cfg.instances);
  get("periods", cfg.periods);
  get("samples", cfg.samples);
  get("lookahead", cfg.lookahead);
  get("K", cfg.rates.setup);
  get("h", cfg.rates.holding);
  get("p", cfg.rates.penalty);
  get("x0", cfg.initial_inventory);
  get("output_dir", cfg.output_dir);
  get("threads", cfg.threads);
  get("m_grid", cfg.m_grid);
  get("trials", cfg.trials);
  get("reference_samples", cfg.reference_samples);
  cfg.validate();
  return cfg;
}

inline ExperimentConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open config file " + file.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  ExperimentConfig cfg = parse_config(doc);
  if (const char* dir = std::getenv("CHAMPION_OPT_OUTPUT_DIR"); dir && *dir) cfg.output_dir = dir;
  return cfg;
}

// Shortest representation that round-trips; stable across runs.
inline std::string format_number(double v) {
  if (v == 0.0) v = 0.0;  // drop negative zero
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// Per-instance seeds. Everything random in a run is derived from the master
// seed and the instance index so threading never changes the output.
namespace seeds {
inline std::uint64_t realization(std::uint64_t master, std::size_t instance) {
  return derive_seed(master, {instance, 1});
}
inline std::uint64_t means(std::uint64_t master, std::size_t instance) { return derive_seed(master, {instance, 2}); }
inline std::uint64_t champion(std::uint64_t master, std::size_t instance) {
  return derive_seed(master, {instance, 3});
}
}  // namespace seeds

/// Period means of one instance: constant mu, or drawn uniformly from the
/// mean set per period.
inline std::vector<double> instance_means(const ExperimentConfig& cfg, std::size_t instance) {
  if (cfg.regime == Regime::stationary) return std::vector<double>(cfg.periods, cfg.mu);
  SplitMix64 rng(seeds::means(cfg.seed, instance));
  std::vector<double> means(cfg.periods);
  for (auto& m : means) {
    m = cfg.mean_set[static_cast<std::size_t>(rng.uniform() * static_cast<double>(cfg.mean_set.size()))];
  }
  return means;
}

inline ChampionStepConfig champion_config(const ExperimentConfig& cfg, std::size_t threads = 1) {
  return ChampionStepConfig{cfg.samples, cfg.lookahead, cfg.rates, cfg.median_source, threads};
}

struct ComparisonRow {
  std::size_t instance = 0;
  double c_ss = 0.0;
  double c_cs = 0.0;
  double diff = 0.0;         // C_ss - C_cs
  double improvement = 0.0;  // sign convention depends on the regime
  std::uint64_t digest = 0;  // realization fingerprint shared by both methods
};

struct ComparisonResult {
  Regime regime = Regime::stationary;
  std::vector<ComparisonRow> rows;
  ComparisonRow mean;  // column averages
  std::size_t cs_wins = 0;
  std::size_t ss_wins = 0;
  std::size_t ties = 0;
};

/// Stationary tables report (C_cs - C_ss) / C_ss; nonstationary tables
/// report (C_ss - C_cs) / C_ss.
inline double improvement(Regime regime, double c_ss, double c_cs) {
  if (c_ss == 0.0) return 0.0;
  return regime == Regime::stationary ? (c_cs - c_ss) / c_ss : (c_ss - c_cs) / c_ss;
}

inline const char* improvement_label(Regime regime) {
  return regime == Regime::stationary ? "(C_cs - C_ss) / C_ss" : "(C_ss - C_cs) / C_ss";
}

/// Both methods replay the same realization per instance. Method SS is the
/// static optimum (stationary) or the per-period heuristic schedule
/// (nonstationary); method CS is the rolling-horizon champion policy.
inline ComparisonResult run_comparison(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.family != DemandFamily::poisson) throw ConfigError("config field 'family' must be 'poisson' for comparisons");
  SsTableCache cache;
  ComparisonResult result;
  result.regime = cfg.regime;
  result.rows.resize(cfg.instances);

  parallel_for(cfg.instances, cfg.threads, [&](std::size_t k) {
    const std::vector<double> means = instance_means(cfg, k);
    const DemandModel model(means);
    const SamplePath realization = model.sample(cfg.periods, seeds::realization(cfg.seed, k));

    Policy ss = cfg.regime == Regime::stationary ? Policy(cache.lookup(cfg.mu, cfg.rates))
                                                 : Policy(heuristic_schedule(means, cfg.rates, cache));
    const Policy cs = ChampionPolicy(model, champion_config(cfg), seeds::champion(cfg.seed, k));

    const SimulationRecord rec_ss = simulate_policy(ss, realization, cfg.initial_inventory, cfg.rates);
    const SimulationRecord rec_cs = simulate_policy(cs, realization, cfg.initial_inventory, cfg.rates);
    if (rec_ss.demand_digest != rec_cs.demand_digest) {
      throw InvariantViolation("methods consumed different realizations on instance " + std::to_string(k + 1));
    }
    ComparisonRow row;
    row.instance = k + 1;
    row.c_ss = rec_ss.total_cost;
    row.c_cs = rec_cs.total_cost;
    row.diff = row.c_ss - row.c_cs;
    row.improvement = improvement(cfg.regime, row.c_ss, row.c_cs);
    row.digest = rec_ss.demand_digest;
    result.rows[k] = row;
  });

  const auto n = static_cast<double>(result.rows.size());
  for (const auto& r : result.rows) {
    result.mean.c_ss += r.c_ss / n;
    result.mean.c_cs += r.c_cs / n;
    result.mean.diff += r.diff / n;
    result.mean.improvement += r.improvement / n;
    if (r.c_cs < r.c_ss) ++result.cs_wins;
    else if (r.c_ss < r.c_cs) ++result.ss_wins;
    else ++result.ties;
  }
  return result;
}

inline std::string comparison_csv(const ComparisonResult& res) {
  std::ostringstream out;
  out << "instance,c_ss,c_cs,diff,improvement\n";
  for (const auto& r : res.rows) {
    out << r.instance << ',' << format_number(r.c_ss) << ',' << format_number(r.c_cs) << ','
        << format_number(r.diff) << ',' << format_number(r.improvement) << '\n';
  }
  out << "mean," << format_number(res.mean.c_ss) << ',' << format_number(res.mean.c_cs) << ','
      << format_number(res.mean.diff) << ',' << format_number(res.mean.improvement) << '\n';
  return out.str();
}

inline std::string realization_csv(const ComparisonResult& res) {
  std::ostringstream out;
  out << "instance,demand_digest\n";
  for (const auto& r : res.rows) {
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(r.digest));
    out << r.instance << ',' << hex << '\n';
  }
  return out.str();
}

inline std::string comparison_summary(const ComparisonResult& res) {
  std::ostringstream out;
  out << "regime: " << (res.regime == Regime::stationary ? "stationary" : "nonstationary") << '\n'
      << "instances: " << res.rows.size() << '\n'
      << "mean C_ss: " << format_number(res.mean.c_ss) << '\n'
      << "mean C_cs: " << format_number(res.mean.c_cs) << '\n'
      << "mean C_ss - C_cs: " << format_number(res.mean.diff) << '\n'
      << "mean improvement " << improvement_label(res.regime) << ": "
      << format_number(100.0 * res.mean.improvement) << "%\n"
      << "CS wins: " << res.cs_wins << ", SS wins: " << res.ss_wins << ", ties: " << res.ties << '\n';
  return out.str();
}

/// Period-1 forecast used by the convergence and cdf reports.
inline DemandModel report_forecast(const ExperimentConfig& cfg) {
  std::vector<double> means = instance_means(cfg, 0);
  return DemandModel(std::move(means), cfg.family);
}

inline ConvergenceStudy convergence_report(const ExperimentConfig& cfg) {
  cfg.validate();
  const DemandModel forecast = report_forecast(cfg);
  const std::size_t horizon = cfg.lookahead == 0 ? cfg.periods : std::min(cfg.lookahead, cfg.periods);
  const std::int64_t x0 = cfg.initial_inventory;
  const CostRates rates = cfg.rates;
  auto solver = [x0, rates](const SamplePath& path) {
    return omega_solution(LotSizingInstance{{path.demands().begin(), path.demands().end()}, x0, rates}, true);
  };
  return convergence_study(forecast, solver, cfg.m_grid, cfg.trials, horizon, cfg.seed, cfg.reference_samples,
                           cfg.threads);
}

inline std::string convergence_csv(const ConvergenceStudy& study) {
  std::ostringstream out;
  out << "M,agreement\n";
  for (const auto& r : study.rows) out << r.samples << ',' << format_number(r.agreement) << '\n';
  return out.str();
}

/// First-period decision of instance 1 with the full sample retained.
inline ChampionDecision omega_cdf_report(const ExperimentConfig& cfg) {
  cfg.validate();
  return champion_decision(cfg.initial_inventory, report_forecast(cfg), champion_config(cfg, cfg.threads),
                           derive_seed(seeds::champion(cfg.seed, 0), {0}));
}

inline std::string omega_cdf_csv(const ChampionDecision& decision) {
  std::ostringstream out;
  out << "u,cdf\n";
  for (const auto& [u, g] : decision.unconstrained.cdf_steps()) out << u << ',' << format_number(g) << '\n';
  return out.str();
}

inline void write_text(const std::filesystem::path& file, const std::string& text) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error("cannot write " + file.string());
  out << text;
}

}  // namespace champion
