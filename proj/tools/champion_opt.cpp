// champion-opt: command-line front end for the experiment harness and the
// individual solvers.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "champion/experiments.hpp"
#include "champion/inventory.hpp"
#include "champion/lot_sizing.hpp"

namespace {

using namespace champion;

enum ExitCode : int { kOk = 0, kConfig = 2, kInfeasible = 3, kInvariant = 4 };

void print_plan(const LotSizingPlan& plan) {
  std::cout << "period,order,inventory\n";
  for (std::size_t i = 0; i < plan.orders.size(); ++i) {
    std::cout << i + 1 << ',' << plan.orders[i] << ',' << plan.inventories[i] << '\n';
  }
  std::cout << "total_cost: " << format_number(plan.total_cost) << '\n'
            << "feasible: " << (plan.feasible ? "yes" : "no") << '\n';
}

void print_record(const SimulationRecord& rec, const SamplePath& path) {
  std::cout << "period,demand,order,inventory,maintenance,setup\n";
  for (std::size_t i = 0; i < rec.orders.size(); ++i) {
    std::cout << i + 1 << ',' << path[i] << ',' << rec.orders[i] << ',' << rec.inventories[i] << ','
              << format_number(rec.maintenance_costs[i]) << ',' << format_number(rec.setup_costs[i]) << '\n';
  }
  std::cout << "total_maintenance: " << format_number(rec.total_maintenance) << '\n'
            << "total_setup: " << format_number(rec.total_setup) << '\n'
            << "total_cost: " << format_number(rec.total_cost) << '\n';
}

int run(int argc, char** argv) {
  CLI::App app{"Champion-solution inventory optimization toolkit"};
  app.require_subcommand(1);
  // -h would clash with the holding-cost option --h
  app.set_help_flag("--help", "Print this help message and exit");

  std::string config_file;

  auto* cmp = app.add_subcommand("run-comparison", "SS vs CS cost comparison over random instances");
  cmp->add_option("--config", config_file, "JSON experiment config")->required();

  auto* conv = app.add_subcommand("convergence", "agreement of the median estimate with a large-M reference");
  conv->add_option("--config", config_file, "JSON experiment config")->required();

  auto* cdf = app.add_subcommand("omega-cdf", "empirical cdf of per-path first orders for one decision");
  cdf->add_option("--config", config_file, "JSON experiment config")->required();

  double mu = 20.0;
  double setup = 64.0, holding = 1.0, penalty = 9.0;
  auto* oss = app.add_subcommand("optimal-ss", "optimal stationary (s,S) for Poisson demand");
  oss->add_option("--mu", mu, "Poisson mean")->required();
  oss->add_option("--K", setup, "setup cost")->capture_default_str();
  oss->add_option("--h", holding, "holding cost rate")->capture_default_str();
  oss->add_option("--p", penalty, "backlog penalty rate")->capture_default_str();

  std::string input_file;
  std::vector<std::int64_t> demands;
  std::int64_t x0 = 0;
  bool force_order = false;
  auto* lot = app.add_subcommand("solve-lot-sizing", "solve one lot-sizing instance");
  lot->add_option("--input", input_file, "instance record file ('-' for stdin)");
  lot->add_option("--demands", demands, "demand list")->delimiter(',');
  lot->add_option("--x0", x0, "initial inventory")->capture_default_str();
  lot->add_option("--K", setup, "setup cost")->capture_default_str();
  lot->add_option("--h", holding, "holding cost rate")->capture_default_str();
  lot->add_option("--p", penalty, "backlog penalty rate")->capture_default_str();
  lot->add_flag("--force-order", force_order, "also report the order-forced first-period solution");

  std::string policy_kind = "ss";
  std::vector<double> means;
  std::size_t periods = 50, samples = 100, lookahead = 0;
  std::int64_t s_level = 14, S_level = 62;
  std::uint64_t seed = 1;
  auto* sim = app.add_subcommand("simulate", "play one policy against one demand realization");
  sim->add_option("--policy", policy_kind, "ss | schedule | champion")
      ->check(CLI::IsMember({"ss", "schedule", "champion"}))
      ->capture_default_str();
  sim->add_option("--means", means, "per-period Poisson means")->delimiter(',');
  sim->add_option("--mu", mu, "stationary mean when --means is absent")->capture_default_str();
  sim->add_option("--periods", periods, "episode length when --means is absent")->capture_default_str();
  sim->add_option("--demands", demands, "explicit realization (sampled from the means otherwise)")->delimiter(',');
  sim->add_option("--s", s_level, "reorder point for --policy ss")->capture_default_str();
  sim->add_option("--S", S_level, "order-up-to level for --policy ss")->capture_default_str();
  sim->add_option("--x0", x0, "initial inventory")->capture_default_str();
  sim->add_option("--K", setup, "setup cost")->capture_default_str();
  sim->add_option("--h", holding, "holding cost rate")->capture_default_str();
  sim->add_option("--p", penalty, "backlog penalty rate")->capture_default_str();
  sim->add_option("--samples", samples, "OMA sample count for --policy champion")->capture_default_str();
  sim->add_option("--lookahead", lookahead, "look-ahead periods (0 = rest of episode)")->capture_default_str();
  sim->add_option("--seed", seed, "master seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  const CostRates rates{setup, holding, penalty};

  if (*cmp) {
    const ExperimentConfig cfg = load_config(config_file);
    const ComparisonResult res = run_comparison(cfg);
    const std::filesystem::path dir(cfg.output_dir);
    write_text(dir / "comparison.csv", comparison_csv(res));
    write_text(dir / "realizations.csv", realization_csv(res));
    std::cout << comparison_csv(res) << '\n' << comparison_summary(res);
    return kOk;
  }

  if (*conv) {
    const ExperimentConfig cfg = load_config(config_file);
    const ConvergenceStudy study = convergence_report(cfg);
    write_text(std::filesystem::path(cfg.output_dir) / "convergence.csv", convergence_csv(study));
    std::cout << convergence_csv(study) << "\nreference median: " << study.reference_median << " (M="
              << study.reference_samples << ")\n";
    return kOk;
  }

  if (*cdf) {
    const ExperimentConfig cfg = load_config(config_file);
    const ChampionDecision decision = omega_cdf_report(cfg);
    write_text(std::filesystem::path(cfg.output_dir) / "omega_cdf.csv", omega_cdf_csv(decision));
    const OmegaMedianEstimate plain = omega_median(decision.unconstrained);
    std::cout << omega_cdf_csv(decision) << '\n'
              << "samples: " << decision.unconstrained.size() << '\n'
              << "omega-median: " << plain.value << '\n'
              << "positive fraction: " << format_number(decision.gate.positive_fraction) << '\n'
              << "gate: " << (decision.gate.place_order ? "order" : "no order") << '\n'
              << "order quantity: " << decision.order << '\n';
    return kOk;
  }

  if (*oss) {
    const DiscretePmf pmf = poisson_pmf(mu);
    const SsPolicy best = optimal_ss(pmf, rates);
    std::cout << "s: " << best.reorder_point << "\nS: " << best.order_up_to
              << "\naverage cost per period: " << format_number(evaluate_ss_exact(best, pmf, rates)) << '\n';
    return kOk;
  }

  if (*lot) {
    LotSizingInstance inst;
    if (!input_file.empty()) {
      if (input_file == "-") {
        inst = read_instance(std::cin);
      } else {
        std::ifstream in(input_file);
        if (!in) throw ConfigError("cannot open instance file " + input_file);
        inst = read_instance(in);
      }
    } else {
      if (demands.empty()) throw ConfigError("solve-lot-sizing needs --input or --demands");
      inst = LotSizingInstance{demands, x0, rates};
      inst.validate();
    }
    const LotSizingPlan plan = solve(inst);
    print_plan(plan);
    if (force_order) std::cout << "forced first order: " << omega_solution(inst, true) << '\n';
    return plan.feasible ? kOk : kInfeasible;
  }

  if (*sim) {
    if (means.empty()) means.assign(periods, mu);
    const DemandModel model(means);
    const SamplePath path = demands.empty() ? model.sample(means.size(), derive_seed(seed, {0, 1})) : SamplePath(demands);
    if (path.length() > means.size()) throw ConfigError("--demands is longer than the mean sequence");

    Policy policy = SsPolicy(s_level, S_level);
    if (policy_kind == "schedule") {
      policy = heuristic_schedule(means, rates);
    } else if (policy_kind == "champion") {
      policy = ChampionPolicy(model, ChampionStepConfig{samples, lookahead, rates, MedianSource::forced, 1},
                              derive_seed(seed, {0, 3}));
    }
    print_record(simulate_policy(policy, path, x0, rates), path);
    return kOk;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const champion::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const champion::InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kConfig;
  } catch (const champion::BoundaryError& e) {
    std::cerr << "boundary error: " << e.what() << '\n';
    return kInfeasible;
  } catch (const champion::InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kInvariant;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvariant;
  }
}
