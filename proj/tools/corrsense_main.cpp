// corrsense: error exponents for sensing classical correlations among K
// optical detectors.

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "corrsense/detection_sim.hpp"
#include "corrsense/errors.hpp"
#include "corrsense/exponents.hpp"
#include "corrsense/sweep.hpp"
#include "corrsense/validation.hpp"

namespace {

using corrsense::LogBase;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

// JSON has no NaN/inf; emit null for undefined ratios.
json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw corrsense::IoError("cannot open " + path.string() + " for writing");
  out << text;
  out.close();
  if (!out) throw corrsense::IoError("failed writing " + path.string());
}

int cmd_exponents(int k, double energy, const std::string& base_name) {
  const LogBase base = corrsense::parse_log_base(base_name.c_str());
  const auto r = corrsense::exponent_report(corrsense::EnergyParams(k, energy), base);
  json out = {{"K", r.detectors},
              {"E", r.energy},
              {"base", corrsense::to_string(base)},
              {"quantum", r.quantum},
              {"heterodyne", r.heterodyne},
              {"homodyne", r.homodyne},
              {"photon", r.photon},
              {"ratio_quantum_heterodyne", number_or_null(r.ratio_quantum_heterodyne())},
              {"ratio_quantum_homodyne", number_or_null(r.ratio_quantum_homodyne())}};
  std::cout << out.dump(2) << '\n';
  return kExitOk;
}

struct SweepArgs {
  std::vector<int> k_list;
  double e_min = 1e-4;
  double e_max = 10.0;
  int e_points = 60;
  double energy = -1.0;
  std::string base = "bits";
  std::vector<std::string> outputs;
  std::string out;
};

int cmd_sweep(const SweepArgs& a) {
  corrsense::SweepSpec spec;
  spec.detector_counts = a.k_list;
  if (a.energy >= 0.0) {
    spec.energy_min = spec.energy_max = a.energy;
    spec.energy_points = 1;
  } else {
    spec.energy_min = a.e_min;
    spec.energy_max = a.e_max;
    spec.energy_points = a.e_points;
  }
  spec.base = corrsense::parse_log_base(a.base.c_str());
  if (!a.outputs.empty()) {
    spec.outputs.clear();
    for (const auto& name : a.outputs) spec.outputs.insert(corrsense::parse_exponent_kind(name));
  }
  spec.validate();
  const auto rows = corrsense::run_sweep(spec);
  std::ostringstream csv;
  corrsense::write_sweep_csv(csv, rows, spec.outputs);
  write_text_file(a.out, csv.str());
  std::cerr << "wrote " << rows.size() << " rows to " << a.out << '\n';
  return kExitOk;
}

struct SimulateArgs {
  std::string strategy = "heterodyne";
  int k = 2;
  double energy = 1.0;
  double epsilon = 0.1;
  std::vector<int> n_grid{50, 100, 200, 400};
  int shots = 10000;
  std::uint64_t seed = 1;
  std::string estimator = "weighted";
  std::string base = "bits";
  std::string out;
};

int cmd_simulate(const SimulateArgs& a) {
  const corrsense::Strategy strategy{corrsense::parse_detection_kind(a.strategy),
                                     corrsense::EnergyParams(a.k, a.energy)};
  corrsense::EstimateConfig config;
  config.epsilon = a.epsilon;
  config.n_grid = a.n_grid;
  config.shots = a.shots;
  config.seed = a.seed;
  config.estimator = corrsense::parse_beta_estimator(a.estimator);
  config.base = corrsense::parse_log_base(a.base.c_str());
  if (config.shots < 1000) throw corrsense::UsageError("--shots must be >= 1000");
  if (config.n_grid.empty()) throw corrsense::UsageError("--n-grid must not be empty");

  if (config.estimator == corrsense::BetaEstimator::counting) {
    const int n_min = *std::min_element(config.n_grid.begin(), config.n_grid.end());
    if (!corrsense::counting_feasible(strategy, config.shots, n_min)) {
      std::ostringstream msg;
      msg << "infeasible grid for the counting estimator: with " << config.shots
          << " shots the smallest measurable type-II error is about 3/shots, so block length "
          << n_min << " resolves exponents up to " << -std::log(3.0 / config.shots) / n_min
          << " nats, below 1.5x the analytic exponent "
          << 1.5 * strategy.analytic_exponent() << " nats. Use smaller n, more shots, "
          << "or --estimator weighted.";
      throw corrsense::UsageError(msg.str());
    }
  }

  const auto outcomes = corrsense::estimate_exponent(strategy, config);
  std::ostringstream csv;
  corrsense::write_outcome_csv(csv, outcomes);
  write_text_file(a.out, csv.str());

  json sidecar = {{"strategy", corrsense::to_string(strategy.kind)},
                  {"K", a.k},
                  {"E", a.energy},
                  {"epsilon", a.epsilon},
                  {"n_grid", a.n_grid},
                  {"shots", a.shots},
                  {"seed", a.seed},
                  {"estimator", corrsense::to_string(config.estimator)},
                  {"base", corrsense::to_string(config.base)},
                  {"analytic_exponent", strategy.analytic_exponent(config.base)}};
  json upper = json::array();
  for (const auto& o : outcomes) upper.push_back(o.beta_upper_bound_only);
  sidecar["beta_upper_bound_only"] = upper;
  write_text_file(a.out + ".json", sidecar.dump(2) + "\n");
  std::cerr << "wrote " << outcomes.size() << " rows to " << a.out << '\n';
  return kExitOk;
}

int cmd_validate(const std::string& level_name) {
  corrsense::ValidationLevel level;
  if (level_name == "fast") {
    level = corrsense::ValidationLevel::fast;
  } else if (level_name == "full") {
    level = corrsense::ValidationLevel::full;
  } else {
    throw corrsense::UsageError("--level must be fast or full");
  }
  const auto report = corrsense::run_validation(level);
  std::cout << corrsense::format_report(report);
  return report.ok() ? kExitOk : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Error exponents for detecting classical correlations among K optical detectors"};
  app.require_subcommand(1);

  int k = 2;
  double energy = 1.0;
  std::string base = "bits";
  auto* exponents = app.add_subcommand("exponents", "Print all four exponents at one (K, E) as JSON");
  exponents->add_option("--k", k, "Detector count K")->required();
  exponents->add_option("--energy", energy, "Mean photon number per detector E")->required();
  exponents->add_option("--base", base, "Logarithm base")->check(CLI::IsMember({"bits", "nats"}));

  SweepArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "Tabulate exponents over a (K, E) grid as CSV");
  sweep->add_option("--k", sweep_args.k_list, "Detector counts, comma separated")
      ->required()
      ->delimiter(',');
  sweep->add_option("--e-min", sweep_args.e_min, "Smallest energy (log grid)");
  sweep->add_option("--e-max", sweep_args.e_max, "Largest energy (log grid)");
  sweep->add_option("--e-points", sweep_args.e_points, "Number of grid energies");
  sweep->add_option("--energy", sweep_args.energy, "Single energy instead of a grid");
  sweep->add_option("--base", sweep_args.base)->check(CLI::IsMember({"bits", "nats"}));
  sweep->add_option("--outputs", sweep_args.outputs, "Subset of quantum,heterodyne,homodyne,photon")
      ->delimiter(',');
  sweep->add_option("--out", sweep_args.out, "Output CSV path")->required();

  SimulateArgs sim_args;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo Neyman-Pearson test");
  simulate->add_option("--strategy", sim_args.strategy)
      ->check(CLI::IsMember({"heterodyne", "homodyne", "photon_counting", "photon"}));
  simulate->add_option("--k", sim_args.k);
  simulate->add_option("--energy", sim_args.energy);
  simulate->add_option("--epsilon", sim_args.epsilon, "Type-I error level");
  simulate->add_option("--n-grid", sim_args.n_grid, "Block lengths, comma separated")->delimiter(',');
  simulate->add_option("--shots", sim_args.shots, "Blocks per hypothesis and n");
  simulate->add_option("--seed", sim_args.seed);
  simulate->add_option("--estimator", sim_args.estimator)
      ->check(CLI::IsMember({"weighted", "counting"}));
  simulate->add_option("--base", sim_args.base)->check(CLI::IsMember({"bits", "nats"}));
  simulate->add_option("--out", sim_args.out, "Output CSV path; sidecar goes to <out>.json")
      ->required();

  std::string level = "fast";
  auto* validate = app.add_subcommand("validate", "Run the numerical self-checks");
  validate->add_option("--level", level)->check(CLI::IsMember({"fast", "full"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*exponents) return cmd_exponents(k, energy, base);
    if (*sweep) return cmd_sweep(sweep_args);
    if (*simulate) return cmd_simulate(sim_args);
    if (*validate) return cmd_validate(level);
  } catch (const corrsense::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitUsage;
}
