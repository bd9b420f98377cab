#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "respamd/check.hpp"
#include "respamd/csv.hpp"
#include "respamd/experiment.hpp"
#include "respamd/parallel.hpp"
#include "respamd/scenario.hpp"

namespace {

enum ExitCode { kSuccess = 0, kValidation = 1, kBlowUp = 2, kIo = 3 };

struct GlobalOptions {
  int threads{0};
  std::string output;
  std::optional<std::uint64_t> seed;
};

respamd::ExperimentPlan load(const std::string& path, const GlobalOptions& globals) {
  respamd::ExperimentPlan plan = respamd::parse_scenario(path);
  if (!globals.output.empty()) plan.output_dir = globals.output;
  if (globals.seed) plan.base.seed = *globals.seed;
  plan.validate();
  return plan;
}

int report(const respamd::ExperimentResult& result, const respamd::ExperimentPlan& plan) {
  for (const auto& p : result.points)
    std::cout << respamd::grid_point_name(p.nu, p.step_size_factor) << ": " << p.status
              << " rvite=" << respamd::format_double(p.rvite)
              << " mean_energy=" << respamd::format_double(p.mean_energy)
              << " wall_seconds=" << respamd::format_double(p.wall_seconds) << '\n';
  std::cout << "output: " << plan.output_dir.string() << '\n';
  return result.all_failed() ? kBlowUp : kSuccess;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"r-RESPA molecular dynamics with Lennard-Jones and Axilrod-Teller-Muto interactions"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions globals;
  app.add_option("--threads", globals.threads, "Worker threads (0 = runtime default; 1 = bit-reproducible)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--output", globals.output, "Output directory (overrides the scenario)");
  app.add_option("--seed", globals.seed, "Random seed (overrides the scenario)");

  std::string scenario;
  auto* run = app.add_subcommand("run", "Single run at the scenario's nu and step_size_factor");
  run->add_option("scenario", scenario, "Scenario file")->required();
  auto* sweep = app.add_subcommand("sweep", "nu x step-size-factor sweep");
  sweep->add_option("scenario", scenario, "Scenario file")->required();
  auto* compare = app.add_subcommand("compare", "Pure two-body vs two+three-body RDF comparison");
  compare->add_option("scenario", scenario, "Scenario file")->required();
  auto* check = app.add_subcommand("check", "Oracle suite on small random systems");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kSuccess : kValidation;
  }

  if (globals.threads > 0) respamd::set_thread_count(globals.threads);
  const respamd::RunOptions options{true, &std::cerr};

  try {
    if (*check) {
      const auto outcomes = respamd::run_checks(globals.seed.value_or(42));
      respamd::print_checks(std::cout, outcomes);
      for (const auto& o : outcomes)
        if (!o.passed) return kValidation;
      return kSuccess;
    }
    respamd::ExperimentPlan plan = load(scenario, globals);
    if (*run) {
      plan.nu_values.clear();
      plan.step_size_factors.clear();
      plan.reference_run = false;
      return report(respamd::run_experiment(plan, options), plan);
    }
    if (*sweep) return report(respamd::run_experiment(plan, options), plan);
    if (*compare) return report(respamd::run_rdf_comparison(plan, options), plan);
  } catch (const respamd::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const respamd::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const respamd::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBlowUp;
  }
  return kSuccess;
}
