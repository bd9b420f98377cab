#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "respamd/integrators.hpp"
#include "respamd/observables.hpp"
#include "respamd/scenario.hpp"

namespace respamd {

struct RunOptions {
  bool write_files{true};
  /// Progress messages; nullptr for silence.
  std::ostream* log{nullptr};
};

struct GridPointResult {
  double nu{0};
  int step_size_factor{1};
  bool ok{false};
  /// "ok", "blowup@<iteration>" or "error".
  std::string status;
  std::string message;

  ObservableSeries<double> kinetic;
  ObservableSeries<double> potential_2b;
  ObservableSeries<double> potential_3b;
  ObservableSeries<double> total_energy;
  ObservableSeries<double> pressure;
  std::vector<std::pair<double, double>> rdf;

  double rvite{0};
  bool rvite_warning{false};
  double mean_energy{0};
  double mean_pressure{0};
  double wall_seconds{0};
  /// NaN when the nu row has no successful s = 1 run.
  double speedup{0};
  RunStats stats;
};

struct ExperimentResult {
  std::vector<GridPointResult> points;

  std::size_t failures() const;
  bool all_failed() const { return !points.empty() && failures() == points.size(); }
  /// Throws ValidationError when the grid point is absent.
  const GridPointResult& at(double nu, int s) const;
};

/// Directory name of a grid point, e.g. "nu0.9_s12".
std::string grid_point_name(double nu, int s);

/// Lattice start, seeded velocities and (if configured) thermostatted equilibration.
ParticleSystem<double> prepare_system(const ScenarioConfig& config, std::ostream* log = nullptr);

/// Every nu x s grid point of the plan, sequentially. Blow-ups are recorded per point.
ExperimentResult run_experiment(const ExperimentPlan& plan, const RunOptions& options = {});

/// The plan's grid plus a pure two-body (nu = 0) row; writes rdf_compare.csv.
ExperimentResult run_rdf_comparison(const ExperimentPlan& plan, const RunOptions& options = {});

void write_grid_point(const std::filesystem::path& dir, const GridPointResult& point);
void write_summary(const std::filesystem::path& path, const ExperimentResult& result);
void write_rdf_comparison(const std::filesystem::path& path, const ExperimentResult& result);

}  // namespace respamd
