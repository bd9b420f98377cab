#include "respamd/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>

#include "respamd/csv.hpp"

namespace respamd {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double rdf_r_max(const ScenarioConfig& config) {
  return config.sampling.rdf_r_max > 0 ? config.sampling.rdf_r_max : config.box.minCoeff() / 2;
}

GridPointResult run_grid_point(const ExperimentPlan& plan, const ScenarioConfig& config,
                               const ParticleSystem<double>& initial) {
  GridPointResult out;
  out.nu = config.force_field.nu;
  out.step_size_factor = config.step_size_factor;
  out.rvite_warning = config.container == ContainerKind::LinkedCells;

  ParticleSystem<double> system = initial;
  ForceEvaluator<double> forces(config.container, config.force_field);
  std::optional<RdfAccumulator<double>> rdf;
  if (config.periodic) rdf.emplace(system.domain, rdf_r_max(config), config.sampling.rdf_bins);

  std::vector<SamplingHook<double>> hooks;
  hooks.push_back({plan.energy_stride(), [&](long it, const ParticleSystem<double>& s, const ForceState<double>& st) {
                     const EnergyBreakdown<double> e = energy_breakdown(s, st);
                     out.kinetic.push(it, e.kinetic);
                     out.potential_2b.push(it, e.potential_2b);
                     out.potential_3b.push(it, e.potential_3b);
                     out.total_energy.push(it, e.total);
                     out.pressure.push(it, pressure(s, st));
                   }});
  if (rdf)
    hooks.push_back({plan.rdf_stride(), [&](long, const ParticleSystem<double>& s, const ForceState<double>&) {
                       rdf->add_frame(s);
                     }});

  try {
    out.stats = respa_run(system, forces, RespaSchedule<double>{config.dt, config.step_size_factor, config.iterations},
                          std::span<const SamplingHook<double>>(hooks));
    out.ok = true;
    out.status = "ok";
  } catch (const BlowUpError& e) {
    out.status = "blowup@" + std::to_string(e.iteration());
    out.message = e.what();
  } catch (const KernelError& e) {
    out.status = "error";
    out.message = e.what();
  }

  if (rdf && rdf->frames() > 0) out.rdf = rdf->result();
  if (out.ok) {
    out.wall_seconds = out.stats.loop_seconds;
    out.mean_energy = out.total_energy.mean();
    out.mean_pressure = out.pressure.mean();
    const double mean_k = out.kinetic.mean();
    out.rvite = mean_k > 0 ? rvite_report(out.total_energy, mean_k, config.container).value : kNaN;
  } else {
    out.wall_seconds = out.mean_energy = out.mean_pressure = out.rvite = kNaN;
  }
  return out;
}

void assign_speedups(ExperimentResult& result) {
  for (auto& p : result.points) {
    p.speedup = kNaN;
    if (!p.ok) continue;
    for (const auto& base : result.points)
      if (base.ok && base.nu == p.nu && base.step_size_factor == 1 && p.wall_seconds > 0)
        p.speedup = base.wall_seconds / p.wall_seconds;
  }
}

void log_line(std::ostream* log, const std::string& text) {
  if (log) *log << text << std::endl;
}

}  // namespace

std::size_t ExperimentResult::failures() const {
  return std::size_t(std::count_if(points.begin(), points.end(), [](const auto& p) { return !p.ok; }));
}

const GridPointResult& ExperimentResult::at(double nu, int s) const {
  for (const auto& p : points)
    if (p.nu == nu && p.step_size_factor == s) return p;
  throw ValidationError("no grid point " + grid_point_name(nu, s));
}

std::string grid_point_name(double nu, int s) { return "nu" + format_double(nu) + "_s" + std::to_string(s); }

ParticleSystem<double> prepare_system(const ScenarioConfig& config, std::ostream* log) {
  ParticleSystem<double> system = build_lattice_system<double>(config);
  init_velocities(system, config.temperature, config.seed);
  if (config.equilibration_steps > 0 && config.temperature > 0) {
    ForceEvaluator<double> forces(config.container, config.force_field);
    const auto report = equilibrate(system, forces, config.dt, config.equilibration_steps, config.temperature);
    if (!report.converged)
      log_line(log, "warning: equilibration at nu=" + format_double(config.force_field.nu) +
                        " ended at T=" + format_double(report.tail_temperature) + " (target " +
                        format_double(config.temperature) + ")");
  }
  return system;
}

ExperimentResult run_experiment(const ExperimentPlan& plan, const RunOptions& options) {
  plan.validate();
  if (options.write_files) {
    std::error_code ec;
    std::filesystem::create_directories(plan.output_dir, ec);
    if (ec) throw IoError("cannot create " + plan.output_dir.string() + ": " + ec.message());
  }

  ExperimentResult result;
  for (double nu : plan.nus()) {
    // every s of this nu row starts from the same equilibrated state
    std::optional<ParticleSystem<double>> initial;
    std::string prepare_failure;
    try {
      initial = prepare_system(plan.config_for(nu, 1), options.log);
    } catch (const BlowUpError& e) {
      prepare_failure = e.what();
    } catch (const KernelError& e) {
      prepare_failure = e.what();
    }

    for (int s : plan.factors()) {
      const ScenarioConfig config = plan.config_for(nu, s);
      GridPointResult point;
      if (initial) {
        log_line(options.log, "running " + grid_point_name(nu, s));
        point = run_grid_point(plan, config, *initial);
      } else {
        point.nu = nu;
        point.step_size_factor = s;
        point.status = "error";
        point.message = "equilibration failed: " + prepare_failure;
        point.wall_seconds = point.mean_energy = point.mean_pressure = point.rvite = kNaN;
      }
      if (!point.ok) log_line(options.log, grid_point_name(nu, s) + " failed: " + point.message);
      if (options.write_files) write_grid_point(plan.output_dir / grid_point_name(nu, s), point);
      result.points.push_back(std::move(point));
    }
  }
  assign_speedups(result);
  if (options.write_files) write_summary(plan.output_dir / "summary.csv", result);
  return result;
}

ExperimentResult run_rdf_comparison(const ExperimentPlan& plan, const RunOptions& options) {
  if (!plan.base.periodic) throw ValidationError("RDF comparison requires a periodic scenario");
  ExperimentPlan with_reference = plan;
  std::vector<double> nus = plan.nus();
  if (std::find(nus.begin(), nus.end(), 0.0) == nus.end()) nus.insert(nus.begin(), 0.0);
  with_reference.nu_values = nus;
  ExperimentResult result = run_experiment(with_reference, options);
  if (options.write_files) write_rdf_comparison(plan.output_dir / "rdf_compare.csv", result);
  return result;
}

void write_grid_point(const std::filesystem::path& dir, const GridPointResult& point) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  CsvWriter energies(dir / "energies.csv", {"iteration", "kinetic", "pot_2b", "pot_3b", "total"});
  for (std::size_t i = 0; i < point.total_energy.size(); ++i)
    energies.field(point.total_energy.iterations()[i])
        .field(point.kinetic.values()[i])
        .field(point.potential_2b.values()[i])
        .field(point.potential_3b.values()[i])
        .field(point.total_energy.values()[i])
        .end_row();
  energies.close();

  CsvWriter pressure(dir / "pressure.csv", {"iteration", "pressure"});
  for (std::size_t i = 0; i < point.pressure.size(); ++i)
    pressure.field(point.pressure.iterations()[i]).field(point.pressure.values()[i]).end_row();
  pressure.close();

  CsvWriter rdf(dir / "rdf.csv", {"r", "g"});
  for (const auto& [r, g] : point.rdf) rdf.field(r).field(g).end_row();
  rdf.close();
}

void write_summary(const std::filesystem::path& path, const ExperimentResult& result) {
  CsvWriter out(path, {"nu", "s", "rvite", "mean_energy", "mean_pressure", "wall_seconds", "speedup", "status",
                       "rvite_warning"});
  for (const auto& p : result.points)
    out.field(p.nu)
        .field(p.step_size_factor)
        .field(p.rvite)
        .field(p.mean_energy)
        .field(p.mean_pressure)
        .field(p.wall_seconds)
        .field(p.speedup)
        .field(p.status)
        .field(p.rvite_warning ? "true" : "false")
        .end_row();
  out.close();
}

void write_rdf_comparison(const std::filesystem::path& path, const ExperimentResult& result) {
  std::vector<const GridPointResult*> curves;
  for (const auto& p : result.points)
    if (p.ok && !p.rdf.empty()) curves.push_back(&p);
  if (curves.empty()) throw ValidationError("no successful RDF to compare");

  std::vector<std::string> names = {"r"};
  for (const auto* c : curves) names.push_back(grid_point_name(c->nu, c->step_size_factor));
  CsvWriter out(path, names);
  for (std::size_t b = 0; b < curves.front()->rdf.size(); ++b) {
    out.field(curves.front()->rdf[b].first);
    for (const auto* c : curves) out.field(c->rdf.at(b).second);
    out.end_row();
  }
  out.close();
}

}  // namespace respamd
