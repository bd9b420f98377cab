#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "respamd/model.hpp"

namespace respamd {

/// Malformed scenario text; the message carries "<source>:<line>: ".
class ParseError : public ValidationError {
 public:
  ParseError(const std::string& source, int line, const std::string& what)
      : ValidationError(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// A base scenario plus the optional nu x s sweep axes.
struct ExperimentPlan {
  ScenarioConfig base;
  /// Empty means the single value base.force_field.nu.
  std::vector<double> nu_values;
  /// Empty means the single value base.step_size_factor.
  std::vector<int> step_size_factors;
  std::filesystem::path output_dir{"respamd-out"};
  /// Add an s = 1 run to every nu row when the sweep lacks one.
  bool reference_run{false};

  std::vector<double> nus() const;
  std::vector<int> factors() const;

  /// Energy and pressure stride: sampling.energy_every, or the lcm of all factors.
  long energy_stride() const;
  /// RDF stride: sampling.sample_every rounded up to a multiple of the lcm of all factors.
  long rdf_stride() const;

  /// Configuration of one grid point.
  ScenarioConfig config_for(double nu, int s) const;

  void validate() const;
};

ExperimentPlan parse_scenario_text(std::string_view text, const std::string& source = "<scenario>");

/// Reads and validates a scenario file. Throws ParseError, ValidationError or IoError.
ExperimentPlan parse_scenario(const std::filesystem::path& path);

}  // namespace respamd
