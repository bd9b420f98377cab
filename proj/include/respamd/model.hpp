#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>

#include "respamd/force_evaluator.hpp"
#include "respamd/types.hpp"

namespace respamd {

/// Observable sampling cadence, in integration steps.
struct SamplingConfig {
  long sample_every{100};  ///< RDF frames
  long energy_every{0};    ///< energy/pressure rows; 0 = lcm of the step-size factors
  int rdf_bins{200};
  double rdf_r_max{0};     ///< 0 = half the smallest box edge
};

/// One simulation in reduced units (epsilon = sigma = m = 1 unless overridden).
struct ScenarioConfig {
  long particle_count{1};
  Vec3<double> box{Vec3<double>::Constant(10)};
  bool periodic{false};
  double mass{1};
  double dt{0.001};
  long iterations{0};
  int step_size_factor{1};
  ForceField<double> force_field;
  double temperature{0};
  long equilibration_steps{0};
  std::uint64_t seed{42};
  ContainerKind container{ContainerKind::DirectSum};
  SamplingConfig sampling;

  Domain<double> domain() const { return {box, periodic}; }

  void validate() const;
};

/// Lattice sites per dimension used for `count` particles in `edges`.
Vec3i lattice_shape(long count, const Vec3<double>& edges);

/// Simple cubic lattice filling the box; site spacing edge/n per dimension.
/// Vacancies (sites beyond `count`) are spread evenly through the lattice.
template <typename Scalar>
ParticleSystem<Scalar> build_lattice_system(long count, const Domain<Scalar>& domain, Scalar sigma = Scalar(1),
                                            Scalar mass = Scalar(1)) {
  if (count < 1) throw ValidationError("particle_count must be >= 1");
  if (!(domain.edges.array() > 0).all()) throw ValidationError("box edges must be > 0");
  const Vec3i shape = lattice_shape(count, domain.edges.template cast<double>());
  const Vec3<Scalar> spacing = domain.edges.cwiseQuotient(shape.cast<Scalar>());
  if (spacing.minCoeff() < Scalar(0.5) * sigma)
    throw ValidationError("particle_count " + std::to_string(count) +
                          " exceeds lattice capacity at spacing >= 0.5 sigma for this box");

  ParticleSystem<Scalar> system(Index(count), domain, mass);
  const long sites = long(shape.prod());
  for (long p = 0; p < count; ++p) {
    const long site = long((static_cast<unsigned __int128>(p) * sites) / count);
    const Vec3i c(int(site % shape.x()), int((site / shape.x()) % shape.y()), int(site / (long(shape.x()) * shape.y())));
    system.positions.col(Index(p)) = c.cast<Scalar>().cwiseProduct(spacing);
  }
  return system;
}

template <typename Scalar = double>
ParticleSystem<Scalar> build_lattice_system(const ScenarioConfig& config) {
  config.validate();
  const Domain<double> d = config.domain();
  return build_lattice_system<Scalar>(config.particle_count, Domain<Scalar>{d.edges.cast<Scalar>(), d.periodic},
                                      Scalar(config.force_field.sigma), Scalar(config.mass));
}

/// Gaussian velocities with per-component variance T/m, then the centre-of-mass
/// drift is removed. Deterministic for a given seed.
template <typename Scalar>
void init_velocities(ParticleSystem<Scalar>& system, Scalar temperature, std::uint64_t seed) {
  if (temperature < 0) throw ValidationError("temperature must be >= 0");
  system.velocities.setZero(3, system.size());
  if (temperature == 0) return;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, std::sqrt(double(temperature) / double(system.mass)));
  for (Index i = 0; i < system.size(); ++i)
    for (int d = 0; d < 3; ++d) system.velocities(d, i) = Scalar(gauss(rng));
  const Vec3<Scalar> drift = system.velocities.rowwise().mean();
  system.velocities.colwise() -= drift;
}

}  // namespace respamd
