#include "respamd/model.hpp"

#include <algorithm>
#include <cmath>

namespace respamd {

void ScenarioConfig::validate() const {
  if (particle_count < 1) throw ValidationError("particle_count must be >= 1");
  if (!(box.array() > 0).all() || !box.allFinite()) throw ValidationError("box edges must be finite and > 0");
  if (!(mass > 0)) throw ValidationError("mass must be > 0");
  if (!(dt > 0) || !std::isfinite(dt)) throw ValidationError("dt must be > 0");
  if (iterations < 0) throw ValidationError("iterations must be >= 0");
  if (step_size_factor < 1) throw ValidationError("step-size factor must be >= 1");
  if (iterations % step_size_factor != 0)
    throw ValidationError("iterations (" + std::to_string(iterations) + ") must be a multiple of the step-size factor (" +
                          std::to_string(step_size_factor) + ")");
  if (temperature < 0 || !std::isfinite(temperature)) throw ValidationError("temperature must be >= 0");
  if (equilibration_steps < 0) throw ValidationError("equilibration must be >= 0");
  if (container == ContainerKind::DirectSum && periodic)
    throw ValidationError("container direct_sum does not support periodic=true");
  if (sampling.sample_every < 1) throw ValidationError("sample_every must be >= 1");
  if (sampling.energy_every < 0) throw ValidationError("energy_every must be >= 0");
  if (sampling.rdf_bins < 1) throw ValidationError("rdf_bins must be >= 1");
  force_field.validate();
}

Vec3i lattice_shape(long count, const Vec3<double>& edges) {
  const double per_length = std::cbrt(double(count) / edges.prod());
  Vec3i shape;
  for (int d = 0; d < 3; ++d) shape(d) = std::max(1, int(std::ceil(edges(d) * per_length - 1e-9)));
  // grow the sparsest dimension until every particle has a site
  while (long(shape.x()) * shape.y() * shape.z() < count) {
    int widest = 0;
    for (int d = 1; d < 3; ++d)
      if (edges(d) / shape(d) > edges(widest) / shape(widest)) widest = d;
    ++shape(widest);
  }
  return shape;
}

}  // namespace respamd
