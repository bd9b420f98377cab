#pragma once

#include <string>
#include <vector>

#include "respamd/containers.hpp"

namespace respamd {

enum class ContainerKind { DirectSum, LinkedCells };

inline std::string to_string(ContainerKind kind) {
  return kind == ContainerKind::DirectSum ? "direct_sum" : "linked_cells";
}

/// Computes the two-body and three-body force classes of a system with one of the
/// interaction containers. Offset patterns are cached per grid geometry.
template <typename Scalar>
class ForceEvaluator {
 public:
  ForceEvaluator(ContainerKind kind, const ForceField<Scalar>& ff) : kind_(kind), ff_(ff) { ff_.validate(); }

  ContainerKind kind() const { return kind_; }
  const ForceField<Scalar>& force_field() const { return ff_; }

  /// Overwrites system.forces_2b with the LJ forces at the current positions.
  PassResult<Scalar> two_body(ParticleSystem<Scalar>& system) {
    system.forces_2b.setZero(3, system.size());
    if (ff_.epsilon == 0) return {};
    const LennardJones<Scalar> kernel{ff_};
    if (kind_ == ContainerKind::DirectSum) return direct_sum_pairs(system, kernel, system.forces_2b);
    refresh_grid(system);
    return c01_pair_pass(grid_, pair_offsets_, system, kernel, system.forces_2b);
  }

  /// Overwrites system.forces_3b with the ATM forces at the current positions.
  PassResult<Scalar> three_body(ParticleSystem<Scalar>& system) {
    system.forces_3b.setZero(3, system.size());
    if (ff_.nu == 0) return {};
    const AxilrodTellerMuto<Scalar> kernel{ff_.nu};
    if (kind_ == ContainerKind::DirectSum) return direct_sum_triplets(system, kernel, system.forces_3b);
    refresh_grid(system);
    return c01_triplet_pass(grid_, triplet_plan_, system, kernel, system.forces_3b);
  }

  const CellGrid<Scalar>& grid() const { return grid_; }
  const std::vector<TripletOffset>& triplet_patterns() const { return triplet_patterns_; }

 private:
  void refresh_grid(const ParticleSystem<Scalar>& system) {
    grid_ = build_cell_grid(system, ff_.cutoff);
    const bool same_geometry = have_patterns_ && grid_.cell_size == pattern_cell_size_ && grid_.reach == pattern_reach_;
    if (same_geometry) return;
    pair_offsets_ = generate_pair_offsets(grid_);
    triplet_patterns_ = generate_triplet_offsets(grid_);
    triplet_plan_ = TripletTraversalPlan::from(triplet_patterns_);
    pattern_cell_size_ = grid_.cell_size;
    pattern_reach_ = grid_.reach;
    have_patterns_ = true;
  }

  ContainerKind kind_;
  ForceField<Scalar> ff_;
  CellGrid<Scalar> grid_;
  std::vector<Vec3i> pair_offsets_;
  std::vector<TripletOffset> triplet_patterns_;
  TripletTraversalPlan triplet_plan_;
  Vec3<Scalar> pattern_cell_size_{Vec3<Scalar>::Zero()};
  Vec3i pattern_reach_{Vec3i::Zero()};
  bool have_patterns_{false};
};

}  // namespace respamd
