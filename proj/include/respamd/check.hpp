#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "respamd/types.hpp"

namespace respamd {

/// Analytic kernels against central finite differences of the energies.
struct ForceOracleStats {
  long configurations{0};
  double max_lj_error{0};
  double max_atm_error{0};
  /// Largest component of f_i + f_j + f_k over all sampled triplets.
  double max_atm_force_sum{0};
};

/// Random pairs and triplets with every distance in [0.8, 2.5], finite-difference step 1e-6.
ForceOracleStats force_oracle(long configurations, std::uint64_t seed);

/// C01 passes against brute-force loops on random periodic systems.
struct TraversalStats {
  int systems{0};
  double max_pair_force_diff{0};
  double max_triplet_force_diff{0};
  double max_pair_energy_rel{0};
  double max_triplet_energy_rel{0};
  long within_cutoff_triplets{0};
  /// Every within-cutoff triplet visited exactly 3 times and nothing else visited.
  bool visit_counts_exact{true};
};

TraversalStats traversal_oracle(int systems, Index max_particles, std::uint64_t seed);

/// LinkedCells against DirectSum on open systems with a cutoff beyond the box diagonal.
struct CrossCheckStats {
  int systems{0};
  double max_force_diff{0};
  double max_energy_rel{0};
};

CrossCheckStats container_cross_check(int systems, Index max_particles, std::uint64_t seed);

/// r-RESPA with s = 1 against the plain Verlet integrator.
struct IdentityStats {
  double max_position_diff{0};
  double max_velocity_diff{0};
};

IdentityStats respa_verlet_identity(Index particles, long steps, std::uint64_t seed);

struct CheckOutcome {
  std::string name;
  bool passed{false};
  std::string detail;
};

/// Small-scale oracle suite behind the `check` subcommand.
std::vector<CheckOutcome> run_checks(std::uint64_t seed);

void print_checks(std::ostream& out, const std::vector<CheckOutcome>& outcomes);

}  // namespace respamd
