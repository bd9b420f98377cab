#include "respamd/check.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <ostream>
#include <random>
#include <sstream>
#include <unordered_map>

#include "respamd/csv.hpp"
#include "respamd/force_evaluator.hpp"
#include "respamd/integrators.hpp"
#include "respamd/model.hpp"
#include "respamd/reference.hpp"

namespace respamd {

namespace {

constexpr double kFiniteDifferenceStep = 1e-6;
constexpr double kMinSeparation = 0.8;
constexpr double kMaxSeparation = 2.5;

Vec3<double> random_direction(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Vec3<double> v(gauss(rng), gauss(rng), gauss(rng));
  return v.normalized();
}

bool in_band(double r) { return r >= kMinSeparation && r <= kMaxSeparation; }

double max_abs_diff(const Coords<double>& a, const Coords<double>& b) { return (a - b).cwiseAbs().maxCoeff(); }

double relative(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

std::string format(const char* label, double value) { return std::string(label) + "=" + format_double(value); }

}  // namespace

ForceOracleStats force_oracle(long configurations, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> band(kMinSeparation, kMaxSeparation);
  std::uniform_real_distribution<double> shift(-5.0, 5.0);
  std::uniform_real_distribution<double> nu_dist(0.1, 1.0);
  ForceOracleStats stats;
  const double h = kFiniteDifferenceStep;

  for (long c = 0; c < configurations; ++c) {
    ForceField<double> ff;
    ff.nu = nu_dist(rng);

    // pair: energy as a function of x_i with x_j fixed
    const Vec3<double> xj(shift(rng), shift(rng), shift(rng));
    const Vec3<double> xi = xj + band(rng) * random_direction(rng);
    const Vec3<double> f_lj = lj_force<double>(xi - xj, ff);
    const Vec3<double> fd_lj =
        -reference::numeric_gradient<double>([&](const Vec3<double>& x) { return lj_energy((x - xj).norm(), ff); }, xi, h);
    stats.max_lj_error = std::max(stats.max_lj_error, reference::relative_error(f_lj, fd_lj));

    // triplet with all three sides inside the band
    Vec3<double> p[3];
    do {
      p[0] = Vec3<double>(shift(rng), shift(rng), shift(rng));
      p[1] = p[0] + band(rng) * random_direction(rng);
      p[2] = p[0] + band(rng) * random_direction(rng);
    } while (!in_band((p[2] - p[1]).norm()));
    const TripletForces<double> f = atm_forces<double>(p[0], p[1], p[2], ff);
    const Vec3<double>* analytic[3] = {&f.f_i, &f.f_j, &f.f_k};
    for (int m = 0; m < 3; ++m) {
      const auto energy_of = [&](const Vec3<double>& x) {
        Vec3<double> q[3] = {p[0], p[1], p[2]};
        q[m] = x;
        return atm_energy<double>(q[0], q[1], q[2], ff);
      };
      const Vec3<double> fd = -reference::numeric_gradient<double>(energy_of, p[m], h);
      stats.max_atm_error = std::max(stats.max_atm_error, reference::relative_error(*analytic[m], fd));
    }
    stats.max_atm_force_sum = std::max(stats.max_atm_force_sum, f.sum().cwiseAbs().maxCoeff());
    ++stats.configurations;
  }
  return stats;
}

TraversalStats traversal_oracle(int systems, Index max_particles, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> edge_dist(6.0, 10.0);
  std::uniform_real_distribution<double> nu_dist(0.1, 1.0);
  std::uniform_int_distribution<Index> count_dist(std::min<Index>(20, max_particles), max_particles);
  TraversalStats stats;

  for (int sys = 0; sys < systems; ++sys) {
    const Domain<double> domain{Vec3<double>::Constant(edge_dist(rng)), true};
    ParticleSystem<double> system = reference::random_system<double>(count_dist(rng), domain, kMinSeparation, rng);
    ForceField<double> ff;
    ff.nu = nu_dist(rng);
    const Index n = system.size();

    const CellGrid<double> grid = build_cell_grid(system, ff.cutoff);
    Coords<double> f2 = Coords<double>::Zero(3, n);
    const PassResult<double> pair = c01_pair_pass(grid, system, LennardJones<double>{ff}, f2);
    const auto ref2 = reference::pairs(system, ff, ff.cutoff);
    stats.max_pair_force_diff = std::max(stats.max_pair_force_diff, max_abs_diff(f2, ref2.forces));
    stats.max_pair_energy_rel = std::max(stats.max_pair_energy_rel, relative(pair.potential, ref2.potential));

    std::unordered_map<long, int> visits;
    std::mutex visits_mutex;
    const auto record = [&](Index i, Index j, Index k) {
      Index t[3] = {i, j, k};
      std::sort(t, t + 3);
      std::lock_guard<std::mutex> lock(visits_mutex);
      ++visits[long((t[0] * n + t[1]) * n + t[2])];
    };
    Coords<double> f3 = Coords<double>::Zero(3, n);
    const PassResult<double> triplet =
        c01_triplet_pass(grid, generate_triplet_offsets(grid), system, AxilrodTellerMuto<double>{ff.nu}, f3, record);
    const auto ref3 = reference::triplets(system, ff, ff.cutoff);
    stats.max_triplet_force_diff = std::max(stats.max_triplet_force_diff, max_abs_diff(f3, ref3.forces));
    stats.max_triplet_energy_rel = std::max(stats.max_triplet_energy_rel, relative(triplet.potential, ref3.potential));

    if (long(visits.size()) != long(ref3.interactions)) stats.visit_counts_exact = false;
    for (const auto& [key, count] : visits) {
      if (count != 3) stats.visit_counts_exact = false;
      const Index i = key / (n * n);
      const Index j = (key / n) % n;
      const Index k = key % n;
      if (!within_cutoff_triplet<double>(system.positions.col(i), system.positions.col(j), system.positions.col(k),
                                         ff.cutoff, domain))
        stats.visit_counts_exact = false;
    }
    stats.within_cutoff_triplets += long(ref3.interactions);
    ++stats.systems;
  }
  return stats;
}

CrossCheckStats container_cross_check(int systems, Index max_particles, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> edge_dist(4.0, 8.0);
  std::uniform_real_distribution<double> nu_dist(0.1, 1.0);
  std::uniform_int_distribution<Index> count_dist(std::min<Index>(3, max_particles), max_particles);
  CrossCheckStats stats;

  for (int sys = 0; sys < systems; ++sys) {
    const Domain<double> domain{Vec3<double>::Constant(edge_dist(rng)), false};
    ParticleSystem<double> a = reference::random_system<double>(count_dist(rng), domain, kMinSeparation, rng);
    ForceField<double> ff;
    ff.nu = nu_dist(rng);
    ff.cutoff = 1.01 * domain.edges.norm();
    ParticleSystem<double> b = a;

    ForceEvaluator<double> direct(ContainerKind::DirectSum, ff);
    ForceEvaluator<double> cells(ContainerKind::LinkedCells, ff);
    const auto d2 = direct.two_body(a);
    const auto d3 = direct.three_body(a);
    const auto c2 = cells.two_body(b);
    const auto c3 = cells.three_body(b);
    stats.max_force_diff = std::max({stats.max_force_diff, max_abs_diff(a.forces_2b, b.forces_2b),
                                     max_abs_diff(a.forces_3b, b.forces_3b)});
    stats.max_energy_rel =
        std::max(stats.max_energy_rel, relative(c2.potential + c3.potential, d2.potential + d3.potential));
    ++stats.systems;
  }
  return stats;
}

IdentityStats respa_verlet_identity(Index particles, long steps, std::uint64_t seed) {
  ForceField<double> ff;
  ff.nu = 0.5;
  // open lattice at spacing about 1.2 sigma
  const double edge = 1.2 * std::ceil(std::cbrt(double(particles)));
  const Domain<double> domain{Vec3<double>::Constant(edge), false};
  ParticleSystem<double> a = build_lattice_system<double>(particles, domain, ff.sigma, 1.0);
  init_velocities(a, 0.5, seed);
  ParticleSystem<double> b = a;

  ForceEvaluator<double> fa(ContainerKind::DirectSum, ff);
  ForceEvaluator<double> fb(ContainerKind::DirectSum, ff);
  const double dt = 0.001;
  respa_run(a, fa, RespaSchedule<double>{dt, 1, steps});
  verlet_run(b, fb, dt, steps);
  return {max_abs_diff(a.positions, b.positions), max_abs_diff(a.velocities, b.velocities)};
}

std::vector<CheckOutcome> run_checks(std::uint64_t seed) {
  std::vector<CheckOutcome> out;

  const ForceOracleStats forces = force_oracle(200, seed);
  out.push_back({"force finite-difference oracle",
                 forces.max_lj_error <= 1e-6 && forces.max_atm_error <= 1e-6 && forces.max_atm_force_sum <= 1e-12,
                 format("lj", forces.max_lj_error) + " " + format("atm", forces.max_atm_error) + " " +
                     format("atm_sum", forces.max_atm_force_sum)});

  const TraversalStats traversal = traversal_oracle(3, 80, seed + 1);
  out.push_back({"C01 traversal vs brute force",
                 traversal.max_pair_force_diff <= 1e-9 && traversal.max_triplet_force_diff <= 1e-9 &&
                     traversal.max_pair_energy_rel <= 1e-10 && traversal.max_triplet_energy_rel <= 1e-10 &&
                     traversal.visit_counts_exact,
                 format("pair_force", traversal.max_pair_force_diff) + " " +
                     format("triplet_force", traversal.max_triplet_force_diff) + " " +
                     format("triplet_energy_rel", traversal.max_triplet_energy_rel) +
                     (traversal.visit_counts_exact ? " visits=3" : " visits!=3")});

  const CrossCheckStats cross = container_cross_check(3, 40, seed + 2);
  out.push_back({"LinkedCells vs DirectSum", cross.max_force_diff <= 1e-9,
                 format("force", cross.max_force_diff) + " " + format("energy_rel", cross.max_energy_rel)});

  const IdentityStats identity = respa_verlet_identity(27, 200, seed + 3);
  out.push_back({"r-RESPA s=1 vs Verlet",
                 identity.max_position_diff <= 1e-12 && identity.max_velocity_diff <= 1e-12,
                 format("position", identity.max_position_diff) + " " + format("velocity", identity.max_velocity_diff)});
  return out;
}

void print_checks(std::ostream& out, const std::vector<CheckOutcome>& outcomes) {
  for (const auto& o : outcomes) out << (o.passed ? "PASS " : "FAIL ") << o.name << ": " << o.detail << '\n';
}

}  // namespace respamd
