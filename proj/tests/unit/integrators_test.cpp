#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "respamd/check.hpp"
#include "respamd/integrators.hpp"
#include "respamd/model.hpp"
#include "respamd/observables.hpp"

namespace respamd {
namespace {

using V = Vec3<double>;

ForceField<double> field(double nu, double epsilon = 1.0) {
  ForceField<double> ff;
  ff.nu = nu;
  ff.epsilon = epsilon;
  return ff;
}

ParticleSystem<double> open_lattice(long n, double spacing, double temperature, std::uint64_t seed) {
  const double edge = spacing * std::ceil(std::cbrt(double(n)));
  auto s = build_lattice_system<double>(n, Domain<double>{V::Constant(edge), false});
  init_velocities(s, temperature, seed);
  return s;
}

TEST(RespaSchedule, Validation) {
  EXPECT_THROW((RespaSchedule<double>{0.001, 12, 100}.validate()), ValidationError);
  EXPECT_THROW((RespaSchedule<double>{0.0, 1, 100}.validate()), ValidationError);
  EXPECT_THROW((RespaSchedule<double>{0.001, 0, 100}.validate()), ValidationError);
  EXPECT_NO_THROW((RespaSchedule<double>{0.001, 4, 100}.validate()));
}

TEST(Respa, FreeParticleMovesBallistically) {
  ParticleSystem<double> s(1, Domain<double>{V::Constant(10), false});
  s.positions.col(0) = V(2, 3, 4);
  s.velocities.col(0) = V(1, 0, 0);
  ForceEvaluator<double> ev(ContainerKind::DirectSum, field(0, 0));
  respa_run(s, ev, RespaSchedule<double>{0.01, 1, 100});
  EXPECT_NEAR(s.positions(0, 0), 3.0, 1e-12);
  EXPECT_EQ(s.positions(1, 0), 3.0);
  EXPECT_EQ(s.positions(2, 0), 4.0);
  EXPECT_TRUE(s.velocities.col(0).isApprox(V(1, 0, 0)));
}

TEST(Respa, StepSizeFactorOneMatchesVerlet) {
  const IdentityStats id = respa_verlet_identity(64, 1000, 5);
  EXPECT_LE(id.max_position_diff, 1e-12);
  EXPECT_LE(id.max_velocity_diff, 1e-12);
}

TEST(Respa, ZeroNuIsIndependentOfStepSizeFactor) {
  const auto start = open_lattice(27, 1.2, 0.8, 9);
  ParticleSystem<double> ref = start;
  ForceEvaluator<double> e1(ContainerKind::DirectSum, field(0));
  verlet_run(ref, e1, 0.001, 240);
  for (int s : {1, 2, 3, 6, 12}) {
    ParticleSystem<double> sys = start;
    ForceEvaluator<double> ev(ContainerKind::DirectSum, field(0));
    respa_run(sys, ev, RespaSchedule<double>{0.001, s, 240});
    EXPECT_LE((sys.positions - ref.positions).cwiseAbs().maxCoeff(), 1e-12) << "s=" << s;
    EXPECT_LE((sys.velocities - ref.velocities).cwiseAbs().maxCoeff(), 1e-12) << "s=" << s;
  }
}

TEST(Respa, CountsForcePasses) {
  auto s = open_lattice(8, 1.2, 0.5, 1);
  ForceEvaluator<double> ev(ContainerKind::DirectSum, field(0.3));
  const RunStats stats = respa_run(s, ev, RespaSchedule<double>{0.001, 6, 120});
  EXPECT_EQ(stats.iterations, 120);
  EXPECT_EQ(stats.two_body_passes, 121);
  EXPECT_EQ(stats.three_body_passes, 21);
}

TEST(Respa, HooksFireAtMultiplesOfInterval) {
  auto s = open_lattice(8, 1.2, 0.5, 1);
  ForceEvaluator<double> ev(ContainerKind::DirectSum, field(0.3));
  std::vector<long> seen;
  const std::vector<SamplingHook<double>> hooks = {
      {12, [&](long it, const ParticleSystem<double>&, const ForceState<double>&) { seen.push_back(it); }}};
  respa_run(s, ev, RespaSchedule<double>{0.001, 3, 48}, std::span(hooks));
  EXPECT_EQ(seen, (std::vector<long>{0, 12, 24, 36, 48}));

  const std::vector<SamplingHook<double>> bad = {{4, {}}};
  EXPECT_THROW(respa_run(s, ev, RespaSchedule<double>{0.001, 3, 48}, std::span(bad)), ValidationError);
}

TEST(Respa, NonFiniteStateAborts) {
  auto s = open_lattice(8, 1.2, 0.5, 1);
  s.velocities(0, 3) = std::numeric_limits<double>::quiet_NaN();
  ForceEvaluator<double> ev(ContainerKind::DirectSum, field(0.3));
  try {
    respa_run(s, ev, RespaSchedule<double>{0.001, 1, 10});
    FAIL() << "expected a blow-up";
  } catch (const BlowUpError& e) {
    EXPECT_EQ(e.iteration(), 1);
  }
}

TEST(Respa, PeriodicPositionsStayWrapped) {
  ScenarioConfig c;
  c.particle_count = 125;
  c.box.setConstant(6.5);
  c.periodic = true;
  c.container = ContainerKind::LinkedCells;
  auto s = build_lattice_system<double>(c);
  init_velocities(s, 2.0, 3);
  ForceEvaluator<double> ev(ContainerKind::LinkedCells, field(0.3));
  respa_run(s, ev, RespaSchedule<double>{0.002, 2, 400});
  EXPECT_NO_THROW(s.validate());
}

TEST(Respa, MomentumConservedForAnyStepSizeFactor) {
  for (int s : {1, 3, 6}) {
    auto sys = open_lattice(27, 1.15, 1.1, 21);
    ForceEvaluator<double> ev(ContainerKind::DirectSum, field(0.9));
    double worst = 0;
    const std::vector<SamplingHook<double>> hooks = {
        {6, [&](long, const ParticleSystem<double>& x, const ForceState<double>&) {
           worst = std::max(worst, (x.mass * x.velocities.rowwise().sum()).norm());
         }}};
    respa_run(sys, ev, RespaSchedule<double>{0.001, s, 3000}, std::span(hooks));
    EXPECT_LE(worst, 1e-9) << "s=" << s;
  }
}

TEST(Verlet, ZeroIterationsLeavesSystemUnchanged) {
  const auto start = open_lattice(8, 1.2, 0.5, 1);
  auto s = start;
  ForceEvaluator<double> ev(ContainerKind::DirectSum, field(0.3));
  verlet_run(s, ev, 0.001, 0);
  EXPECT_TRUE((s.positions.array() == start.positions.array()).all());
  EXPECT_TRUE((s.velocities.array() == start.velocities.array()).all());
}

TEST(Verlet, TimeReversible) {
  auto s = open_lattice(27, 1.15, 1.1, 4);
  const Coords<double> start = s.positions;
  ForceEvaluator<double> ev(ContainerKind::DirectSum, field(0.5));
  verlet_run(s, ev, 0.001, 500);
  s.velocities = -s.velocities;
  verlet_run(s, ev, 0.001, 500);
  EXPECT_LE((s.positions - start).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Verlet, TwoParticleOscillatorConservesEnergy) {
  ParticleSystem<double> s(2, Domain<double>{V::Constant(10), false});
  s.positions.col(0) = V(0, 0, 0);
  s.positions.col(1) = V(std::pow(2.0, 1.0 / 6.0) + 0.05, 0, 0);
  ForceEvaluator<double> ev(ContainerKind::DirectSum, field(0));
  const double e0 = total_energy(s, ev).total;
  double worst = 0;
  const std::vector<SamplingHook<double>> hooks = {
      {1, [&](long, const ParticleSystem<double>& x, const ForceState<double>& st) {
         worst = std::max(worst, std::abs(energy_breakdown(x, st).total - e0));
       }}};
  verlet_run(s, ev, 0.001, 10000, std::span(hooks));
  EXPECT_LE(worst / std::abs(e0), 1e-5);
}

TEST(Equilibrate, RescaleArithmetic) {
  ParticleSystem<double> s(50, Domain<double>{V::Constant(100), false});
  for (Index i = 0; i < 50; ++i) s.positions.col(i) = V(2.0 * double(i), 0, 0);
  init_velocities(s, 4.0, 8);
  s.velocities *= std::sqrt(4.0 / temperature(s));
  ForceEvaluator<double> ev(ContainerKind::DirectSum, field(0, 0));
  const auto report = equilibrate(s, ev, 0.001, 1, 1.0, 1);
  ASSERT_EQ(report.rescale_factors.size(), 1u);
  EXPECT_NEAR(report.rescale_factors[0], 0.5, 1e-12);
  EXPECT_TRUE(report.converged);
  EXPECT_NEAR(temperature(s), 1.0, 1e-12);
}

TEST(Equilibrate, ZeroStepsLeavesSystemUnchanged) {
  const auto start = open_lattice(8, 1.2, 0.5, 1);
  auto s = start;
  ForceEvaluator<double> ev(ContainerKind::DirectSum, field(0.3));
  const auto report = equilibrate(s, ev, 0.001, 0, 1.0);
  EXPECT_TRUE(report.rescale_factors.empty());
  EXPECT_TRUE((s.velocities.array() == start.velocities.array()).all());
  EXPECT_THROW(equilibrate(s, ev, 0.001, 10, 0.0), ValidationError);
}

TEST(Equilibrate, ThermalizedSystemNeedsOnlySmallRescales) {
  ScenarioConfig c;
  c.particle_count = 216;
  c.box.setConstant(7.0);
  c.periodic = true;
  c.container = ContainerKind::LinkedCells;
  auto s = build_lattice_system<double>(c);
  init_velocities(s, 1.1, 17);
  ForceEvaluator<double> ev(ContainerKind::LinkedCells, field(0.3));
  const auto first = equilibrate(s, ev, 0.002, 1000, 1.1);
  EXPECT_TRUE(first.converged) << first.tail_temperature;
  const auto second = equilibrate(s, ev, 0.002, 300, 1.1);
  EXPECT_TRUE(second.converged);
  // instantaneous temperature of 216 particles fluctuates by ~5% between rescales
  double mean = 0;
  for (double f : second.rescale_factors) {
    EXPECT_GE(f, 0.95);
    EXPECT_LE(f, 1.05);
    mean += f;
  }
  EXPECT_NEAR(mean / double(second.rescale_factors.size()), 1.0, 0.01);
}

}  // namespace
}  // namespace respamd
