#include <random>

#include <gtest/gtest.h>

#include "respamd/integrators.hpp"
#include "respamd/model.hpp"

namespace respamd {
namespace {

ScenarioConfig lattice_config(long n, double edge) {
  ScenarioConfig c;
  c.particle_count = n;
  c.box.setConstant(edge);
  return c;
}

double min_pair_distance(const ParticleSystem<double>& s) {
  double best = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < s.size(); ++i)
    for (Index j = i + 1; j < s.size(); ++j) best = std::min(best, (s.positions.col(i) - s.positions.col(j)).norm());
  return best;
}

TEST(Lattice, EightParticlesOnUnitCube) {
  const auto s = build_lattice_system<double>(lattice_config(8, 2.0));
  ASSERT_EQ(s.size(), 8);
  for (Index i = 0; i < 8; ++i)
    for (int d = 0; d < 3; ++d) {
      const double x = s.positions(d, i);
      EXPECT_TRUE(x == 0.0 || x == 1.0);
    }
  EXPECT_DOUBLE_EQ(min_pair_distance(s), 1.0);
  EXPECT_TRUE(s.velocities.isZero(0.0));
  EXPECT_TRUE(s.forces_2b.isZero(0.0));
  EXPECT_TRUE(s.forces_3b.isZero(0.0));
}

TEST(Lattice, ScenarioParticleCountsFit) {
  for (auto [n, edge] : {std::pair{675L, 10.0}, std::pair{4995L, 20.0}, std::pair{108L, 6.0}, std::pair{256L, 7.43}}) {
    ScenarioConfig c = lattice_config(n, edge);
    c.periodic = true;
    c.container = ContainerKind::LinkedCells;
    const auto s = build_lattice_system<double>(c);
    EXPECT_EQ(s.size(), n);
    EXPECT_NO_THROW(s.validate());
    EXPECT_GE(min_pair_distance(s), 0.5);
  }
}

TEST(Lattice, RejectsOvercrowdedBox) {
  EXPECT_THROW(build_lattice_system<double>(lattice_config(100000, 10.0)), ValidationError);
  EXPECT_THROW(build_lattice_system<double>(lattice_config(0, 10.0)), ValidationError);
}

TEST(Lattice, NeverCloserThanHalfSigma) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<long> count(1, 400);
  std::uniform_real_distribution<double> edge(3.0, 9.0);
  for (int t = 0; t < 40; ++t) {
    ScenarioConfig c = lattice_config(count(rng), edge(rng));
    c.box.y() *= 1.3;
    try {
      const auto s = build_lattice_system<double>(c);
      EXPECT_GE(min_pair_distance(s), 0.5 - 1e-12);
    } catch (const ValidationError&) {
    }
  }
}

TEST(Velocities, ZeroTemperatureGivesRest) {
  auto s = build_lattice_system<double>(lattice_config(27, 4.0));
  init_velocities(s, 0.0, 42);
  EXPECT_TRUE(s.velocities.isZero(0.0));
  EXPECT_THROW(init_velocities(s, -1.0, 42), ValidationError);
}

TEST(Velocities, MomentumRemovedForAnySeed) {
  for (std::uint64_t seed : {1ULL, 2ULL, 99ULL, 123456789ULL}) {
    for (long n : {1L, 2L, 50L, 1000L}) {
      auto s = build_lattice_system<double>(lattice_config(n, 12.0));
      init_velocities(s, 1.1, seed);
      const Vec3<double> p = s.mass * s.velocities.rowwise().sum();
      EXPECT_LE(p.norm(), 1e-12) << "seed " << seed << " n " << n;
    }
  }
}

TEST(Velocities, EquipartitionTemperature) {
  auto s = build_lattice_system<double>(lattice_config(10000, 30.0));
  init_velocities(s, 1.1, 42);
  EXPECT_NEAR(temperature(s), 1.1, 0.05 * 1.1);
}

TEST(Velocities, DeterministicForSeed) {
  const ScenarioConfig c = lattice_config(64, 5.0);
  auto a = build_lattice_system<double>(c);
  auto b = build_lattice_system<double>(c);
  init_velocities(a, 1.1, 7);
  init_velocities(b, 1.1, 7);
  EXPECT_TRUE((a.positions.array() == b.positions.array()).all());
  EXPECT_TRUE((a.velocities.array() == b.velocities.array()).all());
}

TEST(ScenarioConfig, ValidatesInvariants) {
  ScenarioConfig c = lattice_config(10, 5.0);
  c.iterations = 100;
  c.step_size_factor = 12;
  EXPECT_THROW(c.validate(), ValidationError);
  c.step_size_factor = 4;
  EXPECT_NO_THROW(c.validate());
  c.dt = 0;
  EXPECT_THROW(c.validate(), ValidationError);
  c.dt = 0.001;
  c.container = ContainerKind::DirectSum;
  c.periodic = true;
  EXPECT_THROW(c.validate(), ValidationError);
}

}  // namespace
}  // namespace respamd
