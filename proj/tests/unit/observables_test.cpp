#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "respamd/model.hpp"
#include "respamd/observables.hpp"
#include "respamd/reference.hpp"

namespace respamd {
namespace {

using V = Vec3<double>;

ObservableSeries<double> series(std::initializer_list<double> values, long stride = 1) {
  ObservableSeries<double> s;
  long it = 0;
  for (double v : values) {
    s.push(it, v);
    it += stride;
  }
  return s;
}

TEST(TotalEnergy, Decomposition) {
  ParticleSystem<double> s(2, Domain<double>{V::Constant(10), false});
  s.positions.col(1) = V(std::pow(2.0, 1.0 / 6.0), 0, 0);
  ForceEvaluator<double> ev(ContainerKind::DirectSum, ForceField<double>{});
  const auto e = total_energy(s, ev);
  EXPECT_EQ(e.kinetic, 0.0);
  EXPECT_NEAR(e.total, -1.0, 1e-14);
  EXPECT_EQ(e.total, e.kinetic + e.potential_2b + e.potential_3b);
}

TEST(TotalEnergy, CellPotentialsMatchRestrictedDirectSums) {
  std::mt19937_64 rng(3);
  const auto s = reference::random_system<double>(80, Domain<double>{V::Constant(7), true}, 0.8, rng);
  ForceField<double> ff;
  ff.nu = 0.6;
  ParticleSystem<double> copy = s;
  ForceEvaluator<double> cells(ContainerKind::LinkedCells, ff);
  const auto e = total_energy(copy, cells);
  EXPECT_NEAR(e.potential_2b, reference::pairs(s, ff, 2.5).potential, 1e-10 * std::abs(e.potential_2b));
  EXPECT_NEAR(e.potential_3b, reference::triplets(s, ff, 2.5).potential, 1e-10 * std::abs(e.potential_3b));
}

TEST(Series, RejectsNonIncreasingIterations) {
  ObservableSeries<double> s;
  s.push(0, 1.0);
  EXPECT_THROW(s.push(0, 2.0), ValidationError);
  EXPECT_THROW(ObservableSeries<double>{}.mean(), ValidationError);
}

TEST(Rvite, HandValues) {
  EXPECT_EQ(rvite(series({5, 5, 5, 5}), 2.0), 0.0);
  EXPECT_DOUBLE_EQ(rvite(series({1, 3}), 1.0), 1.0);
  EXPECT_THROW(rvite(series({1, 3}), 0.0), ValidationError);
  EXPECT_THROW(rvite(ObservableSeries<double>{}, 1.0), ValidationError);
}

TEST(Rvite, Homogeneous) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g(-100, 0.3);
  std::uniform_real_distribution<double> scale(0.01, 100);
  for (int t = 0; t < 20; ++t) {
    ObservableSeries<double> e, ce;
    const double c = scale(rng);
    for (long i = 0; i < 50; ++i) {
      const double v = g(rng);
      e.push(i, v);
      ce.push(i, c * v);
    }
    EXPECT_NEAR(rvite(ce, c * 7.0), rvite(e, 7.0), 1e-12 * rvite(e, 7.0));
  }
}

TEST(Rvite, LinkedCellsReportCarriesWarning) {
  EXPECT_TRUE(rvite_report(series({1, 2}), 1.0, ContainerKind::LinkedCells).cutoff_warning);
  EXPECT_FALSE(rvite_report(series({1, 2}), 1.0, ContainerKind::DirectSum).cutoff_warning);
}

TEST(Histogram, CountsAndEdges) {
  auto h = Histogram<double>::uniform(0, 1, 4);
  for (double v : {0.0, 0.1, 0.25, 0.5, 0.99, 1.0, 1.5}) h.insert(v);
  EXPECT_EQ(h.counts(), (std::vector<long>{2, 1, 1, 2}));
  EXPECT_EQ(h.outliers(), 1);
  EXPECT_EQ(h.total(), 6);
  EXPECT_THROW(Histogram<double>::uniform(1, 1, 4), ValidationError);
  EXPECT_THROW(Histogram<double>::uniform(0, 1, 0), ValidationError);
}

TEST(EnergyDeviation, IdenticalSeriesConcentrateAtZero) {
  const auto ref = series({-10, -10.1, -9.9, -10.05}, 12);
  const auto h = energy_deviation_histogram(ref, ref, 12);
  EXPECT_EQ(h.bins(), std::size_t(kEnergyHistogramBins));
  EXPECT_EQ(h.counts()[h.bin_of(0.0)], 4);
  EXPECT_EQ(h.total(), 4);
}

TEST(EnergyDeviation, UsesCommonStride) {
  ObservableSeries<double> ref, s12;
  for (long i = 0; i <= 48; ++i) ref.push(i, -10.0 - 0.001 * double(i));
  for (long i = 0; i <= 48; i += 12) s12.push(i, -10.0);
  const auto dev = relative_energy_deviation(s12, ref, 12);
  ASSERT_EQ(dev.size(), 5u);
  for (std::size_t k = 0; k < dev.size(); ++k) {
    const double e_ref = -10.0 - 0.012 * double(k);
    EXPECT_NEAR(dev[k], (-10.0 - e_ref) / std::abs(e_ref), 1e-15);
  }
  EXPECT_THROW(relative_energy_deviation(s12, ref, 5), ValidationError);
}

TEST(EnergyDeviation, SharedRangeConservesCounts) {
  ObservableSeries<double> ref, a, b;
  for (long i = 0; i <= 120; i += 6) {
    ref.push(i, -5.0);
    a.push(i, -5.0 + 1e-4 * std::sin(double(i)));
    b.push(i, -5.0 + 3e-4 * std::cos(double(i)));
  }
  const std::vector<ObservableSeries<double>> compared = {a, b};
  const auto hs = energy_deviation_histograms<double>(compared, ref, 12);
  ASSERT_EQ(hs.size(), 2u);
  EXPECT_EQ(hs[0].edges(), hs[1].edges());
  EXPECT_EQ(hs[0].total(), 11);
  EXPECT_EQ(hs[1].total(), 11);
  EXPECT_EQ(hs[0].outliers() + hs[1].outliers(), 0);
}

TEST(Rdf, TwoParticlesSingleBin) {
  const Domain<double> box{V::Constant(10), true};
  ParticleSystem<double> s(2, box);
  s.positions.col(0) = V(1, 1, 1);
  s.positions.col(1) = V(1, 1, 3.35);
  const std::vector<ParticleSystem<double>> frames = {s};
  const auto g = rdf<double>(frames, 5.0, 50);
  for (std::size_t b = 0; b < g.size(); ++b) {
    if (b == 23) {
      EXPECT_GT(g[b].second, 0.0);
    } else {
      EXPECT_EQ(g[b].second, 0.0) << b;
    }
  }
}

TEST(Rdf, RejectsInvalidRange) {
  const Domain<double> box{V::Constant(10), true};
  EXPECT_THROW(RdfAccumulator<double>(box, 5.1, 10), ValidationError);
  EXPECT_THROW(RdfAccumulator<double>(Domain<double>{V::Constant(10), false}, 4.0, 10), ValidationError);
}

TEST(Rdf, UniformIdealGasIsFlat) {
  std::mt19937_64 rng(6);
  const Domain<double> box{V::Constant(10), true};
  RdfAccumulator<double> acc(box, 5.0, 50);
  for (int f = 0; f < 100; ++f) acc.add_frame(reference::random_system<double>(500, box, 0.0, rng));
  for (const auto& [r, g] : acc.result()) {
    if (r < 0.5) continue;
    EXPECT_NEAR(g, 1.0, 0.1) << "r=" << r;
  }
}

TEST(Pressure, IdealGasAndStaticLattice) {
  ScenarioConfig c;
  c.particle_count = 1000;
  c.box.setConstant(12.0);
  c.periodic = true;
  c.container = ContainerKind::LinkedCells;
  auto s = build_lattice_system<double>(c);
  ForceState<double> none;
  EXPECT_EQ(pressure(s, none), 0.0);

  init_velocities(s, 1.5, 2);
  const double rho = 1000.0 / s.domain.volume();
  EXPECT_NEAR(pressure(s, none), rho * temperature(s), 1e-12);
  EXPECT_NEAR(pressure_virial(1.5, s, 0.0, 0.0), rho * 1.5, 1e-12);
  EXPECT_NEAR(pressure_virial(1.0, s, 30.0, 6.0), rho + 36.0 / (3 * s.domain.volume()), 1e-12);
}

TEST(Speedup, Arithmetic) {
  const auto s = speedup({{1, 100.0}, {2, 55.0}});
  EXPECT_EQ(s.at(1), 1.0);
  EXPECT_NEAR(s.at(2), 100.0 / 55.0, 1e-15);
  EXPECT_THROW(speedup({{2, 55.0}}), ValidationError);
}

}  // namespace
}  // namespace respamd
