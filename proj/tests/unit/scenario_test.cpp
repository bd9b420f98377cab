#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "respamd/csv.hpp"
#include "respamd/scenario.hpp"

namespace respamd {
namespace {

const std::filesystem::path kScenarios = RESPAMD_SCENARIO_DIR;

TEST(Scenario, BundledToy) {
  const ExperimentPlan p = parse_scenario(kScenarios / "toy.scn");
  EXPECT_EQ(p.base.particle_count, 675);
  EXPECT_EQ(p.base.box, Vec3<double>::Constant(10));
  EXPECT_EQ(p.base.iterations, 24000);
  EXPECT_EQ(p.base.dt, 0.001);
  EXPECT_EQ(p.base.container, ContainerKind::DirectSum);
  EXPECT_EQ(p.factors(), (std::vector<int>{1, 2, 3, 4, 6, 12}));
  EXPECT_EQ(p.nus().front(), 0.05);
  EXPECT_EQ(p.nus().back(), 1.0);
  EXPECT_EQ(p.energy_stride(), 12);
}

TEST(Scenario, BundledAluminum) {
  const ExperimentPlan p = parse_scenario(kScenarios / "aluminum.scn");
  EXPECT_EQ(p.base.dt, 0.00304);
  EXPECT_EQ(p.base.force_field.nu, 0.3095);
  EXPECT_EQ(p.base.temperature, 1.1);
  EXPECT_EQ(p.base.box, Vec3<double>::Constant(20));
  EXPECT_EQ(p.base.particle_count, 4995);
  EXPECT_EQ(p.base.iterations, 24000);
  EXPECT_TRUE(p.base.periodic);
  EXPECT_EQ(p.base.container, ContainerKind::LinkedCells);
}

TEST(Scenario, AllBundledFilesParse) {
  for (const auto& entry : std::filesystem::directory_iterator(kScenarios)) {
    if (entry.path().extension() != ".scn") continue;
    EXPECT_NO_THROW(parse_scenario(entry.path())) << entry.path();
  }
}

TEST(Scenario, FlatKeysWithoutSections) {
  const auto p = parse_scenario_text(
      "particles=8\nbox=2\ndt=0.002\niterations=12\nnu=0.4\ncontainer=direct_sum\n"
      "step_size_factors=1,2,3\nseed=7  # trailing comment\n");
  EXPECT_EQ(p.base.particle_count, 8);
  EXPECT_EQ(p.base.box, Vec3<double>::Constant(2));
  EXPECT_EQ(p.base.seed, 7u);
  EXPECT_EQ(p.factors(), (std::vector<int>{1, 2, 3}));
  EXPECT_EQ(p.nus(), (std::vector<double>{0.4}));
}

TEST(Scenario, IndivisibleIterationsRejected) {
  EXPECT_THROW(parse_scenario_text("particles=8\nbox=4\niterations=100\nstep_size_factors=1,12\n"), ValidationError);
}

int error_line(const std::string& text) {
  try {
    parse_scenario_text(text, "t.scn");
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("t.scn:" + std::to_string(e.line())), std::string::npos);
    return e.line();
  }
  return -1;
}

TEST(Scenario, ErrorsCarryLineNumbers) {
  EXPECT_EQ(error_line("particles=8\n\nbogus=1\n"), 3);
  EXPECT_EQ(error_line("particles=eight\n"), 1);
  EXPECT_EQ(error_line("# c\n[system]\ndt=0.001\n"), 3);
  EXPECT_EQ(error_line("[nowhere]\n"), 1);
  EXPECT_EQ(error_line("particles=8\nparticles=9\n"), 2);
  EXPECT_EQ(error_line("box=1 2\n"), 1);
  EXPECT_EQ(error_line("container=octree\n"), 1);
  EXPECT_EQ(error_line("periodic=maybe\n"), 1);
  EXPECT_EQ(error_line("just text\n"), 1);
}

TEST(Scenario, ValidationNamesInvariant) {
  try {
    parse_scenario_text("particles=8\nbox=4\nperiodic=true\ncontainer=direct_sum\n");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("direct_sum"), std::string::npos);
  }
  EXPECT_THROW(parse_scenario_text("particles=0\n"), ValidationError);
  EXPECT_THROW(parse_scenario_text("dt=-1\n"), ValidationError);
}

TEST(Scenario, MissingFileIsIoError) { EXPECT_THROW(parse_scenario("/nonexistent/x.scn"), IoError); }

TEST(Scenario, RdfStrideRoundsUpToFullSteps) {
  const auto p = parse_scenario_text("iterations=120\nstep_size_factors=1,4,6\nsample_every=100\n");
  EXPECT_EQ(p.energy_stride(), 12);
  EXPECT_EQ(p.rdf_stride(), 108);
}

TEST(Csv, RoundTripsDoubles) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 78.66295286865895, 0.0}) {
    const std::string text = format_double(v);
    EXPECT_EQ(std::stod(text), v) << text;
  }
  EXPECT_EQ(format_double(std::numeric_limits<double>::quiet_NaN()), "nan");
}

TEST(Csv, WriterAndReader) {
  const auto path = std::filesystem::temp_directory_path() / "respamd_csv_test.csv";
  {
    CsvWriter w(path, {"iteration", "value"});
    w.field(0L).field(0.5).end_row();
    w.field(12L).field(-1.25).end_row();
    EXPECT_THROW(w.field(1L).end_row(), Error);
  }
  const CsvTable t = read_csv(path);
  EXPECT_EQ(t.header, (std::vector<std::string>{"iteration", "value"}));
  EXPECT_EQ(t.numbers("value"), (std::vector<double>{0.5, -1.25}));
  EXPECT_THROW(t.column("missing"), ValidationError);
  std::filesystem::remove(path);
  EXPECT_THROW(CsvWriter("/nonexistent/dir/x.csv", {"a"}), IoError);
}

}  // namespace
}  // namespace respamd
