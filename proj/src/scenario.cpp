#include "respamd/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "respamd/csv.hpp"

namespace respamd {

namespace {

long lcm_of(const std::vector<int>& values) {
  long l = 1;
  for (int v : values) l = std::lcm(l, long(v));
  return l;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, bool commas) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const auto next = s.find_first_of(commas ? ", \t" : " \t", pos);
    const auto token = s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos);
    if (!token.empty()) out.push_back(token);
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

class LineParser {
 public:
  LineParser(const std::string& source, int line) : source_(source), line_(line) {}

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(source_, line_, what); }

  template <typename T>
  T number(std::string_view text, std::string_view key) const {
    T v{};
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || end != text.data() + text.size())
      fail("invalid value '" + std::string(text) + "' for " + std::string(key));
    return v;
  }

  template <typename T>
  std::vector<T> list(std::string_view text, std::string_view key) const {
    std::vector<T> out;
    for (auto token : split(text, true)) out.push_back(number<T>(token, key));
    if (out.empty()) fail(std::string(key) + " needs at least one value");
    return out;
  }

  bool boolean(std::string_view text, std::string_view key) const {
    if (text == "true" || text == "yes" || text == "1") return true;
    if (text == "false" || text == "no" || text == "0") return false;
    fail("invalid boolean '" + std::string(text) + "' for " + std::string(key));
  }

 private:
  const std::string& source_;
  int line_;
};

using Setter = std::function<void(ExperimentPlan&, std::string_view, const LineParser&)>;

struct KeySpec {
  std::string_view section;
  Setter set;
};

const std::map<std::string, KeySpec, std::less<>>& key_table() {
  static const std::map<std::string, KeySpec, std::less<>> table = {
      {"particles", {"system", [](auto& p, auto v, auto& lp) { p.base.particle_count = lp.template number<long>(v, "particles"); }}},
      {"box",
       {"system",
        [](auto& p, auto v, auto& lp) {
          const auto edges = lp.template list<double>(v, "box");
          if (edges.size() == 1) p.base.box.setConstant(edges[0]);
          else if (edges.size() == 3) p.base.box = Vec3<double>(edges[0], edges[1], edges[2]);
          else lp.fail("box needs 1 or 3 edge lengths");
        }}},
      {"periodic", {"system", [](auto& p, auto v, auto& lp) { p.base.periodic = lp.boolean(v, "periodic"); }}},
      {"mass", {"system", [](auto& p, auto v, auto& lp) { p.base.mass = lp.template number<double>(v, "mass"); }}},
      {"temperature", {"system", [](auto& p, auto v, auto& lp) { p.base.temperature = lp.template number<double>(v, "temperature"); }}},
      {"seed", {"system", [](auto& p, auto v, auto& lp) { p.base.seed = lp.template number<std::uint64_t>(v, "seed"); }}},
      {"container",
       {"system",
        [](auto& p, auto v, auto& lp) {
          if (v == "direct_sum") p.base.container = ContainerKind::DirectSum;
          else if (v == "linked_cells") p.base.container = ContainerKind::LinkedCells;
          else lp.fail("container must be direct_sum or linked_cells, got '" + std::string(v) + "'");
        }}},
      {"epsilon", {"force_field", [](auto& p, auto v, auto& lp) { p.base.force_field.epsilon = lp.template number<double>(v, "epsilon"); }}},
      {"sigma", {"force_field", [](auto& p, auto v, auto& lp) { p.base.force_field.sigma = lp.template number<double>(v, "sigma"); }}},
      {"nu", {"force_field", [](auto& p, auto v, auto& lp) { p.base.force_field.nu = lp.template number<double>(v, "nu"); }}},
      {"cutoff", {"force_field", [](auto& p, auto v, auto& lp) { p.base.force_field.cutoff = lp.template number<double>(v, "cutoff"); }}},
      {"dt", {"integration", [](auto& p, auto v, auto& lp) { p.base.dt = lp.template number<double>(v, "dt"); }}},
      {"iterations", {"integration", [](auto& p, auto v, auto& lp) { p.base.iterations = lp.template number<long>(v, "iterations"); }}},
      {"step_size_factor", {"integration", [](auto& p, auto v, auto& lp) { p.base.step_size_factor = lp.template number<int>(v, "step_size_factor"); }}},
      {"equilibration", {"integration", [](auto& p, auto v, auto& lp) { p.base.equilibration_steps = lp.template number<long>(v, "equilibration"); }}},
      {"step_size_factors", {"sweep", [](auto& p, auto v, auto& lp) { p.step_size_factors = lp.template list<int>(v, "step_size_factors"); }}},
      {"nu_sweep", {"sweep", [](auto& p, auto v, auto& lp) { p.nu_values = lp.template list<double>(v, "nu_sweep"); }}},
      {"reference", {"sweep", [](auto& p, auto v, auto& lp) { p.reference_run = lp.boolean(v, "reference"); }}},
      {"sample_every", {"sampling", [](auto& p, auto v, auto& lp) { p.base.sampling.sample_every = lp.template number<long>(v, "sample_every"); }}},
      {"energy_every", {"sampling", [](auto& p, auto v, auto& lp) { p.base.sampling.energy_every = lp.template number<long>(v, "energy_every"); }}},
      {"rdf_bins", {"sampling", [](auto& p, auto v, auto& lp) { p.base.sampling.rdf_bins = lp.template number<int>(v, "rdf_bins"); }}},
      {"rdf_r_max", {"sampling", [](auto& p, auto v, auto& lp) { p.base.sampling.rdf_r_max = lp.template number<double>(v, "rdf_r_max"); }}},
      {"output", {"", [](auto& p, auto v, auto&) { p.output_dir = std::string(v); }}},
  };
  return table;
}

const std::set<std::string, std::less<>> kSections = {"system", "force_field", "integration", "sweep", "sampling"};

}  // namespace

std::vector<double> ExperimentPlan::nus() const {
  return nu_values.empty() ? std::vector<double>{base.force_field.nu} : nu_values;
}

std::vector<int> ExperimentPlan::factors() const {
  std::vector<int> out = step_size_factors.empty() ? std::vector<int>{base.step_size_factor} : step_size_factors;
  if (reference_run && std::find(out.begin(), out.end(), 1) == out.end()) out.insert(out.begin(), 1);
  return out;
}

long ExperimentPlan::energy_stride() const {
  return base.sampling.energy_every > 0 ? base.sampling.energy_every : lcm_of(factors());
}

long ExperimentPlan::rdf_stride() const {
  const long l = lcm_of(factors());
  return (base.sampling.sample_every + l - 1) / l * l;
}

ScenarioConfig ExperimentPlan::config_for(double nu, int s) const {
  ScenarioConfig c = base;
  c.force_field.nu = nu;
  c.step_size_factor = s;
  return c;
}

void ExperimentPlan::validate() const {
  for (double nu : nus())
    if (!(nu >= 0) || !std::isfinite(nu)) throw ValidationError("nu_sweep values must be finite and >= 0");
  const std::vector<int> fs = factors();
  for (int s : fs) {
    if (s < 1) throw ValidationError("step-size factors must be >= 1");
    if (base.iterations % s != 0)
      throw ValidationError("iterations (" + std::to_string(base.iterations) + ") must be a multiple of step-size factor " +
                            std::to_string(s));
  }
  if (std::set<int>(fs.begin(), fs.end()).size() != fs.size()) throw ValidationError("duplicate step-size factor");
  for (double nu : nus())
    for (int s : fs) config_for(nu, s).validate();
  const long energy = energy_stride();
  for (int s : fs)
    if (energy % s != 0)
      throw ValidationError("energy_every (" + std::to_string(energy) + ") must be a multiple of step-size factor " +
                            std::to_string(s));
  if (base.periodic && base.sampling.rdf_r_max > base.box.minCoeff() / 2)
    throw ValidationError("rdf_r_max must not exceed half the smallest box edge");
  if (base.sampling.rdf_r_max < 0) throw ValidationError("rdf_r_max must be >= 0");
}

ExperimentPlan parse_scenario_text(std::string_view text, const std::string& source) {
  ExperimentPlan plan;
  std::string section;
  std::set<std::string, std::less<>> seen;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const LineParser lp(source, line_no);
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') lp.fail("unterminated section header");
      const auto name = trim(line.substr(1, line.size() - 2));
      if (!kSections.contains(name)) lp.fail("unknown section [" + std::string(name) + "]");
      section = std::string(name);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) lp.fail("expected key=value");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    const auto& table = key_table();
    const auto it = table.find(key);
    if (it == table.end()) lp.fail("unknown key '" + std::string(key) + "'");
    if (!section.empty() && !it->second.section.empty() && it->second.section != section)
      lp.fail("key '" + std::string(key) + "' does not belong in section [" + section + "]");
    if (value.empty()) lp.fail("missing value for '" + std::string(key) + "'");
    if (!seen.insert(std::string(key)).second) lp.fail("duplicate key '" + std::string(key) + "'");
    it->second.set(plan, value, lp);
  }
  plan.validate();
  return plan;
}

ExperimentPlan parse_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open scenario " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  if (in.bad()) throw IoError("cannot read scenario " + path.string());
  return parse_scenario_text(text.str(), path.string());
}

}  // namespace respamd
