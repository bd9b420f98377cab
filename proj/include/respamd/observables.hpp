#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "respamd/integrators.hpp"

namespace respamd {

template <typename Scalar>
struct EnergyBreakdown {
  Scalar kinetic{0};
  Scalar potential_2b{0};
  Scalar potential_3b{0};
  Scalar total{0};
};

template <typename Scalar>
EnergyBreakdown<Scalar> energy_breakdown(const ParticleSystem<Scalar>& system, const ForceState<Scalar>& state) {
  EnergyBreakdown<Scalar> e;
  e.kinetic = kinetic_energy(system);
  e.potential_2b = state.two_body.potential;
  e.potential_3b = state.three_body.potential;
  e.total = e.kinetic + e.potential_2b + e.potential_3b;
  return e;
}

/// Runs both force passes at the current positions and returns the energy split.
template <typename Scalar>
EnergyBreakdown<Scalar> total_energy(ParticleSystem<Scalar>& system, ForceEvaluator<Scalar>& forces) {
  ForceState<Scalar> state;
  state.two_body = forces.two_body(system);
  state.three_body = forces.three_body(system);
  return energy_breakdown(system, state);
}

/// (iteration, value) samples with strictly increasing iterations.
template <typename Scalar>
class ObservableSeries {
 public:
  void push(long iteration, Scalar value) {
    if (!iterations_.empty() && iteration <= iterations_.back())
      throw ValidationError("observable iterations must be strictly increasing");
    iterations_.push_back(iteration);
    values_.push_back(value);
  }

  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  const std::vector<long>& iterations() const { return iterations_; }
  const std::vector<Scalar>& values() const { return values_; }

  Scalar mean() const {
    if (values_.empty()) throw ValidationError("mean of an empty series");
    Scalar sum = 0;
    for (Scalar v : values_) sum += v;
    return sum / Scalar(values_.size());
  }

  /// Samples whose iteration is a multiple of `stride`.
  ObservableSeries every(long stride) const {
    ObservableSeries out;
    for (std::size_t i = 0; i < values_.size(); ++i)
      if (iterations_[i] % stride == 0) out.push(iterations_[i], values_[i]);
    return out;
  }

 private:
  std::vector<long> iterations_;
  std::vector<Scalar> values_;
};

/// Fixed-edge histogram. Samples on the upper edge fall in the last bin; samples
/// outside [edges.front(), edges.back()] are counted as outliers, not binned.
template <typename Scalar>
class Histogram {
 public:
  static Histogram uniform(Scalar lo, Scalar hi, int bins) {
    if (bins < 1) throw ValidationError("histogram needs at least one bin");
    if (!(hi > lo)) throw ValidationError("histogram range must be non-empty");
    Histogram h;
    h.edges_.resize(std::size_t(bins) + 1);
    for (int b = 0; b <= bins; ++b) h.edges_[std::size_t(b)] = lo + (hi - lo) * Scalar(b) / Scalar(bins);
    h.edges_.back() = hi;
    h.counts_.assign(std::size_t(bins), 0);
    return h;
  }

  void insert(Scalar value) {
    const Scalar lo = edges_.front();
    const Scalar hi = edges_.back();
    if (!(value >= lo && value <= hi)) {
      ++outliers_;
      return;
    }
    const auto bins = counts_.size();
    auto b = std::size_t((value - lo) / (hi - lo) * Scalar(bins));
    b = std::min(b, bins - 1);
    // guard against rounding placing the value one bin off its edges
    while (b > 0 && value < edges_[b]) --b;
    while (b + 1 < bins && value >= edges_[b + 1]) ++b;
    ++counts_[b];
  }

  std::size_t bins() const { return counts_.size(); }
  const std::vector<Scalar>& edges() const { return edges_; }
  const std::vector<long>& counts() const { return counts_; }
  long outliers() const { return outliers_; }

  long total() const {
    long t = 0;
    for (long c : counts_) t += c;
    return t;
  }

  /// Bin contents as fractions of the binned sample count.
  std::vector<Scalar> fractions() const {
    std::vector<Scalar> f(counts_.size(), 0);
    const long t = total();
    if (t == 0) return f;
    for (std::size_t b = 0; b < counts_.size(); ++b) f[b] = Scalar(counts_[b]) / Scalar(t);
    return f;
  }

  Scalar center(std::size_t b) const { return (edges_[b] + edges_[b + 1]) / 2; }

  std::size_t bin_of(Scalar value) const {
    for (std::size_t b = 0; b + 1 < edges_.size(); ++b)
      if (value >= edges_[b] && (value < edges_[b + 1] || b + 2 == edges_.size())) return b;
    throw ValidationError("value outside histogram range");
  }

 private:
  std::vector<Scalar> edges_;
  std::vector<long> counts_;
  long outliers_{0};
};

/// Histogram over the common [min, max] of `values`; a degenerate range is widened
/// symmetrically so that the single value sits inside one bin.
template <typename Scalar>
Histogram<Scalar> histogram_of(std::span<const Scalar> values, int bins) {
  if (values.empty()) throw ValidationError("cannot histogram an empty sample");
  auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  Scalar lo = *lo_it;
  Scalar hi = *hi_it;
  if (!(hi > lo)) {
    const Scalar pad = std::max(std::abs(lo), Scalar(1)) * Scalar(1e-9);
    lo -= pad;
    hi += pad;
  }
  Histogram<Scalar> h = Histogram<Scalar>::uniform(lo, hi, bins);
  for (Scalar v : values) h.insert(v);
  return h;
}

// ---------------------------------------------------------------------------
// Energy accuracy metrics
// ---------------------------------------------------------------------------

/// Relative variation in true energy: sum_i |e(i) - mean(e)| / (K J).
template <typename Scalar>
Scalar rvite(const ObservableSeries<Scalar>& energy, Scalar mean_kinetic) {
  if (energy.empty()) throw ValidationError("RVITE of an empty energy series");
  if (!(mean_kinetic > 0)) throw ValidationError("RVITE requires a positive mean kinetic energy");
  const Scalar mean = energy.mean();
  Scalar sum = 0;
  for (Scalar e : energy.values()) sum += std::abs(e - mean);
  return sum / (mean_kinetic * Scalar(energy.size()));
}

template <typename Scalar>
struct RviteReport {
  Scalar value{0};
  /// Set for runs with a truncated (linked-cells) interaction: cutoff-induced energy
  /// fluctuations dominate the metric there.
  bool cutoff_warning{false};
};

template <typename Scalar>
RviteReport<Scalar> rvite_report(const ObservableSeries<Scalar>& energy, Scalar mean_kinetic, ContainerKind kind) {
  return {rvite(energy, mean_kinetic), kind == ContainerKind::LinkedCells};
}

inline constexpr int kEnergyHistogramBins = 50;
inline constexpr int kPressureHistogramBins = 20;

/// Pointwise relative deviations (e_s(i) - e_ref(i)) / |e_ref(i)| on the iterations
/// that are multiples of `stride`. Both series must cover the same such iterations.
template <typename Scalar>
std::vector<Scalar> relative_energy_deviation(const ObservableSeries<Scalar>& series,
                                              const ObservableSeries<Scalar>& reference, long stride) {
  if (stride < 1) throw ValidationError("stride must be >= 1");
  const auto s = series.every(stride);
  const auto r = reference.every(stride);
  if (s.iterations() != r.iterations())
    throw ValidationError("energy series are not sampled on a common stride");
  std::vector<Scalar> out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i)
    out[i] = (s.values()[i] - r.values()[i]) / std::abs(r.values()[i]);
  return out;
}

/// One histogram per compared series on the shared min-max range of all deviations.
template <typename Scalar>
std::vector<Histogram<Scalar>> energy_deviation_histograms(std::span<const ObservableSeries<Scalar>> series,
                                                           const ObservableSeries<Scalar>& reference, long stride,
                                                           int bins = kEnergyHistogramBins) {
  std::vector<std::vector<Scalar>> deviations;
  std::vector<Scalar> all;
  for (const auto& s : series) {
    deviations.push_back(relative_energy_deviation(s, reference, stride));
    all.insert(all.end(), deviations.back().begin(), deviations.back().end());
  }
  const Histogram<Scalar> shape = histogram_of<Scalar>(all, bins);
  std::vector<Histogram<Scalar>> out;
  for (const auto& d : deviations) {
    auto h = Histogram<Scalar>::uniform(shape.edges().front(), shape.edges().back(), bins);
    for (Scalar v : d) h.insert(v);
    out.push_back(std::move(h));
  }
  return out;
}

template <typename Scalar>
Histogram<Scalar> energy_deviation_histogram(const ObservableSeries<Scalar>& series,
                                             const ObservableSeries<Scalar>& reference, long stride,
                                             int bins = kEnergyHistogramBins) {
  return energy_deviation_histograms<Scalar>(std::span(&series, 1), reference, stride, bins).front();
}

// ---------------------------------------------------------------------------
// Structure and pressure
// ---------------------------------------------------------------------------

/// Radial distribution function accumulated over frames of a periodic system:
/// g(r_b) = hist_b / (N rho V_shell(b) frames), hist counting ordered pairs.
template <typename Scalar>
class RdfAccumulator {
 public:
  RdfAccumulator(const Domain<Scalar>& domain, Scalar r_max, int bins) : domain_(domain), r_max_(r_max), bins_(bins) {
    if (!domain.periodic) throw ValidationError("RDF requires a periodic system");
    if (bins < 1) throw ValidationError("RDF needs at least one bin");
    if (!(r_max > 0) || r_max > domain.edges.minCoeff() / 2)
      throw ValidationError("RDF r_max must lie in (0, half the smallest box edge]");
    hist_.assign(std::size_t(bins), 0);
  }

  void add_frame(const ParticleSystem<Scalar>& system) {
    const Index n = system.size();
    if (particles_ != 0 && particles_ != n) throw ValidationError("RDF frames must have a constant particle count");
    particles_ = n;
    const Scalar dr = r_max_ / Scalar(bins_);
    const Scalar r_max2 = r_max_ * r_max_;
    for (Index i = 0; i < n; ++i) {
      for (Index j = i + 1; j < n; ++j) {
        const Scalar r2 = minimum_image<Scalar>(system.positions.col(j) - system.positions.col(i), domain_).squaredNorm();
        if (r2 >= r_max2) continue;
        const auto b = std::min(std::size_t(std::sqrt(r2) / dr), std::size_t(bins_) - 1);
        hist_[b] += 2;
      }
    }
    ++frames_;
  }

  long frames() const { return frames_; }

  /// (bin centre, g) pairs.
  std::vector<std::pair<Scalar, Scalar>> result() const {
    if (frames_ == 0) throw ValidationError("RDF has no frames");
    std::vector<std::pair<Scalar, Scalar>> out(static_cast<std::size_t>(bins_));
    const Scalar dr = r_max_ / Scalar(bins_);
    const Scalar n = Scalar(particles_);
    const Scalar rho = n / domain_.volume();
    for (int b = 0; b < bins_; ++b) {
      const Scalar r0 = dr * Scalar(b);
      const Scalar r1 = dr * Scalar(b + 1);
      const Scalar shell = Scalar(4) / Scalar(3) * std::numbers::pi_v<Scalar> * (r1 * r1 * r1 - r0 * r0 * r0);
      out[std::size_t(b)] = {(r0 + r1) / 2, Scalar(hist_[std::size_t(b)]) / (n * rho * shell * Scalar(frames_))};
    }
    return out;
  }

 private:
  Domain<Scalar> domain_;
  Scalar r_max_;
  int bins_;
  std::vector<long> hist_;
  Index particles_{0};
  long frames_{0};
};

template <typename Scalar>
std::vector<std::pair<Scalar, Scalar>> rdf(std::span<const ParticleSystem<Scalar>> frames, Scalar r_max, int bins) {
  if (frames.empty()) throw ValidationError("RDF needs at least one frame");
  RdfAccumulator<Scalar> acc(frames.front().domain, r_max, bins);
  for (const auto& f : frames) acc.add_frame(f);
  return acc.result();
}

/// Virial pressure P = N T / V + (W_2 + W_3) / (3 V).
template <typename Scalar>
Scalar pressure_virial(Scalar temperature, const ParticleSystem<Scalar>& system, Scalar pair_virial,
                       Scalar triplet_virial) {
  const Scalar volume = system.domain.volume();
  return Scalar(system.size()) * temperature / volume + (pair_virial + triplet_virial) / (Scalar(3) * volume);
}

template <typename Scalar>
Scalar pressure(const ParticleSystem<Scalar>& system, const ForceState<Scalar>& state) {
  return pressure_virial(temperature(system), system, state.two_body.virial, state.three_body.virial);
}

/// speedup(s) = time(1) / time(s).
inline std::map<int, double> speedup(const std::map<int, double>& seconds_by_factor) {
  const auto base = seconds_by_factor.find(1);
  if (base == seconds_by_factor.end()) throw ValidationError("speedup needs a step-size factor 1 baseline");
  std::map<int, double> out;
  for (const auto& [s, t] : seconds_by_factor) {
    if (!(t > 0)) throw ValidationError("timings must be positive");
    out[s] = base->second / t;
  }
  return out;
}

}  // namespace respamd
