#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "respamd/force_evaluator.hpp"
#include "respamd/geometry.hpp"

namespace respamd {

template <typename Scalar>
struct RespaSchedule {
  Scalar dt{Scalar(0.001)};
  int step_size_factor{1};
  long num_iterations{0};

  void validate() const {
    if (!(dt > 0)) throw ValidationError("dt must be > 0");
    if (step_size_factor < 1) throw ValidationError("step-size factor must be >= 1");
    if (num_iterations < 0) throw ValidationError("iteration count must be >= 0");
    if (num_iterations % step_size_factor != 0)
      throw ValidationError("iteration count must be a multiple of the step-size factor");
  }
};

/// Accumulators of the most recent two-body and three-body passes.
template <typename Scalar>
struct ForceState {
  PassResult<Scalar> two_body;
  PassResult<Scalar> three_body;
};

template <typename Scalar>
using SampleCallback = std::function<void(long iteration, const ParticleSystem<Scalar>&, const ForceState<Scalar>&)>;

/// Called at iteration 0 and at every positive multiple of `interval`.
template <typename Scalar>
struct SamplingHook {
  long interval{1};
  SampleCallback<Scalar> callback;
};

struct RunStats {
  long iterations{0};
  long two_body_passes{0};
  long three_body_passes{0};
  /// Wall-clock time of the integration loop, hook time excluded.
  double loop_seconds{0};
};

namespace detail {

template <typename Scalar>
class HookDispatcher {
 public:
  HookDispatcher(std::span<const SamplingHook<Scalar>> hooks, int step_size_factor) : hooks_(hooks) {
    for (const auto& h : hooks_) {
      if (h.interval < 1) throw ValidationError("sampling interval must be >= 1");
      if (h.interval % step_size_factor != 0)
        throw ValidationError("sampling interval " + std::to_string(h.interval) +
                              " is not a multiple of the step-size factor " + std::to_string(step_size_factor));
    }
  }

  /// Returns the seconds spent inside callbacks.
  double dispatch(long iteration, const ParticleSystem<Scalar>& system, const ForceState<Scalar>& state) const {
    if (hooks_.empty()) return 0;
    const auto t0 = std::chrono::steady_clock::now();
    for (const auto& h : hooks_)
      if (iteration % h.interval == 0 && h.callback) h.callback(iteration, system, state);
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }

 private:
  std::span<const SamplingHook<Scalar>> hooks_;
};

template <typename Scalar>
void require_finite(const ParticleSystem<Scalar>& system, long iteration) {
  if (!system.positions.allFinite()) throw BlowUpError(iteration, "non-finite position");
  if (!system.velocities.allFinite()) throw BlowUpError(iteration, "non-finite velocity");
}

// Positions are checked before the force pass so a diverged state surfaces as a blow-up
// rather than a kernel rejection. Particles driven onto each other mid-run count as one too.
template <typename Scalar, typename Step>
void guarded_step(const ParticleSystem<Scalar>& system, long iteration, Step&& step) {
  try {
    step();
  } catch (const KernelError& e) {
    throw BlowUpError(iteration, e.what());
  }
  require_finite(system, iteration);
}

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace detail

/// Single-loop r-RESPA: two-body forces every step, three-body forces only at
/// full steps (multiples of s), where they kick with the enlarged step dt * s.
///
///   if i % s == 0:        v += (dt s / 2m) F3(x_i)
///   x_{i+1} = x_i + dt v + (dt^2 / 2m) F2(x_i)
///   v += (dt / 2m) (F2(x_i) + F2(x_{i+1}))
///   if (i + 1) % s == 0:  v += (dt s / 2m) F3(x_{i+1})
///
/// Both force classes are evaluated at x_0 before the loop. Throws BlowUpError on
/// non-finite state.
template <typename Scalar>
RunStats respa_run(ParticleSystem<Scalar>& system, ForceEvaluator<Scalar>& forces, const RespaSchedule<Scalar>& schedule,
                   std::span<const SamplingHook<Scalar>> hooks = {}) {
  schedule.validate();
  const int s = schedule.step_size_factor;
  const detail::HookDispatcher<Scalar> dispatcher(hooks, s);
  const Scalar dt = schedule.dt;
  const Scalar half_dt_over_m = dt / (2 * system.mass);
  const Scalar drift_factor = dt * dt / (2 * system.mass);
  const Scalar slow_kick = dt * Scalar(s) / (2 * system.mass);

  RunStats stats;
  const auto t0 = std::chrono::steady_clock::now();
  double hook_seconds = 0;

  ForceState<Scalar> state;
  state.two_body = forces.two_body(system);
  state.three_body = forces.three_body(system);
  stats.two_body_passes = stats.three_body_passes = 1;
  hook_seconds += dispatcher.dispatch(0, system, state);

  Coords<Scalar> previous_2b(3, system.size());
  for (long i = 0; i < schedule.num_iterations; ++i) {
    detail::guarded_step(system, i + 1, [&] {
      if (i % s == 0) system.velocities.noalias() += slow_kick * system.forces_3b;
      system.positions.noalias() += dt * system.velocities + drift_factor * system.forces_2b;
      if (!system.positions.allFinite()) throw BlowUpError(i + 1, "non-finite position");
      wrap_positions(system.positions, system.domain);
      previous_2b.swap(system.forces_2b);
      state.two_body = forces.two_body(system);
      ++stats.two_body_passes;
      system.velocities.noalias() += half_dt_over_m * (previous_2b + system.forces_2b);
      if ((i + 1) % s == 0) {
        state.three_body = forces.three_body(system);
        ++stats.three_body_passes;
        system.velocities.noalias() += slow_kick * system.forces_3b;
      }
    });
    ++stats.iterations;
    hook_seconds += dispatcher.dispatch(i + 1, system, state);
  }
  stats.loop_seconds = detail::seconds_since(t0) - hook_seconds;
  return stats;
}

/// One velocity Stormer-Verlet step with the combined force F2 + F3.
template <typename Scalar>
ForceState<Scalar> verlet_step(ParticleSystem<Scalar>& system, ForceEvaluator<Scalar>& forces, Scalar dt) {
  const Scalar half_dt_over_m = dt / (2 * system.mass);
  system.positions.noalias() += dt * system.velocities + (dt * half_dt_over_m) * (system.forces_2b + system.forces_3b);
  if (!system.positions.allFinite()) throw KernelError("non-finite position");
  wrap_positions(system.positions, system.domain);
  system.velocities.noalias() += half_dt_over_m * (system.forces_2b + system.forces_3b);
  ForceState<Scalar> state;
  state.two_body = forces.two_body(system);
  state.three_body = forces.three_body(system);
  system.velocities.noalias() += half_dt_over_m * (system.forces_2b + system.forces_3b);
  return state;
}

/// Plain velocity Stormer-Verlet, both force classes updated every step.
template <typename Scalar>
RunStats verlet_run(ParticleSystem<Scalar>& system, ForceEvaluator<Scalar>& forces, Scalar dt, long num_iterations,
                    std::span<const SamplingHook<Scalar>> hooks = {}) {
  RespaSchedule<Scalar>{dt, 1, num_iterations}.validate();
  const detail::HookDispatcher<Scalar> dispatcher(hooks, 1);
  RunStats stats;
  const auto t0 = std::chrono::steady_clock::now();
  double hook_seconds = 0;

  ForceState<Scalar> state;
  state.two_body = forces.two_body(system);
  state.three_body = forces.three_body(system);
  stats.two_body_passes = stats.three_body_passes = 1;
  hook_seconds += dispatcher.dispatch(0, system, state);
  for (long i = 0; i < num_iterations; ++i) {
    detail::guarded_step(system, i + 1, [&] { state = verlet_step(system, forces, dt); });
    ++stats.two_body_passes;
    ++stats.three_body_passes;
    ++stats.iterations;
    hook_seconds += dispatcher.dispatch(i + 1, system, state);
  }
  stats.loop_seconds = detail::seconds_since(t0) - hook_seconds;
  return stats;
}

/// Equipartition estimate T = (2/3) K / N.
template <typename Scalar>
Scalar kinetic_energy(const ParticleSystem<Scalar>& system) {
  return Scalar(0.5) * system.mass * system.velocities.squaredNorm();
}

template <typename Scalar>
Scalar temperature(const ParticleSystem<Scalar>& system) {
  return Scalar(2) * kinetic_energy(system) / (Scalar(3) * Scalar(system.size()));
}

template <typename Scalar>
struct EquilibrationReport {
  bool converged{false};
  /// Mean measured temperature over the last 10% of the steps.
  Scalar tail_temperature{0};
  std::vector<Scalar> rescale_factors;
};

/// Verlet with velocity rescaling towards target_temperature every `rescale_every` steps.
/// Reports (does not throw) when the tail temperature misses the target by more than 2%.
template <typename Scalar>
EquilibrationReport<Scalar> equilibrate(ParticleSystem<Scalar>& system, ForceEvaluator<Scalar>& forces, Scalar dt,
                                        long steps, Scalar target_temperature, long rescale_every = 10) {
  if (!(target_temperature > 0)) throw ValidationError("equilibration target temperature must be > 0");
  if (rescale_every < 1) throw ValidationError("rescale interval must be >= 1");
  if (steps < 0) throw ValidationError("equilibration steps must be >= 0");
  EquilibrationReport<Scalar> report;
  if (steps == 0) {
    report.tail_temperature = temperature(system);
    report.converged = std::abs(report.tail_temperature - target_temperature) <= Scalar(0.02) * target_temperature;
    return report;
  }
  forces.two_body(system);
  forces.three_body(system);
  const long tail = std::max<long>(1, steps / 10);
  Scalar tail_sum = 0;
  for (long step = 1; step <= steps; ++step) {
    detail::guarded_step(system, step, [&] { verlet_step(system, forces, dt); });
    if (step % rescale_every == 0) {
      const Scalar measured = temperature(system);
      if (measured > 0) {
        const Scalar factor = std::sqrt(target_temperature / measured);
        system.velocities *= factor;
        report.rescale_factors.push_back(factor);
      }
    }
    if (step > steps - tail) tail_sum += temperature(system);
  }
  report.tail_temperature = tail_sum / Scalar(tail);
  report.converged = std::abs(report.tail_temperature - target_temperature) <= Scalar(0.02) * target_temperature;
  return report;
}

}  // namespace respamd
