#pragma once

#include <limits>
#include <random>
#include <string>

#include "respamd/potentials.hpp"

// Brute-force interaction sums used as oracles for the containers. They share
// nothing with the traversal code beyond the public kernels and predicates.

namespace respamd::reference {

template <typename Scalar>
struct Result {
  Coords<Scalar> forces;
  Scalar potential{0};
  Scalar virial{0};
  Index interactions{0};
};

template <typename Scalar>
inline constexpr Scalar kNoCutoff = std::numeric_limits<Scalar>::infinity();

/// Double loop over all distinct pairs, each force written to both members.
template <typename Scalar>
Result<Scalar> pairs(const ParticleSystem<Scalar>& s, const ForceField<Scalar>& ff, Scalar cutoff) {
  const Index n = s.size();
  Result<Scalar> out{Coords<Scalar>::Zero(3, n)};
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const Vec3<Scalar> xi = s.positions.col(i);
      const Vec3<Scalar> xj = s.positions.col(j);
      if (!within_cutoff_pair<Scalar>(xi, xj, cutoff, s.domain)) continue;
      const Vec3<Scalar> d = displacement<Scalar>(xj, xi, s.domain);
      out.forces.col(i) += lj_force<Scalar>(d, ff);
      if (i < j) {
        out.potential += lj_energy<Scalar>(d.norm(), ff);
        out.virial += d.dot(lj_force<Scalar>(d, ff));
        ++out.interactions;
      }
    }
  }
  return out;
}

/// Triple loop over all distinct triplets i < j < k.
template <typename Scalar>
Result<Scalar> triplets(const ParticleSystem<Scalar>& s, const ForceField<Scalar>& ff, Scalar cutoff) {
  const Index n = s.size();
  Result<Scalar> out{Coords<Scalar>::Zero(3, n)};
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      for (Index k = j + 1; k < n; ++k) {
        const Vec3<Scalar> xi = s.positions.col(i);
        const Vec3<Scalar> xj = s.positions.col(j);
        const Vec3<Scalar> xk = s.positions.col(k);
        if (!within_cutoff_triplet<Scalar>(xi, xj, xk, cutoff, s.domain)) continue;
        const TripletForces<Scalar> f = atm_forces<Scalar>(xi, xj, xk, ff, s.domain);
        out.forces.col(i) += f.f_i;
        out.forces.col(j) += f.f_j;
        out.forces.col(k) += f.f_k;
        out.potential += atm_energy<Scalar>(xi, xj, xk, ff, s.domain);
        // relative frame with i at the origin
        const Vec3<Scalar> a = displacement<Scalar>(xi, xj, s.domain);
        const Vec3<Scalar> b = displacement<Scalar>(xi, xk, s.domain);
        out.virial += a.dot(f.f_j) + b.dot(f.f_k);
        ++out.interactions;
      }
    }
  }
  return out;
}

/// Central finite-difference gradient of a scalar function of one 3-vector.
template <typename Scalar, typename Function>
Vec3<Scalar> numeric_gradient(Function&& f, const Vec3<Scalar>& x, Scalar h) {
  Vec3<Scalar> g;
  for (int d = 0; d < 3; ++d) {
    Vec3<Scalar> hi = x;
    Vec3<Scalar> lo = x;
    hi(d) += h;
    lo(d) -= h;
    g(d) = (f(hi) - f(lo)) / (2 * h);
  }
  return g;
}

/// Largest component difference relative to the norm of `expected` (floored at 1e-6,
/// so near-zero forces are compared absolutely).
template <typename Scalar>
Scalar relative_error(const Vec3<Scalar>& actual, const Vec3<Scalar>& expected) {
  return (actual - expected).cwiseAbs().maxCoeff() / std::max(expected.norm(), Scalar(1e-6));
}

/// Uniform random positions with every (minimum-image) pair at least min_distance apart.
template <typename Scalar, typename Rng>
ParticleSystem<Scalar> random_system(Index n, const Domain<Scalar>& domain, Scalar min_distance, Rng& rng) {
  ParticleSystem<Scalar> s(n, domain);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Scalar min2 = min_distance * min_distance;
  for (Index i = 0; i < n; ++i) {
    for (long attempt = 0;; ++attempt) {
      if (attempt > 100000) throw ValidationError("random_system: box too crowded for " + std::to_string(n) + " particles");
      Vec3<Scalar> x;
      for (int d = 0; d < 3; ++d) x(d) = Scalar(unit(rng)) * domain.edges(d);
      if (domain.periodic) x = x.cwiseMin(domain.edges * (1 - std::numeric_limits<Scalar>::epsilon()));
      bool clear = true;
      for (Index j = 0; j < i && clear; ++j)
        clear = displacement<Scalar>(s.positions.col(j), x, domain).squaredNorm() >= min2;
      if (clear) {
        s.positions.col(i) = x;
        break;
      }
    }
  }
  return s;
}

}  // namespace respamd::reference
