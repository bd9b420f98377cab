#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace respamd {

using Index = Eigen::Index;

template <typename Scalar>
using Vec3 = Eigen::Matrix<Scalar, 3, 1>;

/// Per-particle 3-vectors stored column-wise (one column per particle).
template <typename Scalar>
using Coords = Eigen::Matrix<Scalar, 3, Eigen::Dynamic>;

using Vec3i = Eigen::Matrix<int, 3, 1>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value violates a documented precondition or invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A force or energy kernel was asked to evaluate a (near-)singular geometry.
class KernelError : public Error {
 public:
  using Error::Error;
};

/// The integrator produced a non-finite position or velocity.
class BlowUpError : public Error {
 public:
  BlowUpError(long iteration, const std::string& what)
      : Error("integration blow-up at iteration " + std::to_string(iteration) + ": " + what),
        iteration_(iteration) {}

  long iteration() const noexcept { return iteration_; }

 private:
  long iteration_;
};

/// Below this separation the kernels refuse to evaluate.
template <typename Scalar>
inline constexpr Scalar kMinDistance = Scalar(1e-10);

/// Lennard-Jones 12-6 plus Axilrod-Teller-Muto parameters, reduced units.
template <typename Scalar>
struct ForceField {
  Scalar epsilon{1};
  Scalar sigma{1};
  Scalar nu{0};
  Scalar cutoff{Scalar(2.5)};

  void validate() const {
    if (!std::isfinite(epsilon) || !std::isfinite(sigma) || !std::isfinite(nu) || !std::isfinite(cutoff))
      throw ValidationError("force field parameters must be finite");
    if (epsilon < 0) throw ValidationError("epsilon must be >= 0");
    if (sigma <= 0) throw ValidationError("sigma must be > 0");
    if (nu < 0) throw ValidationError("nu must be >= 0");
    if (cutoff <= 0) throw ValidationError("cutoff must be > 0");
  }

  template <typename Other>
  ForceField<Other> cast() const {
    return {Other(epsilon), Other(sigma), Other(nu), Other(cutoff)};
  }
};

/// Simulation box; when periodic, positions live in [0, edges).
template <typename Scalar>
struct Domain {
  Vec3<Scalar> edges{Vec3<Scalar>::Ones()};
  bool periodic{false};

  Scalar volume() const { return edges.prod(); }
};

template <typename Scalar>
struct ParticleSystem {
  Coords<Scalar> positions;
  Coords<Scalar> velocities;
  Coords<Scalar> forces_2b;
  Coords<Scalar> forces_3b;
  Scalar mass{1};
  Domain<Scalar> domain;

  ParticleSystem() = default;

  ParticleSystem(Index n, const Domain<Scalar>& dom, Scalar m = Scalar(1))
      : positions(Coords<Scalar>::Zero(3, n)),
        velocities(Coords<Scalar>::Zero(3, n)),
        forces_2b(Coords<Scalar>::Zero(3, n)),
        forces_3b(Coords<Scalar>::Zero(3, n)),
        mass(m),
        domain(dom) {}

  Index size() const { return positions.cols(); }

  void validate() const {
    const Index n = positions.cols();
    if (n < 1) throw ValidationError("particle system must hold at least one particle");
    if (velocities.cols() != n || forces_2b.cols() != n || forces_3b.cols() != n)
      throw ValidationError("per-particle arrays must have identical length");
    if (!(mass > 0)) throw ValidationError("mass must be > 0");
    if (!(domain.edges.array() > 0).all()) throw ValidationError("box edges must be > 0");
    if (domain.periodic) {
      for (Index i = 0; i < n; ++i)
        for (int d = 0; d < 3; ++d)
          if (!(positions(d, i) >= 0 && positions(d, i) < domain.edges(d)))
            throw ValidationError("periodic position outside [0, box) for particle " + std::to_string(i));
    }
  }
};

}  // namespace respamd
