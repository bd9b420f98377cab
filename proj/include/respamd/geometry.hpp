#pragma once

#include <cmath>

#include "respamd/types.hpp"

namespace respamd {

/// Minimum-image form of a displacement; identity for open domains.
template <typename Scalar>
inline Vec3<Scalar> minimum_image(const Vec3<Scalar>& d, const Domain<Scalar>& domain) {
  if (!domain.periodic) return d;
  Vec3<Scalar> out = d;
  for (int k = 0; k < 3; ++k) {
    const Scalar edge = domain.edges(k);
    out(k) -= edge * std::nearbyint(out(k) / edge);
  }
  return out;
}

/// Displacement from `from` to `to` under the domain's boundary conditions.
template <typename Scalar>
inline Vec3<Scalar> displacement(const Vec3<Scalar>& from, const Vec3<Scalar>& to, const Domain<Scalar>& domain) {
  return minimum_image<Scalar>(to - from, domain);
}

/// Maps every position back into [0, edge) per dimension.
template <typename Scalar>
void wrap_positions(Coords<Scalar>& positions, const Domain<Scalar>& domain) {
  if (!domain.periodic) return;
  for (Index i = 0; i < positions.cols(); ++i) {
    for (int k = 0; k < 3; ++k) {
      const Scalar edge = domain.edges(k);
      Scalar& x = positions(k, i);
      if (x >= 0 && x < edge) continue;
      x -= edge * std::floor(x / edge);
      // rounding of tiny negative values can land exactly on the upper edge
      if (x >= edge) x -= edge;
      if (x < 0) x = 0;
    }
  }
}

}  // namespace respamd
