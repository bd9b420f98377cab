#pragma once

#include <cmath>

#include "respamd/geometry.hpp"
#include "respamd/types.hpp"

namespace respamd {

// ---------------------------------------------------------------------------
// Lennard-Jones 12-6
// ---------------------------------------------------------------------------

/// Pair energy and the scalar f such that the force on i is f * (x_i - x_j).
template <typename Scalar>
struct PairTerm {
  Scalar energy;
  Scalar force_factor;

  /// r . F for the pair, with r the separation vector.
  Scalar virial(Scalar r2) const { return force_factor * r2; }
};

/// Hot-path evaluation from the squared distance. Throws below kMinDistance.
template <typename Scalar>
inline PairTerm<Scalar> lj_pair(Scalar r2, const ForceField<Scalar>& ff) {
  if (!(r2 >= kMinDistance<Scalar> * kMinDistance<Scalar>))
    throw KernelError("Lennard-Jones evaluated at (near-)zero separation");
  const Scalar inv_r2 = Scalar(1) / r2;
  const Scalar s2 = ff.sigma * ff.sigma * inv_r2;
  const Scalar s6 = s2 * s2 * s2;
  const Scalar s12 = s6 * s6;
  return {Scalar(4) * ff.epsilon * (s12 - s6), Scalar(24) * ff.epsilon * (Scalar(2) * s12 - s6) * inv_r2};
}

template <typename Scalar>
Scalar lj_energy(Scalar r, const ForceField<Scalar>& ff) {
  if (!(r > 0)) throw KernelError("Lennard-Jones energy requires r > 0");
  return lj_pair(r * r, ff).energy;
}

/// Force on particle i given disp_ij = x_i - x_j.
template <typename Scalar>
Vec3<Scalar> lj_force(const Vec3<Scalar>& disp_ij, const ForceField<Scalar>& ff) {
  return lj_pair(disp_ij.squaredNorm(), ff).force_factor * disp_ij;
}

// ---------------------------------------------------------------------------
// Axilrod-Teller-Muto
// ---------------------------------------------------------------------------

template <typename Scalar>
struct TripletForces {
  Vec3<Scalar> f_i;
  Vec3<Scalar> f_j;
  Vec3<Scalar> f_k;

  Vec3<Scalar> sum() const { return f_i + f_j + f_k; }
};

template <typename Scalar>
struct TripletTerm {
  Scalar energy;
  TripletForces<Scalar> forces;
  /// Sum over the triplet of x . f (translation invariant, so any common frame).
  Scalar virial;
};

/// Triplet evaluation from the two edge vectors leaving particle i:
/// a = x_j - x_i and b = x_k - x_i (a consistent periodic image).
///
/// The cosine product is expressed through dot products only:
///   cos(ti) cos(tj) cos(tk) = -(a.b)(a.c)(b.c) / (|a|^2 |b|^2 |c|^2),  c = b - a,
/// so phi = nu * (P^-3/2 - 3 (a.b)(a.c)(b.c) P^-5/2) with P = |a|^2 |b|^2 |c|^2.
template <typename Scalar>
inline TripletTerm<Scalar> atm_triplet(const Vec3<Scalar>& a, const Vec3<Scalar>& b, Scalar nu) {
  const Vec3<Scalar> c = b - a;
  const Scalar aa = a.squaredNorm();
  const Scalar bb = b.squaredNorm();
  const Scalar cc = c.squaredNorm();
  constexpr Scalar min2 = kMinDistance<Scalar> * kMinDistance<Scalar>;
  if (!(aa >= min2 && bb >= min2 && cc >= min2))
    throw KernelError("Axilrod-Teller-Muto evaluated with coincident particles");

  const Scalar ab = a.dot(b);
  const Scalar ac = a.dot(c);
  const Scalar bc = b.dot(c);
  const Scalar prod = ab * ac * bc;
  const Scalar inv_p = Scalar(1) / (aa * bb * cc);
  const Scalar p3 = inv_p * std::sqrt(inv_p);
  const Scalar p5 = p3 * inv_p;

  const Scalar energy = nu * (p3 - Scalar(3) * prod * p5);

  // partial derivatives of phi with respect to the edge vectors a, b, c;
  // 1/|a|^2 = |b|^2 |c|^2 / P etc. keeps this to a single division
  const Scalar radial = nu * (Scalar(15) * prod * p5 - Scalar(3) * p3) * inv_p;
  const Scalar cross = Scalar(-3) * nu * p5;
  const Vec3<Scalar> g_a = (radial * bb * cc) * a + (cross * bc) * (ac * b + ab * c);
  const Vec3<Scalar> g_b = (radial * aa * cc) * b + (cross * ac) * (bc * a + ab * c);
  const Vec3<Scalar> g_c = (radial * aa * bb) * c + (cross * ab) * (bc * a + ac * b);

  TripletTerm<Scalar> out;
  out.energy = energy;
  out.forces.f_i = g_a + g_b;
  out.forces.f_j = g_c - g_a;
  out.forces.f_k = -(g_b + g_c);
  // phi is homogeneous of degree -9 in the edge vectors, so by Euler's theorem
  // sum x.f = -(a.g_a + b.g_b + c.g_c) = 9 phi
  out.virial = Scalar(9) * energy;
  return out;
}

template <typename Scalar>
Scalar atm_energy(const Vec3<Scalar>& x_i, const Vec3<Scalar>& x_j, const Vec3<Scalar>& x_k,
                  const ForceField<Scalar>& ff, const Domain<Scalar>& domain = {}) {
  return atm_triplet<Scalar>(displacement(x_i, x_j, domain), displacement(x_i, x_k, domain), ff.nu).energy;
}

template <typename Scalar>
TripletForces<Scalar> atm_forces(const Vec3<Scalar>& x_i, const Vec3<Scalar>& x_j, const Vec3<Scalar>& x_k,
                                 const ForceField<Scalar>& ff, const Domain<Scalar>& domain = {}) {
  return atm_triplet<Scalar>(displacement(x_i, x_j, domain), displacement(x_i, x_k, domain), ff.nu).forces;
}

// ---------------------------------------------------------------------------
// Cutoff predicates (inclusive)
// ---------------------------------------------------------------------------

template <typename Scalar>
bool within_cutoff_pair(const Vec3<Scalar>& x_i, const Vec3<Scalar>& x_j, Scalar cutoff,
                        const Domain<Scalar>& domain = {}) {
  return displacement(x_i, x_j, domain).squaredNorm() <= cutoff * cutoff;
}

/// All three sides <= cutoff, measured in one consistent image frame anchored at i.
/// With cutoff <= half the smallest periodic edge this is symmetric in (i, j, k) and
/// coincides with the three minimum-image distances whenever the triangle closes.
template <typename Scalar>
bool within_cutoff_triplet(const Vec3<Scalar>& x_i, const Vec3<Scalar>& x_j, const Vec3<Scalar>& x_k,
                           Scalar cutoff, const Domain<Scalar>& domain = {}) {
  const Scalar rc2 = cutoff * cutoff;
  const Vec3<Scalar> a = displacement(x_i, x_j, domain);
  const Vec3<Scalar> b = displacement(x_i, x_k, domain);
  return a.squaredNorm() <= rc2 && b.squaredNorm() <= rc2 && (b - a).squaredNorm() <= rc2;
}

}  // namespace respamd
