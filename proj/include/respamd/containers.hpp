#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "respamd/cell_grid.hpp"
#include "respamd/geometry.hpp"
#include "respamd/parallel.hpp"
#include "respamd/potentials.hpp"

namespace respamd {

/// Scalar accumulators of one force pass.
template <typename Scalar>
struct PassResult {
  Scalar potential{0};
  Scalar virial{0};

  PassResult& operator+=(const PassResult& o) {
    potential += o.potential;
    virial += o.virial;
    return *this;
  }
};

/// LJ 12-6 pair kernel.
template <typename Scalar>
struct LennardJones {
  ForceField<Scalar> ff;
  PairTerm<Scalar> operator()(Scalar r2) const { return lj_pair(r2, ff); }
};

/// ATM triplet kernel over edge vectors a = x_j - x_i, b = x_k - x_i.
template <typename Scalar>
struct AxilrodTellerMuto {
  Scalar nu;
  TripletTerm<Scalar> operator()(const Vec3<Scalar>& a, const Vec3<Scalar>& b) const {
    return atm_triplet(a, b, nu);
  }
};

/// Default no-op observer for triplet visits.
struct IgnoreVisits {
  void operator()(Index, Index) const {}
  void operator()(Index, Index, Index) const {}
};

// ---------------------------------------------------------------------------
// C01 linked-cells traversals
//
// Every base cell writes only the force entries of its own particles, so base
// cells can be processed concurrently without locks. Newton's third law is not
// exploited: each interaction is visited once per member, and energies/virials
// are attributed as phi/2 (pairs) or phi/3 (triplets) per visit.
// ---------------------------------------------------------------------------

/// Triplet offset patterns re-expressed as index pairs into the list of distinct
/// partner-cell offsets, so partner candidates can be gathered once per offset.
struct TripletTraversalPlan {
  std::vector<Vec3i> offsets;
  std::vector<std::pair<int, int>> patterns;

  static TripletTraversalPlan from(const std::vector<TripletOffset>& patterns) {
    TripletTraversalPlan plan;
    auto index_of = [&plan](const Vec3i& o) {
      for (std::size_t k = 0; k < plan.offsets.size(); ++k)
        if (plan.offsets[k] == o) return int(k);
      plan.offsets.push_back(o);
      return int(plan.offsets.size() - 1);
    };
    for (const TripletOffset& p : patterns) plan.patterns.emplace_back(index_of(p.c1), index_of(p.c2));
    return plan;
  }
};

namespace detail {

template <typename Scalar>
struct Partner {
  Index index;
  Vec3<Scalar> edge;  // x_partner - x_base (minimum image)
};

template <typename Scalar>
std::vector<std::optional<Index>> neighbor_cells(const CellGrid<Scalar>& grid, const std::vector<Vec3i>& offsets,
                                                 Index base_cell) {
  const Vec3i base = grid.coords(base_cell);
  std::vector<std::optional<Index>> cells(offsets.size());
  for (std::size_t o = 0; o < offsets.size(); ++o) cells[o] = grid.neighbor(base, offsets[o]);
  return cells;
}

}  // namespace detail

template <typename Scalar, typename Kernel>
PassResult<Scalar> c01_pair_cell(const CellGrid<Scalar>& grid, const std::vector<Vec3i>& offsets,
                                 const ParticleSystem<Scalar>& system, const Kernel& kernel, Index base_cell,
                                 Coords<Scalar>& forces) {
  PassResult<Scalar> acc;
  const Scalar rc2 = grid.cutoff * grid.cutoff;
  const auto cells = detail::neighbor_cells(grid, offsets, base_cell);
  const auto& x = system.positions;
  for (Index i : grid.members(base_cell)) {
    const Vec3<Scalar> xi = x.col(i);
    Vec3<Scalar> fi = Vec3<Scalar>::Zero();
    for (const auto& cell : cells) {
      if (!cell) continue;
      for (Index j : grid.members(*cell)) {
        if (j == i) continue;
        const Vec3<Scalar> d = minimum_image<Scalar>(xi - x.col(j), system.domain);
        const Scalar r2 = d.squaredNorm();
        if (r2 > rc2) continue;
        const PairTerm<Scalar> t = kernel(r2);
        fi += t.force_factor * d;
        acc.potential += t.energy / 2;
        acc.virial += t.virial(r2) / 2;
      }
    }
    forces.col(i) += fi;
  }
  return acc;
}

/// For each particle i of the base cell and each pattern (c1, c2): j from c1, k from
/// c2, k > j when c1 == c2, j, k != i. Only i's force entry is written.
template <typename Scalar, typename Kernel, typename Visitor = IgnoreVisits>
PassResult<Scalar> c01_triplet_cell(const CellGrid<Scalar>& grid, const TripletTraversalPlan& plan,
                                    const ParticleSystem<Scalar>& system, const Kernel& kernel, Index base_cell,
                                    Coords<Scalar>& forces, Visitor&& visit = {}) {
  PassResult<Scalar> acc;
  const Scalar rc2 = grid.cutoff * grid.cutoff;
  const auto cells = detail::neighbor_cells(grid, plan.offsets, base_cell);
  const auto& x = system.positions;
  const std::size_t n_offsets = plan.offsets.size();
  std::vector<detail::Partner<Scalar>> partners;
  std::vector<std::size_t> first(n_offsets + 1);
  for (Index i : grid.members(base_cell)) {
    const Vec3<Scalar> xi = x.col(i);
    // partners within the cutoff of i, grouped by offset, ascending index within a group
    partners.clear();
    for (std::size_t o = 0; o < n_offsets; ++o) {
      first[o] = partners.size();
      if (!cells[o]) continue;
      for (Index j : grid.members(*cells[o])) {
        if (j == i) continue;
        const Vec3<Scalar> a = minimum_image<Scalar>(x.col(j) - xi, system.domain);
        if (a.squaredNorm() <= rc2) partners.push_back({j, a});
      }
    }
    first[n_offsets] = partners.size();

    Vec3<Scalar> fi = Vec3<Scalar>::Zero();
    for (const auto& [o1, o2] : plan.patterns) {
      const std::size_t end1 = first[std::size_t(o1) + 1];
      const std::size_t end2 = first[std::size_t(o2) + 1];
      for (std::size_t jj = first[std::size_t(o1)]; jj < end1; ++jj) {
        const auto& pj = partners[jj];
        for (std::size_t kk = o1 == o2 ? jj + 1 : first[std::size_t(o2)]; kk < end2; ++kk) {
          const auto& pk = partners[kk];
          if ((pk.edge - pj.edge).squaredNorm() > rc2) continue;
          const TripletTerm<Scalar> t = kernel(pj.edge, pk.edge);
          fi += t.forces.f_i;
          acc.potential += t.energy / 3;
          acc.virial += t.virial / 3;
          visit(i, pj.index, pk.index);
        }
      }
    }
    forces.col(i) += fi;
  }
  return acc;
}

namespace detail {

template <typename Scalar, typename CellPass>
PassResult<Scalar> over_base_cells(const CellGrid<Scalar>& grid, CellPass&& pass) {
  const Index cells = grid.cell_count();
  std::vector<PassResult<Scalar>> partial(static_cast<std::size_t>(cells));
  parallel_for(cells, [&](Index c) { partial[std::size_t(c)] = pass(c); });
  PassResult<Scalar> total;
  for (const auto& p : partial) total += p;
  return total;
}

}  // namespace detail

/// Adds every within-cutoff pair force into `forces` (caller zeroes it).
template <typename Scalar, typename Kernel>
PassResult<Scalar> c01_pair_pass(const CellGrid<Scalar>& grid, const std::vector<Vec3i>& offsets,
                                 const ParticleSystem<Scalar>& system, const Kernel& kernel, Coords<Scalar>& forces) {
  return detail::over_base_cells(
      grid, [&](Index c) { return c01_pair_cell(grid, offsets, system, kernel, c, forces); });
}

template <typename Scalar, typename Kernel>
PassResult<Scalar> c01_pair_pass(const CellGrid<Scalar>& grid, const ParticleSystem<Scalar>& system,
                                 const Kernel& kernel, Coords<Scalar>& forces) {
  return c01_pair_pass(grid, generate_pair_offsets(grid), system, kernel, forces);
}

/// Adds every within-cutoff triplet force into `forces` (caller zeroes it).
template <typename Scalar, typename Kernel, typename Visitor = IgnoreVisits>
PassResult<Scalar> c01_triplet_pass(const CellGrid<Scalar>& grid, const TripletTraversalPlan& plan,
                                    const ParticleSystem<Scalar>& system, const Kernel& kernel,
                                    Coords<Scalar>& forces, Visitor&& visit = {}) {
  return detail::over_base_cells(
      grid, [&](Index c) { return c01_triplet_cell(grid, plan, system, kernel, c, forces, visit); });
}

template <typename Scalar, typename Kernel, typename Visitor = IgnoreVisits>
PassResult<Scalar> c01_triplet_pass(const CellGrid<Scalar>& grid, const std::vector<TripletOffset>& patterns,
                                    const ParticleSystem<Scalar>& system, const Kernel& kernel,
                                    Coords<Scalar>& forces, Visitor&& visit = {}) {
  return c01_triplet_pass(grid, TripletTraversalPlan::from(patterns), system, kernel, forces,
                          std::forward<Visitor>(visit));
}

template <typename Scalar, typename Kernel>
PassResult<Scalar> c01_triplet_pass(const CellGrid<Scalar>& grid, const ParticleSystem<Scalar>& system,
                                    const Kernel& kernel, Coords<Scalar>& forces) {
  return c01_triplet_pass(grid, generate_triplet_offsets(grid), system, kernel, forces);
}

// ---------------------------------------------------------------------------
// DirectSum: every distinct pair / triplet exactly once, no cutoff, Newton's
// third law applied. Work is split into a fixed number of index ranges with
// private force buffers merged in range order, so results do not depend on the
// thread count.
// ---------------------------------------------------------------------------

inline constexpr Index kDirectSumChunks = 32;

namespace detail {

template <typename Scalar>
void require_open(const ParticleSystem<Scalar>& system) {
  if (system.domain.periodic) throw ValidationError("DirectSum does not support periodic boundaries");
}

template <typename Scalar, typename Chunk>
PassResult<Scalar> merge_chunks(const std::vector<std::pair<Index, Index>>& ranges, Index n, Coords<Scalar>& forces,
                                Chunk&& chunk) {
  std::vector<Coords<Scalar>> buffers(ranges.size());
  std::vector<PassResult<Scalar>> partial(ranges.size());
  parallel_for(Index(ranges.size()), [&](Index r) {
    buffers[std::size_t(r)] = Coords<Scalar>::Zero(3, n);
    partial[std::size_t(r)] = chunk(ranges[std::size_t(r)], buffers[std::size_t(r)]);
  });
  PassResult<Scalar> total;
  for (std::size_t r = 0; r < ranges.size(); ++r) {
    forces += buffers[r];
    total += partial[r];
  }
  return total;
}

}  // namespace detail

template <typename Scalar, typename Kernel, typename Visitor = IgnoreVisits>
PassResult<Scalar> direct_sum_pairs(const ParticleSystem<Scalar>& system, const Kernel& kernel,
                                    Coords<Scalar>& forces, Visitor&& visit = {}) {
  detail::require_open(system);
  const Index n = system.size();
  const auto& x = system.positions;
  const auto ranges = balanced_ranges(n, kDirectSumChunks, [n](Index i) { return n - 1 - i; });
  return detail::merge_chunks<Scalar>(ranges, n, forces, [&](std::pair<Index, Index> r, Coords<Scalar>& f) {
    PassResult<Scalar> acc;
    for (Index i = r.first; i < r.second; ++i) {
      const Vec3<Scalar> xi = x.col(i);
      Vec3<Scalar> fi = Vec3<Scalar>::Zero();
      for (Index j = i + 1; j < n; ++j) {
        const Vec3<Scalar> d = xi - x.col(j);
        const Scalar r2 = d.squaredNorm();
        const PairTerm<Scalar> t = kernel(r2);
        const Vec3<Scalar> fij = t.force_factor * d;
        fi += fij;
        f.col(j) -= fij;
        acc.potential += t.energy;
        acc.virial += t.virial(r2);
        visit(i, j);
      }
      f.col(i) += fi;
    }
    return acc;
  });
}

template <typename Scalar, typename Kernel, typename Visitor = IgnoreVisits>
PassResult<Scalar> direct_sum_triplets(const ParticleSystem<Scalar>& system, const Kernel& kernel,
                                       Coords<Scalar>& forces, Visitor&& visit = {}) {
  detail::require_open(system);
  const Index n = system.size();
  const auto& x = system.positions;
  const auto ranges =
      balanced_ranges(n, kDirectSumChunks, [n](Index i) { return (n - 1 - i) * (n - 2 - i) / 2 + 1; });
  return detail::merge_chunks<Scalar>(ranges, n, forces, [&](std::pair<Index, Index> r, Coords<Scalar>& f) {
    PassResult<Scalar> acc;
    for (Index i = r.first; i < r.second; ++i) {
      const Vec3<Scalar> xi = x.col(i);
      Vec3<Scalar> fi = Vec3<Scalar>::Zero();
      for (Index j = i + 1; j < n; ++j) {
        const Vec3<Scalar> a = x.col(j) - xi;
        Vec3<Scalar> fj = Vec3<Scalar>::Zero();
        for (Index k = j + 1; k < n; ++k) {
          const Vec3<Scalar> b = x.col(k) - xi;
          const TripletTerm<Scalar> t = kernel(a, b);
          fi += t.forces.f_i;
          fj += t.forces.f_j;
          f.col(k) += t.forces.f_k;
          acc.potential += t.energy;
          acc.virial += t.virial;
          visit(i, j, k);
        }
        f.col(j) += fj;
      }
      f.col(i) += fi;
    }
    return acc;
  });
}

}  // namespace respamd
