#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "respamd/types.hpp"

namespace respamd {

/// Linked-cells decomposition of a particle system.
///
/// Periodic grids cover [0, box). Open grids cover the union of the box and the
/// current particle extent, so particles that left the nominal box are still
/// binned by floor((x - origin) / cell_size) without clamping distant space into
/// boundary cells.
template <typename Scalar>
struct CellGrid {
  Vec3<Scalar> origin{Vec3<Scalar>::Zero()};
  Vec3<Scalar> cell_size{Vec3<Scalar>::Ones()};
  Vec3i cells_per_dim{Vec3i::Ones()};
  /// Cell layers per dimension that the cutoff can span.
  Vec3i reach{Vec3i::Ones()};
  Scalar cutoff{1};
  bool periodic{false};

  /// CSR layout: members of cell c are order[start[c] .. start[c+1]).
  std::vector<Index> start;
  std::vector<Index> order;
  std::vector<Index> cell_of;

  Index cell_count() const { return Index(cells_per_dim.prod()); }

  Index linear(const Vec3i& c) const {
    return Index(c.x()) + Index(cells_per_dim.x()) * (Index(c.y()) + Index(cells_per_dim.y()) * Index(c.z()));
  }

  Vec3i coords(Index cell) const {
    const Index nx = cells_per_dim.x();
    const Index ny = cells_per_dim.y();
    return Vec3i(int(cell % nx), int((cell / nx) % ny), int(cell / (nx * ny)));
  }

  /// Cell reached from `base` by `offset`; wrapped when periodic, empty when it falls off an open grid.
  std::optional<Index> neighbor(const Vec3i& base, const Vec3i& offset) const {
    Vec3i c = base + offset;
    for (int d = 0; d < 3; ++d) {
      const int n = cells_per_dim(d);
      if (periodic) {
        c(d) = ((c(d) % n) + n) % n;
      } else if (c(d) < 0 || c(d) >= n) {
        return std::nullopt;
      }
    }
    return linear(c);
  }

  std::span<const Index> members(Index cell) const {
    return {order.data() + start[std::size_t(cell)], order.data() + start[std::size_t(cell) + 1]};
  }
};

namespace detail {

/// Smallest R >= 1 with R * cell_size >= cutoff.
template <typename Scalar>
int covering_layers(Scalar cutoff, Scalar cell_size) {
  int r = std::max(1, int(std::ceil(cutoff / cell_size)));
  while (r > 1 && Scalar(r - 1) * cell_size >= cutoff) --r;
  while (Scalar(r) * cell_size < cutoff) ++r;
  return r;
}

inline constexpr int kMaxRefinement = 16;

}  // namespace detail

/// Geometry only (no binning); see build_cell_grid.
template <typename Scalar>
CellGrid<Scalar> plan_cell_grid(const Domain<Scalar>& domain, const Vec3<Scalar>& lower, const Vec3<Scalar>& upper,
                                Scalar cutoff) {
  if (!(cutoff > 0)) throw ValidationError("cutoff must be > 0");
  CellGrid<Scalar> grid;
  grid.cutoff = cutoff;
  grid.periodic = domain.periodic;
  for (int d = 0; d < 3; ++d) {
    if (!domain.periodic) {
      const Scalar lo = std::min(Scalar(0), lower(d));
      const Scalar extent = std::max(domain.edges(d), upper(d)) - lo;
      const int n = std::max(1, int(std::floor(extent / cutoff)));
      grid.origin(d) = lo;
      grid.cells_per_dim(d) = n;
      grid.cell_size(d) = extent / Scalar(n);
      grid.reach(d) = detail::covering_layers(cutoff, grid.cell_size(d));
      continue;
    }
    const Scalar edge = domain.edges(d);
    if (edge < 2 * cutoff)
      throw ValidationError("periodic box edge " + std::to_string(edge) + " is smaller than twice the cutoff " +
                            std::to_string(cutoff) + " (minimum-image safety)");
    grid.origin(d) = 0;
    bool ok = false;
    // cells = floor(edge / cutoff) unless that leaves fewer than 2 * reach + 1 distinct
    // cells, in which case the cells are subdivided until the neighbourhood no longer aliases
    for (int k = 1; k <= detail::kMaxRefinement && !ok; ++k) {
      const int n = std::max(1, int(std::floor(edge * Scalar(k) / cutoff)));
      const Scalar size = edge / Scalar(n);
      const int r = detail::covering_layers(cutoff, size);
      if (n >= 2 * r + 1) {
        grid.cells_per_dim(d) = n;
        grid.cell_size(d) = size;
        grid.reach(d) = r;
        ok = true;
      }
    }
    if (!ok)
      throw ValidationError("periodic box edge " + std::to_string(edge) +
                            " too small for a minimum-image-safe cell grid at cutoff " + std::to_string(cutoff));
  }
  return grid;
}

/// Bins positions into a grid with cell size >= cutoff / reach.
template <typename Scalar>
CellGrid<Scalar> build_cell_grid(const Coords<Scalar>& positions, const Domain<Scalar>& domain, Scalar cutoff) {
  Vec3<Scalar> lower = Vec3<Scalar>::Zero();
  Vec3<Scalar> upper = domain.edges;
  if (positions.cols() > 0) {
    lower = positions.rowwise().minCoeff();
    upper = positions.rowwise().maxCoeff();
  }
  if (!positions.allFinite()) throw ValidationError("cannot bin non-finite positions");
  CellGrid<Scalar> grid = plan_cell_grid(domain, lower, upper, cutoff);

  const Index n = positions.cols();
  grid.cell_of.resize(std::size_t(n));
  std::vector<Index> counts(std::size_t(grid.cell_count()) + 1, 0);
  for (Index i = 0; i < n; ++i) {
    Vec3i c;
    for (int d = 0; d < 3; ++d) {
      const int idx = int(std::floor((positions(d, i) - grid.origin(d)) / grid.cell_size(d)));
      c(d) = std::clamp(idx, 0, grid.cells_per_dim(d) - 1);
    }
    const Index cell = grid.linear(c);
    grid.cell_of[std::size_t(i)] = cell;
    ++counts[std::size_t(cell) + 1];
  }
  for (std::size_t c = 1; c < counts.size(); ++c) counts[c] += counts[c - 1];
  grid.start = counts;
  grid.order.resize(std::size_t(n));
  std::vector<Index> fill(counts.begin(), counts.end() - 1);
  for (Index i = 0; i < n; ++i) grid.order[std::size_t(fill[std::size_t(grid.cell_of[std::size_t(i)])]++)] = i;
  return grid;
}

template <typename Scalar>
CellGrid<Scalar> build_cell_grid(const ParticleSystem<Scalar>& system, Scalar cutoff) {
  return build_cell_grid(system.positions, system.domain, cutoff);
}

// ---------------------------------------------------------------------------
// Offset patterns
// ---------------------------------------------------------------------------

struct TripletOffset {
  Vec3i c1;
  Vec3i c2;
};

inline bool lexicographic_less_equal(const Vec3i& a, const Vec3i& b) {
  if (a.x() != b.x()) return a.x() < b.x();
  if (a.y() != b.y()) return a.y() < b.y();
  return a.z() <= b.z();
}

/// Distance between the closest points of two cells displaced by the given offsets.
template <typename Scalar>
Scalar min_cell_distance(const Vec3i& o1, const Vec3i& o2, const Vec3<Scalar>& cell_size) {
  Scalar sum = 0;
  for (int d = 0; d < 3; ++d) {
    const int gap = std::max(0, std::abs(o1(d) - o2(d)) - 1);
    const Scalar g = Scalar(gap) * cell_size(d);
    sum += g * g;
  }
  return std::sqrt(sum);
}

template <typename Scalar>
std::vector<Vec3i> reach_cube(const CellGrid<Scalar>& grid) {
  std::vector<Vec3i> cube;
  for (int x = -grid.reach.x(); x <= grid.reach.x(); ++x)
    for (int y = -grid.reach.y(); y <= grid.reach.y(); ++y)
      for (int z = -grid.reach.z(); z <= grid.reach.z(); ++z) cube.emplace_back(x, y, z);
  return cube;
}

/// Neighbour offsets (including the base cell) whose closest point lies within the cutoff.
template <typename Scalar>
std::vector<Vec3i> generate_pair_offsets(const CellGrid<Scalar>& grid) {
  std::vector<Vec3i> out;
  for (const Vec3i& o : reach_cube(grid))
    if (min_cell_distance<Scalar>(Vec3i::Zero(), o, grid.cell_size) <= grid.cutoff) out.push_back(o);
  return out;
}

/// Every (c1, c2) with c1 <= c2 lexicographically such that base, c1 and c2 are
/// mutually within the cutoff (closest-point cell distance).
template <typename Scalar>
std::vector<TripletOffset> generate_triplet_offsets(const CellGrid<Scalar>& grid) {
  const std::vector<Vec3i> near = generate_pair_offsets(grid);
  std::vector<TripletOffset> out;
  for (std::size_t a = 0; a < near.size(); ++a) {
    for (std::size_t b = 0; b < near.size(); ++b) {
      const Vec3i& c1 = near[a];
      const Vec3i& c2 = near[b];
      if (!lexicographic_less_equal(c1, c2)) continue;
      if (min_cell_distance<Scalar>(c1, c2, grid.cell_size) > grid.cutoff) continue;
      out.push_back({c1, c2});
    }
  }
  return out;
}

}  // namespace respamd
