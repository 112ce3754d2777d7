#pragma once

#include <Eigen/Core>

#include <array>
#include <cmath>
#include <vector>

namespace wlab {

using Index = Eigen::Index;

enum class BoundaryKind { dirichlet, neumann };

/// Uniform cell-centered grid on [0, L_0] x [0, L_1] with n cells per axis.
/// Cells are numbered x-fastest: c = j * n + i.
struct Grid {
  int dim = 1;
  int n = 4;
  std::array<double, 2> extent{1.0, 1.0};
  BoundaryKind bc = BoundaryKind::dirichlet;

  double h(int axis) const { return extent[axis] / n; }
  Index cell_count() const { return dim == 1 ? Index(n) : Index(n) * n; }
  double cell_volume() const { return dim == 1 ? h(0) : h(0) * h(1); }

  Index index(int i, int j = 0) const { return Index(j) * n + i; }
  std::array<int, 2> coords(Index c) const {
    return {static_cast<int>(c % n), dim == 1 ? 0 : static_cast<int>(c / n)};
  }
  double center(Index c, int axis) const { return (coords(c)[axis] + 0.5) * h(axis); }

  /// Cell offset by `offset` along `axis`, or -1 when it leaves the grid.
  Index neighbor(Index c, int axis, int offset) const {
    auto ij = coords(c);
    ij[axis] += offset;
    if (ij[axis] < 0 || ij[axis] >= n) return -1;
    return index(ij[0], ij[1]);
  }

  bool operator==(const Grid&) const = default;
};

/// A face normal to `axis`. `lo` is the cell on the negative side and `hi`
/// the one on the positive side; boundary faces carry -1 on the outside.
struct Face {
  Index lo = -1;
  Index hi = -1;
  int axis = 0;

  bool boundary() const { return lo < 0 || hi < 0; }
  Index inside() const { return lo < 0 ? hi : lo; }
};

/// All faces, axis-0 faces first, each row ordered by position.
inline std::vector<Face> faces(const Grid& g) {
  std::vector<Face> out;
  const int rows = g.dim == 1 ? 1 : g.n;
  out.reserve(static_cast<std::size_t>(g.dim) * (g.n + 1) * rows);
  for (int axis = 0; axis < g.dim; ++axis) {
    for (int row = 0; row < rows; ++row) {
      for (int k = 0; k <= g.n; ++k) {
        auto cell = [&](int pos) -> Index {
          if (pos < 0 || pos >= g.n) return -1;
          return axis == 0 ? g.index(pos, row) : g.index(row, pos);
        };
        out.push_back({cell(k - 1), cell(k), axis});
      }
    }
  }
  return out;
}

inline Index face_count(const Grid& g) {
  return Index(g.dim) * (g.n + 1) * (g.dim == 1 ? 1 : g.n);
}

/// Index of the face on the given side (+1 high, -1 low) of a cell.
inline Index face_of_cell(const Grid& g, Index c, int axis, int side) {
  const auto ij = g.coords(c);
  const int rows = g.dim == 1 ? 1 : g.n;
  const Index base = Index(axis) * (g.n + 1) * rows;
  const int pos = ij[axis] + (side > 0 ? 1 : 0);
  const int row = axis == 0 ? ij[1] : ij[0];
  return base + Index(row) * (g.n + 1) + pos;
}

enum class Centering { cell, face };

/// Values on a grid: one per cell or one per face (face-normal component).
template <typename Scalar>
struct GridFunction {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Grid grid;
  Centering centering = Centering::cell;
  Vector values;

  GridFunction() = default;
  GridFunction(const Grid& g, Centering where)
      : grid(g), centering(where),
        values(Vector::Zero(where == Centering::cell ? g.cell_count() : face_count(g))) {}
  GridFunction(const Grid& g, Centering where, Vector v)
      : grid(g), centering(where), values(std::move(v)) {}

  Index size() const { return values.size(); }
  Scalar& operator[](Index i) { return values[i]; }
  const Scalar& operator[](Index i) const { return values[i]; }

  bool finite() const { return values.allFinite(); }
};

using GridFunctiond = GridFunction<double>;

/// Sample a callable f(x, y) at cell centers.
template <typename Scalar = double, typename Fn>
GridFunction<Scalar> sample(const Grid& g, Fn&& f) {
  GridFunction<Scalar> out(g, Centering::cell);
  for (Index c = 0; c < g.cell_count(); ++c) {
    const double x = g.center(c, 0);
    const double y = g.dim == 2 ? g.center(c, 1) : 0.0;
    out[c] = static_cast<Scalar>(f(x, y));
  }
  return out;
}

using Mask = std::vector<bool>;

/// Interior index window. `margin` is the sup-distance (in cells) that every
/// window cell keeps from the outer boundary and from cells of other regions.
struct Window {
  Mask mask;
  int margin = 0;

  Index count() const {
    Index k = 0;
    for (bool b : mask) k += b ? 1 : 0;
    return k;
  }
  bool empty() const { return count() == 0; }
  bool contains(Index c) const { return c >= 0 && mask[static_cast<std::size_t>(c)]; }
};

}  // namespace wlab
