#pragma once

#include "wlab/errors.hpp"
#include "wlab/grid.hpp"
#include "wlab/qlaplace.hpp"

#include <Eigen/Core>
#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace wlab {

/// Dirichlet boundary values per axis and side. Zero unless set.
template <typename Scalar>
struct BoundaryValues {
  std::array<Scalar, 2> low{Scalar(0), Scalar(0)};
  std::array<Scalar, 2> high{Scalar(0), Scalar(0)};
};

/// Face-normal gradient of a cell function.
///
/// Interior faces: (u_hi - u_lo) / h. Dirichlet boundary faces use the linear
/// ghost value 2 u_b - u_inside, i.e. 2 (u_inside - u_b) / h with the sign of
/// the axis. Neumann boundary faces copy the adjacent interior face (one-sided
/// difference).
template <typename Scalar>
GridFunction<Scalar> gradient(const GridFunction<Scalar>& u,
                              const BoundaryValues<Scalar>& bv = {}) {
  const Grid& g = u.grid;
  if (g.n < 2) throw ValidationError("gradient needs at least 2 cells per axis");
  const auto all = faces(g);
  GridFunction<Scalar> out(g, Centering::face);
  for (std::size_t f = 0; f < all.size(); ++f) {
    const Face& face = all[f];
    const Scalar h = g.h(face.axis);
    Scalar value;
    if (!face.boundary()) {
      value = (u[face.hi] - u[face.lo]) / h;
    } else if (g.bc == BoundaryKind::dirichlet) {
      if (face.lo < 0) value = Scalar(2) * (u[face.hi] - bv.low[face.axis]) / h;
      else value = Scalar(2) * (bv.high[face.axis] - u[face.lo]) / h;
    } else {
      const Index in = face.inside();
      const Index next = g.neighbor(in, face.axis, face.lo < 0 ? 1 : -1);
      value = face.lo < 0 ? (u[next] - u[in]) / h : (u[in] - u[next]) / h;
    }
    out[static_cast<Index>(f)] = value;
  }
  return out;
}

/// Cell-centered gradient vectors (cells x dim), each component the average
/// of the two face gradients bracketing the cell along that axis.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> cell_gradient(
    const GridFunction<Scalar>& grad_face) {
  const Grid& g = grad_face.grid;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(g.cell_count(), g.dim);
  for (Index c = 0; c < g.cell_count(); ++c) {
    for (int r = 0; r < g.dim; ++r) {
      out(c, r) = Scalar(0.5) * (grad_face[face_of_cell(g, c, r, -1)] +
                                 grad_face[face_of_cell(g, c, r, +1)]);
    }
  }
  return out;
}

/// |G_f| per face, where G_f combines the face-normal gradient with the
/// tangential components averaged from the adjacent cells.
template <typename Scalar>
GridFunction<Scalar> face_gradient_norm(const GridFunction<Scalar>& grad_face) {
  const Grid& g = grad_face.grid;
  GridFunction<Scalar> out(g, Centering::face);
  if (g.dim == 1) {
    out.values = grad_face.values.cwiseAbs();
    return out;
  }
  const auto cg = cell_gradient(grad_face);
  const auto all = faces(g);
  for (std::size_t f = 0; f < all.size(); ++f) {
    const Face& face = all[f];
    const int t = 1 - face.axis;
    Scalar tangential;
    if (face.boundary()) {
      tangential = cg(face.inside(), t);
    } else {
      tangential = Scalar(0.5) * (cg(face.lo, t) + cg(face.hi, t));
    }
    const Scalar normal = grad_face[static_cast<Index>(f)];
    using std::sqrt;
    out[static_cast<Index>(f)] = sqrt(normal * normal + tangential * tangential);
  }
  return out;
}

/// Harmonic mean of two positive coefficients; the common value when equal.
template <typename Scalar>
Scalar harmonic_mean(Scalar a, Scalar b) {
  if (a == b) return a;
  return Scalar(2) * a * b / (a + b);
}

/// Face coefficients from cell coefficients: harmonic mean across faces whose
/// two cells differ, the common value elsewhere, the inside value on the boundary.
template <typename Scalar>
GridFunction<Scalar> face_coefficients(const GridFunction<Scalar>& cell_coef) {
  const Grid& g = cell_coef.grid;
  const auto all = faces(g);
  GridFunction<Scalar> out(g, Centering::face);
  for (std::size_t f = 0; f < all.size(); ++f) {
    const Face& face = all[f];
    out[static_cast<Index>(f)] = face.boundary()
                                     ? cell_coef[face.inside()]
                                     : harmonic_mean(cell_coef[face.lo], cell_coef[face.hi]);
  }
  return out;
}

/// Cell divergence of the face flux coef * grad: (1/h) sum of signed face fluxes.
template <typename Scalar>
GridFunction<Scalar> div_flux(const GridFunction<Scalar>& coef_face,
                              const GridFunction<Scalar>& grad_face) {
  const Grid& g = grad_face.grid;
  if (coef_face.size() != grad_face.size())
    throw ValidationError("coefficient and gradient must both be face-centered on one grid");
  if ((coef_face.values.array() <= Scalar(0)).any())
    throw ValidationError("face coefficients must be positive");
  const auto all = faces(g);
  GridFunction<Scalar> out(g, Centering::cell);
  for (std::size_t f = 0; f < all.size(); ++f) {
    const Face& face = all[f];
    const Scalar flux = coef_face[static_cast<Index>(f)] * grad_face[static_cast<Index>(f)];
    const Scalar h = g.h(face.axis);
    if (face.lo >= 0) out[face.lo] += flux / h;
    if (face.hi >= 0) out[face.hi] -= flux / h;
  }
  return out;
}

/// A cell function defined only where `valid` is set.
template <typename Scalar>
struct MaskedFunction {
  GridFunction<Scalar> values;
  Mask valid;
};

/// D_r^l u(x) = (u(x + l h e_r) - u(x)) / (l h), on cells where x + l e_r exists.
template <typename Scalar>
MaskedFunction<Scalar> difference_quotient(const GridFunction<Scalar>& u, int axis, int l) {
  const Grid& g = u.grid;
  if (axis < 0 || axis >= g.dim) throw ValidationError(fmt::format("axis {} out of range", axis));
  if (l == 0) throw ValidationError("difference quotient shift must be nonzero");
  if (std::abs(l) >= g.n)
    throw ValidationError(fmt::format("shift {} exceeds the grid ({} cells)", l, g.n));
  MaskedFunction<Scalar> out{GridFunction<Scalar>(g, Centering::cell),
                             Mask(static_cast<std::size_t>(g.cell_count()), false)};
  const Scalar step = Scalar(l) * g.h(axis);
  for (Index c = 0; c < g.cell_count(); ++c) {
    const Index s = g.neighbor(c, axis, l);
    if (s < 0) continue;
    out.values[c] = (u[s] - u[c]) / step;
    out.valid[static_cast<std::size_t>(c)] = true;
  }
  return out;
}

/// h^d sum u D_r^l phi + h^d sum D_r^{-l} u phi. Zero up to rounding when phi
/// vanishes within |l| cells of the boundary along axis r.
template <typename Scalar>
Scalar ibp_residual(const GridFunction<Scalar>& u, const GridFunction<Scalar>& phi, int axis,
                    int l) {
  const Grid& g = u.grid;
  if (!(phi.grid == g)) throw ValidationError("u and phi must share a grid");
  const int a = std::abs(l);
  for (Index c = 0; c < g.cell_count(); ++c) {
    const int pos = g.coords(c)[axis];
    if ((pos < a || pos >= g.n - a) && phi[c] != Scalar(0))
      throw ValidationError(
          fmt::format("phi must vanish within {} cells of the boundary along axis {}", a, axis));
  }
  const auto dphi = difference_quotient(phi, axis, l);
  const auto du = difference_quotient(u, axis, -l);
  Scalar sum(0);
  for (Index c = 0; c < g.cell_count(); ++c) {
    Scalar term(0);
    if (dphi.valid[static_cast<std::size_t>(c)]) term += u[c] * dphi.values[c];
    if (phi[c] != Scalar(0)) term += du.values[c] * phi[c];
    sum += term;
  }
  return g.cell_volume() * sum;
}

inline Window full_window(const Grid& g) {
  return {Mask(static_cast<std::size_t>(g.cell_count()), true), 0};
}

/// Cells with center strictly inside [lo, hi]; margin is the smallest
/// distance in cells from the window to the outer boundary.
inline Window box_window(const Grid& g, std::array<double, 2> lo, std::array<double, 2> hi) {
  Window w{Mask(static_cast<std::size_t>(g.cell_count()), false), g.n};
  for (Index c = 0; c < g.cell_count(); ++c) {
    bool in = true;
    for (int r = 0; r < g.dim; ++r) {
      const double x = g.center(c, r);
      if (x <= lo[static_cast<std::size_t>(r)] || x >= hi[static_cast<std::size_t>(r)]) in = false;
    }
    if (!in) continue;
    w.mask[static_cast<std::size_t>(c)] = true;
    const auto ij = g.coords(c);
    for (int r = 0; r < g.dim; ++r) {
      w.margin = std::min({w.margin, ij[static_cast<std::size_t>(r)],
                           g.n - 1 - ij[static_cast<std::size_t>(r)]});
    }
  }
  return w;
}

enum class NormKind { l2, lp, h1_semi, h2_semi };

/// Second derivatives (u_xx, u_yy, u_xy) from the centered 3x3 stencil around `c`.
/// The caller guarantees that every stencil cell exists.
template <typename Scalar>
std::array<Scalar, 3> centered_hessian(const GridFunction<Scalar>& u, Index c) {
  const Grid& g = u.grid;
  const Scalar hx = g.h(0);
  std::array<Scalar, 3> out{Scalar(0), Scalar(0), Scalar(0)};
  out[0] = (u[g.neighbor(c, 0, 1)] - Scalar(2) * u[c] + u[g.neighbor(c, 0, -1)]) / (hx * hx);
  if (g.dim == 2) {
    const Scalar hy = g.h(1);
    out[1] = (u[g.neighbor(c, 1, 1)] - Scalar(2) * u[c] + u[g.neighbor(c, 1, -1)]) / (hy * hy);
    const Index up = g.neighbor(c, 1, 1);
    const Index dn = g.neighbor(c, 1, -1);
    out[2] = (u[g.neighbor(up, 0, 1)] - u[g.neighbor(up, 0, -1)] - u[g.neighbor(dn, 0, 1)] +
              u[g.neighbor(dn, 0, -1)]) /
             (Scalar(4) * hx * hy);
  }
  return out;
}

/// True when the sup-distance-1 box around c lies inside `mask`.
inline bool stencil_inside(const Grid& g, Index c, const Mask& mask) {
  const auto ij = g.coords(c);
  const int jr = g.dim == 2 ? 1 : 0;
  for (int dj = -jr; dj <= jr; ++dj) {
    for (int di = -1; di <= 1; ++di) {
      const int i = ij[0] + di;
      const int j = ij[1] + dj;
      if (i < 0 || i >= g.n || j < 0 || (g.dim == 2 && j >= g.n)) return false;
      if (!mask[static_cast<std::size_t>(g.index(i, j))]) return false;
    }
  }
  return true;
}

template <typename Scalar>
Scalar hessian_energy(const std::array<Scalar, 3>& hs) {
  return hs[0] * hs[0] + hs[1] * hs[1] + Scalar(2) * hs[2] * hs[2];
}

/// Discrete norms over a window, scaled by the cell volume.
///
/// H1-semi sums face gradients whose adjacent cells are all in the window
/// (boundary faces with half weight). H2-semi uses centered second
/// differences at cells whose full stencil lies in the window.
template <typename Scalar>
Scalar norm(const GridFunction<Scalar>& u, NormKind kind, const Window& window,
            Scalar p = Scalar(2)) {
  const Grid& g = u.grid;
  if (window.mask.size() != static_cast<std::size_t>(g.cell_count()))
    throw ValidationError("window does not match the grid");
  if (window.empty()) throw ValidationError("window is empty");
  using std::abs;
  using std::pow;
  using std::sqrt;
  const Scalar vol = g.cell_volume();
  Scalar sum(0);
  switch (kind) {
    case NormKind::l2:
      for (Index c = 0; c < g.cell_count(); ++c)
        if (window.contains(c)) sum += u[c] * u[c];
      return sqrt(vol * sum);
    case NormKind::lp:
      if (!(p >= Scalar(1))) throw ValidationError("Lp norm needs p >= 1");
      for (Index c = 0; c < g.cell_count(); ++c)
        if (window.contains(c)) sum += pow(abs(u[c]), p);
      return pow(vol * sum, Scalar(1) / p);
    case NormKind::h1_semi: {
      const auto grad = gradient(u);
      const auto all = faces(g);
      for (std::size_t f = 0; f < all.size(); ++f) {
        const Face& face = all[f];
        const Scalar gf = grad[static_cast<Index>(f)];
        if (face.boundary()) {
          if (window.contains(face.inside())) sum += Scalar(0.5) * gf * gf;
        } else if (window.contains(face.lo) && window.contains(face.hi)) {
          sum += gf * gf;
        }
      }
      return sqrt(vol * sum);
    }
    case NormKind::h2_semi:
      for (Index c = 0; c < g.cell_count(); ++c) {
        if (!window.contains(c) || !stencil_inside(g, c, window.mask)) continue;
        sum += hessian_energy(centered_hessian(u, c));
      }
      return sqrt(vol * sum);
  }
  return Scalar(0);
}

struct QuotientBoundRow {
  int shift = 0;
  double quotient_norm = 0.0;  ///< ||D^l u||_{Lp(V)}
  double gradient_norm = 0.0;  ///< ||grad u||_{Lp(Omega)}
  double ratio = 0.0;
};

/// ||D^l u||_{Lp(V)} / ||grad u||_{Lp(Omega)} for each shift, with D^l u the
/// vector of difference quotients along every axis and grad u the cell-centered
/// gradient.
template <typename Scalar>
std::vector<QuotientBoundRow> quotient_bound_check(const GridFunction<Scalar>& u, const Window& window,
                                      Scalar p, const std::vector<int>& shifts) {
  const Grid& g = u.grid;
  if (window.empty()) throw ValidationError("window is empty");
  if (!(p >= Scalar(1))) throw ValidationError("exponent must be >= 1");
  using std::abs;
  using std::pow;
  const Scalar vol = g.cell_volume();

  const auto cg = cell_gradient(gradient(u));
  Scalar full(0);
  for (Index c = 0; c < g.cell_count(); ++c) full += pow(cg.row(c).norm(), p);
  const Scalar grad_norm = pow(vol * full, Scalar(1) / p);

  std::vector<QuotientBoundRow> rows;
  for (int l : shifts) {
    if (l == 0 || std::abs(l) > window.margin)
      throw ValidationError(
          fmt::format("shift {} must be nonzero and at most the window margin {}", l, window.margin));
    std::vector<MaskedFunction<Scalar>> dq;
    for (int r = 0; r < g.dim; ++r) dq.push_back(difference_quotient(u, r, l));
    Scalar sum(0);
    for (Index c = 0; c < g.cell_count(); ++c) {
      if (!window.contains(c)) continue;
      Scalar sq(0);
      for (int r = 0; r < g.dim; ++r) sq += dq[static_cast<std::size_t>(r)].values[c] *
                                            dq[static_cast<std::size_t>(r)].values[c];
      sum += pow(std::sqrt(sq), p);
    }
    QuotientBoundRow row;
    row.shift = l;
    row.quotient_norm = static_cast<double>(pow(vol * sum, Scalar(1) / p));
    row.gradient_norm = static_cast<double>(grad_norm);
    row.ratio = grad_norm > Scalar(0) ? row.quotient_norm / row.gradient_norm : 0.0;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace wlab
