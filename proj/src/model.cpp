#include "wlab/model.hpp"

#include "wlab/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace wlab {

double MaterialParams::sound_speed() const { return std::sqrt(lambda / rho); }

double derive_k(double b_over_a, double rho, double c) {
  if (!(rho > 0.0)) throw ValidationError(fmt::format("rho must be positive, got {}", rho));
  if (!(c > 0.0)) throw ValidationError(fmt::format("c must be positive, got {}", c));
  const double beta_a = 1.0 + 0.5 * b_over_a;
  return beta_a / (rho * c * c);
}

std::string to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::zero: return "zero";
    case ProfileKind::gaussian_bump: return "gaussian-bump";
    case ProfileKind::sine_mode: return "sine-mode";
    case ProfileKind::traveling_pulse: return "traveling-pulse";
  }
  return "zero";
}

std::optional<ProfileKind> parse_profile_kind(const std::string& name) {
  for (auto kind : {ProfileKind::zero, ProfileKind::gaussian_bump, ProfileKind::sine_mode,
                    ProfileKind::traveling_pulse}) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

double Profile::operator()(double x, double y, int dim,
                           const std::array<double, 2>& extent) const {
  using std::numbers::pi;
  if (kind == ProfileKind::zero || amplitude == 0.0) return 0.0;
  if (kind == ProfileKind::sine_mode) {
    double v = std::sin(pi * x / extent[0]);
    if (dim == 2) v *= std::sin(pi * y / extent[1]);
    return amplitude * v;
  }
  const std::array<double, 2> c = center.value_or(
      std::array<double, 2>{0.5 * extent[0], 0.5 * extent[1]});
  const double w = width.value_or(
      0.1 * (dim == 1 ? extent[0] : std::min(extent[0], extent[1])));
  double r2 = (x - c[0]) * (x - c[0]);
  if (dim == 2) r2 += (y - c[1]) * (y - c[1]);
  const double bump = std::exp(-r2 / (2.0 * w * w));
  if (kind == ProfileKind::gaussian_bump) return amplitude * bump;
  return amplitude * ((x - c[0]) / w) * bump;
}

Grid Scenario::grid() const {
  Grid g;
  g.dim = dimension;
  g.n = grid_n;
  g.extent = extent;
  if (dimension == 1) g.extent[1] = 1.0;
  g.bc = bc;
  return g;
}

long Scenario::steps() const { return std::lround(T / dt); }

namespace {

void check_material(const MaterialParams& m, const std::string& prefix,
                    std::vector<Violation>& out) {
  if (!(m.lambda > 0.0) || !std::isfinite(m.lambda))
    out.push_back({prefix + ".lambda", "lambda must be positive and finite"});
  if (!(m.rho > 0.0) || !std::isfinite(m.rho))
    out.push_back({prefix + ".rho", "rho must be positive and finite"});
  if (!(m.b > 0.0) || !std::isfinite(m.b))
    out.push_back({prefix + ".b", "b must be positive and finite"});
  if (!(m.delta > 0.0 && m.delta < 1.0))
    out.push_back({prefix + ".delta", "delta must lie in open interval (0,1)"});
  if (!std::isfinite(m.k)) out.push_back({prefix + ".k", "k must be finite"});
}

void check_profile(const Profile& p, const std::string& prefix, std::vector<Violation>& out) {
  if (!std::isfinite(p.amplitude))
    out.push_back({prefix + "_amplitude", "amplitude must be finite"});
  if (p.width && !(*p.width > 0.0))
    out.push_back({prefix + "_width", "profile width must be positive"});
}

bool in_open_unit(double v) { return v > 0.0 && v < 1.0; }

}  // namespace

std::vector<Violation> validate_scenario(const Scenario& s) {
  std::vector<Violation> out;
  const int d = s.dimension;
  if (d != 1 && d != 2) {
    out.push_back({"domain.dim", fmt::format("dimension must be 1 or 2, got {}", d)});
  }
  const int axes = d == 2 ? 2 : 1;
  for (int r = 0; r < axes; ++r) {
    if (!(s.extent[r] > 0.0) || !std::isfinite(s.extent[r]))
      out.push_back({"domain.extent", "extents must be positive and finite"});
  }

  if (!(s.q >= 1.0) || !std::isfinite(s.q)) {
    out.push_back({"physics.q", fmt::format("q >= 1 fails (got q={})", s.q)});
  }
  if (d == 1 || d == 2) {
    if (!(s.q > d - 1)) {
      out.push_back({"physics.q", fmt::format("q > d-1 fails (needs q>{})", d - 1)});
    }
  }

  check_material(s.plus, "materials.plus", out);
  check_material(s.minus, "materials.minus", out);

  if (s.lens) {
    const Box& box = *s.lens;
    bool inside = true;
    for (int r = 0; r < axes; ++r) {
      if (!(box.lo[r] > 0.0 && box.hi[r] < s.extent[r] && box.lo[r] < box.hi[r])) inside = false;
    }
    if (!inside) {
      out.push_back({"lens", "lens region must lie strictly inside the domain"});
    }
  }

  if (s.grid_n < 4) out.push_back({"grid.n", "grid.n must be at least 4"});
  if (!(s.dt > 0.0) || !std::isfinite(s.dt)) out.push_back({"time.dt", "dt must be positive"});
  if (!(s.T >= s.dt) || !std::isfinite(s.T)) out.push_back({"time.T", "T must be at least dt"});

  const SolverConfig& c = s.solver;
  if (!in_open_unit(c.picard_tol))
    out.push_back({"solver.picard_tol", "picard_tol must lie in (0,1)"});
  if (c.picard_max_iters < 1)
    out.push_back({"solver.picard_max_iters", "picard_max_iters must be at least 1"});
  if (!in_open_unit(c.linear_tol))
    out.push_back({"solver.linear_tol", "linear_tol must lie in (0,1)"});
  if (c.linear_max_iters < 0)
    out.push_back({"solver.linear_max_iters", "linear_max_iters must be at least 1 (0 = auto)"});
  if (!in_open_unit(c.degeneracy_floor))
    out.push_back({"solver.degeneracy_floor", "degeneracy_floor must lie in (0,1)"});
  if (s.snapshot_stride < 1)
    out.push_back({"output.snapshot_stride", "snapshot_stride must be at least 1"});

  check_profile(s.u0, "initial.u0", out);
  check_profile(s.u1, "initial.u1", out);
  check_profile(s.neumann, "bc.neumann", out);

  if (!s.mms.empty()) {
    if (s.mms != "standing-wave") {
      out.push_back({"source.mms", fmt::format("unknown manufactured solution '{}'", s.mms)});
    } else {
      if (s.bc != BoundaryKind::dirichlet)
        out.push_back({"source.mms", "manufactured solution requires bc.type = dirichlet"});
      if (s.lens)
        out.push_back({"source.mms", "manufactured solution requires an empty lens region"});
    }
    if (!std::isfinite(s.mms_amplitude))
      out.push_back({"source.mms_amplitude", "amplitude must be finite"});
  }
  return out;
}

MaterialField build_material_field(const Scenario& s) {
  MaterialField f;
  f.grid = s.grid();
  f.plus = s.plus;
  f.minus = s.minus;
  const Grid& g = f.grid;
  const Index cells = g.cell_count();
  f.region.assign(static_cast<std::size_t>(cells), Region::minus);
  f.lambda.resize(cells);
  f.rho.resize(cells);
  f.b.resize(cells);
  f.delta.resize(cells);
  f.k.resize(cells);
  for (Index c = 0; c < cells; ++c) {
    const double x = g.center(c, 0);
    const double y = g.dim == 2 ? g.center(c, 1) : 0.0;
    const Region r = (s.lens && s.lens->contains(x, y, g.dim)) ? Region::plus : Region::minus;
    f.region[static_cast<std::size_t>(c)] = r;
    const MaterialParams& m = f.params_of(r);
    f.lambda[c] = m.lambda;
    f.rho[c] = m.rho;
    f.b[c] = m.b;
    f.delta[c] = m.delta;
    f.k[c] = m.k;
  }
  const auto all = faces(g);
  for (std::size_t i = 0; i < all.size(); ++i) {
    const Face& face = all[i];
    if (face.boundary()) continue;
    if (f.region[static_cast<std::size_t>(face.lo)] != f.region[static_cast<std::size_t>(face.hi)])
      f.interface_faces.push_back(static_cast<Index>(i));
  }
  return f;
}

Window region_window(const MaterialField& field, Region region, int margin) {
  const Grid& g = field.grid;
  Window w;
  w.margin = margin;
  w.mask.assign(static_cast<std::size_t>(g.cell_count()), false);
  for (Index c = 0; c < g.cell_count(); ++c) {
    if (field.region[static_cast<std::size_t>(c)] != region) continue;
    const auto ij = g.coords(c);
    bool ok = true;
    const int jlo = g.dim == 2 ? -margin : 0;
    const int jhi = g.dim == 2 ? margin : 0;
    for (int dj = jlo; dj <= jhi && ok; ++dj) {
      for (int di = -margin; di <= margin && ok; ++di) {
        const int i = ij[0] + di;
        const int j = ij[1] + dj;
        if (i < 0 || i >= g.n || j < 0 || (g.dim == 2 && j >= g.n)) {
          ok = false;
        } else if (field.region[static_cast<std::size_t>(g.index(i, j))] != region) {
          ok = false;
        }
      }
    }
    w.mask[static_cast<std::size_t>(c)] = ok;
  }
  return w;
}

}  // namespace wlab
