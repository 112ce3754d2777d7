#include "wlab/regularity.hpp"

#include "wlab/discrete_ops.hpp"
#include "wlab/errors.hpp"
#include "wlab/parallel.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace wlab {

namespace {

using CellGrad = Eigen::MatrixXd;

CellGrad cell_grad(const GridFunctiond& u) { return cell_gradient(gradient(u)); }

const char* region_name(Region r) { return r == Region::plus ? "plus" : "minus"; }

/// sum over window cells, axes and components of |(G(c + l e_r) - G(c)) / (l h_r)|^2, times vol
double dq_sq(const Grid& g, const CellGrad& G, const Window& w, int l) {
  double sum = 0.0;
  for (Index c = 0; c < g.cell_count(); ++c) {
    if (!w.contains(c)) continue;
    for (int r = 0; r < g.dim; ++r) {
      const Index s = g.neighbor(c, r, l);
      const double step = l * g.h(r);
      sum += ((G.row(s) - G.row(c)) / step).squaredNorm();
    }
  }
  return g.cell_volume() * sum;
}

CellGrad f_transform_rows(const CellGrad& G, double q) {
  CellGrad F(G.rows(), G.cols());
  for (Index c = 0; c < G.rows(); ++c) {
    const VecD<double> g = G.row(c).transpose();
    F.row(c) = f_transform(g, q).transpose();
  }
  return F;
}

}  // namespace

std::vector<ScanRow> interior_h2_scan(const Trajectory& traj, const MaterialField& field,
                                      int margin, const std::vector<int>& shifts) {
  const Grid& g = field.grid;
  if (!(traj.grid == g)) throw ValidationError("trajectory and material field use different grids");
  if (shifts.empty()) throw ValidationError("at least one shift is required");
  int widest = 0;
  for (int l : shifts) {
    if (l == 0) throw ValidationError("shifts must be nonzero");
    widest = std::max(widest, std::abs(l));
  }
  if (margin < widest + 1)
    throw ValidationError(fmt::format("margin {} must be at least max |shift| + 1 = {}", margin, widest + 1));

  struct Target {
    Region region;
    Window window;
  };
  std::vector<Target> targets;
  for (Region r : {Region::minus, Region::plus}) {
    if (std::find(field.region.begin(), field.region.end(), r) == field.region.end()) continue;
    Window w = region_window(field, r, margin);
    if (w.empty())
      throw ValidationError(fmt::format("window for region {} is empty at margin {}", region_name(r), margin));
    targets.push_back({r, std::move(w)});
  }

  const auto nsnap = static_cast<Index>(traj.snapshots.size());
  const std::size_t per_snap = targets.size() * shifts.size();
  // values[snap][target * shifts + shift] = (u, v, F) squared norms
  std::vector<std::vector<std::array<double, 3>>> values(static_cast<std::size_t>(nsnap));
  parallel_for(0, nsnap, [&](Index i) {
    const WaveState& st = traj.snapshots[static_cast<std::size_t>(i)];
    const CellGrad gu = cell_grad(st.u);
    const CellGrad gv = cell_grad(st.v);
    const CellGrad F = f_transform_rows(gv, traj.q);
    auto& out = values[static_cast<std::size_t>(i)];
    out.resize(per_snap);
    for (std::size_t t = 0; t < targets.size(); ++t) {
      for (std::size_t k = 0; k < shifts.size(); ++k) {
        const Window& w = targets[t].window;
        out[t * shifts.size() + k] = {dq_sq(g, gu, w, shifts[k]), dq_sq(g, gv, w, shifts[k]),
                                      dq_sq(g, F, w, shifts[k])};
      }
    }
  }, 1);

  std::vector<ScanRow> rows;
  for (std::size_t t = 0; t < targets.size(); ++t) {
    for (std::size_t k = 0; k < shifts.size(); ++k) {
      ScanRow row;
      row.region = targets[t].region;
      row.shift = shifts[k];
      row.margin = margin;
      const std::size_t col = t * shifts.size() + k;
      double sup = 0.0;
      for (std::size_t i = 0; i < values.size(); ++i) {
        sup = std::max(sup, values[i][col][0]);
        if (i == 0) continue;
        const double span = traj.snapshots[i].t - traj.snapshots[i - 1].t;
        row.dgrad_v_int += span * values[i][col][1];
        row.dF_int += span * values[i][col][2];
      }
      row.dgrad_u_sup = std::sqrt(sup);
      rows.push_back(row);
    }
  }
  return rows;
}

PiecewiseH2 piecewise_h2_norm(const GridFunctiond& u, const MaterialField& field) {
  const Grid& g = field.grid;
  static constexpr std::array<std::array<int, 2>, 9> kOffsets{{
      {0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};
  const std::size_t tries = g.dim == 1 ? 3 : 9;

  auto fits = [&](int ci, int cj, auto&& same) {
    const int jr = g.dim == 2 ? 1 : 0;
    for (int dj = -jr; dj <= jr; ++dj) {
      for (int di = -1; di <= 1; ++di) {
        const int i = ci + di, j = cj + dj;
        if (i < 0 || i >= g.n || j < 0 || (g.dim == 2 && j >= g.n)) return false;
        if (!same(g.index(i, j))) return false;
      }
    }
    return true;
  };

  auto energy_at = [&](Index c, auto&& same) {
    const auto ij = g.coords(c);
    for (std::size_t k = 0; k < tries; ++k) {
      const int ci = ij[0] + kOffsets[k][0];
      const int cj = ij[1] + kOffsets[k][1];
      if (fits(ci, cj, same)) return hessian_energy(centered_hessian(u, g.index(ci, cj)));
    }
    return 0.0;
  };

  double minus = 0.0, plus = 0.0, global = 0.0, straddle = 0.0;
  for (Index c = 0; c < g.cell_count(); ++c) {
    const Region r = field.region[static_cast<std::size_t>(c)];
    auto same = [&](Index o) { return field.region[static_cast<std::size_t>(o)] == r; };
    const double side = energy_at(c, same);
    (r == Region::plus ? plus : minus) += side;
    const double all = energy_at(c, [](Index) { return true; });
    global += all;
    const auto ij = g.coords(c);
    if (!fits(ij[0], ij[1], same) && fits(ij[0], ij[1], [](Index) { return true; })) straddle += all;
  }
  const double vol = g.cell_volume();
  return {std::sqrt(vol * minus), std::sqrt(vol * plus), std::sqrt(vol * global), std::sqrt(vol * straddle)};
}

PiecewiseH2 piecewise_h2_norm(const Trajectory& traj, const MaterialField& field) {
  std::vector<PiecewiseH2> per(traj.snapshots.size());
  parallel_for(0, static_cast<Index>(per.size()), [&](Index i) {
    per[static_cast<std::size_t>(i)] = piecewise_h2_norm(traj.snapshots[static_cast<std::size_t>(i)].u, field);
  }, 1);
  PiecewiseH2 out;
  for (const auto& p : per) {
    out.minus = std::max(out.minus, p.minus);
    out.plus = std::max(out.plus, p.plus);
    out.global = std::max(out.global, p.global);
    out.straddle = std::max(out.straddle, p.straddle);
  }
  return out;
}

double flux_jump_residual(const WaveState& state, const MaterialField& field, double q) {
  const Grid& g = field.grid;
  const auto all = faces(g);
  const auto& u = state.u.values;
  const auto& v = state.v.values;

  // Side flux from the inner cell `in` and the next cell `out` further into the side.
  auto side_flux = [&](Index in, Index out, int axis, double sign) {
    const double h = g.h(axis);
    const double gu = sign * (u[in] - u[out]) / h;
    const double gv = sign * (v[in] - v[out]) / h;
    double mag = std::abs(gv);
    if (g.dim == 2) {
      const int t = 1 - axis;
      const Index a = g.neighbor(in, t, 1);
      const Index b = g.neighbor(in, t, -1);
      if (a >= 0 && b >= 0) {
        const double tv = (v[a] - v[b]) / (2.0 * g.h(t));
        mag = std::sqrt(gv * gv + tv * tv);
      }
    }
    const double beta = field.b[in] * ((1.0 - field.delta[in]) + field.delta[in] * pow_norm(mag, q - 1.0));
    return gu / field.rho[in] + beta * gv;
  };

  double worst = 0.0;
  for (Index f : field.interface_faces) {
    const Face& face = all[static_cast<std::size_t>(f)];
    const Index lo_out = g.neighbor(face.lo, face.axis, -1);
    const Index hi_out = g.neighbor(face.hi, face.axis, 1);
    if (lo_out < 0 || hi_out < 0) continue;
    const double low = side_flux(face.lo, lo_out, face.axis, 1.0);
    const double high = side_flux(face.hi, hi_out, face.axis, -1.0);
    worst = std::max(worst, std::abs(low - high));
  }
  return worst;
}

HolderFit holder_exponent_estimate(const GridFunctiond& u, const Window& window) {
  const Grid& g = u.grid;
  if (window.mask.size() != static_cast<std::size_t>(g.cell_count()))
    throw ValidationError("window does not match the grid");
  if (window.count() < 16) throw ValidationError("Hoelder estimate needs a window of at least 16 cells");

  int span = 0;
  for (int r = 0; r < g.dim; ++r) {
    int lo = g.n, hi = -1;
    for (Index c = 0; c < g.cell_count(); ++c) {
      if (!window.contains(c)) continue;
      lo = std::min(lo, g.coords(c)[r]);
      hi = std::max(hi, g.coords(c)[r]);
    }
    span = std::max(span, hi - lo + 1);
  }

  std::map<double, double> maxima;  // separation -> max difference
  for (int sep = 1; 2 * sep <= span; sep *= 2) {
    for (int r = 0; r < g.dim; ++r) {
      bool any = false;
      double m = 0.0;
      for (Index c = 0; c < g.cell_count(); ++c) {
        if (!window.contains(c)) continue;
        const Index o = g.neighbor(c, r, sep);
        if (o < 0 || !window.contains(o)) continue;
        any = true;
        m = std::max(m, std::abs(u[o] - u[c]));
      }
      if (!any) continue;
      const double s = sep * g.h(r);
      auto [it, inserted] = maxima.emplace(s, m);
      if (!inserted) it->second = std::max(it->second, m);
    }
  }

  HolderFit fit;
  std::vector<std::pair<double, double>> pts;
  for (const auto& [s, m] : maxima) {
    if (m > 0.0) pts.emplace_back(std::log(s), std::log(m));
  }
  if (!maxima.empty() && pts.empty()) {
    fit.degenerate = true;
    fit.separations = static_cast<int>(maxima.size());
    return fit;
  }
  if (pts.size() < 3)
    throw ValidationError(fmt::format("only {} usable separations (need 3)", pts.size()));

  const double n = static_cast<double>(pts.size());
  double sx = 0, sy = 0;
  for (const auto& [x, y] : pts) { sx += x; sy += y; }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (const auto& [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  const double slope = sxy / sxx;
  double rss = 0;
  for (const auto& [x, y] : pts) {
    const double e = y - (my + slope * (x - mx));
    rss += e * e;
  }
  fit.alpha = std::clamp(slope, 0.0, 1.0);
  fit.residual = std::sqrt(rss / n);
  fit.separations = static_cast<int>(pts.size());
  return fit;
}

double grad_v_sup(const Trajectory& traj) {
  double sup = 0.0;
  for (const auto& st : traj.snapshots) {
    const CellGrad gv = cell_grad(st.v);
    if (gv.rows() > 0) sup = std::max(sup, gv.rowwise().norm().maxCoeff());
  }
  return sup;
}

double spread(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (*hi == 0.0) return 0.0;
  if (*lo <= 0.0) return std::numeric_limits<double>::infinity();
  return *hi / *lo - 1.0;
}

bool RegularityReport::passed() const {
  return std::all_of(verdicts.begin(), verdicts.end(),
                     [](const Verdict& v) { return v.pass || !v.gating; });
}

RegularityReport regularity_study(const Scenario& s, const RegularityOptions& opt) {
  const auto violations = validate_scenario(s);
  if (!violations.empty())
    throw ValidationError(fmt::format("invalid scenario: {}: {}", violations.front().field,
                                      violations.front().message));
  if (opt.levels < 2) throw ValidationError("a refinement study needs at least 2 levels");
  if (opt.margin < 0) throw ValidationError("margin must be nonnegative");

  RegularityReport report;
  report.scan_id = s.name.empty() ? "scenario" : s.name;
  for (int j = 0; j < opt.levels; ++j) {
    const int factor = 1 << j;
    Scenario sj = s;
    sj.grid_n = s.grid_n * factor;
    sj.dt = s.dt / factor;
    sj.snapshot_stride = s.snapshot_stride * factor;
    const MaterialField field = build_material_field(sj);
    const int margin = opt.margin * factor;
    // Fail on the window before paying for the run.
    if (field.grid.n <= 2 * margin)
      throw ValidationError(fmt::format("margin {} leaves no window on a {}-cell axis", margin, field.grid.n));

    const SimulationResult run = simulate(sj);
    if (run.failure) {
      if (run.failure->kind == FailureKind::degeneracy) throw DegeneracyError(run.failure->message, 0.0);
      throw NonconvergenceError(run.failure->message);
    }
    const Trajectory& traj = run.trajectory;

    RegularityLevel level;
    level.level = j;
    level.n = sj.grid_n;
    level.h = field.grid.h(0);
    level.margin = margin;
    level.scan = interior_h2_scan(traj, field, margin, opt.shifts);
    level.h2 = piecewise_h2_norm(traj, field);
    for (const auto& st : traj.snapshots)
      level.flux_jump = std::max(level.flux_jump, flux_jump_residual(st, field, s.q));
    try {
      level.holder = holder_exponent_estimate(traj.snapshots.back().u, full_window(field.grid));
    } catch (const ValidationError&) {
      level.holder = HolderFit{1.0, 0.0, 0, true};
    }
    level.grad_v_sup = grad_v_sup(traj);
    report.levels.push_back(std::move(level));
  }

  const auto& L = report.levels;
  const MaterialField coarse = build_material_field(s);
  std::vector<Region> present;
  for (Region r : {Region::minus, Region::plus}) {
    if (std::find(coarse.region.begin(), coarse.region.end(), r) != coarse.region.end())
      present.push_back(r);
  }

  double interior = 0.0;
  double piecewise = 0.0;
  for (Region r : present) {
    std::vector<double> scan_values, side_values;
    for (const auto& lv : L) {
      for (const auto& row : lv.scan)
        if (row.region == r) scan_values.push_back(row.dgrad_u_sup);
      side_values.push_back(r == Region::plus ? lv.h2.plus : lv.h2.minus);
    }
    interior = std::max(interior, spread(scan_values));
    piecewise = std::max(piecewise, spread(side_values));
  }
  report.verdicts.push_back({"interior-boundedness", interior, interior < opt.spread_threshold, true});
  report.verdicts.push_back({"piecewise-h2-boundedness", piecewise, piecewise < opt.spread_threshold, false});

  if (coarse.has_interface()) {
    double growth = std::numeric_limits<double>::infinity();
    double decay_lo = std::numeric_limits<double>::infinity();
    double decay_hi = 0.0;
    for (std::size_t j = 1; j < L.size(); ++j) {
      growth = std::min(growth, L[j - 1].h2.global > 0 ? L[j].h2.global / L[j - 1].h2.global : 0.0);
      const double d = L[j].flux_jump > 0 ? L[j - 1].flux_jump / L[j].flux_jump
                                          : std::numeric_limits<double>::infinity();
      decay_lo = std::min(decay_lo, d);
      decay_hi = std::max(decay_hi, d);
    }
    double straddle = std::numeric_limits<double>::infinity();
    for (std::size_t j = 1; j < L.size(); ++j)
      straddle = std::min(straddle, L[j - 1].h2.straddle > 0 ? L[j].h2.straddle / L[j - 1].h2.straddle : 0.0);
    report.verdicts.push_back({"global-h2-growth", growth, growth >= opt.growth_min, false});
    report.verdicts.push_back({"straddle-h2-increasing", straddle, straddle > 1.0, false});
    const bool decays = decay_lo >= opt.flux_decay_min && decay_hi <= opt.flux_decay_max;
    // Report whichever ratio is farther out of range.
    const double shown = decay_hi > opt.flux_decay_max && decay_lo >= opt.flux_decay_min ? decay_hi : decay_lo;
    report.verdicts.push_back({"flux-decay", shown, decays, true});
  } else {
    const auto& fine = L.back().h2;
    const double side = fine.minus;
    const double gap = fine.global > 0 ? std::abs(side - fine.global) / fine.global : 0.0;
    report.verdicts.push_back({"piecewise-global-agreement", gap, gap < 0.02, false});
  }
  return report;
}

std::string regularity_csv(const RegularityReport& report) {
  std::string out =
      "level,n,h,region,shift,margin,dgrad_u_sup,dgrad_v_int,dF_int,h2_side,h2_global,h2_straddle,flux_jump,"
      "holder_alpha,grad_v_sup\n";
  for (const auto& lv : report.levels) {
    for (const auto& row : lv.scan) {
      const double side = row.region == Region::plus ? lv.h2.plus : lv.h2.minus;
      out += fmt::format("{},{},{:.17g},{},{},{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n",
                         lv.level, lv.n, lv.h, region_name(row.region), row.shift, row.margin,
                         row.dgrad_u_sup, row.dgrad_v_int, row.dF_int, side, lv.h2.global, lv.h2.straddle,
                         lv.flux_jump, lv.holder.alpha, lv.grad_v_sup);
    }
  }
  return out;
}

std::string regularity_summary(const RegularityReport& report) {
  std::string out = report.scan_id;
  for (const auto& v : report.verdicts) {
    out += fmt::format(" {}={}({:.6g}){}", v.name, v.pass ? "PASS" : "FAIL", v.value,
                       v.gating ? "" : "[info]");
  }
  return out;
}

}  // namespace wlab
