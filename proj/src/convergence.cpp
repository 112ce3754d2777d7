#include "wlab/convergence.hpp"

#include "wlab/errors.hpp"

#include <fmt/format.h>

#include <cmath>

namespace wlab {

double mms_l2_error(const Scenario& s, const WaveState& state) {
  const Grid& g = state.u.grid;
  const StandingWave exact(s.mms_amplitude, g.dim, g.extent);
  double sum = 0.0;
  for (Index c = 0; c < g.cell_count(); ++c) {
    const double e = state.u[c] - exact.u(g.center(c, 0), g.dim == 2 ? g.center(c, 1) : 0.0, state.t);
    sum += e * e;
  }
  return std::sqrt(g.cell_volume() * sum);
}

std::vector<ConvergenceRow> convergence_study(const Scenario& s, int levels) {
  if (s.mms.empty()) throw ValidationError("source.mms: the scenario has no manufactured solution");
  if (levels < 2) throw ValidationError("levels: at least 2 levels are needed for an order");
  const auto violations = validate_scenario(s);
  if (!violations.empty())
    throw ValidationError(fmt::format("{}: {}", violations.front().field, violations.front().message));

  std::vector<ConvergenceRow> rows;
  for (int j = 0; j < levels; ++j) {
    Scenario sj = s;
    sj.grid_n = s.grid_n << j;
    sj.dt = s.dt / (1 << j);
    sj.snapshot_stride = static_cast<int>(sj.steps());
    const SimulationResult run = simulate(sj);
    if (run.failure) {
      if (run.failure->kind == FailureKind::degeneracy) throw DegeneracyError(run.failure->message, 0.0);
      throw NonconvergenceError(run.failure->message);
    }
    ConvergenceRow row;
    row.level = j;
    row.n = sj.grid_n;
    row.dt = sj.dt;
    row.error = mms_l2_error(sj, run.trajectory.snapshots.back());
    if (j > 0) row.order = std::log2(rows.back().error / row.error);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace wlab
