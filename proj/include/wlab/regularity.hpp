#pragma once

#include "wlab/integrator.hpp"

#include <string>
#include <vector>

namespace wlab {

/// One (region, shift) entry of an interior scan.
struct ScanRow {
  Region region = Region::minus;
  int shift = 0;
  int margin = 0;
  double dgrad_u_sup = 0.0;     ///< sup_t ||D^l grad u||_{L2(V)}
  double dgrad_v_int = 0.0;     ///< int_0^T ||D^l grad v||^2_{L2(V)} dt
  double dF_int = 0.0;          ///< int_0^T ||D^l F(grad v)||^2_{L2(V)} dt
};

/// Difference quotients of cell gradients over per-region windows.
///
/// D^l acts along every axis; the squared norm sums axes and gradient
/// components. Each window keeps `margin` cells from the interface and the
/// outer boundary; the cell gradient reaches one cell further than the shift,
/// so margin >= max |l| + 1 is required. Regions without cells are skipped.
std::vector<ScanRow> interior_h2_scan(const Trajectory& traj, const MaterialField& field,
                                      int margin, const std::vector<int>& shifts);

struct PiecewiseH2 {
  double minus = 0.0;   ///< sup_t |u|_{H2(region -)} with one-sided stencils at its edge
  double plus = 0.0;
  double global = 0.0;  ///< sup_t |u|_{H2(Omega)} with stencils straddling the interface
  double straddle = 0.0;  ///< the part of `global` from stencils that cross the interface
};

/// H2-semi norm of one snapshot. Each cell uses the nearest 3x3 stencil that
/// stays inside its region (or inside the grid for the global value).
PiecewiseH2 piecewise_h2_norm(const GridFunctiond& u, const MaterialField& field);
/// Sup over snapshots of the above.
PiecewiseH2 piecewise_h2_norm(const Trajectory& traj, const MaterialField& field);

/// max over interface faces of |flux(-) - flux(+)|, each flux from one-sided
/// two-point gradients inside that side with that side's coefficients:
///   (1/rho) du/dn + b((1 - delta) + delta |grad v|^{q-1}) dv/dn
double flux_jump_residual(const WaveState& state, const MaterialField& field, double q);

struct HolderFit {
  double alpha = 1.0;     ///< clipped to [0, 1]
  double residual = 0.0;  ///< rms deviation of the log-log fit
  int separations = 0;
  bool degenerate = false;  ///< all differences vanish; alpha reported as 1
};

/// Slope of log max_{|x-y|=s} |u(x) - u(y)| against log s for s = h, 2h, 4h, ...
/// up to half the window span, pairs taken along the axes inside the window.
HolderFit holder_exponent_estimate(const GridFunctiond& u, const Window& window);

/// sup over snapshots of max over cells of |grad v| (cell-centered gradient).
double grad_v_sup(const Trajectory& traj);

struct RegularityOptions {
  int margin = 2;                 ///< window margin at the coarsest level, in cells
  std::vector<int> shifts{1};
  int levels = 3;
  double spread_threshold = 0.2;  ///< relative variation counted as bounded
  double flux_decay_min = 1.5;
  double flux_decay_max = 3.0;
  double growth_min = 2.0;        ///< required per-level growth of the global norm
};

struct RegularityLevel {
  int level = 0;
  int n = 0;
  double h = 0.0;
  int margin = 0;
  std::vector<ScanRow> scan;
  PiecewiseH2 h2;
  double flux_jump = 0.0;
  HolderFit holder;
  double grad_v_sup = 0.0;
};

struct Verdict {
  std::string name;
  double value = 0.0;
  bool pass = true;
  bool gating = true;  ///< part of the exit status
};

struct RegularityReport {
  std::string scan_id;
  std::vector<RegularityLevel> levels;
  std::vector<Verdict> verdicts;

  bool passed() const;
};

/// Refinement study: level j uses n * 2^j cells, dt / 2^j, the snapshot
/// stride times 2^j and the margin times 2^j, so windows and snapshot times
/// stay fixed. Throws ValidationError when a window is empty and propagates
/// step failures as their exception types.
RegularityReport regularity_study(const Scenario& s, const RegularityOptions& opt);

/// max/min - 1 over the values; 0 when all are zero.
double spread(const std::vector<double>& values);

/// Columns: level,n,h,region,shift,margin,dgrad_u_sup,dgrad_v_int,dF_int,
/// h2_side,h2_global,h2_straddle,flux_jump,holder_alpha,grad_v_sup
std::string regularity_csv(const RegularityReport& report);
/// One line: "<scan_id> name=PASS|FAIL(value) ..."
std::string regularity_summary(const RegularityReport& report);

}  // namespace wlab
