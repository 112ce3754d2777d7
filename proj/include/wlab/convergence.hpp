#pragma once

#include "wlab/integrator.hpp"

#include <vector>

namespace wlab {

struct ConvergenceRow {
  int level = 0;
  int n = 0;
  double dt = 0.0;
  double error = 0.0;  ///< L2 error of u at T against the manufactured solution
  double order = 0.0;  ///< log2(previous error / error); 0 on the first level
};

/// Runs the manufactured-solution scenario at n * 2^j cells and dt / 2^j for
/// j < levels. Throws ValidationError without a manufactured solution or with
/// fewer than 2 levels; step failures surface as their exception types.
std::vector<ConvergenceRow> convergence_study(const Scenario& s, int levels);

/// ||u - u_exact(t)||_{L2} at cell centers.
double mms_l2_error(const Scenario& s, const WaveState& state);

}  // namespace wlab
