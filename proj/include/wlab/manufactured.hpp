#pragma once

#include "wlab/model.hpp"

#include <array>

namespace wlab {

/// u(x, t) = A cos(pi t) prod_r sin(pi x_r / L_r), with the forcing that makes
/// it an exact solution of the damped Westervelt equation for one material.
class StandingWave {
public:
  StandingWave(double amplitude, int dim, std::array<double, 2> extent)
      : amplitude_(amplitude), dim_(dim), extent_(extent) {}

  double u(double x, double y, double t) const;
  double v(double x, double y, double t) const;
  double forcing(double x, double y, double t, const MaterialParams& m, double q) const;

private:
  double shape(double x, double y) const;

  double amplitude_;
  int dim_;
  std::array<double, 2> extent_;
};

}  // namespace wlab
