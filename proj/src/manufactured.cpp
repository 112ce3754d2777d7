#include "wlab/manufactured.hpp"

#include <Eigen/Core>

#include <cmath>
#include <numbers>

namespace wlab {

using std::numbers::pi;

double StandingWave::shape(double x, double y) const {
  double s = std::sin(pi * x / extent_[0]);
  if (dim_ == 2) s *= std::sin(pi * y / extent_[1]);
  return s;
}

double StandingWave::u(double x, double y, double t) const {
  return amplitude_ * std::cos(pi * t) * shape(x, y);
}

double StandingWave::v(double x, double y, double t) const {
  return -amplitude_ * pi * std::sin(pi * t) * shape(x, y);
}

double StandingWave::forcing(double x, double y, double t, const MaterialParams& m,
                             double q) const {
  const double kx = pi / extent_[0];
  const double ky = pi / extent_[1];
  const double sx = std::sin(kx * x), cx = std::cos(kx * x);
  const double sy = dim_ == 2 ? std::sin(ky * y) : 1.0;
  const double cy = dim_ == 2 ? std::cos(ky * y) : 0.0;

  const double phi = sx * sy;
  Eigen::Vector2d grad_phi(kx * cx * sy, ky * sx * cy);
  Eigen::Matrix2d hess_phi;
  hess_phi << -kx * kx * phi, kx * ky * cx * cy, kx * ky * cx * cy, -ky * ky * phi;
  if (dim_ == 1) {
    grad_phi[1] = 0.0;
    hess_phi(0, 1) = hess_phi(1, 0) = hess_phi(1, 1) = 0.0;
  }
  const double lap_phi = hess_phi.trace();

  const double cu = amplitude_ * std::cos(pi * t);
  const double cv = -amplitude_ * pi * std::sin(pi * t);
  const double ca = -amplitude_ * pi * pi * std::cos(pi * t);

  const double u = cu * phi;
  const double v = cv * phi;
  const double a = ca * phi;
  const Eigen::Vector2d grad_v = cv * grad_phi;
  const Eigen::Matrix2d hess_v = cv * hess_phi;
  const double s = grad_v.norm();

  const double beta = m.b * ((1.0 - m.delta) + m.delta * (q == 1.0 ? 1.0 : std::pow(s, q - 1.0)));
  double damping = beta * cv * lap_phi;
  if (q != 1.0 && s > 0.0) {
    damping += m.b * m.delta * (q - 1.0) * std::pow(s, q - 3.0) * grad_v.dot(hess_v * grad_v);
  }
  const double elastic = cu * lap_phi / m.rho;
  return (1.0 - 2.0 * m.k * u) * a / m.lambda - elastic - damping - 2.0 * m.k * v * v / m.lambda;
}

}  // namespace wlab
