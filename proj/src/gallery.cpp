#include "wlab/gallery.hpp"

#include "wlab/errors.hpp"

#include <fmt/format.h>

#include <functional>
#include <map>

namespace wlab {

// Reduced units throughout. The two media of the lens scenarios carry
// water-like and silicone-like ratios (density 1 : 1.1, sound speed 1 : 0.667);
// the values are illustrative and not measured data.

namespace {

MaterialParams medium(double rho, double c, double b, double delta, double k) {
  return {rho * c * c, rho, b, delta, k};
}

Profile bump(double amplitude, double cx, double width, double cy = 0.0) {
  return {ProfileKind::gaussian_bump, amplitude, std::array<double, 2>{cx, cy}, width};
}

Scenario base(const std::string& name, int dim) {
  Scenario s;
  s.name = name;
  s.dimension = dim;
  s.extent = {1.0, 1.0};
  s.minus = medium(1.0, 1.0, 0.01, 0.5, 0.0);
  s.plus = s.minus;
  return s;
}

Scenario linear_1d() {
  Scenario s = base("linear-1d", 1);
  s.q = 1.0;
  s.u0 = bump(1.0, 0.5, 0.05);
  s.grid_n = 128;
  s.dt = 1.0 / 128;
  s.T = 1.0;
  return s;
}

Scenario nonlinear_1d() {
  Scenario s = base("nonlinear-1d", 1);
  s.q = 3.0;
  s.minus.k = 1.0;
  s.plus = s.minus;
  s.u0 = bump(0.02, 0.5, 0.05);
  s.grid_n = 128;
  s.dt = 1.0 / 256;
  s.T = 1.0;
  return s;
}

Scenario degenerate_blowup() {
  // nonlinear-1d data scaled by 1e4 with ten times the nonlinearity. Linear
  // damping keeps the solve itself well conditioned, so the run stops on the
  // mass factor alone.
  Scenario s = nonlinear_1d();
  s.name = "degenerate-blowup";
  s.q = 1.0;
  s.minus.k = 10.0;
  s.plus = s.minus;
  s.u0.amplitude *= 1e4;
  return s;
}

Scenario coupled_1d_rho10() {
  Scenario s = base("coupled-1d-rho10", 1);
  s.q = 2.0;
  s.minus = medium(1.0, 1.0, 0.01, 0.5, 0.1);
  s.plus = medium(10.0, 1.0, 0.01, 0.5, 0.1);
  s.lens = Box{{0.5, 0.0}, {0.75, 0.0}};
  s.u0 = bump(0.1, 0.25, 0.06);
  s.grid_n = 64;
  s.dt = 1.0 / 128;
  s.T = 0.5;
  return s;
}

Scenario coupled_2d_lens() {
  Scenario s = base("coupled-2d-lens", 2);
  s.q = 2.0;
  s.minus = medium(1.0, 1.0, 0.01, 0.5, 0.5);
  s.plus = medium(1.1, 0.667, 0.01, 0.5, 0.5);
  s.lens = Box{{0.375, 0.375}, {0.625, 0.625}};
  s.u0 = bump(0.05, 0.25, 0.08, 0.5);
  s.grid_n = 48;
  s.dt = 1.0 / 96;
  s.T = 0.25;
  return s;
}

Scenario mms(const std::string& name, int dim, int n, double q, double k, double amplitude) {
  Scenario s = base(name, dim);
  s.q = q;
  s.minus.k = k;
  s.plus = s.minus;
  s.mms = "standing-wave";
  s.mms_amplitude = amplitude;
  s.u0 = {ProfileKind::sine_mode, amplitude, std::nullopt, std::nullopt};
  s.grid_n = n;
  s.dt = 1.0 / n;
  s.T = 0.5;
  return s;
}

Scenario neumann_1d() {
  Scenario s = base("neumann-1d", 1);
  s.q = 2.0;
  s.minus.k = 0.5;
  s.plus = s.minus;
  s.bc = BoundaryKind::neumann;
  s.neumann = bump(0.01, 0.0, 0.1);
  s.grid_n = 128;
  s.dt = 1.0 / 128;
  s.T = 1.0;
  return s;
}

struct Entry {
  std::function<Scenario()> make;
  std::string description;
};

const std::map<std::string, Entry>& registry() {
  static const std::map<std::string, Entry> r{
      {"linear-1d", {linear_1d, "1D, k=0, q=1, Gaussian pulse"}},
      {"nonlinear-1d", {nonlinear_1d, "1D, k=1, q=3, small pulse (2k max|u| << 1)"}},
      {"coupled-1d-rho10", {coupled_1d_rho10, "1D lens (0.5,0.75) with density ratio 10"}},
      {"coupled-2d-lens", {coupled_2d_lens, "2D square lens, silicone-like in water-like, q=2"}},
      {"degenerate-blowup", {degenerate_blowup, "nonlinear-1d data x1e4, k=10: stops on 1-2ku"}},
      {"mms-linear", {[] { return mms("mms-linear", 1, 32, 1.0, 0.0, 1.0); },
                      "1D manufactured standing wave, k=0, q=1"}},
      {"mms-2d", {[] { return mms("mms-2d", 2, 16, 2.0, 0.0, 0.2); },
                         "2D manufactured standing wave, k=0, q=2"}},
      {"mms-nonlinear", {[] { return mms("mms-nonlinear", 1, 32, 3.0, 2.0, 0.05); },
                         "1D manufactured standing wave, k=2, q=3"}},
      {"neumann-1d", {neumann_1d, "1D, boundary flux at x=0, q=2"}},
  };
  return r;
}

}  // namespace

const std::vector<std::string>& gallery_names() {
  static const std::vector<std::string> names{
      "linear-1d",  "nonlinear-1d",  "coupled-1d-rho10", "coupled-2d-lens", "degenerate-blowup",
      "mms-linear", "mms-2d", "mms-nonlinear",    "neumann-1d"};
  return names;
}

Scenario gallery_scenario(const std::string& name) {
  const auto it = registry().find(name);
  if (it == registry().end()) throw ValidationError(fmt::format("unknown gallery scenario '{}'", name));
  return it->second.make();
}

std::string gallery_description(const std::string& name) {
  const auto it = registry().find(name);
  if (it == registry().end()) throw ValidationError(fmt::format("unknown gallery scenario '{}'", name));
  return it->second.description;
}

}  // namespace wlab
