#pragma once

#include "wlab/grid.hpp"

#include <Eigen/Core>

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace wlab {

/// Piecewise-constant coefficients of one region.
struct MaterialParams {
  double lambda = 1.0;  ///< bulk-modulus-like coefficient
  double rho = 1.0;     ///< density-like coefficient
  double b = 0.01;      ///< damping magnitude
  double delta = 0.5;   ///< mix between linear and q-Laplace damping
  double k = 0.0;       ///< nonlinearity coefficient

  double sound_speed() const;
  bool operator==(const MaterialParams&) const = default;
};

/// k = (1 + B/(2A)) / (rho c^2). Throws ValidationError for rho <= 0 or c <= 0.
double derive_k(double b_over_a, double rho, double c);

enum class ProfileKind { zero, gaussian_bump, sine_mode, traveling_pulse };

/// Named analytic profile from the fixed catalog.
///
///   zero             0
///   gaussian-bump    A exp(-|x-c|^2 / (2 w^2))
///   sine-mode        A prod_r sin(pi x_r / L_r)
///   traveling-pulse  A ((x_0 - c_0) / w) exp(-|x-c|^2 / (2 w^2))
///
/// The pulse is -w d/dx of the bump: with u0 = bump(A0) and
/// u1 = pulse(A0 c / w) the bump moves in +x at speed c.
struct Profile {
  ProfileKind kind = ProfileKind::zero;
  double amplitude = 0.0;
  std::optional<std::array<double, 2>> center;  ///< default: domain center
  std::optional<double> width;                  ///< default: 0.1 * min extent

  double operator()(double x, double y, int dim, const std::array<double, 2>& extent) const;
  bool operator==(const Profile&) const = default;
};

std::string to_string(ProfileKind kind);
std::optional<ProfileKind> parse_profile_kind(const std::string& name);

struct SolverConfig {
  double picard_tol = 1e-12;
  int picard_max_iters = 50;
  double linear_tol = 1e-12;
  int linear_max_iters = 0;  ///< 0: 10 x unknown count
  double degeneracy_floor = 0.1;

  bool operator==(const SolverConfig&) const = default;
};

struct Box {
  std::array<double, 2> lo{0.0, 0.0};
  std::array<double, 2> hi{0.0, 0.0};

  bool contains(double x, double y, int dim) const {
    if (x <= lo[0] || x >= hi[0]) return false;
    return dim == 1 || (y > lo[1] && y < hi[1]);
  }
  bool operator==(const Box&) const = default;
};

/// Full problem description.
struct Scenario {
  std::string name;
  int dimension = 1;
  std::array<double, 2> extent{1.0, 1.0};
  std::optional<Box> lens;
  MaterialParams plus;
  MaterialParams minus;
  double q = 2.0;
  BoundaryKind bc = BoundaryKind::dirichlet;
  Profile neumann;               ///< boundary flux g(x), constant in time
  std::string mms;               ///< manufactured solution name, empty when off
  double mms_amplitude = 1.0;
  Profile u0;
  Profile u1;
  int grid_n = 64;
  double dt = 0.01;
  double T = 1.0;
  SolverConfig solver;
  int snapshot_stride = 1;

  Grid grid() const;
  /// Number of time steps, round(T / dt).
  long steps() const;
};

struct Violation {
  std::string field;
  std::string message;
};

/// Every invariant of Scenario, MaterialParams and SolverConfig. Empty when valid.
std::vector<Violation> validate_scenario(const Scenario& s);

enum class Region : unsigned char { minus, plus };

/// Per-cell coefficients rasterized from the scenario geometry.
struct MaterialField {
  Grid grid;
  std::vector<Region> region;
  Eigen::VectorXd lambda, rho, b, delta, k;
  std::vector<Index> interface_faces;  ///< indices into faces(grid)

  const MaterialParams& params_of(Region r) const { return r == Region::plus ? plus : minus; }
  bool has_interface() const { return !interface_faces.empty(); }

  MaterialParams plus;
  MaterialParams minus;
};

/// Cells whose center lies inside the lens get Region::plus.
MaterialField build_material_field(const Scenario& s);

/// Window of cells of `region` whose sup-distance box of radius `margin`
/// lies inside the grid and inside that region.
Window region_window(const MaterialField& field, Region region, int margin);

}  // namespace wlab
