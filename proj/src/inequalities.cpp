#include "wlab/qlaplace.hpp"

#include "wlab/errors.hpp"
#include "wlab/parallel.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace wlab {

using Index = Eigen::Index;

std::string to_string(InequalityId id) {
  switch (id) {
    case InequalityId::lipschitz: return "2.2";
    case InequalityId::chain_as_stated: return "2.3-as-stated";
    case InequalityId::chain_monotone: return "2.3-monotone";
    case InequalityId::f_transform: return "2.4";
    case InequalityId::split_vector: return "2.5";
    case InequalityId::split_scalar: return "2.5-scalar";
    case InequalityId::young_as_stated: return "young-as-stated";
    case InequalityId::young_standard: return "young-standard";
  }
  return "?";
}

const std::vector<InequalityId>& all_inequalities() {
  static const std::vector<InequalityId> ids{
      InequalityId::lipschitz,    InequalityId::chain_as_stated, InequalityId::chain_monotone,
      InequalityId::f_transform,  InequalityId::split_vector,    InequalityId::split_scalar,
      InequalityId::young_as_stated, InequalityId::young_standard};
  return ids;
}

InequalityId parse_inequality_id(const std::string& name) {
  for (auto id : all_inequalities()) {
    if (to_string(id) == name) return id;
  }
  throw ValidationError(fmt::format("unknown inequality id '{}'", name));
}

bool must_hold(InequalityId id) {
  switch (id) {
    case InequalityId::lipschitz:
    case InequalityId::chain_monotone:
    case InequalityId::f_transform:
    case InequalityId::split_scalar:
    case InequalityId::young_standard:
      return true;
    default:
      return false;
  }
}

double young_constant_standard(double eps, double r) {
  return (r - 1.0) * std::pow(r, -r / (r - 1.0)) * std::pow(eps, -1.0 / (r - 1.0));
}

double young_constant_as_stated(double eps, double r) {
  return (r - 1.0) * std::pow(r, r / (r - 1.0)) * std::pow(eps, -1.0 / (1.0 - r));
}

namespace {

// Residuals are evaluated in extended precision so that cancellation near
// x = y does not masquerade as a violation at the 1e-12 level.
using Real = long double;
using Vec = VecD<Real>;

Residual make(Real absolute, std::initializer_list<Real> terms) {
  Real scale = 0;
  for (Real t : terms) scale = std::max(scale, std::abs(t));
  return {static_cast<double>(absolute), static_cast<double>(scale)};
}

Real powr(Real base, Real p) { return pow_norm<Real>(base, p); }

}  // namespace

Residual inequality_residual(InequalityId id, const InequalitySample& s) {
  const Vec x = s.x.cast<Real>();
  const Vec y = s.y.cast<Real>();
  const Real q = s.q;
  const Real nx = x.norm();
  const Real ny = y.norm();
  const Real dist = (x - y).norm();
  const Real half = (q - 1) / 2;

  switch (id) {
    case InequalityId::lipschitz: {
      const Real lhs = (q_power(x, q) - q_power(y, q)).norm();
      const Real rhs = q * dist * powr(nx + ny, q - 1);
      return make(rhs - lhs, {lhs, rhs});
    }
    case InequalityId::chain_as_stated: {
      const Real lhs = (q_power(x, q) - q_power(y, q)).norm();
      const Real mid = Real(0.5) * dist * dist * powr(nx + ny, q - 1);
      const Real low = std::pow(Real(2), 1 - q) * powr(dist, q + 1);
      return make(std::min({lhs - mid, mid - low, low}), {lhs, mid, low});
    }
    case InequalityId::chain_monotone: {
      const Real gap = monotonicity_gap(x, y, q);
      const Real low = std::pow(Real(2), 1 - q) * powr(dist, q + 1);
      return make(gap - low, {gap, low});
    }
    case InequalityId::f_transform: {
      const Real gap = monotonicity_gap(x, y, q);
      const Real lhs = Real(4) / ((q + 1) * (q + 1)) * (f_transform(x, q) - f_transform(y, q)).squaredNorm();
      return make(gap - lhs, {gap, lhs});
    }
    case InequalityId::split_vector: {
      const Real lhs = (q_power(x, q) - q_power(y, q)).norm();
      const Real ax = powr(nx, half);
      const Real ay = powr(ny, half);
      const Real rhs = q * (ax + ay) * std::abs(ax - ay);
      return make(rhs - lhs, {lhs, rhs});
    }
    case InequalityId::split_scalar: {
      const Real lhs = std::abs(powr(nx, q) - powr(ny, q));
      const Real rhs = q * (powr(nx, half) + powr(ny, half)) *
                       std::abs(powr(nx, half + 1) - powr(ny, half + 1));
      return make(rhs - lhs, {lhs, rhs});
    }
    case InequalityId::young_as_stated:
    case InequalityId::young_standard: {
      const Real a = std::abs(x[0]);
      const Real b = std::abs(y[0]);
      const Real eps = s.eps;
      const Real r = s.r;
      const Real c = id == InequalityId::young_standard ? young_constant_standard(s.eps, s.r)
                                                        : young_constant_as_stated(s.eps, s.r);
      const Real lhs = a * b;
      const Real t1 = eps * powr(a, r);
      const Real t2 = c * powr(b, r / (r - 1));
      return make(t1 + t2 - lhs, {lhs, t1 + t2});
    }
  }
  return {};
}

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Uniform in [0, 1) from the top 53 bits.
double unit(std::uint64_t& state) {
  return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
}

double uniform(std::uint64_t& state, double lo, double hi) {
  return lo + (hi - lo) * unit(state);
}

VecD<double> random_vector(std::uint64_t& state, int dim, double magnitude) {
  using std::numbers::pi;
  VecD<double> v(dim);
  if (dim == 1) {
    v[0] = unit(state) < 0.5 ? -magnitude : magnitude;
  } else if (dim == 2) {
    const double phi = uniform(state, 0.0, 2.0 * pi);
    v << magnitude * std::cos(phi), magnitude * std::sin(phi);
  } else {
    const double z = uniform(state, -1.0, 1.0);
    const double phi = uniform(state, 0.0, 2.0 * pi);
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    v << magnitude * rho * std::cos(phi), magnitude * rho * std::sin(phi), magnitude * z;
  }
  return v;
}

}  // namespace

InequalitySample draw_sample(InequalityId id, std::uint64_t seed, std::uint64_t index,
                             const SamplingRanges& ranges) {
  std::uint64_t mix = seed;
  std::uint64_t state = splitmix64(mix) ^ (0xD1B54A32D192ED03ull * (static_cast<std::uint64_t>(id) + 1));
  state ^= 0x8CB92BA72F3D8DD7ull * (index + 1);
  splitmix64(state);

  InequalitySample s;
  if (id == InequalityId::young_as_stated || id == InequalityId::young_standard) {
    s.dim = 1;
    s.x = VecD<double>(1);
    s.y = VecD<double>(1);
    s.x[0] = uniform(state, -ranges.magnitude_max, ranges.magnitude_max);
    s.y[0] = uniform(state, -ranges.magnitude_max, ranges.magnitude_max);
    s.eps = uniform(state, ranges.eps_min, ranges.eps_max);
    s.r = uniform(state, ranges.r_min, ranges.r_max);
    s.q = 1.0;
    return s;
  }
  const auto pick = static_cast<std::size_t>(splitmix64(state) % ranges.dims.size());
  s.dim = ranges.dims[pick];
  s.q = uniform(state, ranges.q_min, ranges.q_max);
  s.x = random_vector(state, s.dim, uniform(state, ranges.magnitude_min, ranges.magnitude_max));
  s.y = random_vector(state, s.dim, uniform(state, ranges.magnitude_min, ranges.magnitude_max));
  return s;
}

InequalityReport check_inequality(InequalityId id, std::uint64_t seed, std::uint64_t samples,
                                  const SamplingRanges& ranges) {
  if (samples < 1) throw ValidationError("samples must be at least 1");
  if (!(ranges.q_min >= 1.0) || !(ranges.q_max >= ranges.q_min))
    throw ValidationError("q range must satisfy 1 <= q_min <= q_max");
  if (!(ranges.magnitude_min >= 0.0) || !(ranges.magnitude_max > ranges.magnitude_min))
    throw ValidationError("magnitude range must satisfy 0 <= min < max");
  if (ranges.dims.empty()) throw ValidationError("at least one dimension is required");
  for (int d : ranges.dims) {
    if (d < 1 || d > 3) throw ValidationError(fmt::format("dimension {} outside 1..3", d));
  }

  std::vector<double> relative(static_cast<std::size_t>(samples));
  parallel_for(0, static_cast<Index>(samples), [&](Index i) {
    const auto s = draw_sample(id, seed, static_cast<std::uint64_t>(i), ranges);
    relative[static_cast<std::size_t>(i)] = inequality_residual(id, s).relative();
  });

  InequalityReport report;
  report.id = id;
  report.samples = samples;
  std::size_t worst = 0;
  for (std::size_t i = 0; i < relative.size(); ++i) {
    if (relative[i] < -kInequalityTolerance) ++report.violations;
    if (relative[i] < relative[worst]) worst = i;
  }
  report.worst_margin = relative[worst];
  report.witness = draw_sample(id, seed, worst, ranges);
  return report;
}

std::string inequality_csv_header() {
  return "inequality_id,samples,violations,worst_margin,dim,q,x1,x2,x3,y1,y2,y3,eps,r";
}

std::string csv_row(const InequalityReport& report) {
  const auto& w = report.witness;
  std::array<double, 3> x{0, 0, 0}, y{0, 0, 0};
  for (Index i = 0; i < w.x.size() && i < 3; ++i) x[static_cast<std::size_t>(i)] = w.x[i];
  for (Index i = 0; i < w.y.size() && i < 3; ++i) y[static_cast<std::size_t>(i)] = w.y[i];
  return fmt::format("{},{},{},{:.17g},{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}",
                     to_string(report.id), report.samples, report.violations, report.worst_margin,
                     w.dim, w.q, x[0], x[1], x[2], y[0], y[1], y[2], w.eps, w.r);
}

}  // namespace wlab
