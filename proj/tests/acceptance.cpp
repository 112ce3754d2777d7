// Acceptance checks. One line per criterion; exit status 1 when any fails.
//
//   wlab-acceptance <path to wlab executable> [criterion numbers...]

#include "wlab/discrete_ops.hpp"
#include "wlab/gallery.hpp"
#include "wlab/integrator.hpp"
#include "wlab/qlaplace.hpp"
#include "wlab/regularity.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

using namespace wlab;
namespace fs = std::filesystem;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double max_rel_change(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *lo > 0 ? *hi / *lo - 1.0 : (*hi > 0 ? INFINITY : 0.0);
}

// Closed-form standing wave, the oracle for the manufactured runs.
double standing_wave(double A, double x, double y, int dim, double t) {
  double s = std::sin(pi * x);
  if (dim == 2) s *= std::sin(pi * y);
  return A * std::cos(pi * t) * s;
}

// Steps the manufactured scenario level by level without validation, so the
// 2D q = 1 case can be measured; returns L2 errors at T.
std::vector<double> mms_errors(Scenario s, int levels) {
  std::vector<double> errors;
  const int n0 = s.grid_n;
  const double dt0 = s.dt;
  for (int j = 0; j < levels; ++j) {
    s.grid_n = n0 << j;
    s.dt = dt0 / (1 << j);
    const auto sys = make_system(s);
    WaveState st = initial_state(s);
    for (long k = 0; k < s.steps(); ++k) st = sys.step(st, s.dt, s.solver).first;
    const Grid g = s.grid();
    double sum = 0.0;
    for (Index c = 0; c < g.cell_count(); ++c) {
      const double e = st.u[c] - standing_wave(s.mms_amplitude, g.center(c, 0),
                                               g.dim == 2 ? g.center(c, 1) : 0.0, g.dim, st.t);
      sum += e * e;
    }
    errors.push_back(std::sqrt(g.cell_volume() * sum));
  }
  return errors;
}

std::vector<double> orders(const std::vector<double>& e) {
  std::vector<double> out;
  for (std::size_t i = 1; i < e.size(); ++i) out.push_back(std::log2(e[i - 1] / e[i]));
  return out;
}

std::string join(const std::vector<double>& v, const char* fmt_spec = "{:.3f}") {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += "/";
    out += fmt::format(fmt::runtime(fmt_spec), v[i]);
  }
  return out;
}

Outcome inequality_battery() {
  SamplingRanges ranges;  // q in [1,5], d in {1,2,3}, magnitudes <= 10
  constexpr std::uint64_t samples = 1000000;
  std::string detail;
  bool pass = true;
  for (InequalityId id : {InequalityId::f_transform, InequalityId::chain_monotone, InequalityId::lipschitz,
                          InequalityId::split_scalar, InequalityId::young_standard}) {
    const auto rep = check_inequality(id, 42, samples, ranges);
    pass = pass && rep.violations == 0 && rep.samples == samples;
    detail += fmt::format("{}:{} ", to_string(id), rep.violations);
  }
  const auto stated = check_inequality(InequalityId::chain_as_stated, 42, samples, ranges);
  pass = pass && stated.violations > 0;
  detail += fmt::format("2.3-as-stated:{} (expected > 0)", stated.violations);
  return {pass, detail};
}

Outcome summation_by_parts() {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  double worst = 0.0;
  int count = 0;
  for (int dim : {1, 2}) {
    for (int trial = 0; trial < 100; ++trial) {
      Grid g;
      g.dim = dim;
      g.n = std::uniform_int_distribution<int>(dim == 1 ? 16 : 8, dim == 1 ? 256 : 48)(rng);
      const int axis = std::uniform_int_distribution<int>(0, dim - 1)(rng);
      int l = std::uniform_int_distribution<int>(1, std::max(1, g.n / 4))(rng);
      if (rng() & 1) l = -l;
      const int a = std::abs(l);
      const auto u = sample(g, [&](double, double) { return val(rng); });
      GridFunctiond phi(g, Centering::cell);
      for (Index c = 0; c < g.cell_count(); ++c) {
        const int pos = g.coords(c)[axis];
        phi[c] = (pos < a || pos >= g.n - a) ? 0.0 : val(rng);
      }
      const double scale = std::sqrt(g.cell_volume() * u.values.squaredNorm()) *
                           std::sqrt(g.cell_volume() * phi.values.squaredNorm());
      const double rel = std::abs(ibp_residual(u, phi, axis, l)) / scale;
      worst = std::max(worst, rel);
      ++count;
    }
  }
  return {worst <= 1e-13, fmt::format("{} instances, worst relative residual {:.2e} (limit 1e-13)", count, worst)};
}

Outcome linear_mms() {
  Scenario s1 = gallery_scenario("mms-linear");  // n = 32, k = 0, q = 1
  const auto e1 = mms_errors(s1, 4);
  // 2D at q = 1 sits outside the validated range q > d-1; the step itself is well defined.
  Scenario s2 = gallery_scenario("mms-2d");
  s2.q = 1.0;
  s2.mms_amplitude = 1.0;
  s2.u0.amplitude = 1.0;
  s2.grid_n = 16;
  s2.dt = 1.0 / 16;
  const auto e2 = mms_errors(s2, 3);
  const auto o1 = orders(e1);
  const auto o2 = orders(e2);
  const bool pass = *std::min_element(o1.begin(), o1.end()) >= 1.9 && *std::min_element(o2.begin(), o2.end()) >= 1.9;
  return {pass, fmt::format("1D n=32..256 orders {} | 2D n=16..64 orders {}", join(o1), join(o2))};
}

Outcome nonlinear_mms() {
  const Scenario s = gallery_scenario("mms-nonlinear");  // q = 3, k = 2, delta = 0.5
  const auto o = orders(mms_errors(s, 3));
  return {*std::min_element(o.begin(), o.end()) >= 1.9 && s.q == 3.0 && s.minus.k != 0.0 && s.minus.delta == 0.5,
          fmt::format("1D n=32..128 q=3 k={} orders {}", s.minus.k, join(o))};
}

Outcome energy_identity() {
  bool pass = true;
  std::string detail;
  for (const auto& name : gallery_names()) {
    Scenario s = gallery_scenario(name);
    s.minus.k = 0.0;
    s.plus.k = 0.0;
    s.mms.clear();
    s.neumann.amplitude = 0.0;
    const auto r = simulate(s);
    if (r.failure) {
      pass = false;
      detail += fmt::format("{}:failed ", name);
      continue;
    }
    const auto& mon = r.trajectory.monitors;
    const WesterveltSystem sys = make_system(s);
    const double e0 = sys.energy(initial_state(s));
    double worst = 0.0;
    bool monotone = true;
    double prev = e0;
    for (const auto& m : mon) {
      worst = std::max(worst, std::abs(m.balance_residual));
      if (m.energy > prev * (1.0 + 1e-14)) monotone = false;
      prev = m.energy;
    }
    const bool ok = worst <= 1e-8 * e0 && monotone;
    pass = pass && ok;
    detail += fmt::format("{}:{:.1e}{} ", name, e0 > 0 ? worst / e0 : worst, monotone ? "" : "(E grew)");
  }
  return {pass, "max residual/E(0): " + detail};
}

Outcome degeneracy() {
  const auto run = simulate(gallery_scenario("nonlinear-1d"));
  double mm = 1.0;
  for (const auto& m : run.trajectory.monitors) mm = std::min(mm, m.min_mass_factor);
  const double a0 = wset_norms(run.trajectory).a0;
  const bool small_ok = !run.failure && mm >= 0.9 && 1.0 - a0 <= mm;

  const Scenario big = gallery_scenario("degenerate-blowup");
  const auto f1 = simulate(big).failure;
  const auto f2 = simulate(big).failure;
  const bool blow_ok = f1 && f2 && f1->kind == FailureKind::degeneracy &&
                       f2->kind == FailureKind::degeneracy && f1->step == f2->step;
  return {small_ok && blow_ok,
          fmt::format("nonlinear-1d min mass factor {:.6f}, 1-a0 {:.6f} | degenerate-blowup steps {}/{}", mm,
                      1.0 - a0, f1 ? f1->step : -1, f2 ? f2->step : -1)};
}

Outcome regularity_contrast() {
  RegularityOptions opt;
  opt.levels = 3;
  const auto rep = regularity_study(gallery_scenario("coupled-1d-rho10"), opt);
  const auto& L = rep.levels;

  // per-side interior scans: every (region, shift) entry across levels
  double interior = 0.0;
  for (std::size_t row = 0; row < L[0].scan.size(); ++row) {
    std::vector<double> v;
    for (const auto& lv : L) v.push_back(lv.scan[row].dgrad_u_sup);
    interior = std::max(interior, max_rel_change(v));
  }
  std::vector<double> minus, plus, global, straddle, flux;
  for (const auto& lv : L) {
    minus.push_back(lv.h2.minus);
    plus.push_back(lv.h2.plus);
    global.push_back(lv.h2.global);
    straddle.push_back(lv.h2.straddle);
    flux.push_back(lv.flux_jump);
  }
  const double sides = std::max(max_rel_change(minus), max_rel_change(plus));
  std::vector<double> growth, straddle_growth, decay;
  for (std::size_t j = 1; j < L.size(); ++j) {
    growth.push_back(global[j] / global[j - 1]);
    straddle_growth.push_back(straddle[j] / straddle[j - 1]);
    decay.push_back(flux[j - 1] / flux[j]);
  }
  const bool bounded = interior < 0.2 && sides < 0.2;
  const bool grows = std::all_of(growth.begin(), growth.end(), [](double g) { return g >= 2.0; });
  const bool decays = std::all_of(decay.begin(), decay.end(), [](double d) { return d >= 1.5 && d <= 3.0; });
  return {bounded && grows && decays,
          fmt::format("interior spread {:.3f}, one-sided spread {:.3f} [{}] | global growth {} (need >= 2; "
                      "straddling part {}) [{}] | flux decay {} [{}]",
                      interior, sides, bounded ? "ok" : "FAIL", join(growth), join(straddle_growth),
                      grows ? "ok" : "FAIL", join(decay), decays ? "ok" : "FAIL")};
}

Outcome holder_sanity() {
  const Grid g{1, 1024, {1.0, 1.0}, BoundaryKind::dirichlet};
  const double lin = holder_exponent_estimate(sample(g, [](double x, double) { return x; }), full_window(g)).alpha;
  // odd n: the cusp at 1/2 is a cell center
  const Grid odd{1, 1025, {1.0, 1.0}, BoundaryKind::dirichlet};
  auto cusp = [](double x, double) { return std::sqrt(std::abs(x - 0.5)); };
  const double root = holder_exponent_estimate(sample(odd, cusp), full_window(odd)).alpha;
  const double root_even = holder_exponent_estimate(sample(g, cusp), full_window(g)).alpha;
  return {std::abs(lin - 1.0) <= 1e-6 && std::abs(root - 0.5) <= 0.05,
          fmt::format("alpha(x) = {:.9f}, alpha(|x-1/2|^0.5) = {:.6f} (n=1025; {:.3f} at n=1024, cusp between centers)",
                      lin, root, root_even)};
}

Outcome determinism(const std::string& cli) {
  const fs::path base = fs::temp_directory_path() / fmt::format("wlab-acceptance-{}", ::getpid());
  fs::remove_all(base);
  auto run = [&](int threads) {
    const fs::path out = base / fmt::format("t{}", threads);
    const std::string cmd = fmt::format("\"{}\" --threads {} simulate coupled-2d-lens -o \"{}\" > /dev/null", cli,
                                        threads, out.string());
    const int status = std::system(cmd.c_str());
    std::ifstream in(out / "monitors.csv", std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return std::pair{status, s.str()};
  };
  const auto [s1, m1] = run(1);
  const auto [s8, m8] = run(8);
  fs::remove_all(base);
  const bool pass = s1 == 0 && s8 == 0 && !m1.empty() && m1 == m8;
  return {pass, fmt::format("exit {}/{}, monitors.csv {} bytes, {}", s1, s8, m1.size(),
                            m1 == m8 ? "byte-identical" : "DIFFERENT")};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    fmt::print(stderr, "usage: wlab-acceptance <wlab executable> [criteria...]\n");
    return 2;
  }
  const std::string cli = argv[1];
  std::set<int> only;
  for (int i = 2; i < argc; ++i) only.insert(std::atoi(argv[i]));

  struct Criterion {
    int id;
    const char* name;
    double budget_seconds;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "inequality-battery", 60, inequality_battery},
      {2, "summation-by-parts", 5, summation_by_parts},
      {3, "linear-mms-convergence", 120, linear_mms},
      {4, "nonlinear-mms-convergence", 120, nonlinear_mms},
      {5, "energy-identity", 30, energy_identity},
      {6, "degeneracy-behavior", 30, degeneracy},
      {7, "regularity-contrast", 120, regularity_contrast},
      {8, "holder-estimator", 5, holder_sanity},
      {9, "thread-determinism", 120, [&] { return determinism(cli); }},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, fmt::format("exception: {}", e.what())};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.budget_seconds;
    const bool pass = o.pass && in_time;
    failed += pass ? 0 : 1;
    fmt::print("[{}] {} {}: {} ({:.2f} s of {:.0f} s{})\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail, secs,
               c.budget_seconds, in_time ? "" : ", over budget");
    std::fflush(stdout);
  }
  fmt::print("{} criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
