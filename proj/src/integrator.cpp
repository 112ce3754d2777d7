#include "wlab/integrator.hpp"

#include "wlab/discrete_ops.hpp"
#include "wlab/errors.hpp"
#include "wlab/parallel.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace wlab {

namespace {

using Triplet = Eigen::Triplet<double>;

std::array<double, 2> face_center(const Grid& g, const Face& f) {
  const Index c = f.inside();
  std::array<double, 2> x{g.center(c, 0), g.dim == 2 ? g.center(c, 1) : 0.0};
  if (f.boundary()) x[static_cast<std::size_t>(f.axis)] = f.lo < 0 ? 0.0 : g.extent[static_cast<std::size_t>(f.axis)];
  return x;
}

}  // namespace

WesterveltSystem::WesterveltSystem(MaterialField field, double q,
                                   std::optional<StandingWave> mms, Profile neumann)
    : field_(std::move(field)), q_(q), mms_(std::move(mms)) {
  const Grid& g = field_.grid;
  faces_ = faces(g);
  const auto nf = static_cast<Index>(faces_.size());
  active_.assign(faces_.size(), true);
  elastic_coef_.resize(nf);
  boundary_source_ = Eigen::VectorXd::Zero(g.cell_count());
  for (Index f = 0; f < nf; ++f) {
    const Face& face = faces_[static_cast<std::size_t>(f)];
    if (face.boundary()) {
      elastic_coef_[f] = 1.0 / field_.rho[face.inside()];
      if (g.bc == BoundaryKind::neumann) {
        active_[static_cast<std::size_t>(f)] = false;
        const auto x = face_center(g, face);
        boundary_source_[face.inside()] += neumann(x[0], x[1], g.dim, g.extent) / g.h(face.axis);
      }
    } else {
      elastic_coef_[f] = harmonic_mean(1.0 / field_.rho[face.lo], 1.0 / field_.rho[face.hi]);
    }
  }
  stiffness_ = face_operator(elastic_coef_);
}

Eigen::SparseMatrix<double> WesterveltSystem::face_operator(const Eigen::VectorXd& face_coef) const {
  const Grid& g = field_.grid;
  std::vector<Triplet> entries;
  entries.reserve(faces_.size() * 4);
  for (std::size_t f = 0; f < faces_.size(); ++f) {
    if (!active_[f]) continue;
    const Face& face = faces_[f];
    const double h = g.h(face.axis);
    const double c = face_coef[static_cast<Index>(f)] / (h * h);
    if (face.boundary()) {
      entries.emplace_back(face.inside(), face.inside(), 2.0 * c);
    } else {
      entries.emplace_back(face.lo, face.lo, c);
      entries.emplace_back(face.hi, face.hi, c);
      entries.emplace_back(face.lo, face.hi, -c);
      entries.emplace_back(face.hi, face.lo, -c);
    }
  }
  Eigen::SparseMatrix<double> op(g.cell_count(), g.cell_count());
  op.setFromTriplets(entries.begin(), entries.end());
  return op;
}

Eigen::VectorXd WesterveltSystem::face_beta(const Eigen::VectorXd& w) const {
  const Grid& g = field_.grid;
  const auto grad = gradient(GridFunctiond(g, Centering::cell, w));
  const auto mag = face_gradient_norm(grad);
  const double q = q_;
  const MaterialField& m = field_;
  Eigen::VectorXd beta(static_cast<Index>(faces_.size()));
  parallel_for(0, beta.size(), [&](Index f) {
    const Face& face = faces_[static_cast<std::size_t>(f)];
    const double power = pow_norm(mag[f], q - 1.0);
    auto cell_beta = [&](Index c) { return m.b[c] * ((1.0 - m.delta[c]) + m.delta[c] * power); };
    beta[f] = face.boundary() ? cell_beta(face.inside())
                              : harmonic_mean(cell_beta(face.lo), cell_beta(face.hi));
  });
  return beta;
}

double WesterveltSystem::relaxation(const Eigen::VectorXd& w) const {
  if (q_ == 1.0) return 1.0;
  const Grid& g = field_.grid;
  const auto mag = face_gradient_norm(gradient(GridFunctiond(g, Centering::cell, w)));
  double rho = 0.0;
  for (std::size_t f = 0; f < faces_.size(); ++f) {
    if (!active_[f]) continue;
    const Face& face = faces_[f];
    const double power = pow_norm(mag[static_cast<Index>(f)], q_ - 1.0);
    for (Index c : {face.lo, face.hi}) {
      if (c < 0) continue;
      const double d = field_.delta[c];
      rho = std::max(rho, (q_ - 1.0) * d * power / ((1.0 - d) + d * power));
    }
  }
  return 2.0 / (2.0 + rho);
}

Eigen::SparseMatrix<double> WesterveltSystem::damping_operator(const Eigen::VectorXd& w) const {
  return face_operator(face_beta(w));
}

double WesterveltSystem::face_quadratic(const Eigen::VectorXd& face_coef,
                                        const Eigen::VectorXd& w) const {
  const Grid& g = field_.grid;
  double sum = 0.0;
  for (std::size_t f = 0; f < faces_.size(); ++f) {
    if (!active_[f]) continue;
    const Face& face = faces_[f];
    const double h = g.h(face.axis);
    const double c = face_coef[static_cast<Index>(f)];
    if (face.boundary()) {
      const double gb = 2.0 * w[face.inside()] / h;
      sum += 0.5 * c * gb * gb;
    } else {
      const double gf = (w[face.hi] - w[face.lo]) / h;
      sum += c * gf * gf;
    }
  }
  return g.cell_volume() * sum;
}

Eigen::VectorXd WesterveltSystem::mass_factor(const Eigen::VectorXd& u) const {
  return (1.0 - 2.0 * field_.k.array() * u.array()).matrix();
}

Eigen::VectorXd WesterveltSystem::source(double t) const {
  const Grid& g = field_.grid;
  Eigen::VectorXd f = Eigen::VectorXd::Zero(g.cell_count());
  if (!mms_) return f;
  parallel_for(0, g.cell_count(), [&](Index c) {
    const MaterialParams& m = field_.params_of(field_.region[static_cast<std::size_t>(c)]);
    f[c] = mms_->forcing(g.center(c, 0), g.dim == 2 ? g.center(c, 1) : 0.0, t, m, q_);
  });
  return f;
}

double WesterveltSystem::energy(const WaveState& s) const {
  const Eigen::VectorXd& u = s.u.values;
  const Eigen::VectorXd& v = s.v.values;
  const Eigen::VectorXd mu = mass_factor(u);
  double kinetic = 0.0;
  for (Index c = 0; c < u.size(); ++c) kinetic += mu[c] / field_.lambda[c] * v[c] * v[c];
  const double potential = face_quadratic(elastic_coef_, u);
  return 0.5 * field_.grid.cell_volume() * kinetic + 0.5 * potential;
}

StepBalance WesterveltSystem::balance(const WaveState& s0, const WaveState& s1, double dt) const {
  const Eigen::VectorXd w = 0.5 * (s0.v.values + s1.v.values);
  StepBalance out;
  out.dissipation = dt * face_quadratic(face_beta(w), w);
  const Eigen::VectorXd f = source(s0.t + 0.5 * dt) + boundary_source_;
  const auto& lam = field_.lambda;
  const auto& k = field_.k;
  double sum = 0.0;
  for (Index c = 0; c < w.size(); ++c) {
    const double v0 = s0.v[c], v1 = s1.v[c], wc = w[c];
    sum += 2.0 * k[c] / lam[c] * wc * wc * wc - k[c] / lam[c] * wc * 0.5 * (v0 * v0 + v1 * v1) +
           f[c] * wc;
  }
  out.source = dt * field_.grid.cell_volume() * sum;
  return out;
}

std::pair<WaveState, StepMonitor> WesterveltSystem::step(const WaveState& state, double dt,
                                                         const SolverConfig& cfg) const {
  const Grid& g = field_.grid;
  const Index n = g.cell_count();
  const Eigen::VectorXd& u0 = state.u.values;
  const Eigen::VectorXd& v0 = state.v.values;
  const Eigen::VectorXd f = source(state.t + 0.5 * dt) + boundary_source_;
  const Eigen::VectorXd elastic_rhs = stiffness_ * u0;
  const auto& lam = field_.lambda;
  const auto& k = field_.k;

  auto check_mass = [&](const Eigen::VectorXd& mu) {
    const double lowest = mu.minCoeff();
    if (!(lowest >= cfg.degeneracy_floor)) {
      throw DegeneracyError(fmt::format("mass factor 1-2ku reached {:.6g} (floor {:.6g}) at t={:.9g}",
                                        lowest, cfg.degeneracy_floor, state.t),
                            lowest);
    }
  };

  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                           Eigen::DiagonalPreconditioner<double>>
      cg;
  cg.setTolerance(cfg.linear_tol);
  cg.setMaxIterations(cfg.linear_max_iters > 0 ? cfg.linear_max_iters : static_cast<int>(10 * n));

  Eigen::VectorXd w = v0;
  Eigen::VectorXd v1_prev = v0;
  Eigen::VectorXd rhs(n);
  int iters = 0;
  bool converged = false;
  while (iters < cfg.picard_max_iters) {
    ++iters;
    const Eigen::VectorXd mu = mass_factor(u0 + 0.5 * dt * w);
    check_mass(mu);

    Eigen::VectorXd face_coef = face_beta(w);
    face_coef += 0.5 * dt * elastic_coef_;
    Eigen::SparseMatrix<double> system = face_operator(face_coef);
    Eigen::VectorXd mass(n);
    parallel_for(0, n, [&](Index c) {
      mass[c] = 2.0 / dt * mu[c] / lam[c];
      rhs[c] = mass[c] * v0[c] - elastic_rhs[c] + 2.0 * k[c] / lam[c] * w[c] * w[c] + f[c];
    });
    Eigen::SparseMatrix<double> diag(n, n);
    diag.reserve(Eigen::VectorXi::Constant(n, 1));
    for (Index c = 0; c < n; ++c) diag.insert(c, c) = mass[c];
    system += diag;

    cg.compute(system);
    const Eigen::VectorXd next = cg.solveWithGuess(rhs, w);
    if (cg.info() != Eigen::Success) {
      throw NonconvergenceError(fmt::format(
          "linear solver stopped after {} iterations (residual {:.3g}) at t={:.9g}",
          cg.iterations(), cg.error(), state.t));
    }
    const double omega = relaxation(w);
    w += omega * (next - w);
    const Eigen::VectorXd v1 = 2.0 * w - v0;
    const double update = (v1 - v1_prev).norm();
    const double scale = std::max(v1.norm(), v0.norm());
    v1_prev = v1;
    if (update == 0.0 || update <= cfg.picard_tol * scale) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw NonconvergenceError(fmt::format("Picard iteration did not converge in {} iterations at t={:.9g}",
                                          cfg.picard_max_iters, state.t));
  }

  WaveState next_state{state.t + dt, GridFunctiond(g, Centering::cell, u0 + dt * w),
                       GridFunctiond(g, Centering::cell, 2.0 * w - v0)};
  const Eigen::VectorXd mu = mass_factor(u0 + 0.5 * dt * w);
  check_mass(mu);

  StepMonitor mon;
  mon.t = next_state.t;
  mon.picard_iters = iters;
  mon.min_mass_factor = mu.minCoeff();
  mon.energy = energy(next_state);
  const StepBalance bal = balance(state, next_state, dt);
  mon.dissipation_increment = bal.dissipation;
  mon.source_increment = bal.source;
  mon.max_abs_u = next_state.u.values.cwiseAbs().maxCoeff();
  mon.grad_v_l2 = gradient_l2(next_state.v);
  return {std::move(next_state), mon};
}

double gradient_l2(const GridFunctiond& v) {
  return norm(v, NormKind::h1_semi, full_window(v.grid));
}

double gradient_lq1_pow(const GridFunctiond& v, double q) {
  const Grid& g = v.grid;
  const auto grad = gradient(v);
  const auto mag = face_gradient_norm(grad);
  const auto all = faces(g);
  double sum = 0.0;
  for (std::size_t f = 0; f < all.size(); ++f) {
    const auto i = static_cast<Index>(f);
    const double density = pow_norm(mag[i], q - 1.0) * grad[i] * grad[i];
    sum += all[f].boundary() ? 0.5 * density : density;
  }
  return g.cell_volume() * sum;
}

std::pair<WaveState, StepMonitor> step(const WaveState& state, const MaterialField& field,
                                       double q, double dt, const SolverConfig& cfg) {
  return WesterveltSystem(field, q).step(state, dt, cfg);
}

WesterveltSystem make_system(const Scenario& s) {
  std::optional<StandingWave> mms;
  if (s.mms == "standing-wave") mms.emplace(s.mms_amplitude, s.dimension, s.grid().extent);
  return WesterveltSystem(build_material_field(s), s.q, mms,
                          s.bc == BoundaryKind::neumann ? s.neumann : Profile{});
}

WaveState initial_state(const Scenario& s) {
  const Grid g = s.grid();
  WaveState st;
  st.t = 0.0;
  if (s.mms == "standing-wave") {
    const StandingWave mms(s.mms_amplitude, s.dimension, g.extent);
    st.u = sample(g, [&](double x, double y) { return mms.u(x, y, 0.0); });
    st.v = sample(g, [&](double x, double y) { return mms.v(x, y, 0.0); });
  } else {
    st.u = sample(g, [&](double x, double y) { return s.u0(x, y, g.dim, g.extent); });
    st.v = sample(g, [&](double x, double y) { return s.u1(x, y, g.dim, g.extent); });
  }
  return st;
}

SimulationResult simulate(const Scenario& s) {
  const auto violations = validate_scenario(s);
  if (!violations.empty()) {
    throw ValidationError(fmt::format("invalid scenario: {}: {}", violations.front().field,
                                      violations.front().message));
  }
  const WesterveltSystem system = make_system(s);
  WaveState state = initial_state(s);

  SimulationResult result;
  Trajectory& traj = result.trajectory;
  traj.grid = system.grid();
  traj.dt = s.dt;
  traj.q = s.q;
  traj.max_abs_k = system.field().k.cwiseAbs().maxCoeff();
  traj.snapshots.push_back(state);
  traj.snapshot_steps.push_back(0);

  const long steps = s.steps();
  const double e0 = system.energy(state);
  const double vol = traj.grid.cell_volume();
  double sum_d = 0.0, sum_s = 0.0;
  double m_bar = gradient_l2(state.v);
  double lq1 = 0.0, accel = 0.0;

  for (long n = 1; n <= steps; ++n) {
    std::pair<WaveState, StepMonitor> out;
    try {
      out = system.step(state, s.dt, s.solver);
    } catch (const DegeneracyError& e) {
      result.failure = StepFailure{FailureKind::degeneracy, n, state.t, e.what()};
      break;
    } catch (const NonconvergenceError& e) {
      result.failure = StepFailure{FailureKind::nonconvergence, n, state.t, e.what()};
      break;
    }
    auto& [next, mon] = out;
    next.t = static_cast<double>(n) * s.dt;
    mon.step = n;
    mon.t = next.t;
    sum_d += mon.dissipation_increment;
    sum_s += mon.source_increment;
    mon.balance_residual = mon.energy + sum_d - e0 - sum_s;

    const GridFunctiond mid(traj.grid, Centering::cell, 0.5 * (state.v.values + next.v.values));
    m_bar = std::max(m_bar, mon.grad_v_l2);
    lq1 += s.dt * gradient_lq1_pow(mid, s.q);
    accel += s.dt * vol * ((next.v.values - state.v.values) / s.dt).squaredNorm();
    mon.m_bar_running = m_bar;
    mon.M_bar_running = std::pow(lq1, 1.0 / (s.q + 1.0));
    mon.accel_l2_sq_running = accel;
    traj.monitors.push_back(mon);

    state = std::move(next);
    if (n % s.snapshot_stride == 0 || n == steps) {
      traj.snapshots.push_back(state);
      traj.snapshot_steps.push_back(n);
    }
  }
  return result;
}

std::vector<EnergyRow> energy_balance_report(const Trajectory& traj, const Scenario& s) {
  for (std::size_t i = 1; i < traj.snapshot_steps.size(); ++i) {
    if (traj.snapshot_steps[i] != traj.snapshot_steps[i - 1] + 1)
      throw ValidationError("energy balance needs every step as a snapshot (snapshot_stride = 1)");
  }
  std::vector<EnergyRow> rows;
  if (traj.snapshots.empty()) return rows;
  const WesterveltSystem system = make_system(s);
  const double e0 = system.energy(traj.snapshots.front());
  rows.push_back({traj.snapshot_steps.front(), traj.snapshots.front().t, e0, 0.0, 0.0, 0.0});
  double sum_d = 0.0, sum_s = 0.0;
  for (std::size_t i = 1; i < traj.snapshots.size(); ++i) {
    const auto bal = system.balance(traj.snapshots[i - 1], traj.snapshots[i], traj.dt);
    sum_d += bal.dissipation;
    sum_s += bal.source;
    EnergyRow row;
    row.step = traj.snapshot_steps[i];
    row.t = traj.snapshots[i].t;
    row.energy = system.energy(traj.snapshots[i]);
    row.dissipation_increment = bal.dissipation;
    row.source_increment = bal.source;
    row.residual = row.energy + sum_d - e0 - sum_s;
    rows.push_back(row);
  }
  return rows;
}

WSetNorms wset_norms(const Trajectory& traj) {
  WSetNorms out;
  double max_u = 0.0;
  for (const auto& snap : traj.snapshots) {
    out.m_bar = std::max(out.m_bar, gradient_l2(snap.v));
    max_u = std::max(max_u, snap.u.values.cwiseAbs().maxCoeff());
  }
  for (const auto& mon : traj.monitors) {
    out.m_bar = std::max(out.m_bar, mon.grad_v_l2);
    max_u = std::max(max_u, mon.max_abs_u);
  }
  if (!traj.monitors.empty()) {
    out.M_bar = traj.monitors.back().M_bar_running;
  } else {
    double sum = 0.0;
    for (std::size_t i = 1; i < traj.snapshots.size(); ++i) {
      const auto& a = traj.snapshots[i - 1];
      const auto& b = traj.snapshots[i];
      const GridFunctiond mid(traj.grid, Centering::cell, 0.5 * (a.v.values + b.v.values));
      sum += (b.t - a.t) * gradient_lq1_pow(mid, traj.q);
    }
    out.M_bar = std::pow(sum, 1.0 / (traj.q + 1.0));
  }
  out.a0 = 2.0 * traj.max_abs_k * max_u;
  return out;
}

}  // namespace wlab
