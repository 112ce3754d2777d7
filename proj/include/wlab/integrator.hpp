#pragma once

#include "wlab/manufactured.hpp"
#include "wlab/model.hpp"

#include <Eigen/SparseCore>

#include <optional>
#include <string>
#include <vector>

namespace wlab {

/// Pressure u and velocity v = du/dt at one time level.
struct WaveState {
  double t = 0.0;
  GridFunctiond u;
  GridFunctiond v;
};

/// Per-step record. Running quantities accumulate from t = 0.
struct StepMonitor {
  long step = 0;
  double t = 0.0;
  int picard_iters = 0;
  double min_mass_factor = 1.0;     ///< min over cells of 1 - 2 k u at the midpoint
  double energy = 0.0;              ///< E(t_{n+1})
  double dissipation_increment = 0.0;
  double source_increment = 0.0;
  double balance_residual = 0.0;    ///< E(t_n) + sum D - E(0) - sum S
  double max_abs_u = 0.0;           ///< max |u(t_{n+1})|
  double grad_v_l2 = 0.0;           ///< ||grad v(t_{n+1})||_{L2}
  double m_bar_running = 0.0;       ///< max over levels so far of ||grad v||_{L2}
  double M_bar_running = 0.0;       ///< (sum dt ||grad v_mid||^{q+1}_{L^{q+1}})^{1/(q+1)}
  double accel_l2_sq_running = 0.0; ///< sum dt ||(v1 - v0)/dt||^2_{L2}
};

struct Trajectory {
  Grid grid;
  double dt = 0.0;
  double q = 1.0;
  double max_abs_k = 0.0;
  std::vector<WaveState> snapshots;
  std::vector<long> snapshot_steps;
  std::vector<StepMonitor> monitors;
};

enum class FailureKind { degeneracy, nonconvergence };

struct StepFailure {
  FailureKind kind{};
  long step = 0;    ///< index of the step that failed (1-based)
  double t = 0.0;   ///< time the failing step started from
  std::string message;
};

struct SimulationResult {
  Trajectory trajectory;
  std::optional<StepFailure> failure;
};

/// Energy bookkeeping of one step.
struct StepBalance {
  double dissipation = 0.0;  ///< dt sum_f w_f beta_f |g_f|^2 at the midpoint
  double source = 0.0;       ///< dt sum_c vol [(2k/lambda) w^3 - (k/lambda) w (v0^2+v1^2)/2 + (f + g/h) w]
};

/// Discretized damped Westervelt system on one material field.
///
/// Cell-centered finite volumes in space; harmonic means carry the elastic
/// and damping coefficients across interface faces. In time, the implicit
/// midpoint rule:
///
///   u1 = u0 + dt w,   w = (v0 + v1) / 2,
///   (1/lambda)(1 - 2k u_mid) (v1 - v0)/dt
///       = div((1/rho) grad u_mid) + div(beta(grad w) grad w) + (2k/lambda) w^2 + f(t_mid)
///
/// solved by Picard iteration with the mass factor, beta and the quadratic
/// source frozen at the previous iterate. For q > 1 the frozen damping
/// coefficient lags the flux derivative by up to a factor q, which makes plain
/// Picard oscillate on steep gradients; each update is therefore relaxed by
/// 2 / (2 + r) with r the face-wise bound on that lag (1 at q = 1). Each inner system
///   [(2/dt) M + (dt/2) A + B] w = (2/dt) M v0 - A u0 + N + f
/// is symmetric positive definite and solved by diagonally preconditioned CG.
class WesterveltSystem {
public:
  WesterveltSystem(MaterialField field, double q, std::optional<StandingWave> mms = std::nullopt,
                   Profile neumann = {});

  const Grid& grid() const { return field_.grid; }
  const MaterialField& field() const { return field_; }
  double q() const { return q_; }

  /// One implicit-midpoint step. Throws DegeneracyError or NonconvergenceError.
  std::pair<WaveState, StepMonitor> step(const WaveState& state, double dt,
                                         const SolverConfig& cfg) const;

  /// E = 1/2 sum vol [(1/lambda)(1 - 2ku) v^2] + 1/2 vol u^T A u
  double energy(const WaveState& s) const;
  StepBalance balance(const WaveState& s0, const WaveState& s1, double dt) const;

  /// 1 - 2 k u per cell.
  Eigen::VectorXd mass_factor(const Eigen::VectorXd& u) const;

  /// Source f at cell centers; zero when no manufactured solution is set.
  Eigen::VectorXd source(double t) const;
  /// Neumann boundary flux divided by h, per cell.
  const Eigen::VectorXd& boundary_source() const { return boundary_source_; }

  const Eigen::SparseMatrix<double>& stiffness() const { return stiffness_; }
  /// Damping operator B(w) with beta evaluated at the gradient of w.
  Eigen::SparseMatrix<double> damping_operator(const Eigen::VectorXd& w) const;

private:
  Eigen::VectorXd face_beta(const Eigen::VectorXd& w) const;
  /// Picard relaxation 2 / (2 + r), r bounding (q-1) delta|G|^{q-1} / ((1-delta) + delta|G|^{q-1}).
  double relaxation(const Eigen::VectorXd& w) const;
  Eigen::SparseMatrix<double> face_operator(const Eigen::VectorXd& face_coef) const;
  double face_quadratic(const Eigen::VectorXd& face_coef, const Eigen::VectorXd& w) const;

  MaterialField field_;
  double q_;
  std::optional<StandingWave> mms_;
  std::vector<Face> faces_;
  std::vector<bool> active_;          ///< face takes part in the flux balance
  Eigen::VectorXd elastic_coef_;      ///< 1/rho per face
  Eigen::SparseMatrix<double> stiffness_;
  Eigen::VectorXd boundary_source_;
};

/// ||grad v||_{L2} from face gradients, boundary faces with half weight.
double gradient_l2(const GridFunctiond& v);
/// ||grad v||^{q+1}_{L^{q+1}} with the face-wise density |G_f|^{q-1} g_f^2.
double gradient_lq1_pow(const GridFunctiond& v, double q);

/// Step with no forcing; see WesterveltSystem::step.
std::pair<WaveState, StepMonitor> step(const WaveState& state, const MaterialField& field,
                                       double q, double dt, const SolverConfig& cfg);

/// System for a scenario, including manufactured source and Neumann data.
WesterveltSystem make_system(const Scenario& s);
WaveState initial_state(const Scenario& s);

/// Runs to T. Step errors stop the run and are returned with the partial trajectory.
SimulationResult simulate(const Scenario& s);

struct EnergyRow {
  long step = 0;
  double t = 0.0;
  double energy = 0.0;
  double dissipation_increment = 0.0;
  double source_increment = 0.0;
  double residual = 0.0;  ///< E(t_n) + sum D - E(0) - sum S
};

/// Recomputes the balance from consecutive snapshots (stride 1 required).
std::vector<EnergyRow> energy_balance_report(const Trajectory& traj, const Scenario& s);

struct WSetNorms {
  double m_bar = 0.0;   ///< max over levels of ||grad v||_{L2}
  double M_bar = 0.0;   ///< (sum dt ||grad v||^{q+1}_{L^{q+1}})^{1/(q+1)}
  double a0 = 0.0;      ///< 2 max|k| max|u|
};

WSetNorms wset_norms(const Trajectory& traj);

}  // namespace wlab
