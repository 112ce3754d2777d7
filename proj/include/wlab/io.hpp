#pragma once

#include "wlab/integrator.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace wlab {

/// Columns: step,t,picard_iters,min_mass_factor,energy,dissipation_increment,
/// balance_residual,m_bar_running,M_bar_running
std::string monitors_csv(const std::vector<StepMonitor>& monitors);

/// Columns: step,t,energy,dissipation_increment,source_increment,balance_residual
std::string energy_csv(const std::vector<StepMonitor>& monitors, double initial_energy);

/// Columns: i,j,x,y,value
std::string snapshot_csv(const GridFunctiond& u);

/// Header line "wlab-f64 <dim> <nx>,<ny> <Lx>,<Ly> <t>" followed by the
/// cell values as little-endian doubles, x fastest.
void write_binary_snapshot(const std::filesystem::path& path, const GridFunctiond& u, double t);
/// Inverse of write_binary_snapshot; the grid carries Dirichlet boundaries.
std::pair<GridFunctiond, double> read_binary_snapshot(const std::filesystem::path& path);

/// Throws IoError.
void write_text(const std::filesystem::path& path, const std::string& text);

struct RunManifest {
  std::string command;
  std::string scenario_hash;
  std::string version = WLAB_VERSION;
  std::vector<std::pair<std::string, std::string>> seeds;
  std::vector<std::string> outputs;
  int threads = 1;
  double wall_seconds = 0.0;
  int exit_status = 0;

  /// key=value lines
  std::string to_text() const;
};

}  // namespace wlab
