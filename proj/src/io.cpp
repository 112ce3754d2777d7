#include "wlab/io.hpp"

#include "wlab/errors.hpp"

#include <fmt/format.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

namespace wlab {

std::string monitors_csv(const std::vector<StepMonitor>& monitors) {
  std::string out =
      "step,t,picard_iters,min_mass_factor,energy,dissipation_increment,balance_residual,"
      "m_bar_running,M_bar_running\n";
  for (const auto& m : monitors) {
    out += fmt::format("{},{:.17g},{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", m.step, m.t,
                       m.picard_iters, m.min_mass_factor, m.energy, m.dissipation_increment,
                       m.balance_residual, m.m_bar_running, m.M_bar_running);
  }
  return out;
}

std::string energy_csv(const std::vector<StepMonitor>& monitors, double initial_energy) {
  std::string out = "step,t,energy,dissipation_increment,source_increment,balance_residual\n";
  out += fmt::format("0,0,{:.17g},0,0,0\n", initial_energy);
  for (const auto& m : monitors) {
    out += fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", m.step, m.t, m.energy,
                       m.dissipation_increment, m.source_increment, m.balance_residual);
  }
  return out;
}

std::string snapshot_csv(const GridFunctiond& u) {
  const Grid& g = u.grid;
  std::string out = "i,j,x,y,value\n";
  for (Index c = 0; c < g.cell_count(); ++c) {
    const auto ij = g.coords(c);
    out += fmt::format("{},{},{:.17g},{:.17g},{:.17g}\n", ij[0], ij[1], g.center(c, 0),
                       g.dim == 2 ? g.center(c, 1) : 0.0, u[c]);
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot write {}", path.string()));
  out << text;
  if (!out) throw IoError(fmt::format("write to {} failed", path.string()));
}

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

std::uint64_t to_little(std::uint64_t bits) {
  if constexpr (std::endian::native == std::endian::little) return bits;
  std::uint64_t out = 0;
  for (int i = 0; i < 8; ++i) out |= ((bits >> (8 * i)) & 0xFFu) << (8 * (7 - i));
  return out;
}

}  // namespace

void write_binary_snapshot(const std::filesystem::path& path, const GridFunctiond& u, double t) {
  const Grid& g = u.grid;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot write {}", path.string()));
  out << fmt::format("wlab-f64 {} {},{} {:.17g},{:.17g} {:.17g}\n", g.dim, g.n, g.dim == 2 ? g.n : 1,
                     g.extent[0], g.dim == 2 ? g.extent[1] : 0.0, t);
  for (Index c = 0; c < u.size(); ++c) {
    const std::uint64_t bits = to_little(std::bit_cast<std::uint64_t>(u[c]));
    char buf[8];
    std::memcpy(buf, &bits, 8);
    out.write(buf, 8);
  }
  if (!out) throw IoError(fmt::format("write to {} failed", path.string()));
}

std::pair<GridFunctiond, double> read_binary_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot read {}", path.string()));
  std::string header;
  std::getline(in, header);
  std::istringstream hs(header);
  std::string magic, dims, extents;
  int dim = 0;
  double t = 0.0;
  hs >> magic >> dim >> dims >> extents >> t;
  if (!hs || magic != "wlab-f64" || (dim != 1 && dim != 2))
    throw IoError(fmt::format("{}: not a wlab-f64 snapshot", path.string()));
  Grid g;
  g.dim = dim;
  int ny = 1;
  double ly = 0.0;
  if (std::sscanf(dims.c_str(), "%d,%d", &g.n, &ny) != 2 ||
      std::sscanf(extents.c_str(), "%lf,%lf", &g.extent[0], &ly) != 2)
    throw IoError(fmt::format("{}: malformed header", path.string()));
  g.extent[1] = dim == 2 ? ly : 1.0;
  GridFunctiond u(g, Centering::cell);
  for (Index c = 0; c < u.size(); ++c) {
    char buf[8];
    if (!in.read(buf, 8)) throw IoError(fmt::format("{}: truncated data", path.string()));
    std::uint64_t bits;
    std::memcpy(&bits, buf, 8);
    u[c] = std::bit_cast<double>(to_little(bits));
  }
  return {std::move(u), t};
}

std::string RunManifest::to_text() const {
  std::string out;
  out += fmt::format("command={}\n", command);
  out += fmt::format("version={}\n", version);
  out += fmt::format("scenario_hash={}\n", scenario_hash);
  for (const auto& [k, v] : seeds) out += fmt::format("seed.{}={}\n", k, v);
  out += fmt::format("threads={}\n", threads);
  std::string files;
  for (const auto& f : outputs) files += (files.empty() ? "" : ",") + f;
  out += fmt::format("outputs={}\n", files);
  out += fmt::format("wall_seconds={:.3f}\n", wall_seconds);
  out += fmt::format("exit_status={}\n", exit_status);
  return out;
}

}  // namespace wlab
