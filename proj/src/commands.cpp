#include "wlab/commands.hpp"

#include "wlab/config.hpp"
#include "wlab/convergence.hpp"
#include "wlab/errors.hpp"
#include "wlab/gallery.hpp"
#include "wlab/io.hpp"
#include "wlab/parallel.hpp"
#include "wlab/qlaplace.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <chrono>
#include <functional>
#include <ostream>

namespace wlab {

namespace fs = std::filesystem;

Scenario load_scenario(const std::string& config_or_name, std::string* hash) {
  Config cfg;
  if (!fs::exists(config_or_name)) {
    const auto& names = gallery_names();
    if (std::find(names.begin(), names.end(), config_or_name) == names.end())
      throw IoError(fmt::format("cannot read {} (not a file or gallery scenario)", config_or_name));
    cfg = parse_config(scenario_to_config_text(gallery_scenario(config_or_name)));
  } else {
    cfg = read_config(config_or_name);
  }
  if (hash) *hash = config_hash(cfg);
  return scenario_from_config(cfg);
}

namespace {

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError(fmt::format("cannot create {}: {}", dir.string(), ec.message()));
}

/// Runs `body` and maps exceptions to exit codes. `manifest` is written to
/// out_dir/manifest.txt afterwards when out_dir is set.
int guarded(RunManifest& manifest, const std::optional<fs::path>& out_dir, std::ostream& err,
            const std::function<int()>& body) {
  const auto start = std::chrono::steady_clock::now();
  int status = exit_code::ok;
  try {
    status = body();
  } catch (const ValidationError& e) {
    fmt::print(err, "validation error: {}\n", e.what());
    status = exit_code::validation;
  } catch (const DegeneracyError& e) {
    fmt::print(err, "degeneracy: {}\n", e.what());
    status = exit_code::degeneracy;
  } catch (const NonconvergenceError& e) {
    fmt::print(err, "nonconvergence: {}\n", e.what());
    status = exit_code::nonconvergence;
  } catch (const IoError& e) {
    fmt::print(err, "i/o error: {}\n", e.what());
    return exit_code::io;
  }
  manifest.exit_status = status;
  manifest.threads = thread_count();
  manifest.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (out_dir && fs::is_directory(*out_dir)) {
    try {
      write_text(*out_dir / "manifest.txt", manifest.to_text());
    } catch (const IoError& e) {
      fmt::print(err, "i/o error: {}\n", e.what());
      return exit_code::io;
    }
  }
  return status;
}

int print_violations(const std::vector<Violation>& violations, std::ostream& err) {
  for (const auto& v : violations) fmt::print(err, "{}: {}\n", v.field, v.message);
  return exit_code::validation;
}

}  // namespace

int cmd_simulate(const std::string& config, const fs::path& out_dir, std::ostream& out,
                 std::ostream& err) {
  RunManifest manifest;
  manifest.command = "simulate";
  return guarded(manifest, out_dir, err, [&] {
    const Scenario s = load_scenario(config, &manifest.scenario_hash);
    const auto violations = validate_scenario(s);
    if (!violations.empty()) return print_violations(violations, err);
    ensure_dir(out_dir);

    const SimulationResult result = simulate(s);
    const Trajectory& traj = result.trajectory;
    const double e0 = make_system(s).energy(traj.snapshots.front());

    write_text(out_dir / "monitors.csv", monitors_csv(traj.monitors));
    write_text(out_dir / "energy.csv", energy_csv(traj.monitors, e0));
    manifest.outputs = {"monitors.csv", "energy.csv"};
    const fs::path snap_dir = out_dir / "snapshots";
    ensure_dir(snap_dir);
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
      const WaveState& st = traj.snapshots[i];
      const long step = traj.snapshot_steps[i];
      for (auto [tag, field] : {std::pair{"u", &st.u}, std::pair{"v", &st.v}}) {
        std::string name;
        if (s.dimension == 1) {
          name = fmt::format("snapshots/{}_{:06d}.csv", tag, step);
          write_text(out_dir / name, snapshot_csv(*field));
        } else {
          name = fmt::format("snapshots/{}_{:06d}.f64", tag, step);
          write_binary_snapshot(out_dir / name, *field, st.t);
        }
        manifest.outputs.push_back(name);
      }
    }

    const WSetNorms w = wset_norms(traj);
    fmt::print(out, "{}: {} steps, m_bar={:.6g} M_bar={:.6g} a0={:.6g}\n", s.name.empty() ? config : s.name,
               traj.monitors.size(), w.m_bar, w.M_bar, w.a0);
    if (result.failure) {
      const auto& f = *result.failure;
      const bool degenerate = f.kind == FailureKind::degeneracy;
      fmt::print(err, "{} at step {} (t={:.9g}): {}\n", degenerate ? "degeneracy" : "nonconvergence", f.step,
                 f.t, f.message);
      return degenerate ? exit_code::degeneracy : exit_code::nonconvergence;
    }
    return exit_code::ok;
  });
}

int cmd_inequalities(const InequalityOptions& opt, std::ostream& out, std::ostream& err) {
  RunManifest manifest;
  manifest.command = "inequalities";
  manifest.seeds = {{"inequalities", std::to_string(opt.seed)}};
  return guarded(manifest, opt.out_dir, err, [&] {
    SamplingRanges ranges;
    ranges.q_min = opt.q_min;
    ranges.q_max = opt.q_max;
    ranges.magnitude_max = opt.magnitude_max;
    ranges.dims = opt.dims;
    std::vector<InequalityReport> reports;
    for (InequalityId id : all_inequalities())
      reports.push_back(check_inequality(id, opt.seed, opt.samples, ranges));
    ensure_dir(opt.out_dir);
    std::string csv = inequality_csv_header() + "\n";
    bool ok = true;
    for (const auto& r : reports) {
      csv += csv_row(r) + "\n";
      const bool gates = must_hold(r.id);
      if (gates && r.violations > 0) ok = false;
      fmt::print(out, "{:<16} violations={:<8} worst={:.3e}{}\n", to_string(r.id), r.violations,
                 r.worst_margin, gates ? "" : "  (reported only)");
    }
    write_text(opt.out_dir / "inequalities.csv", csv);
    manifest.outputs = {"inequalities.csv"};
    return ok ? exit_code::ok : exit_code::threshold;
  });
}

int cmd_convergence(const std::string& config, int levels, const fs::path& out_dir, std::ostream& out,
                    std::ostream& err) {
  RunManifest manifest;
  manifest.command = "convergence";
  return guarded(manifest, out_dir, err, [&] {
    const Scenario s = load_scenario(config, &manifest.scenario_hash);
    const auto rows = convergence_study(s, levels);
    ensure_dir(out_dir);
    std::string csv = "level,n,dt,l2_error,order\n";
    fmt::print(out, "{:>5} {:>6} {:>12} {:>14} {:>7}\n", "level", "n", "dt", "l2_error", "order");
    for (const auto& r : rows) {
      csv += fmt::format("{},{},{:.17g},{:.17g},{:.17g}\n", r.level, r.n, r.dt, r.error, r.order);
      fmt::print(out, "{:>5} {:>6} {:>12.6g} {:>14.6e} {:>7}\n", r.level, r.n, r.dt, r.error,
                 r.level == 0 ? std::string("-") : fmt::format("{:.3f}", r.order));
    }
    write_text(out_dir / "convergence.csv", csv);
    manifest.outputs = {"convergence.csv"};
    return rows.back().order >= 1.9 ? exit_code::ok : exit_code::threshold;
  });
}

int cmd_regularity(const std::string& config, const RegularityOptions& opt, const fs::path& out_dir,
                   std::ostream& out, std::ostream& err) {
  RunManifest manifest;
  manifest.command = "regularity";
  return guarded(manifest, out_dir, err, [&] {
    const Scenario s = load_scenario(config, &manifest.scenario_hash);
    const RegularityReport report = regularity_study(s, opt);
    ensure_dir(out_dir);
    write_text(out_dir / "regularity.csv", regularity_csv(report));
    manifest.outputs = {"regularity.csv"};
    fmt::print(out, "{:>5} {:>6} {:>12} {:>12} {:>12} {:>12} {:>12} {:>12} {:>8}\n", "level", "n", "h2_minus",
               "h2_plus", "h2_global", "h2_straddle", "flux_jump", "grad_v_sup", "alpha");
    for (const auto& lv : report.levels) {
      fmt::print(out, "{:>5} {:>6} {:>12.5g} {:>12.5g} {:>12.5g} {:>12.5g} {:>12.5g} {:>12.5g} {:>8.4f}\n",
                 lv.level, lv.n, lv.h2.minus, lv.h2.plus, lv.h2.global, lv.h2.straddle, lv.flux_jump, lv.grad_v_sup,
                 lv.holder.alpha);
    }
    fmt::print(out, "{}\n", regularity_summary(report));
    return report.passed() ? exit_code::ok : exit_code::threshold;
  });
}

int cmd_gallery(const std::optional<fs::path>& export_dir, std::ostream& out, std::ostream& err) {
  RunManifest manifest;
  manifest.command = "gallery";
  return guarded(manifest, std::nullopt, err, [&] {
    if (export_dir) ensure_dir(*export_dir);
    for (const auto& name : gallery_names()) {
      fmt::print(out, "{:<20} {}\n", name, gallery_description(name));
      if (export_dir) write_text(*export_dir / (name + ".ini"), scenario_to_config_text(gallery_scenario(name)));
    }
    return exit_code::ok;
  });
}

}  // namespace wlab
