// wlab: command-line front end.

#include "wlab/commands.hpp"
#include "wlab/parallel.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Damped Westervelt simulation laboratory"};
  app.set_version_flag("--version", std::string(WLAB_VERSION));
  app.require_subcommand(1);

  int threads = 0;
  app.add_option("--threads", threads, "worker threads for inner loops (default $WLAB_THREADS or 1)")
      ->check(CLI::PositiveNumber);

  std::string config;
  std::string out_dir = "out";

  auto* sim = app.add_subcommand("simulate", "run a scenario and write monitors, energy and snapshots");
  sim->add_option("config", config, "config file or gallery scenario name")->required();
  sim->add_option("-o,--out", out_dir, "output directory");

  wlab::InequalityOptions ineq;
  std::string ineq_out = ".";
  auto* inq = app.add_subcommand("inequalities", "sample the q-Laplace inequalities");
  inq->add_option("--q-min", ineq.q_min);
  inq->add_option("--q-max", ineq.q_max);
  inq->add_option("--magnitude-max", ineq.magnitude_max);
  inq->add_option("--dims", ineq.dims, "space dimensions to sample")->delimiter(',');
  inq->add_option("--samples", ineq.samples);
  inq->add_option("--seed", ineq.seed);
  inq->add_option("-o,--out", ineq_out, "output directory");

  int levels = 4;
  auto* conv = app.add_subcommand("convergence", "manufactured-solution refinement study");
  conv->add_option("config", config, "config file or gallery scenario name")->required();
  conv->add_option("--levels", levels);
  conv->add_option("-o,--out", out_dir, "output directory");

  wlab::RegularityOptions reg;
  auto* regc = app.add_subcommand("regularity", "interior and piecewise H2 scans under refinement");
  regc->add_option("config", config, "config file or gallery scenario name")->required();
  regc->add_option("--margin", reg.margin, "window margin in cells at the coarsest level");
  regc->add_option("--shifts", reg.shifts, "difference-quotient shifts in cells")->delimiter(',');
  regc->add_option("--levels", reg.levels);
  regc->add_option("-o,--out", out_dir, "output directory");

  std::string export_dir;
  auto* gal = app.add_subcommand("gallery", "list shipped scenarios");
  gal->add_option("--export", export_dir, "write each scenario as <name>.ini into this directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : wlab::exit_code::validation;
  }
  if (threads > 0) wlab::set_thread_count(threads);

  if (*sim) return wlab::cmd_simulate(config, out_dir, std::cout, std::cerr);
  if (*inq) {
    ineq.out_dir = ineq_out;
    return wlab::cmd_inequalities(ineq, std::cout, std::cerr);
  }
  if (*conv) return wlab::cmd_convergence(config, levels, out_dir, std::cout, std::cerr);
  if (*regc) return wlab::cmd_regularity(config, reg, out_dir, std::cout, std::cerr);
  if (*gal) {
    std::optional<std::filesystem::path> dir;
    if (!export_dir.empty()) dir = export_dir;
    return wlab::cmd_gallery(dir, std::cout, std::cerr);
  }
  return wlab::exit_code::validation;
}
