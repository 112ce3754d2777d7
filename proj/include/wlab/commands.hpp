#pragma once

#include "wlab/model.hpp"
#include "wlab/regularity.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace wlab {

/// Process exit codes; each failure mode has its own.
namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int io = 1;
inline constexpr int validation = 2;
inline constexpr int degeneracy = 3;
inline constexpr int nonconvergence = 4;
inline constexpr int threshold = 5;
}  // namespace exit_code

/// A config file path, or the name of a gallery scenario when no such file
/// exists. `hash` receives the digest of the canonical configuration text.
Scenario load_scenario(const std::string& config_or_name, std::string* hash = nullptr);

int cmd_simulate(const std::string& config, const std::filesystem::path& out_dir, std::ostream& out,
                 std::ostream& err);

struct InequalityOptions {
  double q_min = 1.0;
  double q_max = 5.0;
  double magnitude_max = 10.0;
  std::vector<int> dims{1, 2, 3};
  std::uint64_t samples = 1000000;
  std::uint64_t seed = 42;
  std::filesystem::path out_dir = ".";
};

int cmd_inequalities(const InequalityOptions& opt, std::ostream& out, std::ostream& err);

int cmd_convergence(const std::string& config, int levels, const std::filesystem::path& out_dir,
                    std::ostream& out, std::ostream& err);

int cmd_regularity(const std::string& config, const RegularityOptions& opt,
                   const std::filesystem::path& out_dir, std::ostream& out, std::ostream& err);

/// Lists the gallery; with `export_dir`, also writes <name>.ini per scenario.
int cmd_gallery(const std::optional<std::filesystem::path>& export_dir, std::ostream& out,
                std::ostream& err);

}  // namespace wlab
