#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "aniso/grid.hpp"
#include "aniso/operator_b.hpp"
#include "aniso/problem.hpp"
#include "aniso/solver.hpp"

namespace aniso {

struct RunParams {
  std::int64_t n = 1;
  std::vector<std::int64_t> n_list{1, 2, 4, 8, 16, 32, 64};
  std::vector<double> levels;   // empty: derived from max |U|
  int samples = 1000;
  std::uint64_t seed = 1;
  std::string out = "out";
  std::string exact = "none";   // "none" | "sines": prod_i sin(pi x_i / L_i)
  bool svg = false;
  double gar_lambda_scale = 1.0;
  std::optional<double> c_bound;  // growth-bound constant for the P1 sampler; unset: Hoelder bound
  bool allow_trivial = false;   // zero data is a test-mode configuration
  bool warm_start = true;
};

/// Fully resolved experiment. `resolved_ini` holds every key with its effective value.
struct ExperimentConfig {
  ProblemSpec problem;
  Grid grid;
  OperatorBSpec operator_b;
  SolverOptions solver;
  RunParams run;
  std::string resolved_ini;
};

struct ConfigOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
};

/// Parses an INI document. Relative CSV paths resolve against `base_dir`.
/// Throws Error{Validation} with a "section.key" path, or Error{Io}.
ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir,
                              const ConfigOverrides& overrides = {});
ExperimentConfig load_config(const std::filesystem::path& path, const ConfigOverrides& overrides = {});

/// Field presets: "zero", "const:c", "sines:amp", "bump:amp", "laplace_sines:amp", "csv:path".
GridFunction node_preset(const Grid& grid, const std::string& preset, const std::filesystem::path& base_dir,
                         const std::string& field_path);
/// Divergence-form presets: "zero", "sines:amp" (G_j = amp sin(2 pi x_j / L_j) at edge midpoints).
std::vector<EdgeField> edge_preset(const Grid& grid, const std::string& preset, const std::string& field_path);
/// "none", "saturating:c", "saturating_abs:c", "cap:c:M".
PsiMap psi_preset(const std::string& preset, const std::string& field_path);

/// prod_i sin(pi x_i / L_i) on the interior nodes.
GridFunction sine_profile(const Grid& grid);

}  // namespace aniso
