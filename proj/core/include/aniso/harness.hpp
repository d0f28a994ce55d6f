#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "aniso/config.hpp"
#include "aniso/error.hpp"

namespace aniso {

enum ExitCode : int {
  kExitPass = 0,
  kExitValidation = 1,
  kExitSolver = 2,
  kExitVerify = 3,
};

int exit_code_for(ErrorKind kind);

struct VerifyRow {
  std::string check;
  std::string status;  // "pass" | "fail" | "skip"
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

/// Runs every invariant check against `cfg`; rows come back in a fixed order whatever `jobs` is.
std::vector<VerifyRow> verify_suite(const ExperimentConfig& cfg, int jobs);
void write_verify_csv(std::ostream& out, const std::vector<VerifyRow>& rows);

/// Each command writes resolved_config.ini plus its CSVs to cfg.run.out and returns an exit code.
int cmd_check(const ExperimentConfig& cfg, std::ostream& console);
int cmd_solve(const ExperimentConfig& cfg, std::ostream& console);
int cmd_sweep(const ExperimentConfig& cfg, std::ostream& console);
int cmd_verify(const ExperimentConfig& cfg, std::ostream& console, int jobs);

/// Loads the config and dispatches; library errors become exit codes with a message on `err`.
int run_command(const std::string& command, const std::filesystem::path& config, const ConfigOverrides& overrides,
                int jobs, std::ostream& out, std::ostream& err);

/// Norm-vs-n polyline plot, each quantity scaled by its first value.
void write_sweep_svg(std::ostream& out, const SequenceReport& seq, int N);

}  // namespace aniso
