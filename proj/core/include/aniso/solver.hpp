#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "aniso/exponents.hpp"
#include "aniso/grid.hpp"
#include "aniso/operator_b.hpp"
#include "aniso/problem.hpp"

namespace aniso {

struct SolverOptions {
  double eps0 = 1e-2;       // initial flux smoothing
  double eps_min = 1e-12;   // eps_k = max(eps_min, eps0 2^{-k}) at Picard step k
  int picard_max = 400;
  int newton_max = 60;
  double tol_residual = 1e-8;  // relative weak-form residual
  double relax = 1.0;          // Picard under-relaxation in (0, 1]
  bool project_nonneg = false; // diagnostic clamp, never needed for correctness
  int divergence_window = 5;   // consecutive residual increases that abort with Error{Diverged}
};

/// Throws Error{Validation} for out-of-range options.
void validate(const SolverOptions& opts);

/// The quantities bounded uniformly in n by the a priori estimate.
struct MonitoredNorms {
  double norm_Lm = 0.0;
  double norm_W = 0.0;
  double int_phi_u = 0.0;
  double int_psi_u = 0.0;            // true Psi on {|U| > 0}
  std::vector<double> J_m_p;         // int |U|^m |d_j U|^{p_j}
  std::vector<double> J_theta_q;     // int |U|^{theta_j} |d_j U|^{q_j}

  std::vector<double> flat() const;
  static std::vector<std::string> names(int N);
};

MonitoredNorms monitored_norms(const GridFunction& U, const ProblemSpec& spec);

struct SolveReport {
  std::int64_t n = 1;
  double h_exp = 0.0;
  GridFunction U;
  MonitoredNorms norms;
  double residual = 0.0;         // relative weak-form residual with the exact flux
  double energy_residual = 0.0;  // regularized-mode identity residual
  double min_value = 0.0;
  int picard_iterations = 0;
  int newton_iterations = 0;
  bool converged = false;
  std::string condition_verdict;  // "true", "false" or "n/a: ..."
  /// Accepted merit values of every inner Newton solve, one trace per Picard step.
  std::vector<std::vector<double>> newton_traces;
  /// Coercivity surrogate <A U,U> + int Phi(U) U at every Picard iterate.
  std::vector<double> coercivity_trace;
};

/// Weak-form residual vector R_i = <A U, e_i> + int Phi(U) e_i - int Psi_n(U) e_i - <B U, e_i>.
std::vector<double> weak_residual(const GridFunction& U, const ProblemSpec& spec, const OperatorBSpec& bspec,
                                  std::int64_t n);

/// max_i |R_i| / (cell_volume * load scale); the solver's stopping quantity.
double relative_residual(const GridFunction& U, const ProblemSpec& spec, const OperatorBSpec& bspec,
                         std::int64_t n);

/// Solves the regularized problem for index n by frozen-coefficient Picard iteration with an
/// inner damped Newton solve. Throws Error{Diverged}, Error{NewtonStall} or Error{NotANumber}.
SolveReport solve_regularized(const ProblemSpec& spec, const OperatorBSpec& bspec, std::int64_t n,
                              const Grid& grid, const SolverOptions& opts,
                              const GridFunction* initial = nullptr);

/// nullopt selects the limit form (true Psi on {|U| > 0}); otherwise Psi_n.
double energy_identity_residual(const GridFunction& U, const ProblemSpec& spec, const OperatorBSpec& bspec,
                                std::optional<std::int64_t> n);

struct SequenceEntry {
  std::int64_t n = 1;
  std::optional<SolveReport> report;
  std::string error;  // set when the solve threw
};

struct SequenceReport {
  std::vector<SequenceEntry> entries;
  /// Between consecutive successful entries k-1, k (index k, first entry 0).
  std::vector<double> w_distance;
  std::vector<std::vector<double>> relative_change;
  std::vector<double> max_relative_change;
  /// max over quantities of value / value at the first entry.
  double max_growth_factor = 0.0;
  double threshold = 0.05;  // harness convention, not a theorem
  bool uniform_bound_plausible = false;
  bool no_uniform_bound = false;
};

SequenceReport run_sequence(const ProblemSpec& spec, const OperatorBSpec& bspec, const Grid& grid,
                            const SolverOptions& opts, const std::vector<std::int64_t>& n_list,
                            bool warm_start = true);

struct ProfileReport {
  std::vector<double> levels;
  std::vector<double> mu;
  std::vector<double> pair_exponent;  // per consecutive pair with both measures positive
  double fitted_gamma = 0.0;          // slope of the pairwise fit, NaN if fewer than two pairs
  double predicted_gamma = 0.0;       // gamma_abar from the exponent report
  double linf_estimate = 0.0;         // max |U|
  double first_zero_level = 0.0;      // smallest level with mu = 0, NaN if none
};

/// Throws Error{DegenerateProfile} when mu vanishes at the smallest level.
ProfileReport stampacchia_profile(const GridFunction& U, const std::vector<double>& levels,
                                  const ExponentReport& report, double m);

std::string solve_csv_header(int N);
std::string solve_csv_row(const SolveReport& report);
void write_sequence_csv(std::ostream& out, const SequenceReport& seq, int N);

}  // namespace aniso
