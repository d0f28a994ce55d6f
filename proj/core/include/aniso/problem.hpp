#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace aniso {

/// Case 1: every theta_j >= 1. Case 2: some theta_j < 1 (nonnegative solutions sought).
enum class CaseId { Case1, Case2 };

std::string to_string(CaseId c);

/// Parameters of the continuous problem
///   A u + Phi(u, grad u) = Psi(u, grad u) + B u  in Omega,  u = 0 on the boundary,
/// with Phi = (sum_j a_j |d_j u|^{p_j} + 1) |u|^{m-2} u and
/// Psi = (1/u) sum_j |u|^{theta_j} |d_j u|^{q_j}.
struct ProblemSpec {
  int N = 2;
  std::vector<double> p;      // anisotropic exponents, each > 1
  std::vector<double> q;      // gradient exponents, 0 <= q_j < p_j
  std::vector<double> theta;  // powers of u in Psi, each > 0
  std::vector<double> a;      // gradient weights in Phi, each >= 0
  double m = 2.0;             // absorption exponent, > 1
  double a0 = 0.0;            // growth-bound constants of B
  double b_exp = 0.5;
  double s_exp = 1.0;
  CaseId case_id = CaseId::Case1;
  bool psi_enabled = true;
  std::optional<double> h_exp;  // regularization exponent; default derived from the data

  static CaseId case_from_theta(std::span<const double> theta);
};

/// Builds a spec with case_id derived from theta.
ProblemSpec make_problem(std::vector<double> p, std::vector<double> q, std::vector<double> theta,
                         std::vector<double> a, double m);

struct ValidationOptions {
  /// Require p < N and the (b, s) ranges that depend on p*. Off for solve-only configurations.
  bool require_subcritical = true;
};

/// Throws Error{Validation} naming the offending field ("problem.p[2]: ...").
void validate(const ProblemSpec& spec, ValidationOptions options = {});

double harmonic_mean(std::span<const double> p);

}  // namespace aniso
