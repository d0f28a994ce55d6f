#pragma once

#include <cstdint>
#include <span>

#include "aniso/problem.hpp"

namespace aniso {

/// Regularization index n and exponent h of the bounded approximation H_{j,n}.
struct RegularizationParams {
  std::int64_t n = 1;
  double h_exp = 2.0;
};

/// max_j p_j' * max_j max(theta_j, q_j) + 2, unless the spec overrides it.
double default_h_exp(const ProblemSpec& spec);
RegularizationParams make_regularization(const ProblemSpec& spec, std::int64_t n);

struct PointState {
  double u = 0.0;
  std::span<const double> grad;
};

/// |t|^{e-2} t, continuous extension 0 at t = 0.
double signed_power(double t, double e);

/// (sum_j a_j |d_j u|^{p_j} + 1) |u|^{m-2} u.
double eval_phi(const PointState& state, const ProblemSpec& spec);

/// (1/u) sum_j |u|^{theta_j} |d_j u|^{q_j}; 0 on {u = 0}.
double eval_psi(const PointState& state, const ProblemSpec& spec);

/// t1^{theta-1} |t2|^q (1 + t1^{(theta-1)/h} |t2|^{q/h} / n)^{-h} for t1 > 0.
double eval_H_base(double theta, double q, const RegularizationParams& params, double t1, double t2);

/// H_{j,n} with the case-dependent extension to t1 <= 0 (odd in Case 1, even for J1 in Case 2).
/// Throws Error{Domain} for t1 <= 0 when j belongs to J2.
double eval_H(int j, double t1, double t2, const RegularizationParams& params, const ProblemSpec& spec);

/// sum_{J1} H_{j,n}(u, d_j u) + sum_{J2} H_{j,n}(|u| + 1/n, d_j u); bounded by N n^h.
double eval_psi_n(const PointState& state, const RegularizationParams& params, const ProblemSpec& spec);

/// Level-set toolkit.
double truncate(double s, double k);   // T_k
double remainder(double s, double k);  // G_k = s - T_k(s)
double cutoff(double s, double sigma); // Z_sigma on [0, inf)

/// phi_lambda(s) = s exp(lambda s^2) together with the coupling abar k^{m-1} it is tested against.
class ExpTestFunction {
 public:
  /// lambda = (k^{m-1} abar / 2)^2.
  static ExpTestFunction for_level(double k, double m, double abar);
  ExpTestFunction(double lambda, double coupling);

  double lambda() const { return lambda_; }
  double coupling() const { return coupling_; }

  double value(double s) const;
  double derivative(double s) const;
  /// phi'(s) - coupling * phi(s), computed in factored form so it stays finite.
  double margin(double s) const;
  /// True when lambda s^2 exceeds the exponent clamp.
  bool saturated(double s) const;

  static constexpr double kExponentClamp = 700.0;

 private:
  double exponent(double s) const;

  double lambda_;
  double coupling_;
};

}  // namespace aniso
