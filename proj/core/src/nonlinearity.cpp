#include "aniso/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

#include "aniso/error.hpp"

namespace aniso {

double default_h_exp(const ProblemSpec& spec) {
  if (spec.h_exp) return *spec.h_exp;
  double max_conj = 0.0;
  double max_power = 0.0;
  for (int j = 0; j < spec.N; ++j) {
    max_conj = std::max(max_conj, spec.p[j] / (spec.p[j] - 1.0));
    max_power = std::max({max_power, spec.theta[j], spec.q[j]});
  }
  return max_conj * max_power + 2.0;
}

RegularizationParams make_regularization(const ProblemSpec& spec, std::int64_t n) {
  return {n, default_h_exp(spec)};
}

double signed_power(double t, double e) {
  if (t == 0.0) return 0.0;
  return std::copysign(std::pow(std::abs(t), e - 1.0), t);
}

double eval_phi(const PointState& state, const ProblemSpec& spec) {
  double coeff = 1.0;
  for (int j = 0; j < spec.N; ++j) {
    if (spec.a[j] != 0.0) coeff += spec.a[j] * std::pow(std::abs(state.grad[j]), spec.p[j]);
  }
  return coeff * signed_power(state.u, spec.m);
}

double eval_psi(const PointState& state, const ProblemSpec& spec) {
  if (state.u == 0.0) return 0.0;
  const double au = std::abs(state.u);
  double sum = 0.0;
  for (int j = 0; j < spec.N; ++j) {
    sum += std::pow(au, spec.theta[j]) * std::pow(std::abs(state.grad[j]), spec.q[j]);
  }
  return sum / state.u;
}

double eval_H_base(double theta, double q, const RegularizationParams& params, double t1, double t2) {
  const double at2 = std::abs(t2);
  if (q > 0.0 && at2 == 0.0) return 0.0;
  // a = t1^{theta-1} |t2|^q; H = a (1 + a^{1/h}/n)^{-h}, evaluated in log form.
  const double log_a = (theta - 1.0) * std::log(t1) + (q > 0.0 ? q * std::log(at2) : 0.0);
  const double h = params.h_exp;
  const double root = std::exp(log_a / h);
  return std::exp(log_a - h * std::log1p(root / static_cast<double>(params.n)));
}

double eval_H(int j, double t1, double t2, const RegularizationParams& params, const ProblemSpec& spec) {
  const double theta = spec.theta[j];
  const double q = spec.q[j];
  if (t1 > 0.0) return eval_H_base(theta, q, params, t1, t2);
  if (theta < 1.0) {
    throw Error(ErrorKind::Domain,
                fmt::format("H_{{{},n}} needs t1 > 0 for theta < 1 (got {})", j + 1, t1));
  }
  if (t1 == 0.0) return 0.0;
  const double mirrored = eval_H_base(theta, q, params, -t1, t2);
  return spec.case_id == CaseId::Case1 ? -mirrored : mirrored;
}

double eval_psi_n(const PointState& state, const RegularizationParams& params, const ProblemSpec& spec) {
  const double shift = 1.0 / static_cast<double>(params.n);
  double sum = 0.0;
  for (int j = 0; j < spec.N; ++j) {
    const double t1 = spec.theta[j] >= 1.0 ? state.u : std::abs(state.u) + shift;
    sum += eval_H(j, t1, state.grad[j], params, spec);
  }
  return sum;
}

double truncate(double s, double k) {
  if (!(k > 0.0)) throw Error(ErrorKind::InvalidLevel, fmt::format("truncation height {} must be > 0", k));
  return std::clamp(s, -k, k);
}

double remainder(double s, double k) { return s - truncate(s, k); }

double cutoff(double s, double sigma) {
  if (!(sigma > 0.0)) throw Error(ErrorKind::InvalidLevel, fmt::format("cutoff width {} must be > 0", sigma));
  if (s < 0.0) throw Error(ErrorKind::Domain, "cutoff is defined on [0, inf)");
  if (s <= sigma) return 1.0;
  if (s >= 2.0 * sigma) return 0.0;
  return 2.0 - s / sigma;
}

ExpTestFunction ExpTestFunction::for_level(double k, double m, double abar) {
  if (!(k > 0.0)) throw Error(ErrorKind::InvalidLevel, fmt::format("level {} must be > 0", k));
  const double coupling = abar * std::pow(k, m - 1.0);
  return {coupling * coupling / 4.0, coupling};
}

ExpTestFunction::ExpTestFunction(double lambda, double coupling) : lambda_(lambda), coupling_(coupling) {}

double ExpTestFunction::exponent(double s) const { return std::min(lambda_ * s * s, kExponentClamp); }

bool ExpTestFunction::saturated(double s) const { return lambda_ * s * s > kExponentClamp; }

double ExpTestFunction::value(double s) const { return s * std::exp(exponent(s)); }

// e^{lambda s^2} g with the polynomial factor folded into the clamp, so saturated values stay finite
static double clamped_product(double quad, double g) {
  if (g <= 0.0) return std::exp(std::min(quad, ExpTestFunction::kExponentClamp)) * g;
  return std::exp(std::min(quad + std::log(g), ExpTestFunction::kExponentClamp));
}

double ExpTestFunction::derivative(double s) const {
  return clamped_product(lambda_ * s * s, 1.0 + 2.0 * lambda_ * s * s);
}

double ExpTestFunction::margin(double s) const {
  return clamped_product(lambda_ * s * s, 1.0 + 2.0 * lambda_ * s * s - coupling_ * s);
}

}  // namespace aniso
