#include "aniso/problem.hpp"

#include <cmath>
#include <fmt/format.h>

#include "aniso/error.hpp"

namespace aniso {

std::string to_string(CaseId c) { return c == CaseId::Case1 ? "Case1" : "Case2"; }

CaseId ProblemSpec::case_from_theta(std::span<const double> theta) {
  for (double t : theta) {
    if (t < 1.0) return CaseId::Case2;
  }
  return CaseId::Case1;
}

ProblemSpec make_problem(std::vector<double> p, std::vector<double> q, std::vector<double> theta,
                         std::vector<double> a, double m) {
  ProblemSpec spec;
  spec.N = static_cast<int>(p.size());
  spec.p = std::move(p);
  spec.q = std::move(q);
  spec.theta = std::move(theta);
  spec.a = std::move(a);
  spec.m = m;
  spec.case_id = ProblemSpec::case_from_theta(spec.theta);
  return spec;
}

double harmonic_mean(std::span<const double> p) {
  double inv = 0.0;
  for (double pj : p) inv += 1.0 / pj;
  return static_cast<double>(p.size()) / inv;
}

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& why) {
  throw Error(ErrorKind::Validation, fmt::format("problem.{}: {}", field, why));
}

void check_size(const std::vector<double>& v, int N, const char* name) {
  if (static_cast<int>(v.size()) != N) {
    fail(name, fmt::format("expected {} entries, got {}", N, v.size()));
  }
}

}  // namespace

void validate(const ProblemSpec& spec, ValidationOptions options) {
  if (spec.N < 1) fail("N", "must be >= 1");
  if (options.require_subcritical && spec.N < 2) fail("N", "must be >= 2");
  check_size(spec.p, spec.N, "p");
  check_size(spec.q, spec.N, "q");
  check_size(spec.theta, spec.N, "theta");
  check_size(spec.a, spec.N, "a");
  for (int j = 0; j < spec.N; ++j) {
    const double pj = spec.p[j];
    const double qj = spec.q[j];
    if (!(pj > 1.0) || !std::isfinite(pj)) fail(fmt::format("p[{}]", j + 1), "must be > 1");
    if (!(qj >= 0.0)) fail(fmt::format("q[{}]", j + 1), "must be >= 0");
    if (!(qj < pj)) fail(fmt::format("q[{}]", j + 1), "must be < p_j");
    if (!(spec.theta[j] > 0.0)) fail(fmt::format("theta[{}]", j + 1), "must be > 0");
    if (!(spec.a[j] >= 0.0)) fail(fmt::format("a[{}]", j + 1), "must be >= 0");
  }
  if (!(spec.m > 1.0)) fail("m", "must be > 1");
  if (!(spec.a0 >= 0.0)) fail("a0", "must be >= 0");
  if (spec.case_id != ProblemSpec::case_from_theta(spec.theta)) {
    fail("case", "Case1 requires every theta_j >= 1, Case2 requires some theta_j < 1");
  }
  if (spec.h_exp && !(*spec.h_exp > 1.0)) fail("h", "must be > 1");

  if (!options.require_subcritical) return;

  const double pm = harmonic_mean(spec.p);
  if (!(pm < spec.N)) {
    throw Error(ErrorKind::Supercritical,
                fmt::format("harmonic mean p = {} is not below N = {}", pm, spec.N));
  }
  const double p_star = spec.N * pm / (spec.N - pm);
  const double p_conj = pm / (pm - 1.0);
  const double b_max = spec.a0 > 0.0 ? spec.p[0] - 1.0 : spec.p[0] / p_conj;
  if (!(spec.b_exp > 0.0 && spec.b_exp < b_max)) {
    fail("b", fmt::format("must lie in (0, {}) for a0 {} 0", b_max, spec.a0 > 0.0 ? ">" : "="));
  }
  if (!(spec.s_exp >= 1.0 && spec.s_exp < p_star)) {
    fail("s", fmt::format("must lie in [1, p* = {})", p_star));
  }
}

}  // namespace aniso
