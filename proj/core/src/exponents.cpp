#include "aniso/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>

#include "aniso/error.hpp"
#include "aniso/text.hpp"

namespace aniso {

const char* const kBootstrapNote =
    "bootstrap uses fixed gamma_abar in (0,1); the integrability-dependent exponent that "
    "exceeds 1 for large r is not reproduced";

namespace {

constexpr double kTieTolerance = 1e-12;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool near(double x, double y) { return std::abs(x - y) <= kTieTolerance; }

void note_tie(std::vector<std::string>& warnings, double x, double threshold, const std::string& what) {
  if (near(x, threshold)) {
    warnings.push_back(fmt::format("boundary: {} ({} vs {})", what, num(x), num(threshold)));
  }
}

}  // namespace

BaseExponents compute_base_exponents(const ProblemSpec& spec) {
  if (spec.p.empty()) throw Error(ErrorKind::InvalidExponent, "empty exponent vector");
  for (std::size_t j = 0; j < spec.p.size(); ++j) {
    if (!(spec.p[j] > 1.0)) {
      throw Error(ErrorKind::InvalidExponent, fmt::format("p[{}] = {} must be > 1", j + 1, spec.p[j]));
    }
  }
  BaseExponents base;
  base.p_mean = harmonic_mean(spec.p);
  const double N = static_cast<double>(spec.p.size());
  if (!(base.p_mean < N)) {
    throw Error(ErrorKind::Supercritical,
                fmt::format("harmonic mean p = {} is not below N = {}", num(base.p_mean), spec.p.size()));
  }
  base.p_star = N * base.p_mean / (N - base.p_mean);
  base.p_conj = base.p_mean / (base.p_mean - 1.0);
  base.p_conj_vec.reserve(spec.p.size());
  for (double pj : spec.p) base.p_conj_vec.push_back(pj / (pj - 1.0));
  base.abar = spec.a.empty() ? 0.0 : *std::max_element(spec.a.begin(), spec.a.end());
  return base;
}

std::optional<double> threshold_mj(const ProblemSpec& spec, double p_mean, int j) {
  const double qj = spec.q[j];
  if (!(qj > 0.0)) return std::nullopt;
  const double pj = spec.p[j];
  return (pj - qj) / qj * (spec.theta[j] * pj / (pj - qj) - p_mean);
}

double threshold_na(const ProblemSpec& spec, int j) {
  return spec.theta[j] * spec.p[j] / (spec.p[j] - spec.q[j]);
}

IndexSets classify_indices(const ProblemSpec& spec, const BaseExponents& base) {
  IndexSets sets;
  for (int j = 0; j < spec.N; ++j) {
    (spec.theta[j] >= 1.0 ? sets.J1 : sets.J2).push_back(j);

    if (spec.a[j] * spec.q[j] == 0.0) {
      (threshold_na(spec, j) >= base.p_mean ? sets.Na : sets.Nac).push_back(j);
      continue;
    }
    const double mj = *threshold_mj(spec, base.p_mean, j);
    const bool in_pa = mj > 1.0;
    (in_pa ? sets.Pa : sets.Pac).push_back(j);

    const double split = spec.p[j] * spec.theta[j] / spec.q[j];
    if (spec.m >= split) {
      sets.Phat1.push_back(j);
    } else if (!in_pa) {
      sets.Pa2c.push_back(j);
    } else if (spec.theta[j] < base.p_mean) {
      sets.Pa2.push_back(j);
    } else {
      sets.Pa3.push_back(j);
    }
  }
  return sets;
}

ConditionReport check_condition_m(const ProblemSpec& spec, const IndexSets& sets,
                                  const BaseExponents& base) {
  ConditionReport report;
  for (int j : sets.Na) {
    const double t = threshold_na(spec, j);
    report.binding.push_back({j, t, "Na"});
  }
  for (int j : sets.Pa) {
    const double t = std::min(spec.theta[j], *threshold_mj(spec, base.p_mean, j));
    report.binding.push_back({j, t, "Pa"});
  }
  for (const auto& c : report.binding) {
    if (!(spec.m > c.threshold)) report.holds = false;
    note_tie(report.warnings, spec.m, c.threshold, fmt::format("m at {} threshold of j={}", c.family, c.j + 1));
  }
  return report;
}

namespace {

void collect_classification_ties(const ProblemSpec& spec, const BaseExponents& base,
                                 std::vector<std::string>& warnings) {
  for (int j = 0; j < spec.N; ++j) {
    if (spec.a[j] * spec.q[j] == 0.0) {
      note_tie(warnings, threshold_na(spec, j), base.p_mean, fmt::format("Na/Nac split of j={}", j + 1));
      continue;
    }
    note_tie(warnings, *threshold_mj(spec, base.p_mean, j), 1.0, fmt::format("Pa/Pac split of j={}", j + 1));
    note_tie(warnings, spec.m, spec.p[j] * spec.theta[j] / spec.q[j],
             fmt::format("Phat1 split of j={}", j + 1));
    note_tie(warnings, spec.theta[j], base.p_mean, fmt::format("Pa2/Pa3 split of j={}", j + 1));
  }
}

void fill_theta_abar(const ProblemSpec& spec, double abar, ExponentReport& report) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int j = 0; j < spec.N; ++j) {
    const double t = abar == 0.0 ? spec.theta[j] : spec.theta[j] - spec.m * spec.q[j] / spec.p[j];
    lo = std::min(lo, t);
    hi = std::max(hi, t);
  }
  report.theta_abar_low = lo;
  report.theta_abar_high = hi;
}

ExponentReport skeleton(const ProblemSpec& spec, const IndexSets& sets, const BaseExponents& base) {
  ExponentReport report;
  report.case_id = spec.case_id;
  report.m = spec.m;
  report.base = base;
  report.sets = sets;
  report.mj.resize(spec.N);
  report.xi.resize(spec.N);
  report.r.resize(spec.N);
  report.R.resize(spec.N);
  for (int j = 0; j < spec.N; ++j) report.mj[j] = threshold_mj(spec, base.p_mean, j);
  report.condition = check_condition_m(spec, sets, base);
  report.r_mode = (base.abar == 0.0 && spec.case_id == CaseId::Case1) ? RMode::Lm : RMode::Linfty;
  report.gamma0 = kNaN;
  report.gamma_abar = kNaN;
  report.theta_abar_low = kNaN;
  report.theta_abar_high = kNaN;
  report.warnings = report.condition.warnings;
  collect_classification_ties(spec, base, report.warnings);
  return report;
}

void fill_derived(const ProblemSpec& spec, ExponentReport& report) {
  const auto& base = report.base;
  const auto& sets = report.sets;
  const double p = base.p_mean;
  const double N = spec.N;
  const double m = spec.m;

  double gamma0 = 1.0 / spec.s_exp - 1.0 / base.p_star;
  for (int j : sets.Na) {
    const double inv_xi = 1.0 - spec.theta[j] / m - spec.q[j] / spec.p[j];
    report.xi[j] = 1.0 / inv_xi;
    gamma0 = std::min(gamma0, inv_xi);
  }
  for (int j : sets.Nac) {
    report.r[j] = 1.0 / (1.0 - spec.theta[j] / N * (N / p - 1.0 / spec.p[j]));
    gamma0 = std::min(gamma0, 1.0 - spec.theta[j] / p - spec.q[j] / spec.p[j]);
  }

  double gamma_abar = gamma0;
  for (int j : sets.Phat1) gamma_abar = std::min(gamma_abar, 1.0 - spec.q[j] / spec.p[j]);
  auto mixed = sets.Pa2;
  mixed.insert(mixed.end(), sets.Pa2c.begin(), sets.Pa2c.end());
  for (int j : mixed) {
    const double pj = spec.p[j];
    const double qj = spec.q[j];
    report.R[j] = 1.0 / (1.0 - qj / pj - (spec.theta[j] - m * qj / pj) * (1.0 / p - 1.0 / (N * pj)));
    gamma_abar = std::min(gamma_abar, qj * (m - *report.mj[j]) / (pj * p));
  }
  for (int j : sets.Pa3) gamma_abar = std::min(gamma_abar, 1.0 - spec.theta[j] / m);

  report.gamma0 = gamma0;
  report.gamma_abar = gamma_abar;
  fill_theta_abar(spec, base.abar, report);
}

}  // namespace

ExponentReport derived_exponents(const ProblemSpec& spec, const IndexSets& sets) {
  const BaseExponents base = compute_base_exponents(spec);
  ExponentReport report = skeleton(spec, sets, base);
  if (!report.condition.holds) {
    throw Error(ErrorKind::ConditionMViolated, fmt::format("m = {} does not satisfy condition (m)", num(spec.m)));
  }
  fill_derived(spec, report);
  return report;
}

ExponentReport analyze(const ProblemSpec& spec) {
  const BaseExponents base = compute_base_exponents(spec);
  const IndexSets sets = classify_indices(spec, base);
  ExponentReport report = skeleton(spec, sets, base);
  if (report.condition.holds) fill_derived(spec, report);
  return report;
}

std::vector<double> bootstrap_sequence(double m, double gamma, int cap) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw Error(ErrorKind::InvalidGamma, fmt::format("gamma = {} must lie in (0,1)", num(gamma)));
  }
  if (!(m > 1.0)) throw Error(ErrorKind::InvalidExponent, "bootstrap needs m > 1");
  if (cap < 1) throw Error(ErrorKind::InvalidExponent, "bootstrap cap must be >= 1");
  std::vector<double> seq{m};
  for (int k = 0; k < cap; ++k) seq.push_back(2.0 * seq.back() / (2.0 - gamma));
  return seq;
}

std::string format_indices(const std::vector<int>& idx) {
  std::vector<std::string> parts;
  for (int j : idx) parts.push_back(std::to_string(j + 1));
  return join(parts, ",");
}

namespace {

std::string optional_vec(const std::vector<std::optional<double>>& v) {
  std::vector<std::string> parts;
  for (const auto& x : v) parts.push_back(x ? num(*x) : "-");
  return join(parts, ";");
}

std::string binding_list(const ConditionReport& c) {
  std::vector<std::string> parts;
  for (const auto& b : c.binding) parts.push_back(fmt::format("{}:{}>{}", b.family, b.j + 1, num(b.threshold)));
  return join(parts, ";");
}

}  // namespace

std::string to_key_value(const ExponentReport& r) {
  std::string out;
  auto kv = [&out](const std::string& k, const std::string& v) { out += k + "=" + v + "\n"; };
  kv("case", to_string(r.case_id));
  kv("m", num(r.m));
  kv("p_mean", num(r.base.p_mean));
  kv("p_star", num(r.base.p_star));
  kv("p_conj", num(r.base.p_conj));
  kv("p_conj_vec", join_numbers(r.base.p_conj_vec, ";"));
  kv("abar", num(r.base.abar));
  kv("Na", format_indices(r.sets.Na));
  kv("Nac", format_indices(r.sets.Nac));
  kv("Pa", format_indices(r.sets.Pa));
  kv("Pac", format_indices(r.sets.Pac));
  kv("J1", format_indices(r.sets.J1));
  kv("J2", format_indices(r.sets.J2));
  kv("Phat1", format_indices(r.sets.Phat1));
  kv("Pa2", format_indices(r.sets.Pa2));
  kv("Pa3", format_indices(r.sets.Pa3));
  kv("Pa2c", format_indices(r.sets.Pa2c));
  kv("m_j", optional_vec(r.mj));
  kv("xi", optional_vec(r.xi));
  kv("r", optional_vec(r.r));
  kv("R", optional_vec(r.R));
  kv("gamma0", num(r.gamma0));
  kv("gamma_abar", num(r.gamma_abar));
  kv("theta_abar_low", num(r.theta_abar_low));
  kv("theta_abar_high", num(r.theta_abar_high));
  kv("r_mode", r.r_mode == RMode::Lm ? "Lm" : "Linfty");
  kv("condition_m", r.condition.holds ? "true" : "false");
  kv("binding", binding_list(r.condition));
  kv("warnings", join(r.warnings, ";"));
  kv("bootstrap_note", kBootstrapNote);
  return out;
}

std::string exponent_csv_header() {
  return "case,m,p_mean,p_star,p_conj,abar,Na,Nac,Pa,Pac,J1,J2,Phat1,Pa2,Pa3,Pa2c,m_j,xi,r,R,"
         "gamma0,gamma_abar,theta_abar_low,theta_abar_high,r_mode,condition_m,binding";
}

std::string exponent_csv_row(const ExponentReport& r) {
  auto quoted = [](const std::string& s) { return "\"" + s + "\""; };
  std::vector<std::string> cells{
      to_string(r.case_id),
      num(r.m),
      num(r.base.p_mean),
      num(r.base.p_star),
      num(r.base.p_conj),
      num(r.base.abar),
      quoted(format_indices(r.sets.Na)),
      quoted(format_indices(r.sets.Nac)),
      quoted(format_indices(r.sets.Pa)),
      quoted(format_indices(r.sets.Pac)),
      quoted(format_indices(r.sets.J1)),
      quoted(format_indices(r.sets.J2)),
      quoted(format_indices(r.sets.Phat1)),
      quoted(format_indices(r.sets.Pa2)),
      quoted(format_indices(r.sets.Pa3)),
      quoted(format_indices(r.sets.Pa2c)),
      quoted(optional_vec(r.mj)),
      quoted(optional_vec(r.xi)),
      quoted(optional_vec(r.r)),
      quoted(optional_vec(r.R)),
      num(r.gamma0),
      num(r.gamma_abar),
      num(r.theta_abar_low),
      num(r.theta_abar_high),
      r.r_mode == RMode::Lm ? "Lm" : "Linfty",
      r.condition.holds ? "true" : "false",
      quoted(binding_list(r.condition)),
  };
  return join(cells, ",");
}

}  // namespace aniso
