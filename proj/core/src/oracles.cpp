#include "aniso/oracles.hpp"

#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <numbers>

#include "aniso/text.hpp"

namespace aniso::oracle {

BruteForceClassification brute_force_classify(const ProblemSpec& spec) {
  const int N = spec.N;
  double inv_sum = 0.0;
  for (int j = 0; j < N; ++j) inv_sum += 1.0 / spec.p[j];
  const double pm = N / inv_sum;

  BruteForceClassification out;
  out.family.assign(N, Family::Unassigned);
  out.sub.assign(N, SubFamily::None);
  double na_max = -std::numeric_limits<double>::infinity();
  bool pa_ok = true;

  for (int j = 0; j < N; ++j) {
    const double pj = spec.p[j], qj = spec.q[j], tj = spec.theta[j], aj = spec.a[j];
    const double ratio = tj * pj / (pj - qj);
    const double mj = qj > 0.0 ? ((pj - qj) / qj) * (ratio - pm) : std::numeric_limits<double>::quiet_NaN();

    const bool in_na = aj * qj == 0.0 && ratio >= pm;
    const bool in_nac = aj * qj == 0.0 && ratio < pm;
    const bool in_pa = aj * qj > 0.0 && mj > 1.0;
    const bool in_pac = aj * qj > 0.0 && mj <= 1.0;
    const int hits = in_na + in_nac + in_pa + in_pac;
    if (hits > 1) {
      out.family[j] = Family::Ambiguous;
    } else if (in_na) {
      out.family[j] = Family::Na;
    } else if (in_nac) {
      out.family[j] = Family::Nac;
    } else if (in_pa) {
      out.family[j] = Family::Pa;
    } else if (in_pac) {
      out.family[j] = Family::Pac;
    }

    if (in_pa || in_pac) {
      const double split = pj * tj / qj;
      const bool s1 = spec.m >= split;
      const bool s2 = in_pa && tj < pm && spec.m < split;
      const bool s3 = in_pa && tj >= pm && spec.m < split;
      const bool s4 = in_pac && spec.m < split;
      const int sub_hits = s1 + s2 + s3 + s4;
      if (sub_hits != 1) {
        out.sub[j] = SubFamily::Ambiguous;
      } else {
        out.sub[j] = s1 ? SubFamily::Phat1 : s2 ? SubFamily::Pa2 : s3 ? SubFamily::Pa3 : SubFamily::Pa2c;
      }
    }

    if (in_na && ratio > na_max) na_max = ratio;
    if (in_pa) {
      const double lower = tj < mj ? tj : mj;
      if (!(spec.m > lower)) pa_ok = false;
    }
  }
  out.condition_m = spec.m > na_max && pa_ok;
  return out;
}

namespace {

bool contains(const std::vector<int>& v, int j) {
  for (int x : v) {
    if (x == j) return true;
  }
  return false;
}

}  // namespace

bool classification_agrees(const ProblemSpec& spec, std::string* diagnostic) {
  const auto brute = brute_force_classify(spec);
  const BaseExponents base = compute_base_exponents(spec);
  const IndexSets sets = classify_indices(spec, base);
  const ConditionReport cond = check_condition_m(spec, sets, base);

  auto report = [&](const std::string& what) {
    if (diagnostic) *diagnostic = what;
    return false;
  };
  for (int j = 0; j < spec.N; ++j) {
    Family f = Family::Unassigned;
    const int hits = contains(sets.Na, j) + contains(sets.Nac, j) + contains(sets.Pa, j) + contains(sets.Pac, j);
    if (hits > 1) f = Family::Ambiguous;
    else if (contains(sets.Na, j)) f = Family::Na;
    else if (contains(sets.Nac, j)) f = Family::Nac;
    else if (contains(sets.Pa, j)) f = Family::Pa;
    else if (contains(sets.Pac, j)) f = Family::Pac;
    if (f != brute.family[j] || f == Family::Unassigned || f == Family::Ambiguous) {
      return report(fmt::format("family mismatch at j={}", j + 1));
    }

    SubFamily s = SubFamily::None;
    const int sub_hits =
        contains(sets.Phat1, j) + contains(sets.Pa2, j) + contains(sets.Pa3, j) + contains(sets.Pa2c, j);
    if (sub_hits > 1) s = SubFamily::Ambiguous;
    else if (contains(sets.Phat1, j)) s = SubFamily::Phat1;
    else if (contains(sets.Pa2, j)) s = SubFamily::Pa2;
    else if (contains(sets.Pa3, j)) s = SubFamily::Pa3;
    else if (contains(sets.Pa2c, j)) s = SubFamily::Pa2c;
    if (s != brute.sub[j] || s == SubFamily::Ambiguous) {
      return report(fmt::format("sub-family mismatch at j={}", j + 1));
    }
    if (contains(sets.J1, j) != (spec.theta[j] >= 1.0) || contains(sets.J2, j) != (spec.theta[j] < 1.0)) {
      return report(fmt::format("J1/J2 mismatch at j={}", j + 1));
    }
  }
  if (cond.holds != brute.condition_m) return report("condition (m) verdict mismatch");
  return true;
}

ProblemSpec random_admissible_spec(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dim(2, 4);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (;;) {
    const int N = dim(rng);
    std::vector<double> p(N), q(N), theta(N), a(N);
    for (int j = 0; j < N; ++j) {
      p[j] = 1.05 + 3.0 * unit(rng);
      const double u = unit(rng);
      q[j] = u < 0.15 ? 0.0 : 0.98 * p[j] * unit(rng);
      theta[j] = 0.05 + 4.0 * unit(rng);
      a[j] = unit(rng) < 0.35 ? 0.0 : 2.0 * unit(rng);
    }
    double inv = 0.0;
    for (double pj : p) inv += 1.0 / pj;
    const double pm = N / inv;
    if (!(pm < N - 1e-3)) continue;
    const double m = 1.01 + 12.0 * unit(rng);
    ProblemSpec spec = make_problem(p, q, theta, a, m);
    spec.a0 = unit(rng) < 0.5 ? 0.0 : 1.0;
    const double p_star = N * pm / (N - pm);
    const double p_conj = pm / (pm - 1.0);
    const double b_max = spec.a0 > 0.0 ? p[0] - 1.0 : p[0] / p_conj;
    spec.b_exp = b_max * (0.05 + 0.9 * unit(rng));
    spec.s_exp = 1.0 + (p_star - 1.0) * 0.95 * unit(rng);
    return spec;
  }
}

std::vector<std::string> side_inequality_violations(const ProblemSpec& spec, const ExponentReport& r) {
  std::vector<std::string> bad;
  const double m = spec.m;
  const double N = spec.N;
  auto fail = [&](const char* what, int j, double lhs, double rhs) {
    bad.push_back(fmt::format("{} at j={}: {} !< {}", what, j + 1, num(lhs), num(rhs)));
  };
  for (int j : r.sets.Na) {
    const double pj = spec.p[j], qj = spec.q[j], tj = spec.theta[j];
    if (!(r.xi[j] && *r.xi[j] > 1.0)) fail("xi_j > 1", j, 1.0, r.xi[j].value_or(0.0));
    const double lhs = qj * m / (m - tj);
    if (!(m > tj && lhs < pj)) fail("q_j m/(m-theta_j) < p_j", j, lhs, pj);
  }
  for (int j : r.sets.Nac) {
    const double pj = spec.p[j], qj = spec.q[j], tj = spec.theta[j];
    const double rj = r.r[j].value_or(-1.0);
    if (!(rj > 0.0)) fail("r_j > 0", j, 0.0, rj);
    const double lhs = rj * (tj / N + qj);
    if (!(lhs < pj)) fail("r_j (theta_j/N + q_j) < p_j", j, lhs, pj);
  }
  auto mixed = r.sets.Pa2;
  mixed.insert(mixed.end(), r.sets.Pa2c.begin(), r.sets.Pa2c.end());
  for (int j : mixed) {
    const double pj = spec.p[j], qj = spec.q[j], tj = spec.theta[j];
    const double Rj = r.R[j].value_or(-1.0);
    if (!(Rj > 0.0)) fail("R_j > 0", j, 0.0, Rj);
    const double lhs = (tj - m * qj / pj) * Rj / N;
    if (!(lhs < pj)) fail("(theta_j - m q_j/p_j) R_j/N < p_j", j, lhs, pj);
  }
  for (int j : r.sets.Pa3) {
    const double pj = spec.p[j], qj = spec.q[j], tj = spec.theta[j];
    const double lhs = (tj * pj - m * qj) / (pj - qj);
    if (!(lhs < m)) fail("(theta_j p_j - m q_j)/(p_j - q_j) < m", j, lhs, m);
  }
  for (int j : r.sets.Phat1) {
    const double pj = spec.p[j], qj = spec.q[j], tj = spec.theta[j];
    const double lhs = (qj * m - pj * tj) / (m - tj);
    if (!(m > tj && lhs < pj)) fail("(q_j m - p_j theta_j)/(m - theta_j) < p_j", j, lhs, pj);
  }
  return bad;
}

GridFunction random_smooth_function(const Grid& grid, std::mt19937_64& rng) {
  constexpr int kModes = 3;
  std::normal_distribution<double> coef(0.0, 1.0);
  const int N = grid.dim();
  int combos = 1;
  for (int d = 0; d < N; ++d) combos *= kModes;
  std::vector<double> c(combos);
  for (double& x : c) x = coef(rng) / 1.0;
  const auto L = grid.extents();
  return GridFunction::sample(grid, [&](std::span<const double> x) {
    double sum = 0.0;
    for (int k = 0; k < combos; ++k) {
      int rest = k;
      double term = c[k];
      for (int d = 0; d < N; ++d) {
        const int mode = rest % kModes + 1;
        rest /= kModes;
        term *= std::sin(mode * std::numbers::pi * x[d] / L[d]) / mode;
      }
      sum += term;
    }
    return sum;
  });
}

namespace {

std::size_t count_recursive(const GridFunction& u, double h, int axis, std::size_t offset) {
  const Grid& g = u.grid();
  std::size_t count = 0;
  for (int k = 0; k < g.nodes()[axis]; ++k) {
    const std::size_t at = offset + static_cast<std::size_t>(k) * g.stride(axis);
    if (axis == 0) {
      if (std::abs(u[at]) >= h) ++count;
    } else {
      count += count_recursive(u, h, axis - 1, at);
    }
  }
  return count;
}

}  // namespace

std::size_t brute_force_level_count(const GridFunction& u, double h) {
  return count_recursive(u, h, u.grid().dim() - 1, 0);
}

}  // namespace aniso::oracle
