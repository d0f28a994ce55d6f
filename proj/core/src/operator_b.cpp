#include "aniso/operator_b.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <fmt/format.h>
#include <random>

#include "aniso/error.hpp"
#include "aniso/nonlinearity.hpp"

namespace aniso {

double PsiMap::operator()(double u) const {
  switch (kind) {
    case Kind::None: return 0.0;
    case Kind::Saturating: return c * u / (1.0 + std::abs(u));
    case Kind::Cap: return c * std::clamp(u, -cap, cap) / cap;
    case Kind::SaturatingAbs: return c * std::abs(u) / (1.0 + std::abs(u));
  }
  return 0.0;
}

GridFunction PsiMap::apply(const GridFunction& u) const {
  GridFunction out(u.grid());
  if (kind == Kind::None) return out;
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = (*this)(u[i]);
  return out;
}

double PsiMap::bound() const { return kind == Kind::None ? 0.0 : std::abs(c); }

bool PsiMap::nonnegative() const {
  return kind == Kind::None || c == 0.0 || (kind == Kind::SaturatingAbs && c > 0.0);
}

std::string PsiMap::describe() const {
  switch (kind) {
    case Kind::None: return "none";
    case Kind::Saturating: return fmt::format("saturating {}", c);
    case Kind::Cap: return fmt::format("cap {} {}", c, cap);
    case Kind::SaturatingAbs: return fmt::format("saturating_abs {}", c);
  }
  return "none";
}

bool OperatorBSpec::a0_flag() const {
  for (const auto& g : G) {
    for (double x : g.values) {
      if (x != 0.0) return true;
    }
  }
  return false;
}

bool OperatorBSpec::nontrivial() const {
  if (F.max_abs() > 0.0 || a0_flag()) return true;
  if (f_datum && f_datum->max_abs() > 0.0) return true;
  return psi(0.0) != 0.0;
}

OperatorBSpec zero_operator(const Grid& grid) {
  OperatorBSpec b;
  b.F = GridFunction(grid);
  return b;
}

void validate_case2(const OperatorBSpec& bspec) {
  if (bspec.F.min() < 0.0) throw Error(ErrorKind::Validation, "operator_b.F: Case 2 requires F >= 0");
  if (bspec.a0_flag()) throw Error(ErrorKind::Validation, "operator_b.G: Case 2 requires G = 0");
  if (!bspec.psi.nonnegative()) {
    throw Error(ErrorKind::Validation, "operator_b.psi: Case 2 requires psi(u) >= 0 for every u");
  }
  if (bspec.f_datum && bspec.f_datum->min() < 0.0) {
    throw Error(ErrorKind::Validation, "operator_b.f: Case 2 requires f >= 0");
  }
}

namespace {

void require_grid(const GridFunction& a, const Grid& g) {
  if (!(a.grid() == g)) throw Error(ErrorKind::GridMismatch, "operator data and argument live on different grids");
}

}  // namespace

double eval_B(const GridFunction& u, const GridFunction& v, const OperatorBSpec& bspec) {
  const Grid& g = v.grid();
  require_grid(u, g);
  require_grid(bspec.F, g);
  double node_sum = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    double load = bspec.F[i] + bspec.psi(u[i]);
    if (bspec.f_datum) load += (*bspec.f_datum)[i];
    node_sum += load * v[i];
  }
  double edge_sum = 0.0;
  for (const auto& G : bspec.G) {
    const EdgeField dv = partial(v, G.axis);
    for (std::size_t e = 0; e < dv.values.size(); ++e) edge_sum += G.values[e] * dv.values[e];
  }
  return g.cell_volume() * (node_sum + edge_sum);
}

RhsData rhs_field(const GridFunction& u, const OperatorBSpec& bspec) {
  require_grid(bspec.F, u.grid());
  RhsData rhs{bspec.psi.apply(u), bspec.G};
  for (std::size_t i = 0; i < u.size(); ++i) {
    rhs.node[i] += bspec.F[i];
    if (bspec.f_datum) rhs.node[i] += (*bspec.f_datum)[i];
  }
  return rhs;
}

double pair_rhs(const RhsData& rhs, const GridFunction& v) {
  const Grid& g = v.grid();
  require_grid(rhs.node, g);
  const auto load = divergence_load(g, rhs.edges);
  double sum = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) sum += g.cell_volume() * rhs.node[i] * v[i] + load[i] * v[i];
  return sum;
}

std::vector<double> divergence_load(const Grid& grid, const std::vector<EdgeField>& G) {
  std::vector<double> load(grid.size(), 0.0);
  for (const auto& field : G) {
    const int j = field.axis;
    const std::size_t step = edge_stride(grid, j, j);
    const double w = grid.cell_volume() / grid.spacing(j);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const std::size_t lo = low_edge(grid, i, j);
      load[i] += w * (field.values[lo] - field.values[lo + step]);
    }
  }
  return load;
}

GridFunction truncate_datum(const GridFunction& f, std::int64_t n) {
  if (n < 1) throw Error(ErrorKind::InvalidLevel, "datum truncation index must be >= 1");
  GridFunction out(f.grid());
  const double k = static_cast<double>(n);
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = truncate(f[i], k);
  return out;
}

EmpiricalP1 check_P1(const OperatorBSpec& bspec, const ProblemSpec& spec, int samples,
                     std::uint64_t seed, double c_bound) {
  EmpiricalP1 out;
  out.b_used = spec.b_exp;
  out.s_used = spec.s_exp;
  const bool psi_zero = bspec.psi.kind == PsiMap::Kind::None || bspec.psi.c == 0.0;
  out.trivial = !bspec.nontrivial() && psi_zero;

  const Grid& g = bspec.F.grid();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> log_scale(-3.0, 3.0);
  auto random_function = [&] {
    GridFunction w(g);
    const double scale = std::pow(10.0, log_scale(rng));
    for (std::size_t i = 0; i < g.size(); ++i) w[i] = scale * unit(rng);
    return w;
  };
  for (int k = 0; k < samples; ++k) {
    const GridFunction u = random_function();
    const GridFunction v = random_function();
    const double lhs = std::abs(eval_B(u, v, bspec));
    const double growth = 1.0 + std::pow(anisotropic_norm(u, spec.p), spec.b_exp);
    const double test = spec.a0 * anisotropic_norm(v, spec.p) + norm_Ls(v, spec.s_exp);
    const double ratio = lhs / (growth * test);
    out.C_emp = std::max(out.C_emp, ratio);
    out.max_violation = std::max(out.max_violation, ratio - c_bound);
  }
  return out;
}

double holder_bound_P1(const OperatorBSpec& bspec, const ProblemSpec& spec) {
  const Grid& g = bspec.F.grid();
  const double s = spec.s_exp;
  const bool dual_sup = s == 1.0;
  const double s_dual = dual_sup ? 0.0 : s / (s - 1.0);
  auto dual_norm = [&](const GridFunction& w) { return dual_sup ? w.max_abs() : norm_Ls(w, s_dual); };
  double bound = dual_norm(bspec.F);
  if (bspec.f_datum) bound += dual_norm(*bspec.f_datum);
  const double measure = g.cell_volume() * static_cast<double>(g.size());
  bound += bspec.psi.bound() * (dual_sup ? 1.0 : std::pow(measure, 1.0 / s_dual));
  if (!bspec.G.empty()) {
    if (!(spec.a0 > 0.0)) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (const EdgeField& e : bspec.G) {
      const double pj = spec.p[e.axis];
      worst = std::max(worst, norm_Ls(g, e, pj / (pj - 1.0)));
    }
    bound += worst / spec.a0;
  }
  return bound;
}

}  // namespace aniso
