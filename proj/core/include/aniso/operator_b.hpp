#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aniso/grid.hpp"
#include "aniso/problem.hpp"

namespace aniso {

/// Bounded nonlinear map u -> psi(u), applied pointwise.
struct PsiMap {
  enum class Kind {
    None,
    Saturating,     // c u / (1 + |u|)
    Cap,            // c T_M(u) / M
    SaturatingAbs,  // c |u| / (1 + |u|), nonnegative
  };
  Kind kind = Kind::None;
  double c = 0.0;
  double cap = 1.0;  // M for Kind::Cap

  double operator()(double u) const;
  GridFunction apply(const GridFunction& u) const;
  /// sup_u |psi(u)|.
  double bound() const;
  bool nonnegative() const;
  std::string describe() const;
};

/// <B u, v> = int F v + <g, v> + int psi(u) v (+ int f v), with g in divergence form:
/// <g, v> = sum_j int G_j d_j v.
struct OperatorBSpec {
  GridFunction F;
  std::vector<EdgeField> G;  // empty, or one field per axis
  PsiMap psi;
  std::optional<GridFunction> f_datum;
  double tau = 0.0;  // integrability tag of f_datum

  /// G != 0, i.e. the growth bound needs a0 > 0.
  bool a0_flag() const;
  /// B(0) is not the zero functional.
  bool nontrivial() const;
};

/// Zero operator on `grid`.
OperatorBSpec zero_operator(const Grid& grid);

/// Throws Error{Validation} when a Case-2 problem is paired with data that can produce
/// negative forcing (F < 0, G != 0, psi of indefinite sign, f < 0).
void validate_case2(const OperatorBSpec& bspec);

double eval_B(const GridFunction& u, const GridFunction& v, const OperatorBSpec& bspec);

/// Node field F + psi(u) + f and edge fields G representing B(u) in the weak form.
struct RhsData {
  GridFunction node;
  std::vector<EdgeField> edges;
};

RhsData rhs_field(const GridFunction& u, const OperatorBSpec& bspec);
double pair_rhs(const RhsData& rhs, const GridFunction& v);

/// Weak-form load vector (<g, e_i>)_i of the divergence-form part.
std::vector<double> divergence_load(const Grid& grid, const std::vector<EdgeField>& G);

/// Pointwise T_n(f).
GridFunction truncate_datum(const GridFunction& f, std::int64_t n);

struct EmpiricalP1 {
  double C_emp = 0.0;
  double b_used = 0.0;
  double s_used = 0.0;
  double max_violation = 0.0;  // max(0, ratio - c_bound) over samples
  bool trivial = false;        // F = G = psi = f = 0
};

/// Smallest c with |B(u,v)| <= c (1 + ||u||_W^b)(a0 ||v||_W + ||v||_{L^s}) over random pairs.
EmpiricalP1 check_P1(const OperatorBSpec& bspec, const ProblemSpec& spec, int samples,
                     std::uint64_t seed, double c_bound);

/// Hoelder bound ||F||_{s'} + ||f||_{s'} + sup|psi| |Omega|^{1/s'} + max_j ||G_j||_{p_j'} / a0 on the
/// constant of the growth bound; infinite when G != 0 and a0 = 0.
double holder_bound_P1(const OperatorBSpec& bspec, const ProblemSpec& spec);

}  // namespace aniso
