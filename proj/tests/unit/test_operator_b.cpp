#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "aniso/config.hpp"
#include "aniso/error.hpp"
#include "aniso/operator_b.hpp"
#include "aniso/oracles.hpp"

using namespace aniso;

namespace {

GridFunction random_function(const Grid& g, std::mt19937_64& rng, double lo = -1, double hi = 1) {
  std::uniform_real_distribution<double> d(lo, hi);
  GridFunction u(g);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = d(rng);
  return u;
}

OperatorBSpec full_operator(const Grid& g, std::mt19937_64& rng) {
  OperatorBSpec b = zero_operator(g);
  b.F = random_function(g, rng);
  b.G = edge_preset(g, "sines:0.7", "G");
  b.psi = PsiMap{PsiMap::Kind::Saturating, 0.8, 1.0};
  b.f_datum = random_function(g, rng);
  return b;
}

}  // namespace

TEST(EvalB, Examples) {
  const Grid g({1.0, 1.0}, {1, 1});
  OperatorBSpec b = zero_operator(g);
  b.F = GridFunction(g, {1.0});
  EXPECT_DOUBLE_EQ(eval_B(GridFunction(g), GridFunction(g, {1.0}), b), 0.25);
  EXPECT_EQ(eval_B(GridFunction(g), GridFunction(g), b), 0.0);
}

TEST(EvalB, LinearInTestFunctionAndData) {
  std::mt19937_64 rng(1);
  const Grid g({1.0, 1.5}, {5, 6});
  const auto b = full_operator(g, rng);
  for (int t = 0; t < 20; ++t) {
    const auto u = random_function(g, rng);
    const auto v = random_function(g, rng);
    const auto w = random_function(g, rng);
    GridFunction vw(g);
    for (std::size_t i = 0; i < g.size(); ++i) vw[i] = 2 * v[i] - w[i];
    EXPECT_NEAR(eval_B(u, vw, b), 2 * eval_B(u, v, b) - eval_B(u, w, b), 1e-12);
    OperatorBSpec only_f = zero_operator(g);
    only_f.F = b.F;
    OperatorBSpec doubled = only_f;
    doubled.F = 2.0 * b.F;
    EXPECT_DOUBLE_EQ(eval_B(u, v, doubled), 2 * eval_B(u, v, only_f));
  }
  const Grid other({1.0, 1.0}, {5, 6});
  EXPECT_THROW(eval_B(GridFunction(other), GridFunction(other), b), Error);
}

TEST(RhsField, MatchesEvalBOnRandomProbes) {
  std::mt19937_64 rng(2);
  const Grid g({1.0, 1.0}, {6, 5});
  const auto b = full_operator(g, rng);
  const auto u = random_function(g, rng);
  const RhsData rhs = rhs_field(u, b);
  for (int t = 0; t < 10; ++t) {
    const auto v = random_function(g, rng);
    const double direct = eval_B(u, v, b);
    EXPECT_NEAR(pair_rhs(rhs, v), direct, 1e-12 * std::max(1.0, std::abs(direct)));
  }
  OperatorBSpec plain = zero_operator(g);
  plain.F = b.F;
  const RhsData r0 = rhs_field(u, plain);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(r0.node[i], b.F[i]);
  EXPECT_TRUE(r0.edges.empty());
}

TEST(Case2, PositivityAndValidation) {
  std::mt19937_64 rng(3);
  const Grid g({1.0, 1.0}, {6, 6});
  OperatorBSpec b = zero_operator(g);
  b.F = random_function(g, rng, 0, 2);
  b.psi = PsiMap{PsiMap::Kind::SaturatingAbs, 0.5, 1.0};
  EXPECT_NO_THROW(validate_case2(b));
  for (int t = 0; t < 50; ++t) {
    const auto v = random_function(g, rng);
    GridFunction v_minus(g);
    for (std::size_t i = 0; i < g.size(); ++i) v_minus[i] = std::max(-v[i], 0.0);
    EXPECT_GE(eval_B(v, v_minus, b), 0.0);
    EXPECT_GE(eval_B(random_function(g, rng, 0, 1), random_function(g, rng, 0, 1), b), 0.0);
  }
  const RhsData r = rhs_field(random_function(g, rng), b);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_GE(r.node[i], 0.0);
  EXPECT_TRUE(r.edges.empty());

  OperatorBSpec odd = b;
  odd.psi = PsiMap{PsiMap::Kind::Saturating, 0.5, 1.0};
  EXPECT_THROW(validate_case2(odd), Error);
  OperatorBSpec with_g = b;
  with_g.G = edge_preset(g, "sines:1", "G");
  EXPECT_THROW(validate_case2(with_g), Error);
  OperatorBSpec negative = b;
  negative.F[3] = -1e-3;
  EXPECT_THROW(validate_case2(negative), Error);
}

TEST(TruncateDatum, Examples) {
  std::mt19937_64 rng(4);
  const Grid g({1.0}, {5});
  GridFunction f(g, {0.5, 5.0, -7.0, 1.0, 2.0});
  const auto f3 = truncate_datum(f, 3);
  EXPECT_EQ(f3[1], 3.0);
  EXPECT_EQ(f3[2], -3.0);
  EXPECT_EQ(f3[0], 0.5);
  const auto f10 = truncate_datum(f, 10);
  for (std::size_t i = 0; i < f.size(); ++i) EXPECT_EQ(f10[i], f[i]);
  for (int t = 0; t < 100; ++t) {
    const auto a = random_function(g, rng, -20, 20);
    const auto b = random_function(g, rng, -20, 20);
    const std::int64_t n = 1 + t % 15;
    const auto ta = truncate_datum(a, n), tb = truncate_datum(b, n);
    double lhs = 0, rhs = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      lhs = std::max(lhs, std::abs(ta[i] - tb[i]));
      rhs = std::max(rhs, std::abs(a[i] - b[i]));
      EXPECT_LE(std::abs(ta[i]), std::min(std::abs(a[i]), static_cast<double>(n)));
    }
    EXPECT_LE(lhs, rhs);
  }
}

TEST(PsiMap, BoundsAndMisuse) {
  const PsiMap sat{PsiMap::Kind::Saturating, 2.0, 1.0};
  EXPECT_DOUBLE_EQ(sat(1.0), 1.0);
  EXPECT_DOUBLE_EQ(sat(-1.0), -1.0);
  EXPECT_DOUBLE_EQ(sat.bound(), 2.0);
  const PsiMap cap{PsiMap::Kind::Cap, 3.0, 2.0};
  EXPECT_DOUBLE_EQ(cap(10.0), 3.0);
  EXPECT_DOUBLE_EQ(cap(1.0), 1.5);
  const PsiMap broken{PsiMap::Kind::Cap, 1.0, 0.0};
  EXPECT_TRUE(std::isnan(broken(0.0)));
}

TEST(CheckP1, TrivialAndBounded) {
  const Grid g({1.0, 1.0}, {6, 6});
  auto spec = make_problem({1.6, 1.9}, {0.5, 0.5}, {1.5, 1.5}, {0, 0}, 3);
  spec.b_exp = 0.3;
  spec.s_exp = 2.0;
  const auto zero = check_P1(zero_operator(g), spec, 50, 1, 1.0);
  EXPECT_TRUE(zero.trivial);
  EXPECT_EQ(zero.C_emp, 0.0);

  std::mt19937_64 rng(5);
  OperatorBSpec b = zero_operator(g);
  b.F = random_function(g, rng);
  b.psi = PsiMap{PsiMap::Kind::Saturating, 1.5, 1.0};
  const double bound = holder_bound_P1(b, spec);
  const auto e = check_P1(b, spec, 500, 2, bound);
  EXPECT_FALSE(e.trivial);
  EXPECT_GT(e.C_emp, 0.0);
  EXPECT_EQ(e.max_violation, 0.0);
  EXPECT_LE(e.C_emp, bound);

  spec.a0 = 1.0;
  b.G = edge_preset(g, "sines:2", "G");
  const double bound_g = holder_bound_P1(b, spec);
  EXPECT_EQ(check_P1(b, spec, 500, 3, bound_g).max_violation, 0.0);
  spec.a0 = 0.0;
  EXPECT_TRUE(std::isinf(holder_bound_P1(b, spec)));
}
