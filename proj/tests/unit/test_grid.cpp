#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "aniso/error.hpp"
#include "aniso/grid.hpp"
#include "aniso/oracles.hpp"

using namespace aniso;

namespace {

GridFunction random_function(const Grid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1, 1);
  GridFunction u(g);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = d(rng);
  return u;
}

}  // namespace

TEST(Grid, Geometry) {
  const Grid g({1.0, 2.0}, {3, 4});
  EXPECT_DOUBLE_EQ(g.spacing(0), 0.25);
  EXPECT_DOUBLE_EQ(g.spacing(1), 0.4);
  EXPECT_DOUBLE_EQ(g.cell_volume(), 0.1);
  EXPECT_DOUBLE_EQ(g.measure(), 2.0);
  EXPECT_EQ(g.size(), 12u);
  EXPECT_EQ(g.edge_count(0), 16u);
  EXPECT_EQ(g.edge_count(1), 15u);
  EXPECT_THROW(Grid({1.0}, {0}), Error);
}

TEST(Partial, HatFunction) {
  const Grid g({1.0}, {1});
  GridFunction u(g, {3.0});
  const EdgeField e = partial(u, 0);
  ASSERT_EQ(e.values.size(), 2u);
  EXPECT_DOUBLE_EQ(e.values[0], 6.0);
  EXPECT_DOUBLE_EQ(e.values[1], -6.0);
  EXPECT_DOUBLE_EQ(anisotropic_norm(u, std::vector<double>{2.0}), std::sqrt(0.5 * 72.0));
}

TEST(Partial, AffineInteriorIsConstant) {
  const Grid g({1.0, 1.0}, {9, 5});
  const auto u = GridFunction::sample(g, [](std::span<const double> x) { return 2.0 * x[0] + x[1]; });
  const EdgeField e = partial(u, 0);
  for (int r = 0; r < 5; ++r) {
    for (int k = 1; k < 9; ++k) EXPECT_NEAR(e.values[static_cast<std::size_t>(r * 10 + k)], 2.0, 1e-12);
  }
  for (double v : partial(GridFunction(g), 1).values) EXPECT_EQ(v, 0.0);
}

TEST(Norms, Examples) {
  const Grid g({1.0, 1.0}, {1, 1});
  EXPECT_DOUBLE_EQ(norm_Ls(GridFunction(g, {1.0}), 2.0), 0.5);
  EXPECT_EQ(norm_Ls(GridFunction(g), 3.0), 0.0);
  EXPECT_THROW(norm_Ls(GridFunction(g, {1.0}), 0.5), Error);
  const Grid fine({1.0, 1.0}, {99, 99});
  const GridFunction c(fine, std::vector<double>(fine.size(), 2.0));
  EXPECT_NEAR(norm_Ls(c, 3.0), 2.0, 0.05);
}

TEST(Norms, HomogeneityAndMonotonicity) {
  std::mt19937_64 rng(1);
  const Grid g({1.0, 1.0}, {6, 7});
  const std::vector<double> p{2.5, 2.5};
  for (int t = 0; t < 50; ++t) {
    const auto u = random_function(g, rng);
    EXPECT_NEAR(norm_Ls(-3.0 * u, 1.7), 3.0 * norm_Ls(u, 1.7), 1e-12);
    EXPECT_NEAR(anisotropic_norm(-3.0 * u, p), 3.0 * anisotropic_norm(u, p), 1e-11);
    GridFunction bigger = u;
    for (std::size_t i = 0; i < u.size(); ++i) bigger[i] = 1.5 * std::abs(u[i]);
    EXPECT_GE(norm_Ls(bigger, 2.2), norm_Ls(u, 2.2));
  }
}

TEST(PairingA, Coercive) {
  std::mt19937_64 rng(2);
  const Grid g({1.0, 1.0}, {5, 4});
  const std::vector<double> p{1.5, 3.0};
  EXPECT_EQ(pairing_A(GridFunction(g), GridFunction(g), p), 0.0);
  for (int t = 0; t < 50; ++t) {
    const auto u = random_function(g, rng);
    const double a = pairing_A(u, u, p);
    EXPECT_GT(a, 0.0);
    const double expect = std::pow(norm_Ls(g, partial(u, 0), 1.5), 1.5) + std::pow(norm_Ls(g, partial(u, 1), 3.0), 3.0);
    EXPECT_NEAR(a, expect, 1e-10 * expect);
    EXPECT_EQ(pairing_A(u, GridFunction(g), p), 0.0);
  }
}

TEST(PairingA, MatchesFivePointStencil) {
  std::mt19937_64 rng(3);
  const Grid g({1.0, 2.0}, {6, 5});
  const std::vector<double> p{2.0, 2.0};
  const auto u = random_function(g, rng);
  const auto v = random_function(g, rng);
  const int nx = 6, ny = 5;
  const double hx = g.spacing(0), hy = g.spacing(1);
  auto at = [&](const GridFunction& w, int i, int j) {
    return (i < 0 || j < 0 || i >= nx || j >= ny) ? 0.0 : w[static_cast<std::size_t>(j * nx + i)];
  };
  double direct = 0.0;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double lap = (2 * at(u, i, j) - at(u, i - 1, j) - at(u, i + 1, j)) / (hx * hx) +
                         (2 * at(u, i, j) - at(u, i, j - 1) - at(u, i, j + 1)) / (hy * hy);
      direct += lap * at(v, i, j);
    }
  }
  direct *= g.cell_volume();
  EXPECT_NEAR(pairing_A(u, v, p), direct, 1e-12 * std::abs(direct));
  const auto weak = apply_A(u, p);
  double via = 0.0;
  for (std::size_t i = 0; i < weak.size(); ++i) via += weak[i] * v[i];
  EXPECT_NEAR(pairing_A(u, v, p), via, 1e-12 * std::abs(via));
}

TEST(LevelMeasure, Examples) {
  const Grid g({1.0, 1.0}, {31, 31});
  const auto u = GridFunction::sample(g, [](std::span<const double> x) {
    return std::sin(std::numbers::pi * x[0]) * std::sin(std::numbers::pi * x[1]);
  });
  EXPECT_EQ(level_measure(u, 1.5), 0.0);
  for (double h : {0.25, 0.5, 0.75}) {
    EXPECT_EQ(level_measure(u, h), g.cell_volume() * static_cast<double>(oracle::brute_force_level_count(u, h)));
  }
  const GridFunction c(g, std::vector<double>(g.size(), 2.0));
  EXPECT_NEAR(level_measure(c, 2.0), g.cell_volume() * g.size(), 1e-15);
  double prev = 1e300;
  for (double h = 0.01; h < 1.1; h += 0.01) {
    const double mu = level_measure(u, h);
    EXPECT_LE(mu, prev);
    prev = mu;
  }
}

TEST(Sobolev, RatioProperties) {
  std::mt19937_64 rng(4);
  const Grid g({1.0, 1.0}, {15, 15});
  const std::vector<double> p{1.5, 1.5};
  EXPECT_THROW(sobolev_ratio(GridFunction(g), p), Error);
  EXPECT_THROW(sobolev_ratio(random_function(g, rng), std::vector<double>{2.0, 2.0}), Error);
  for (int t = 0; t < 20; ++t) {
    const auto u = oracle::random_smooth_function(g, rng);
    const double r = sobolev_ratio(u, p);
    EXPECT_TRUE(std::isfinite(r));
    EXPECT_GT(r, 0.0);
    EXPECT_NEAR(sobolev_ratio(4.0 * u, p), r, 1e-12 * r);
  }
}

TEST(Sobolev, EmpiricalMaxStableUnderRefinement) {
  const std::vector<double> p{1.6, 1.9};
  auto max_ratio = [&](int nodes) {
    std::mt19937_64 rng(5);
    const Grid g({1.0, 1.0}, {nodes, nodes});
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) worst = std::max(worst, sobolev_ratio(oracle::random_smooth_function(g, rng), p));
    return worst;
  };
  const double coarse = max_ratio(15), fine = max_ratio(31);
  EXPECT_NEAR(fine / coarse, 1.0, 0.2);
}

TEST(Csv, RoundTrip) {
  std::mt19937_64 rng(6);
  const Grid g({1.0, 0.5, 2.0}, {3, 2, 4});
  const auto u = random_function(g, rng);
  std::stringstream ss;
  write_csv(ss, u);
  const auto back = read_csv(ss, g);
  for (std::size_t i = 0; i < u.size(); ++i) EXPECT_EQ(back[i], u[i]);
}
