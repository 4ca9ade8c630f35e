#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "bvg/operators.hpp"
#include "test_util.hpp"

using namespace bvg;
using bvg::testing::random_field;
using bvg::testing::random_image;

namespace {

// Reflecting 5-point Laplacian written out pixel by pixel.
double neumann_laplacian(const Image& u, std::size_t x, std::size_t y) {
  double s = 0.0;
  if (x + 1 < u.width()) s += u.at(x + 1, y) - u.at(x, y);
  if (x > 0) s += u.at(x - 1, y) - u.at(x, y);
  if (y + 1 < u.height()) s += u.at(x, y + 1) - u.at(x, y);
  if (y > 0) s += u.at(x, y - 1) - u.at(x, y);
  return s;
}

}  // namespace

TEST(Gradient, ConstantImageHasZeroField) {
  const Image u(Grid::covering(7, 5, 0, 1, 0), 3.5);
  const DualField g = gradient(u);
  EXPECT_EQ(g.max_modulus(), 0.0);
}

TEST(Gradient, RampHasUnitInteriorSlopeAndZeroBoundaryFlux) {
  Image u(Grid::covering(6, 4, 0, 1, 0));
  for (std::size_t y = 0; y < 4; ++y)
    for (std::size_t x = 0; x < 6; ++x) u.at(x, y) = static_cast<double>(x);
  const DualField g = gradient(u);
  for (std::size_t y = 0; y < 4; ++y) {
    for (std::size_t x = 0; x < 6; ++x) {
      EXPECT_EQ(g.g1[y * 6 + x], x + 1 < 6 ? 1.0 : 0.0);
      EXPECT_EQ(g.g2[y * 6 + x], 0.0);
    }
  }
}

TEST(Divergence, ZeroFieldGivesZeroImage) {
  const Image d = divergence(DualField(Grid::covering(4, 4, 0, 1, 0)));
  EXPECT_EQ(d.max_abs(), 0.0);
}

TEST(Divergence, SumsToZero) {
  const Grid g = Grid::covering(16, 16, 0, 1, 0);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const DualField p = random_field(g, seed);
    const double scale = std::sqrt(dual_inner(p, p)) / g.spacing;
    EXPECT_LE(std::abs(divergence(p).sum()), 1e-10 * scale);
  }
}

TEST(Divergence, OfGradientIsTheNeumannLaplacian) {
  const Image u = bvg::testing::disk(5, 1.0, 0.6);
  const Image lap = divergence(gradient(u));
  for (std::size_t y = 0; y < 5; ++y)
    for (std::size_t x = 0; x < 5; ++x) EXPECT_DOUBLE_EQ(lap.at(x, y), neumann_laplacian(u, x, y));
}

TEST(Adjointness, RandomEightByEight) {
  const Grid g = Grid::covering(8, 8, 0, 1, 0);
  const Image u = random_image(g, 42);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const DualField p = random_field(g, 1000 + seed);
    const double lhs = dual_inner(gradient(u), p);
    const double rhs = -l2_inner(u, divergence(p));
    EXPECT_NEAR(lhs, rhs, 1e-12 * std::max(std::abs(lhs), 1e-300));
  }
}

TEST(Adjointness, AllShapesUpTo64) {
  for (std::size_t w : {1u, 2u, 3u, 7u, 16u, 33u, 64u}) {
    for (std::size_t h : {1u, 2u, 5u, 31u, 64u}) {
      const Grid g = Grid::covering(w, h, 0, 2, 0);
      const Image u = random_image(g, w * 100 + h);
      const DualField p = random_field(g, w * 1000 + h);
      const double lhs = dual_inner(gradient(u), p);
      const double rhs = -l2_inner(u, divergence(p));
      const double scale = std::sqrt(l2_norm_sq(u) * dual_inner(p, p)) + 1e-300;
      EXPECT_LE(std::abs(lhs - rhs), 1e-12 * scale) << w << "x" << h;
    }
  }
}

TEST(TotalVariation, ConstantIsZero) {
  EXPECT_EQ(tv_norm(Image(Grid::covering(9, 9, 0, 1, 0), 2.0)), 0.0);
}

TEST(TotalVariation, InvariantUnderConstantShift) {
  const Image u = random_image(Grid::covering(32, 32, 0, 1, 0), 3);
  Image v = u;
  v += 0.75;
  EXPECT_NEAR(tv_norm(v), tv_norm(u), 1e-12 * tv_norm(u));
}

TEST(TotalVariation, PositivelyHomogeneous) {
  const Image u = random_image(Grid::covering(32, 32, 0, 1, 0), 4);
  for (double a : {-3.0, -0.5, 0.0, 2.0}) EXPECT_NEAR(tv_norm(a * u), std::abs(a) * tv_norm(u), 1e-12 * tv_norm(u));
}

TEST(TotalVariation, StraightEdgeGivesItsLength) {
  // A vertical step of height 1 across the unit square has perimeter 1.
  Image u(Grid::covering(64, 64, 0, 1, 0));
  for (std::size_t y = 0; y < 64; ++y)
    for (std::size_t x = 32; x < 64; ++x) u.at(x, y) = 1.0;
  EXPECT_NEAR(tv_norm(u), 1.0, 1e-14);
}

TEST(TotalVariation, SoftDiskApproachesPerimeter) {
  // Binary pixel disks overestimate the perimeter by ~16% with this stencil;
  // a 3-pixel edge ramp brings the error under 3%.
  const Image u = bvg::testing::disk(512, 2.0, 1.0, 1.0, 3.0);
  EXPECT_NEAR(tv_norm(u), 2.0 * std::numbers::pi, 0.03 * 2.0 * std::numbers::pi);
}

TEST(Norms, ZeroImage) {
  const Image z(Grid::covering(8, 8, 0, 1, 0));
  EXPECT_EQ(l1_norm(z), 0.0);
  EXPECT_EQ(l2_norm(z), 0.0);
  EXPECT_EQ(tv_norm(z), 0.0);
}

TEST(Norms, DiskInnerProductIsArea) {
  const Image u = bvg::testing::disk(512, 2.0, 1.0);
  EXPECT_NEAR(l2_inner(u, u), std::numbers::pi, 0.02 * std::numbers::pi);
}

TEST(Norms, BvConventions) {
  const Image u = bvg::testing::disk(128, 2.0, 1.0);
  EXPECT_DOUBLE_EQ(bv_norm(u, BvConvention::Seminorm), tv_norm(u));
  EXPECT_DOUBLE_EQ(bv_norm(u, BvConvention::Full), tv_norm(u) + l1_norm(u));
  EXPECT_STREQ(to_string(BvConvention::Seminorm), "seminorm");
}

TEST(Norms, IsoperimetricInequalityOnSmoothImages) {
  for (double sigma : {0.1, 0.2, 0.3}) {
    SceneSpec s;
    s.kind = SceneKind::GaussianBump;
    s.grid = Grid::covering(256, 256, -2, 2, -2);
    s.radius = sigma;
    const Image f = render(s);
    const double bound = (l1_norm(f) + tv_norm(f)) / (2.0 * std::sqrt(std::numbers::pi));
    EXPECT_LE(l2_norm(f), 1.02 * bound) << sigma;
  }
  const Image d = bvg::testing::disk(256, 2.0, 1.0, 1.0, 2.0);
  EXPECT_LE(l2_norm(d), 1.02 * (l1_norm(d) + tv_norm(d)) / (2.0 * std::sqrt(std::numbers::pi)));
}

TEST(Norms, TextureL2IndependentOfFrequency) {
  for (double n : {16.0, 32.0, 64.0}) {
    SceneSpec s;
    s.kind = SceneKind::TexturedSquare;
    s.grid = Grid::covering(1024, 1024, 0, 1, 0);
    s.cx = s.cy = 0.5;
    s.frequency = n;
    EXPECT_NEAR(l2_norm(render(s)), 1.0 / std::sqrt(2.0), 0.05 / std::sqrt(2.0)) << n;
  }
}
