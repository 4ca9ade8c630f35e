#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "bvg/analysis.hpp"
#include "bvg/operators.hpp"
#include "bvg/projector.hpp"
#include "test_util.hpp"

using namespace bvg;
using bvg::testing::disk;
using bvg::testing::random_image;
using bvg::testing::zero_mean;
using std::numbers::pi;

namespace {

Image smooth_random(const Grid& g, std::uint64_t seed) {
  // Sum of a few random low-frequency cosines.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Image u(g);
  for (int term = 0; term < 4; ++term) {
    const double a = d(rng), kx = 1 + 3 * std::abs(d(rng)), ky = 1 + 3 * std::abs(d(rng));
    const double px = pi * d(rng), py = pi * d(rng);
    for (std::size_t y = 0; y < g.height; ++y)
      for (std::size_t x = 0; x < g.width; ++x)
        u.at(x, y) += a * std::cos(kx * pi * g.x_at(x) + px) * std::cos(ky * pi * g.y_at(y) + py);
  }
  return u;
}

// Soft-edged unit disk on [-8, 8]^2 at 256^2 and the parameters that put
// (theta, theta, theta) on the boundary of all three conditions.
struct DiskCase {
  Image theta = disk(256, 8.0, 1.0, 1.0, 2.0);
  CheckOptions options;
  DiskCase() {
    options.convention = BvConvention::Seminorm;
    options.gnorm.subtract_mean = true;
    options.tol = 0.1;
  }
};

}  // namespace

TEST(Gnorm, ZeroImageIsExactlyZero) {
  const GnormResult r = gnorm_estimate(Image(Grid::covering(16, 16, 0, 1, 0)), 1e-2);
  EXPECT_EQ(r.estimate, 0.0);
  EXPECT_EQ(r.projections, 0);
}

TEST(Gnorm, NonZeroMeanNeedsOptIn) {
  const Image d = disk(32, 2.0, 1.0);
  EXPECT_THROW(gnorm_estimate(d, 1e-2), NonZeroMean);
  GnormOptions o;
  o.subtract_mean = true;
  const GnormResult r = gnorm_estimate(d, o);
  EXPECT_NEAR(r.subtracted_mean, d.mean(), 1e-15);
  EXPECT_GT(r.estimate, 0.0);
  EXPECT_FALSE(has_zero_mean(d));
  EXPECT_TRUE(has_zero_mean(zero_mean(d)));
}

TEST(Gnorm, CertifiedBoundsBracketTheEstimate) {
  const Image v = zero_mean(random_image(Grid::covering(32, 32, 0, 1, 0), 12));
  const GnormResult r = gnorm_estimate(v, 1e-2);
  EXPECT_LE(r.certified_lower, r.lower + 1e-15);
  EXPECT_LE(r.lower, r.estimate);
  EXPECT_LE(r.estimate, r.upper);
  EXPECT_LE(r.upper, r.certified_upper + 1e-15);
  EXPECT_LE(r.certified_upper, r.poisson_upper + 1e-15);
  EXPECT_LE(r.bracket, 1e-2 * r.upper * 1.0001);
}

TEST(Gnorm, CertificatesAreValid) {
  // Lower: <u, v> / J(u) for any u. Upper: sup |g| for an exact v = div g.
  const Grid g = Grid::covering(24, 24, 0, 1, 0);
  const Image v = zero_mean(random_image(g, 13));
  const GnormResult r = gnorm_estimate(v, 1e-2);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Image u = random_image(g, 500 + s);
    EXPECT_LE(l2_inner(u, v) / tv_norm(u), r.certified_upper * (1 + 1e-12));
  }
  EXPECT_LE(r.certified_lower, l2_norm_sq(v) / tv_norm(v) * 1e3);  // finite and positive
  EXPECT_GE(r.certified_lower, l2_norm_sq(v) / tv_norm(v) * (1 - 1e-12));
}

TEST(Gnorm, Homogeneous) {
  const Image v = zero_mean(random_image(Grid::covering(32, 32, 0, 1, 0), 14));
  const GnormResult base = gnorm_estimate(v, 1e-2);
  for (double a : {-2.0, 0.5, 3.0}) {
    const GnormResult r = gnorm_estimate(a * v, 1e-2);
    EXPECT_NEAR(r.estimate, std::abs(a) * base.estimate, 2.0 * (r.bracket + std::abs(a) * base.bracket));
  }
}

TEST(Gnorm, MembershipResidualDecreasesWithRadius) {
  const Image v = zero_mean(random_image(Grid::covering(32, 32, 0, 1, 0), 15));
  const double top = gnorm_estimate(v, 1e-2).upper;
  double previous = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= 8; ++i) {
    ProjectorParams pp;
    pp.radius = top * i / 7.0;
    pp.fp_tol = 1e-10;
    pp.max_iters = 50000;
    const double res = l2_norm(v - project_g_ball(v, pp).value);
    EXPECT_LE(res, previous * (1 + 1e-6) + 1e-12) << i;
    previous = res;
  }
}

TEST(Gnorm, DiskScalesWithItsRadius) {
  // Whole-plane value r/2. Removing the mean on the bounded domain lowers it
  // by the area ratio, which grows with r, so compare against r/2 (1 - m).
  const double domain_area = 16.0 * 16.0;
  std::vector<double> ratio;
  for (double r : {0.5, 1.0, 1.5}) {
    GnormOptions o;
    o.subtract_mean = true;
    const double reference = 0.5 * r * (1.0 - pi * r * r / domain_area);
    ratio.push_back(gnorm_estimate(disk(256, 8.0, r), o).estimate / reference);
  }
  for (double q : ratio) EXPECT_NEAR(q, 1.0, 0.05);
  EXPECT_NEAR(ratio[0], ratio[2], 0.03);
}

TEST(Gnorm, TextureNormFallsLikeOneOverFrequency) {
  SceneSpec s;
  s.kind = SceneKind::TexturedSquare;
  s.grid = Grid::covering(256, 256, 0, 1, 0);
  s.cx = s.cy = 0.5;
  s.frequency = 8;
  const double g8 = gnorm_estimate(render(s), 1e-2).estimate;
  s.frequency = 16;
  const double g16 = gnorm_estimate(render(s), 1e-2).estimate;
  EXPECT_GE(g16 / g8, 0.4);
  EXPECT_LE(g16 / g8, 0.6);
  EXPECT_LE(g8, 1.0 / (2.0 * pi * 8.0) * 1.01);
}

TEST(Gnorm, IsoperimetricChainOnSmoothImages) {
  for (double sigma : {0.15, 0.3}) {
    SceneSpec s;
    s.kind = SceneKind::GaussianBump;
    s.grid = Grid::covering(256, 256, -2, 2, -2);
    s.radius = sigma;
    const Image f = zero_mean(render(s));
    const double g = gnorm_estimate(f, 1e-2).estimate;
    const double l2 = l2_norm(f) / (2.0 * std::sqrt(pi));
    const double bv = bv_norm(f) / (4.0 * pi);
    EXPECT_LE(g, 1.03 * l2) << sigma;
    EXPECT_LE(l2, 1.03 * bv) << sigma;
  }
}

TEST(Norms, ReportAndInvalidG) {
  const Image d = disk(64, 2.0, 1.0);
  const NormReport bad = norms(d, 1e-2);
  EXPECT_FALSE(bad.g_valid);
  EXPECT_FALSE(bad.g_error.empty());
  EXPECT_DOUBLE_EQ(bad.bv, bad.l1 + bad.tv);
  GnormOptions o;
  o.subtract_mean = true;
  const NormReport good = norms(d, o);
  EXPECT_TRUE(good.g_valid);
  EXPECT_GT(good.g, 0.0);
  const NormReport zero = norms(Image(d.grid()), 1e-2);
  EXPECT_TRUE(zero.g_valid);
  EXPECT_EQ(zero.g + zero.l1 + zero.l2 + zero.tv, 0.0);
}

TEST(Classify, SmallBumpIsTrivial) {
  SceneSpec s;
  s.kind = SceneKind::GaussianBump;
  s.grid = Grid::covering(64, 64, 0, 1, 0);
  s.cx = s.cy = 0.5;
  s.radius = 0.1;
  s.amplitude = 0.05;
  CheckOptions o;
  o.gnorm.subtract_mean = true;
  const CaseReport r = classify_input(zero_mean(render(s)), 1.0, 10.0, o);
  EXPECT_EQ(r.input_class, InputClass::TrivialV);
  EXPECT_TRUE(r.predicts_case1);
}

TEST(Classify, ThinBarPredictsCaseOne) {
  SceneSpec s;
  s.kind = SceneKind::Bar;
  s.grid = Grid::covering(256, 256, 0, 1, 0);
  s.cx = s.cy = 0.5;
  s.thickness = 0.02;
  CheckOptions o;
  o.gnorm.subtract_mean = true;
  const CaseReport r = classify_input(render(s), 1.0, 1.0, o);
  EXPECT_EQ(r.input_class, InputClass::Nontrivial);
  EXPECT_TRUE(r.predicts_case1);
  EXPECT_TRUE(r.theorem1_regime);
}

TEST(Classify, TripleDiskIsOutsideTheTheorem) {
  CheckOptions o;
  o.gnorm.subtract_mean = true;
  const CaseReport r = classify_input(3.0 * disk(128, 8.0, 1.0), 1.0, 4.0 * pi, o);
  EXPECT_EQ(r.input_class, InputClass::OutOfTheorem);
  EXPECT_FALSE(r.theorem1_regime);
  const CaseReport u = classify_input(disk(64, 2.0, 1.0), 1.0, 1.0, CheckOptions{});
  EXPECT_EQ(u.input_class, InputClass::Unknown);
  EXPECT_FALSE(u.diagnostics.empty());
}

TEST(Check, TrivialDecompositionOfASmallInput) {
  SceneSpec s;
  s.kind = SceneKind::GaussianBump;
  s.grid = Grid::covering(64, 64, 0, 1, 0);
  s.cx = s.cy = 0.5;
  s.radius = 0.1;
  s.amplitude = 0.05;
  const Image f = zero_mean(render(s));
  const Image z(f.grid());
  const CaseReport r = check_optimality(z, f, z, 1.0, 10.0, CheckOptions{});
  EXPECT_TRUE(r.trivial_optimum);
  EXPECT_LE(r.gaps.bv, 0.0);
  EXPECT_LE(r.gaps.g, 0.0);
}

TEST(Check, CounterexampleDecompositions) {
  const DiskCase c;
  const Image& t = c.theta;
  const Image z(t.grid());
  const CaseReport r3 = check_optimality(t, t, t, 1.0, 4.0 * pi, c.options);
  EXPECT_TRUE(r3.case3) << r3.gaps.bv << " " << r3.gaps.g << " " << r3.gaps.uv << " " << r3.gaps.vw;
  const CaseReport r2 = check_optimality(2.0 * t, t, z, 1.0, 4.0 * pi, c.options);
  EXPECT_TRUE(r2.case2);
  EXPECT_TRUE(r2.w_zero);
  EXPECT_FALSE(r2.u_zero);
}

TEST(Check, InjectedViolationFlipsTheFlag) {
  const DiskCase c;
  const Image& t = c.theta;
  const CaseReport base = check_optimality(t, t, t, 1.0, 4.0 * pi, c.options);
  ASSERT_TRUE(base.case3);
  // v scaled by 1.1: ||v||_BV moves by 0.1 ||theta||_BV past its threshold.
  const CaseReport bad = check_optimality(t, 1.1 * t, t, 1.0, 4.0 * pi, c.options);
  EXPECT_FALSE(bad.case3);
  const double injected = 0.1 * base.v_bv;
  EXPECT_NEAR(bad.gaps.bv - base.gaps.bv, injected, 0.1 * injected);
}

TEST(Check, GridMismatchIsReported) {
  const Image a(Grid::covering(8, 8, 0, 1, 0));
  const Image b(Grid::covering(9, 8, 0, 1, 0));
  EXPECT_THROW(check_optimality(a, b, a, 1.0, 1.0, CheckOptions{}), GridMismatch);
}

TEST(Lemma1, ZeroHoldsTrivially) {
  const Image z(Grid::covering(16, 16, 0, 1, 0));
  const Lemma1Result r = lemma1_check(z, random_image(z.grid(), 1), GnormOptions{});
  EXPECT_EQ(r.lhs, 0.0);
  EXPECT_TRUE(r.holds);
}

TEST(Lemma1, HoldsForRandomSmoothPairs) {
  const Grid g = Grid::covering(64, 64, 0, 1, 0);
  GnormOptions o;
  o.tol = 2e-2;
  for (std::uint64_t s = 0; s < 200; ++s) {
    const Image u = zero_mean(smooth_random(g, 2 * s));
    const Image v = smooth_random(g, 2 * s + 1);
    const Lemma1Result r = lemma1_check(u, v, o);
    EXPECT_TRUE(r.holds) << s << ": " << r.lhs << " > " << r.rhs;
  }
}

TEST(Lemma1, DiskAgainstItself) {
  const Image t = disk(256, 8.0, 1.0, 1.0, 2.0);
  const Lemma1Result r = lemma1_check(zero_mean(t), t, GnormOptions{}, BvConvention::Full);
  EXPECT_TRUE(r.holds);
  EXPECT_NEAR(r.lhs, pi * (1.0 - pi / 256.0), 0.05 * pi);
}
