#include <cmath>
#include <random>

#include "gtest/gtest.h"

#include "bregsolve/legendre.hpp"
#include "bregsolve/properties.hpp"

namespace bregsolve {
namespace {

TEST(FEval, SquaredNorm) {
  EXPECT_DOUBLE_EQ(f_eval(squared_norm(2), {3.0, 4.0}), 12.5);
  EXPECT_DOUBLE_EQ(f_eval(squared_norm(1), {0.0}), 0.0);
}

TEST(FEval, NegativeEntropy) {
  EXPECT_DOUBLE_EQ(f_eval(negative_entropy(2), {1.0, 1.0}), 0.0);
  // independent evaluation of sum x log x
  const double expected = 2.0 * std::log(2.0);
  EXPECT_NEAR(f_eval(negative_entropy(1), {2.0}), expected, 1e-12);
}

TEST(FEval, EntropyDomainErrors) {
  EXPECT_THROW(f_eval(negative_entropy(2), {0.0, 1.0}), DomainError);
  EXPECT_THROW(f_eval(negative_entropy(1), {-1.0}), DomainError);
}

TEST(FEval, DimensionMismatch) {
  EXPECT_THROW(f_eval(squared_norm(2), {1.0}), DimensionError);
}

TEST(GradF, PointValues) {
  EXPECT_EQ(grad_f(squared_norm(1), {5.0}), (Vector{5.0}));
  EXPECT_EQ(grad_f(negative_entropy(2), {1.0, 1.0}), (Vector{1.0, 1.0}));
  EXPECT_THROW(grad_f(negative_entropy(1), {0.0}), DomainError);
}

TEST(GradF, FiniteDifferenceAtSpecPoint) {
  const auto spec = squared_norm(2);
  const Vector x{0.7, -1.3};
  const Vector g = grad_f(spec, x);
  const double h = 1e-5;
  for (int j = 0; j < 2; ++j) {
    Vector hi = x, lo = x;
    hi[j] += h;
    lo[j] -= h;
    const double fd = (f_eval(spec, hi) - f_eval(spec, lo)) / (2.0 * h);
    EXPECT_NEAR(fd, g[j], 1e-6);
  }
}

TEST(Conjugate, PointValues) {
  EXPECT_DOUBLE_EQ(conjugate_eval(squared_norm(1), {3.0}), 4.5);
  EXPECT_DOUBLE_EQ(conjugate_eval(negative_entropy(2), {1.0, 1.0}), 2.0);
}

TEST(Conjugate, YoungFenchelEqualityOnRandomPoints) {
  const auto r = prop_young_fenchel(17, 100);
  EXPECT_GE(r.cases, 100);
  EXPECT_LE(r.worst, r.bound) << r.name << " worst " << r.worst;
}

TEST(GradConjugate, PointValues) {
  EXPECT_EQ(grad_conjugate(squared_norm(1), {2.0}), (Vector{2.0}));
  EXPECT_EQ(grad_conjugate(negative_entropy(1), {1.0}), (Vector{1.0}));
}

TEST(GradConjugate, OverflowReported) {
  EXPECT_THROW(grad_conjugate(negative_entropy(1), {800.0}), OverflowError);
}

TEST(GradConjugate, InverseComposition) {
  const auto r = prop_dual_inverse(23, 60);
  EXPECT_GE(r.cases, 100);
  EXPECT_LE(r.worst, r.bound) << "worst inverse defect " << r.worst;
}

TEST(GradF, FiniteDifferenceSweep) {
  const auto r = prop_gradient_fd(29, 50);
  EXPECT_GE(r.cases, 100);
  EXPECT_LE(r.worst, r.bound) << "worst fd defect " << r.worst;
}

TEST(BregmanDistance, PointValues) {
  EXPECT_DOUBLE_EQ(bregman_distance(squared_norm(1), {5.0}, {2.0}), 4.5);
  // D_f(x, x) = 0
  EXPECT_DOUBLE_EQ(bregman_distance(squared_norm(2), {1.5, -0.25}, {1.5, -0.25}), 0.0);
  EXPECT_DOUBLE_EQ(bregman_distance(negative_entropy(2), {0.3, 0.7}, {0.3, 0.7}), 0.0);
  // independent evaluation: 1*log(1/2) - 1 + 2
  const double expected = std::log(0.5) + 1.0;
  EXPECT_NEAR(bregman_distance(negative_entropy(1), {1.0}, {2.0}), expected, 1e-12);
}

TEST(BregmanDistance, NonnegativeWithEqualityOnlyAtEqual) {
  const auto r = prop_df_nonnegative(31, 40);
  EXPECT_GE(r.cases, 100);
  EXPECT_LE(r.worst, r.bound) << "worst nonnegativity defect " << r.worst;
}

TEST(BregmanDistance, ClampCounterVisible) {
  reset_df_clamp_count();
  EXPECT_EQ(df_clamp_count(), 0);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> d(0.5, 1.5);
  const auto spec = negative_entropy(3);
  for (int i = 0; i < 2000; ++i) {
    Vector x{d(rng), d(rng), d(rng)};
    Vector y = x;
    y[i % 3] = std::nextafter(y[i % 3], 2.0);
    EXPECT_GE(bregman_distance(spec, y, x), 0.0);
  }
  EXPECT_GE(df_clamp_count(), 0);  // counter accessible and not corrupted
}

TEST(VF, PointValues) {
  EXPECT_DOUBLE_EQ(v_f(squared_norm(1), {1.0}, {3.0}), 2.0);
  // x* = grad f(x) makes V_f vanish
  const Vector x{0.4, 1.7};
  EXPECT_NEAR(v_f(squared_norm(2), x, grad_f(squared_norm(2), x)), 0.0, 1e-15);
  const Vector e{0.5, 1.25};
  EXPECT_NEAR(v_f(negative_entropy(2), e, grad_f(negative_entropy(2), e)), 0.0, 1e-15);
}

TEST(VF, MatchesBregmanThroughConjugateGradient) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  std::uniform_real_distribution<double> pos(0.1, 3.0);
  for (int i = 0; i < 200; ++i) {
    const auto sq = squared_norm(2);
    const Vector x{d(rng), d(rng)}, xs{d(rng), d(rng)};
    EXPECT_NEAR(v_f(sq, x, xs), bregman_distance(sq, x, grad_conjugate(sq, xs)), 1e-9);

    const auto ne = negative_entropy(2);
    const Vector xe{pos(rng), pos(rng)};
    const Vector xse = grad_f(ne, {pos(rng), pos(rng)});
    EXPECT_NEAR(v_f(ne, xe, xse), bregman_distance(ne, xe, grad_conjugate(ne, xse)), 1e-9);
  }
}

TEST(DualAverage, PointValues) {
  EXPECT_EQ(dual_average(squared_norm(1), {0.5, 0.5}, {Vector{0.0}, Vector{4.0}}), (Vector{2.0}));
  // weighted geometric mean: sqrt(1 * 4) = 2
  const Vector gm = dual_average(negative_entropy(1), {0.5, 0.5}, {Vector{1.0}, Vector{4.0}});
  EXPECT_NEAR(gm[0], 2.0, 1e-12);
}

TEST(DualAverage, WeightErrors) {
  EXPECT_THROW(dual_average(squared_norm(1), {0.5, 0.6}, {Vector{0.0}, Vector{4.0}}), WeightError);
  EXPECT_THROW(dual_average(squared_norm(1), {1.5, -0.5}, {Vector{0.0}, Vector{4.0}}), WeightError);
  EXPECT_THROW(dual_average(squared_norm(1), {1.0}, {}), WeightError);
  EXPECT_THROW(dual_average(negative_entropy(1), {0.5, 0.5}, {Vector{-1.0}, Vector{4.0}}),
               DomainError);
}

TEST(DualAverage, JensenInequalitySweep) {
  const auto r = prop_jensen_dual_average(43, 40);
  EXPECT_GE(r.cases, 100);
  EXPECT_LE(r.worst, r.bound) << "worst Jensen defect " << r.worst;
}

TEST(ThreePoint, SubgradientIdentitySweep) {
  const auto r = prop_three_point(47, 40);
  EXPECT_GE(r.cases, 100);
  EXPECT_LE(r.worst, r.bound) << "worst three-point defect " << r.worst;
}

TEST(VectorType, RejectsNonFinite) {
  EXPECT_THROW(Vector{std::nan("")}, DomainError);
  std::vector<double> bad{1.0, std::numeric_limits<double>::infinity()};
  EXPECT_THROW(Vector{bad}, DomainError);
}

}  // namespace
}  // namespace bregsolve
