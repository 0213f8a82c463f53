#include <array>
#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "gtest/gtest.h"

#include "bregsolve/oracle.hpp"
#include "bregsolve/problem.hpp"
#include "bregsolve/properties.hpp"

namespace bregsolve {
namespace {

QuadraticBifunction paper_g() { return QuadraticBifunction::scalar(16.0, 9.0, -25.0); }

TEST(Evaluate, PointValues) {
  const auto g = paper_g();
  EXPECT_DOUBLE_EQ(g.eval({1.0}, {1.0}), 0.0);  // g(x, x) = 0
  EXPECT_DOUBLE_EQ(g.eval({1.0}, {0.0}), -25.0);
  EXPECT_DOUBLE_EQ(evaluate(Bifunction{ZeroBifunction{}}, {0.3}, {1.9}), 0.0);
  EXPECT_THROW(g.eval({1.0, 2.0}, {1.0}), DimensionError);
}

TEST(QuadraticBifunctionType, StructuralInvariants) {
  EXPECT_DOUBLE_EQ(paper_g().equilibrium_defect(), 0.0);
  EXPECT_DOUBLE_EQ(paper_g().min_convexity_eigenvalue(), 16.0);
  // broken bundle: g(x,x) != 0
  const auto broken = QuadraticBifunction::scalar(16.0, 9.0, -20.0);
  EXPECT_GT(broken.equilibrium_defect(), 1.0);
}

TEST(CheckMonotone, PaperPairAndIdentity) {
  const auto g = paper_g();
  std::vector<std::pair<Vector, Vector>> one = {{Vector{1.0}, Vector{2.0}}};
  EXPECT_DOUBLE_EQ(check_monotone(g, one).max_violation, -9.0);  // -9 (x-y)^2

  std::vector<std::pair<Vector, Vector>> same = {{Vector{1.3}, Vector{1.3}}};
  EXPECT_NEAR(check_monotone(g, same).max_violation, 0.0, 1e-12);

  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> d(0.0, 2.0);
  std::vector<std::pair<Vector, Vector>> pairs;
  for (int i = 0; i < 1000; ++i) pairs.emplace_back(Vector{d(rng)}, Vector{d(rng)});
  const auto rep = check_monotone(g, pairs);
  EXPECT_EQ(rep.samples, 1000);
  EXPECT_LE(rep.max_violation, 0.0);
  for (const auto& [x, y] : pairs) {
    const double expected = -9.0 * (x[0] - y[0]) * (x[0] - y[0]);
    EXPECT_NEAR(g.eval(x, y) + g.eval(y, x), expected, 1e-10);
  }
}

TEST(CheckBregmanLipschitz, PaperTripleAndIdentity) {
  const auto g = paper_g();
  const auto spec = squared_norm(1);
  std::vector<std::array<Vector, 3>> one = {{Vector{0.0}, Vector{1.0}, Vector{2.0}}};
  // slack equals 9 D_f(x, z) = 9 * 2 = 18 on the example triple
  EXPECT_NEAR(check_bregman_lipschitz(g, spec, 9.0, 9.0, one).min_slack, 18.0, 1e-12);

  std::vector<std::array<Vector, 3>> same = {{Vector{0.7}, Vector{0.7}, Vector{0.7}}};
  EXPECT_NEAR(check_bregman_lipschitz(g, spec, 9.0, 9.0, same).min_slack, 0.0, 1e-12);

  std::mt19937_64 rng(103);
  std::uniform_real_distribution<double> d(0.0, 2.0);
  for (int i = 0; i < 500; ++i) {
    const Vector x{d(rng)}, y{d(rng)}, z{d(rng)};
    std::vector<std::array<Vector, 3>> t = {{x, y, z}};
    const double slack = check_bregman_lipschitz(g, spec, 9.0, 9.0, t).min_slack;
    const double df_xz = 0.5 * (x[0] - z[0]) * (x[0] - z[0]);
    EXPECT_NEAR(slack - 9.0 * df_xz, 0.0, 1e-10);  // exact identity for this g
  }
}

TEST(CheckBregmanNonexpansive, ScalingAndIdentity) {
  const auto spec = squared_norm(1);
  const auto S = LinearMap::scaling(1, 1.0 / 3.0);
  std::mt19937_64 rng(107);
  std::uniform_real_distribution<double> d(0.0, 2.0);
  std::vector<std::pair<Vector, Vector>> pairs;
  for (int i = 0; i < 200; ++i) {
    const double a = d(rng);
    pairs.emplace_back(Vector{a}, Vector{a + 0.1 + d(rng)});
  }
  const auto rep = check_bregman_nonexpansive(S, spec, pairs);
  EXPECT_NEAR(rep.max_ratio, 1.0 / 9.0, 1e-12);
  EXPECT_TRUE(rep.pass(1e-9));

  const auto id = LinearMap::identity(1);
  const auto rep_id = check_bregman_nonexpansive(id, spec, pairs);
  EXPECT_DOUBLE_EQ(rep_id.max_ratio, 1.0);

  std::vector<std::pair<Vector, Vector>> degenerate = {{Vector{1.0}, Vector{1.0}}};
  EXPECT_THROW(check_bregman_nonexpansive(S, spec, degenerate), DegenerateSample);
}

TEST(CheckBregmanNonexpansive, SpectralNormHalfMatrix) {
  std::mt19937_64 rng(109);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Matrix b(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) b(i, j) = d(rng);
  const Matrix a = (0.5 / spectral_norm(b)) * b;
  EXPECT_NEAR(spectral_norm(a), 0.5, 1e-12);

  std::vector<std::pair<Vector, Vector>> pairs;
  for (int i = 0; i < 300; ++i)
    pairs.emplace_back(Vector{d(rng), d(rng)}, Vector{d(rng) + 1.5, d(rng) - 1.5});
  const auto rep = check_bregman_nonexpansive(LinearMap{a}, squared_norm(2), pairs);
  EXPECT_LE(rep.max_ratio, 0.25 + 1e-9);
}

TEST(ProxStep, PaperRatioClosedForm) {
  const auto g = paper_g();
  const auto spec = squared_norm(1);
  const auto set = ConvexSet::interval(0.0, 2.0);
  const double lam = 1.0 / 32.0;
  for (double anchor : {0.3, 1.0, 1.7, 2.0, 5.0}) {
    const Vector y = prox_step(spec, g, set, {anchor}, lam);
    EXPECT_NEAR(y[0] / anchor, 23.0 / 64.0, 1e-15) << "anchor " << anchor;
  }
}

TEST(ProxStep, LambdaZeroIsProjection) {
  const auto g = paper_g();
  const Vector y = prox_step(squared_norm(1), g, ConvexSet::interval(0.0, 2.0), {5.0}, 0.0);
  EXPECT_DOUBLE_EQ(y[0], 2.0);
  EXPECT_THROW(prox_step(squared_norm(1), g, ConvexSet::interval(0.0, 2.0), {5.0}, -0.1),
               DomainError);
}

TEST(ProxStep, GoldenSectionAgreement) {
  const auto g = paper_g();
  const auto spec = squared_norm(1);
  const auto set = ConvexSet::interval(0.0, 2.0);
  const double lam = 1.0 / 32.0;
  const Vector anchor{1.0};
  const Vector y = prox_step(spec, g, set, anchor, lam);
  const double gs = golden_section(
      [&](double t) {
        return lam * g.eval(anchor, Vector{t}) + 0.5 * (t - 1.0) * (t - 1.0);
      },
      0.0, 2.0, 1e-10);
  EXPECT_NEAR(y[0], gs, 1e-8);
  EXPECT_NEAR(y[0], 23.0 / 64.0, 1e-15);
}

TEST(ProxStep, CertificateSweep) {
  const auto r = prop_prox_certificate(113, 100);
  EXPECT_GE(r.cases, 100);
  EXPECT_LE(r.worst, r.bound) << "worst prox certificate gap " << r.worst;
}

TEST(ProxStep, OracleSweep) {
  const auto r = prop_prox_oracle_agreement(127, 100);
  EXPECT_GE(r.cases, 100);
  EXPECT_LE(r.worst, r.bound) << "worst prox oracle disagreement " << r.worst;
}

TEST(ProxStep, CoupledTwoDimensionalFallback) {
  // non-separable Q forces the inner solver when the unconstrained
  // minimizer leaves the box
  const Matrix q{{2.0, 0.5}, {0.5, 2.0}};
  const QuadraticBifunction g{q, q, -2.0 * q};  // g(x,x) = 0 by construction
  EXPECT_NEAR(g.equilibrium_defect(), 0.0, 1e-15);
  const auto spec = squared_norm(2);
  const auto set = ConvexSet::box({0.0, 0.0}, {1.0, 1.0});
  const double lam = 0.1;
  const Vector anchor{2.0, 0.3};
  const Vector y = bregman_prox(spec, g, set, lam, anchor, anchor);
  EXPECT_TRUE(contains(set, y, 1e-9));

  std::mt19937_64 rng(131);
  const auto ws = sample_points(set, 64, rng);
  EXPECT_LE(prox_certificate_gap(spec, g, lam, anchor, anchor, y, ws), 1e-8);

  const GridSpec grid({0.0, 0.0}, {1.0, 1.0}, 161);
  auto objective = [&](const Vector& t) {
    return lam * g.eval(anchor, t) + 0.5 * dot(t - anchor, t - anchor);
  };
  const Vector yg = grid_argmin(objective, set, grid);
  EXPECT_LE(inf_norm(y - yg), 2.0 * grid.max_pitch());
}

TEST(ProxStep, BallConstraintFallback) {
  // unconstrained minimizer leaves the interval-shaped ball: inner solve
  const auto g = paper_g();
  const auto spec = squared_norm(1);
  const auto set = ConvexSet::ball({1.0}, 0.1);
  const double lam = 1.0 / 32.0;
  const Vector y = bregman_prox(spec, g, set, lam, {5.0}, {5.0});
  EXPECT_NEAR(y[0], 1.1, 1e-9);  // objective decreasing through the upper endpoint
  const double gs = golden_section(
      [&](double t) {
        return lam * g.eval(Vector{5.0}, Vector{t}) + 0.5 * (t - 5.0) * (t - 5.0);
      },
      0.9, 1.1, 1e-10);
  EXPECT_NEAR(y[0], gs, 1e-8);
}

TEST(ProxStep, EntropyKernelFallbackAgainstGoldenSection) {
  const QuadraticBifunction g = QuadraticBifunction::scalar(1.0, -1.0, 0.0);
  const auto spec = negative_entropy(1);
  const auto set = ConvexSet::box({0.1}, {2.0});
  const double lam = 0.3;
  const Vector anchor{1.5};
  const Vector y = bregman_prox(spec, g, set, lam, anchor, anchor);
  const double gs = golden_section(
      [&](double t) {
        const Vector yt{t};
        return lam * g.eval(anchor, yt) + f_eval(spec, yt) - f_eval(spec, anchor) -
               dot(yt - anchor, grad_f(spec, anchor));
      },
      0.1, 2.0, 1e-10);
  EXPECT_NEAR(y[0], gs, 1e-8);
  EXPECT_TRUE(contains(set, y, 1e-12));
}

TEST(Resolvent, ZeroBifunctionIsProjectionPath) {
  const Bifunction zero{ZeroBifunction{}};
  const auto spec = squared_norm(1);
  const auto set = ConvexSet::interval(0.0, 2.0);
  EXPECT_DOUBLE_EQ(resolvent(spec, zero, set, {5.0})[0], 2.0);
  const Vector inside{1.3};
  EXPECT_EQ(resolvent(spec, zero, set, inside), inside);

  const auto r = prop_resolvent_is_projection(137, 8);
  EXPECT_GE(r.cases, 100);
  EXPECT_LE(r.worst, r.bound);
}

TEST(Resolvent, MonotoneQuadraticAgainstViGridScan) {
  // phi(x, y) = y^2 - x y on [0, 2]; the resolvent of x solves z = x / 2
  const Bifunction phi{QuadraticBifunction::scalar(1.0, -1.0, 0.0)};
  const auto spec = squared_norm(1);
  const auto set = ConvexSet::interval(0.0, 2.0);
  const Vector x{1.0};
  const Vector z = resolvent(spec, phi, set, x);
  EXPECT_NEAR(z[0], 0.5, 1e-9);

  // independent check: grid scan over z of the VI residual, with the inner
  // minimization over y done exactly (the violated direction of a quadratic
  // bifunction has a closed form, so no y-grid plateau blurs the scan)
  const auto& q = std::get<QuadraticBifunction>(phi);
  auto vi_violation = [&](double zz) {
    const double c = zz - x[0];  // grad f(z) - grad f(x) for the squared-norm kernel
    const double y_star = std::min(std::max((zz - c) / 2.0, 0.0), 2.0);
    const double val = q.eval(Vector{zz}, Vector{y_star}) + c * (y_star - zz);
    return std::max(0.0, -val);
  };
  double lo = 0.0, hi = 2.0, best = 0.0;
  for (int stage = 0; stage < 3; ++stage) {
    double best_val = std::numeric_limits<double>::infinity();
    const double pitch = (hi - lo) / 2000.0;
    for (int i = 0; i <= 2000; ++i) {
      const double zz = lo + pitch * i;
      const double val = vi_violation(zz);
      if (val < best_val) {
        best_val = val;
        best = zz;
      }
    }
    lo = std::max(0.0, best - 2.0 * pitch);
    hi = std::min(2.0, best + 2.0 * pitch);
  }
  EXPECT_NEAR(z[0], best, 1e-6);
}

TEST(Resolvent, EntropyKernelQuadraticPhiAgainstViGridScan) {
  // phi(x, y) = y^2 - x y with the entropy kernel on a positive box
  const Bifunction phi{QuadraticBifunction::scalar(1.0, -1.0, 0.0)};
  const auto spec = negative_entropy(1);
  const auto set = ConvexSet::box({0.1}, {2.0});
  const Vector x{1.2};
  const Vector z = resolvent(spec, phi, set, x);
  EXPECT_TRUE(contains(set, z, 1e-9));
  EXPECT_GT(z[0], 0.0);

  const auto& q = std::get<QuadraticBifunction>(phi);
  // inner minimization over y in closed form: w(y) = y^2 - z y + c (y - z)
  auto vi_violation = [&](double zz) {
    const double c = std::log(zz) - std::log(x[0]);
    const double y_star = std::min(std::max((zz - c) / 2.0, 0.1), 2.0);
    const double val = q.eval(Vector{zz}, Vector{y_star}) + c * (y_star - zz);
    return std::max(0.0, -val);
  };
  double lo = 0.1, hi = 2.0, best = 0.0;
  for (int stage = 0; stage < 3; ++stage) {
    double best_val = std::numeric_limits<double>::infinity();
    const double pitch = (hi - lo) / 2000.0;
    for (int i = 0; i <= 2000; ++i) {
      const double zz = lo + pitch * i;
      const double val = vi_violation(zz);
      if (val < best_val) {
        best_val = val;
        best = zz;
      }
    }
    lo = std::max(0.1, best - 2.0 * pitch);
    hi = std::min(2.0, best + 2.0 * pitch);
  }
  EXPECT_NEAR(z[0], best, 1e-6);
  // and the iterate satisfies the inequality it is defined by
  EXPECT_LE(vi_violation(z[0]), 1e-9);
}

TEST(ResolventDescentCheck, HandComputedSlack) {
  const Bifunction zero{ZeroBifunction{}};
  const auto spec = squared_norm(1);
  const auto set = ConvexSet::interval(0.0, 2.0);
  // Res(5) = 2: slack = D(1,5) - D(1,2) - D(2,5) = 8 - 0.5 - 4.5 = 3
  EXPECT_NEAR(resolvent_descent_check(spec, zero, set, {1.0}, {5.0}), 3.0, 1e-12);
  EXPECT_DOUBLE_EQ(resolvent_descent_check(spec, zero, set, {1.0}, {1.0}), 0.0);

  std::mt19937_64 rng(139);
  std::uniform_real_distribution<double> in_c(0.0, 2.0);
  std::uniform_real_distribution<double> wide(-4.0, 6.0);
  for (int i = 0; i < 100; ++i)
    EXPECT_GE(resolvent_descent_check(spec, zero, set, {in_c(rng)}, {wide(rng)}), -1e-9);
}

TEST(EpResidual, CertifiesZeroForPaperBifunction) {
  const auto g = paper_g();
  std::vector<Vector> probes;
  for (int i = 0; i <= 200; ++i) probes.push_back(Vector{2.0 * i / 200.0});
  EXPECT_LE(ep_residual(g, probes, {0.0}), 0.0);
  // 1 is not an equilibrium point: g(0, 1) = 16 > 0
  EXPECT_GT(ep_residual(g, probes, {1.0}), 1.0);
}

TEST(Pseudomonotone, ImpliedByMonotonicityOnSamples) {
  const auto r = prop_pseudomonotone(149, 1000);
  EXPECT_GE(r.cases, 1000);
  EXPECT_LE(r.worst, r.bound);
}

TEST(TwoStepDescent, LemmaSweepOnPaperProblem) {
  const auto r = prop_two_step_descent(151, 100);
  EXPECT_GE(r.cases, 100);
  EXPECT_LE(r.worst, r.bound) << "worst descent defect " << r.worst;
}

}  // namespace
}  // namespace bregsolve
