#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "bregsolve/errors.hpp"
#include "bregsolve/legendre.hpp"
#include "bregsolve/linalg.hpp"
#include "bregsolve/oracle.hpp"
#include "bregsolve/projection.hpp"
#include "bregsolve/sets.hpp"
#include "bregsolve/tolerances.hpp"

namespace bregsolve {

/// g(x, y) = y'Qy + x'Ry + x'Px with Q, P symmetric. The equilibrium
/// convention g(x, x) = 0 means Q + R + P vanishes as a quadratic form.
struct QuadraticBifunction {
  Matrix Q, R, P;

  static QuadraticBifunction scalar(double q, double r, double p) {
    return {Matrix{{q}}, Matrix{{r}}, Matrix{{p}}};
  }

  static QuadraticBifunction zero(int dim) {
    return {Matrix(dim, dim), Matrix(dim, dim), Matrix(dim, dim)};
  }

  int dim() const { return Q.rows(); }

  double eval(const Vector& x, const Vector& y) const {
    if (x.dim() != dim() || y.dim() != dim()) throw DimensionError("bifunction: dimension mismatch");
    return dot(y, Q.apply(y)) + dot(x, R.apply(y)) + dot(x, P.apply(x));
  }

  /// Gradient of g(x, .) at y: (Q + Q')y + R'x.
  Vector grad2(const Vector& x, const Vector& y) const {
    return (Q + Q.transposed()).apply(y) + R.transposed().apply(x);
  }

  /// Largest |entry| of the symmetric part of Q + R + P; zero (to roundoff)
  /// iff g(x, x) = 0 for all x.
  double equilibrium_defect() const {
    const Matrix sum = Q + R + P;
    const Matrix sym = 0.5 * (sum + sum.transposed());
    double worst = 0.0;
    for (int i = 0; i < sym.rows(); ++i)
      for (int j = 0; j < sym.cols(); ++j) worst = std::max(worst, std::abs(sym(i, j)));
    return worst;
  }

  /// Smallest eigenvalue of the symmetric part of Q; nonnegative iff
  /// g(x, .) is convex.
  double min_convexity_eigenvalue() const {
    return symmetric_eigenvalues(0.5 * (Q + Q.transposed())).front();
  }
};

struct ZeroBifunction {
  double eval(const Vector&, const Vector&) const { return 0.0; }
};

using Bifunction = std::variant<ZeroBifunction, QuadraticBifunction>;

inline double evaluate(const QuadraticBifunction& g, const Vector& x, const Vector& y) {
  return g.eval(x, y);
}

inline double evaluate(const Bifunction& g, const Vector& x, const Vector& y) {
  return std::visit([&](const auto& b) { return b.eval(x, y); }, g);
}

/// S(x) = A x.
struct LinearMap {
  Matrix A;

  static LinearMap scaling(int dim, double s) { return {s * Matrix::identity(dim)}; }
  static LinearMap identity(int dim) { return {Matrix::identity(dim)}; }

  Vector apply(const Vector& x) const { return A.apply(x); }
};

struct MonotoneReport {
  double max_violation = -std::numeric_limits<double>::infinity();
  long samples = 0;
  bool pass(double tol) const { return max_violation <= tol; }
};

/// Max over sample pairs of g(x, y) + g(y, x); monotone bifunctions keep
/// this <= 0.
inline MonotoneReport check_monotone(const QuadraticBifunction& g,
                                     std::span<const std::pair<Vector, Vector>> samples) {
  MonotoneReport rep;
  for (const auto& [x, y] : samples) {
    rep.max_violation = std::max(rep.max_violation, g.eval(x, y) + g.eval(y, x));
    ++rep.samples;
  }
  return rep;
}

struct BregmanLipschitzReport {
  double min_slack = std::numeric_limits<double>::infinity();
  long samples = 0;
  bool pass(double tol) const { return min_slack >= -tol; }
};

/// Min over sample triples of
/// g(x,y) + g(y,z) - g(x,z) + c1 D_f(y,x) + c2 D_f(z,y);
/// nonnegative iff (c1, c2) witness the Bregman-Lipschitz bound on the
/// sampled points.
inline BregmanLipschitzReport check_bregman_lipschitz(
    const QuadraticBifunction& g, const LegendreSpec& spec, double c1, double c2,
    std::span<const std::array<Vector, 3>> samples, const Tolerances& tol = default_tolerances()) {
  BregmanLipschitzReport rep;
  for (const auto& [x, y, z] : samples) {
    const double slack = g.eval(x, y) + g.eval(y, z) - g.eval(x, z) +
                         c1 * bregman_distance(spec, y, x, tol) +
                         c2 * bregman_distance(spec, z, y, tol);
    rep.min_slack = std::min(rep.min_slack, slack);
    ++rep.samples;
  }
  return rep;
}

struct NonexpansiveReport {
  double max_ratio = 0.0;
  long samples = 0;
  bool pass(double tol) const { return max_ratio <= 1.0 + tol; }
};

/// Max over sample pairs (x != y) of D_f(Sx, Sy) / D_f(x, y).
inline NonexpansiveReport check_bregman_nonexpansive(
    const LinearMap& S, const LegendreSpec& spec,
    std::span<const std::pair<Vector, Vector>> samples,
    const Tolerances& tol = default_tolerances()) {
  NonexpansiveReport rep;
  for (const auto& [x, y] : samples) {
    const double den = bregman_distance(spec, x, y, tol);
    if (den == 0.0) throw DegenerateSample("check_bregman_nonexpansive: sample pair with x == y");
    rep.max_ratio = std::max(rep.max_ratio, bregman_distance(spec, S.apply(x), S.apply(y), tol) / den);
    ++rep.samples;
  }
  return rep;
}

namespace detail {

inline bool is_diagonal(const Matrix& m, double tol = 0.0) {
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (i != j && std::abs(m(i, j)) > tol) return false;
  return true;
}

/// Inner solve of argmin over C of lam*g(g_anchor, y) + D_f(y, d_anchor)
/// for the pairings without a closed form.
inline Vector bregman_prox_fallback(const LegendreSpec& spec, const QuadraticBifunction& g,
                                    const ConvexSet& set, double lam, const Vector& g_anchor,
                                    const Vector& d_anchor, const Tolerances& tol) {
  const bool entropy = spec.kind == LegendreKind::NegativeEntropy;
  const Vector gfa = grad_f(spec, d_anchor);
  const double fa = f_eval(spec, d_anchor);
  auto objective = [&](const Vector& y) {
    return lam * g.eval(g_anchor, y) + f_eval(spec, y) - fa - dot(y - d_anchor, gfa);
  };
  auto gradient = [&](const Vector& y) {
    return lam * g.grad2(g_anchor, y) + grad_f(spec, y) - gfa;
  };
  auto project = [&](const Vector& y) {
    return entropy ? project_with_floor(set, kPositivityFloor, y) : euclidean_project(set, y);
  };
  return projected_gradient(objective, gradient, project, project(d_anchor), 1.0, tol.inner_step,
                            tol.inner_max_iters);
}

}  // namespace detail

/// argmin over the set of lam * g(g_anchor, y) + D_f(y, d_anchor). The
/// bifunction anchor and the distance anchor may differ (the two-step
/// extragradient update needs that). lam = 0 degenerates to the Bregman
/// projection of d_anchor.
inline Vector bregman_prox(const LegendreSpec& spec, const QuadraticBifunction& g, const ConvexSet& set,
                           double lam, const Vector& g_anchor, const Vector& d_anchor,
                           const Tolerances& tol = default_tolerances()) {
  if (lam < 0.0) throw DomainError("bregman_prox: lam must be nonnegative");
  detail::require_interior(spec, d_anchor, "bregman_prox");
  if (lam == 0.0) return bregman_project(spec, set, d_anchor, tol);

  if (spec.kind == LegendreKind::SquaredNorm) {
    // strictly convex quadratic: (I + lam (Q + Q')) y = d_anchor - lam R' g_anchor
    const Matrix sys = Matrix::identity(spec.dim) + lam * (g.Q + g.Q.transposed());
    const Vector rhs = d_anchor - lam * g.R.transposed().apply(g_anchor);
    const bool box = std::holds_alternative<Box>(set.value());
    if (box && (spec.dim == 1 || detail::is_diagonal(g.Q))) {
      // separable: clamping the unconstrained minimizer is exact
      const auto& b = std::get<Box>(set.value());
      Vector y = Vector::zeros(spec.dim);
      for (int i = 0; i < spec.dim; ++i)
        y[i] = std::min(std::max(rhs[i] / sys(i, i), b.lower[i]), b.upper[i]);
      return y;
    }
    const Vector unconstrained = solve_linear(sys, rhs);
    if (contains(set, unconstrained, 0.0)) return unconstrained;
    return detail::bregman_prox_fallback(spec, g, set, lam, g_anchor, d_anchor, tol);
  }
  return detail::bregman_prox_fallback(spec, g, set, lam, g_anchor, d_anchor, tol);
}

/// Proximal step of the iteration: argmin over C of
/// lam * g(anchor, y) + D_f(y, anchor).
inline Vector prox_step(const LegendreSpec& spec, const QuadraticBifunction& g, const ConvexSet& set,
                        const Vector& anchor, double lam,
                        const Tolerances& tol = default_tolerances()) {
  return bregman_prox(spec, g, set, lam, anchor, anchor, tol);
}

/// First-order optimality certificate of a claimed prox result y:
/// max over sampled w in C of <y - w, lam grad2 g(g_anchor, y) + grad f(y) - grad f(d_anchor)>.
/// At the true argmin this is <= 0.
inline double prox_certificate_gap(const LegendreSpec& spec, const QuadraticBifunction& g, double lam,
                                   const Vector& g_anchor, const Vector& d_anchor, const Vector& y,
                                   std::span<const Vector> samples) {
  const Vector grad = lam * g.grad2(g_anchor, y) + grad_f(spec, y) - grad_f(spec, d_anchor);
  double worst = -std::numeric_limits<double>::infinity();
  for (const Vector& w : samples) worst = std::max(worst, dot(y - w, grad));
  return worst;
}

/// Resolvent of phi: the unique z in C with
/// phi(z, y) + <grad f(z) - grad f(x), y - z> >= 0 for all y in C.
/// phi = 0 reduces to the Bregman projection (same code path). A quadratic
/// phi runs a damped fixed-point iteration on the regularized subproblem.
inline Vector resolvent(const LegendreSpec& spec, const Bifunction& phi, const ConvexSet& set,
                        const Vector& x, const Tolerances& tol = default_tolerances()) {
  if (std::holds_alternative<ZeroBifunction>(phi)) return bregman_project(spec, set, x, tol);

  const auto& q = std::get<QuadraticBifunction>(phi);
  Vector z = spec.kind == LegendreKind::NegativeEntropy
                 ? detail::project_with_floor(set, detail::kPositivityFloor, x)
                 : euclidean_project(set, x);
  for (long k = 0; k < tol.resolvent_max_iters; ++k) {
    const Vector target = bregman_prox(spec, q, set, 1.0, z, x, tol);
    const Vector next = 0.5 * z + 0.5 * target;  // relaxation 0.5
    const double moved = inf_norm(next - z);
    z = next;
    if (moved < tol.inner_step) return z;
  }
  throw ConvergenceError("resolvent: fixed-point iteration cap reached");
}

/// Slack of the resolvent descent inequality
/// D_f(u, x) - D_f(u, Res(x)) - D_f(Res(x), x) for a resolvent fixed
/// point u; nonnegative up to roundoff.
inline double resolvent_descent_check(const LegendreSpec& spec, const Bifunction& phi,
                                      const ConvexSet& set, const Vector& u, const Vector& x,
                                      const Tolerances& tol = default_tolerances()) {
  const Vector r = resolvent(spec, phi, set, x, tol);
  return bregman_distance(spec, u, x, tol) - bregman_distance(spec, u, r, tol) -
         bregman_distance(spec, r, x, tol);
}

/// Max over probe points of g(probe, candidate): <= 0 certifies candidate as
/// an equilibrium point on the probed set.
inline double ep_residual(const QuadraticBifunction& g, std::span<const Vector> probes,
                          const Vector& candidate) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const Vector& x : probes) worst = std::max(worst, g.eval(x, candidate));
  return worst;
}

/// Everything one instance of the problem needs: kernel, constraint set,
/// equilibrium bifunction with its Bregman-Lipschitz coefficients, the
/// auxiliary bifunction, and the fixed-point map.
struct ProblemBundle {
  LegendreSpec spec;
  ConvexSet set;
  QuadraticBifunction g;
  Bifunction phi;
  LinearMap S;
  double c1 = 1.0;
  double c2 = 1.0;
};

}  // namespace bregsolve
