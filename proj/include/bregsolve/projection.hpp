#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "bregsolve/errors.hpp"
#include "bregsolve/legendre.hpp"
#include "bregsolve/linalg.hpp"
#include "bregsolve/oracle.hpp"
#include "bregsolve/sets.hpp"
#include "bregsolve/tolerances.hpp"

namespace bregsolve {

namespace detail {

// Keeps inner-solver iterates strictly inside the entropy domain.
inline constexpr double kPositivityFloor = 1e-15;

/// Euclidean projection onto set ∩ {y >= floor}. Clamping after projecting
/// can leave the set (halfspaces, balls), so the general case runs Dykstra's
/// alternating corrections; boxes compose exactly.
inline Vector project_with_floor(const ConvexSet& set, double floor, const Vector& y) {
  if (const auto* box = std::get_if<Box>(&set.value())) {
    Vector out = y;
    for (int i = 0; i < out.dim(); ++i)
      out[i] = std::min(std::max(out[i], std::max(box->lower[i], floor)), box->upper[i]);
    return out;
  }
  auto clamp_floor = [&](Vector v) {
    for (int i = 0; i < v.dim(); ++i) v[i] = std::max(v[i], floor);
    return v;
  };
  Vector x = y;
  Vector p = Vector::zeros(y.dim()), q = Vector::zeros(y.dim());
  for (int round = 0; round < 200; ++round) {
    const Vector a = euclidean_project(set, x + p);
    p = (x + p) - a;
    const Vector b = clamp_floor(a + q);
    q = (a + q) - b;
    const double moved = inf_norm(b - x);
    x = b;
    if (moved < 1e-15 && contains(set, x, 1e-12)) break;
  }
  return x;
}

inline void check_entropy_feasible(const ConvexSet& set) {
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Box>) {
          for (int i = 0; i < s.upper.dim(); ++i)
            if (!(s.upper[i] > 0.0))
              throw InfeasibleError("set does not meet the positive orthant (box)");
        } else if constexpr (std::is_same_v<T, Ball>) {
          double neg = 0.0;
          for (double c : s.center) neg += std::min(c, 0.0) * std::min(c, 0.0);
          if (!(std::sqrt(neg) < s.radius))
            throw InfeasibleError("set does not meet the positive orthant (ball)");
        } else if constexpr (std::is_same_v<T, Halfspace>) {
          bool has_negative_direction = false;
          for (double a : s.normal)
            if (a < 0.0) has_negative_direction = true;
          if (!has_negative_direction && !(s.offset > 0.0))
            throw InfeasibleError("set does not meet the positive orthant (halfspace)");
        } else {
          // simplex always meets the positive orthant
        }
      },
      set.value());
}

/// Generic inner solve: projected gradient on y -> D_f(y, x) with the
/// Euclidean projector of the set (floored away from the entropy boundary).
inline Vector bregman_project_fallback(const LegendreSpec& spec, const ConvexSet& set, const Vector& x,
                                       const Tolerances& tol) {
  const bool entropy = spec.kind == LegendreKind::NegativeEntropy;
  const Vector gx = grad_f(spec, x);
  const double fx = f_eval(spec, x);
  const double floor = entropy ? kPositivityFloor : -std::numeric_limits<double>::infinity();
  auto objective = [&](const Vector& y) { return f_eval(spec, y) - fx - dot(y - x, gx); };
  auto gradient = [&](const Vector& y) { return grad_f(spec, y) - gx; };
  auto project = [&](const Vector& y) {
    return entropy ? project_with_floor(set, floor, y) : euclidean_project(set, y);
  };
  return projected_gradient(objective, gradient, project, project(x), 1.0, tol.inner_step,
                            tol.inner_max_iters);
}

}  // namespace detail

/// Bregman projection: the unique argmin over the set of D_f(., x).
/// Closed forms cover SquaredNorm with box/ball/halfspace and
/// NegativeEntropy with the simplex; every other pairing runs the generic
/// inner solve (ConvergenceError if it stalls).
inline Vector bregman_project(const LegendreSpec& spec, const ConvexSet& set, const Vector& x,
                              const Tolerances& tol = default_tolerances()) {
  detail::require_dim(spec, x, "bregman_project");
  detail::require_interior(spec, x, "bregman_project");
  if (set.dim() != spec.dim) throw DimensionError("bregman_project: set dimension mismatch");
  if (spec.kind == LegendreKind::NegativeEntropy) detail::check_entropy_feasible(set);
  if (contains(set, x, 0.0)) return x;  // D_f(x, x) = 0 is the minimum

  if (spec.kind == LegendreKind::SquaredNorm) {
    if (std::holds_alternative<Box>(set.value()) || std::holds_alternative<Ball>(set.value()) ||
        std::holds_alternative<Halfspace>(set.value()))
      return euclidean_project(set, x);
    return detail::bregman_project_fallback(spec, set, x, tol);
  }

  if (std::holds_alternative<Simplex>(set.value())) {
    double sum = 0.0;
    for (double v : x) sum += v;
    Vector out = x;
    for (int i = 0; i < out.dim(); ++i) out[i] = x[i] / sum;
    return out;
  }
  return detail::bregman_project_fallback(spec, set, x, tol);
}

/// Slack of the three-point descent property of the projection:
/// D_f(y, x) - D_f(y, z) - D_f(z, x) with z the projection of x.
/// Nonnegative (up to roundoff) for every y in the set.
inline double projection_descent_check(const LegendreSpec& spec, const ConvexSet& set, const Vector& x,
                                       const Vector& y, const Tolerances& tol = default_tolerances()) {
  if (!contains(set, y, tol.membership))
    throw DomainError("projection_descent_check: y is not in the set");
  const Vector z = bregman_project(spec, set, x, tol);
  return bregman_distance(spec, y, x, tol) - bregman_distance(spec, y, z, tol) -
         bregman_distance(spec, z, x, tol);
}

/// Variational-inequality certificate of a claimed projection z of x:
/// max over the sampled y in C of <z - y, grad f(z) - grad f(x)>.
/// At the true projection this is <= 0.
inline double projection_vi_gap(const LegendreSpec& spec, const Vector& x, const Vector& z,
                                std::span<const Vector> samples) {
  const Vector d = grad_f(spec, z) - grad_f(spec, x);
  double worst = -std::numeric_limits<double>::infinity();
  for (const Vector& y : samples) worst = std::max(worst, dot(z - y, d));
  return worst;
}

}  // namespace bregsolve
