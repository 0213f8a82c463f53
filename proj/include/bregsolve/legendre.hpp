#pragma once

#include <atomic>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "bregsolve/errors.hpp"
#include "bregsolve/linalg.hpp"
#include "bregsolve/tolerances.hpp"

namespace bregsolve {

/// The two Legendre kernels this library ships. SquaredNorm lives on the
/// whole space; NegativeEntropy on the strictly positive orthant (points
/// with a zero component are rejected, not extended by continuity).
enum class LegendreKind { SquaredNorm, NegativeEntropy };

struct LegendreSpec {
  LegendreKind kind = LegendreKind::SquaredNorm;
  int dim = 1;
};

inline LegendreSpec squared_norm(int dim) { return {LegendreKind::SquaredNorm, dim}; }
inline LegendreSpec negative_entropy(int dim) { return {LegendreKind::NegativeEntropy, dim}; }

namespace detail {

inline void require_dim(const LegendreSpec& spec, const Vector& x, const char* what) {
  if (x.dim() != spec.dim) throw DimensionError(std::string(what) + ": dimension mismatch");
}

inline void require_interior(const LegendreSpec& spec, const Vector& x, const char* what) {
  if (spec.kind == LegendreKind::NegativeEntropy) {
    for (double v : x) {
      if (!(v > 0.0)) throw DomainError(std::string(what) + ": point outside the positive orthant");
    }
  }
}

// exp(t) overflows double just above this
inline constexpr double kExpArgMax = 709.78;

inline std::atomic<long>& df_clamp_counter() {
  static std::atomic<long> count{0};
  return count;
}

}  // namespace detail

/// Number of times a tiny negative Bregman distance was clamped to zero.
inline long df_clamp_count() { return detail::df_clamp_counter().load(); }
inline void reset_df_clamp_count() { detail::df_clamp_counter().store(0); }

inline double f_eval(const LegendreSpec& spec, const Vector& x) {
  detail::require_dim(spec, x, "f_eval");
  detail::require_interior(spec, x, "f_eval");
  double s = 0.0;
  if (spec.kind == LegendreKind::SquaredNorm) {
    for (double v : x) s += v * v;
    return 0.5 * s;
  }
  for (double v : x) s += v * std::log(v);
  return s;
}

inline Vector grad_f(const LegendreSpec& spec, const Vector& x) {
  detail::require_dim(spec, x, "grad_f");
  detail::require_interior(spec, x, "grad_f");
  if (spec.kind == LegendreKind::SquaredNorm) return x;
  std::vector<double> out(static_cast<std::size_t>(x.dim()));
  for (int i = 0; i < x.dim(); ++i) out[static_cast<std::size_t>(i)] = 1.0 + std::log(x[i]);
  return Vector(std::move(out));
}

inline double conjugate_eval(const LegendreSpec& spec, const Vector& xstar) {
  detail::require_dim(spec, xstar, "conjugate_eval");
  double s = 0.0;
  if (spec.kind == LegendreKind::SquaredNorm) {
    for (double v : xstar) s += v * v;
    return 0.5 * s;
  }
  for (double v : xstar) s += std::exp(v - 1.0);
  return s;
}

inline Vector grad_conjugate(const LegendreSpec& spec, const Vector& xstar) {
  detail::require_dim(spec, xstar, "grad_conjugate");
  if (spec.kind == LegendreKind::SquaredNorm) return xstar;
  std::vector<double> out(static_cast<std::size_t>(xstar.dim()));
  for (int i = 0; i < xstar.dim(); ++i) {
    if (xstar[i] - 1.0 > detail::kExpArgMax)
      throw OverflowError("grad_conjugate: exp overflow at component " + std::to_string(i));
    out[static_cast<std::size_t>(i)] = std::exp(xstar[i] - 1.0);
  }
  return Vector(std::move(out));
}

/// D_f(y, x) = f(y) - f(x) - <y - x, grad f(x)>. Nonnegative for Legendre f;
/// roundoff negatives above -tol.df_clamp are clamped to zero and counted.
inline double bregman_distance(const LegendreSpec& spec, const Vector& y, const Vector& x,
                               const Tolerances& tol = default_tolerances()) {
  detail::require_dim(spec, y, "bregman_distance");
  const double d = f_eval(spec, y) - f_eval(spec, x) - dot(y - x, grad_f(spec, x));
  if (d >= 0.0) return d;
  if (d >= -tol.df_clamp) {
    detail::df_clamp_counter().fetch_add(1);
    return 0.0;
  }
  throw DomainError("bregman_distance: negative value " + std::to_string(d) +
                    " beyond the roundoff clamp");
}

/// V_f(x, x*) = f(x) - <x, x*> + f*(x*); equals D_f(x, grad f*(x*)).
inline double v_f(const LegendreSpec& spec, const Vector& x, const Vector& xstar) {
  detail::require_dim(spec, xstar, "v_f");
  return f_eval(spec, x) - dot(x, xstar) + conjugate_eval(spec, xstar);
}

/// grad f*(sum_i t_i grad f(x_i)): the convex combination taken in the dual
/// and pulled back. Arithmetic mean for SquaredNorm, weighted geometric mean
/// for NegativeEntropy.
inline Vector dual_average(const LegendreSpec& spec, std::span<const double> weights,
                           std::span<const Vector> points,
                           const Tolerances& tol = default_tolerances()) {
  if (weights.size() != points.size() || weights.empty())
    throw WeightError("dual_average: weight/point counts differ or empty");
  double sum = 0.0;
  for (double w : weights) {
    if (!(w > 0.0)) throw WeightError("dual_average: weights must be positive");
    sum += w;
  }
  if (std::abs(sum - 1.0) > tol.weight_sum)
    throw WeightError("dual_average: weights sum to " + std::to_string(sum));

  Vector acc = weights[0] * grad_f(spec, points[0]);
  for (std::size_t i = 1; i < points.size(); ++i) acc = acc + weights[i] * grad_f(spec, points[i]);
  return grad_conjugate(spec, acc);
}

inline Vector dual_average(const LegendreSpec& spec, std::initializer_list<double> weights,
                           std::initializer_list<Vector> points,
                           const Tolerances& tol = default_tolerances()) {
  std::vector<double> w(weights);
  std::vector<Vector> p(points);
  return dual_average(spec, std::span<const double>(w), std::span<const Vector>(p), tol);
}

}  // namespace bregsolve
