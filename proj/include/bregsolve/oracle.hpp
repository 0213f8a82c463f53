#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "bregsolve/errors.hpp"
#include "bregsolve/linalg.hpp"
#include "bregsolve/sets.hpp"
#include "bregsolve/tolerances.hpp"

namespace bregsolve {

/// Rectangular evaluation lattice for the brute-force argmin oracle.
struct GridSpec {
  Vector lower, upper;
  int points_per_dim = 3;

  GridSpec(Vector lo, Vector hi, int points) : lower(std::move(lo)), upper(std::move(hi)), points_per_dim(points) {
    require_same_dim(lower, upper);
    if (points_per_dim < 3) throw DomainError("grid: points_per_dim must be >= 3");
    for (int i = 0; i < lower.dim(); ++i)
      if (!(lower[i] < upper[i])) throw DomainError("grid: lower must be < upper");
  }

  int dim() const { return lower.dim(); }

  double pitch(int i) const { return (upper[i] - lower[i]) / (points_per_dim - 1); }

  double max_pitch() const {
    double p = 0.0;
    for (int i = 0; i < dim(); ++i) p = std::max(p, pitch(i));
    return p;
  }
};

/// Feasible grid point of minimal objective. Ties break to the
/// lexicographically smallest coordinates; non-finite objective values are
/// never candidates. Grid search is restricted to dim <= 3 (cost control).
inline Vector grid_argmin(const std::function<double(const Vector&)>& objective, const ConvexSet& set,
                          const GridSpec& grid, double feasibility_tol = 1e-9) {
  if (grid.dim() != set.dim()) throw DimensionError("grid_argmin: grid/set dimension mismatch");
  if (grid.dim() > 3) throw DomainError("grid_argmin: grid search is limited to dim <= 3");

  const int d = grid.dim();
  const int m = grid.points_per_dim;
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  Vector best;
  double best_val = std::numeric_limits<double>::infinity();
  bool found = false;

  // odometer over the lattice, most-significant coordinate first, so the
  // first strict improvement is automatically the lexicographic tie-winner
  while (true) {
    std::vector<double> coords(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i)
      coords[static_cast<std::size_t>(i)] = grid.lower[i] + grid.pitch(i) * idx[static_cast<std::size_t>(i)];
    Vector p(std::move(coords));
    if (contains(set, p, feasibility_tol)) {
      const double val = objective(p);
      if (std::isfinite(val) && val < best_val) {
        best_val = val;
        best = p;
        found = true;
      }
    }
    int pos = d - 1;
    while (pos >= 0 && ++idx[static_cast<std::size_t>(pos)] == m) {
      idx[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  if (!found) throw EmptyGridError("grid_argmin: no feasible grid point");
  return best;
}

/// Golden-section search for the minimizer of a unimodal scalar objective,
/// followed by one parabolic-vertex polish. Bare golden section localizes a
/// smooth minimizer only to the square root of the evaluation noise; the
/// three-point parabola fit at a wider spacing recovers the remaining digits
/// for locally quadratic objectives.
inline double golden_section(const std::function<double(double)>& objective, double lo, double hi,
                             double tol) {
  if (!(lo < hi)) throw DomainError("golden_section: lo must be < hi");
  if (!(tol > 0.0)) throw DomainError("golden_section: tol must be positive");
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = objective(c), fd = objective(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = objective(d);
    }
  }
  const double mid = 0.5 * (a + b);

  const double spread = std::max(100.0 * tol, 1e-5 * (1.0 + std::abs(mid)));
  double center = std::min(std::max(mid, lo + spread), hi - spread);
  if (center - spread < lo || center + spread > hi) return mid;  // interval too narrow to fit
  const double fl = objective(center - spread);
  const double fm = objective(center);
  const double fr = objective(center + spread);
  const double curvature = fr - 2.0 * fm + fl;
  if (!(curvature > 0.0)) return mid;
  double vertex = center - spread * (fr - fl) / (2.0 * curvature);
  vertex = std::min(std::max(vertex, center - spread), center + spread);
  return std::min(std::max(vertex, lo), hi);
}

/// Projected gradient descent with Armijo-style backtracking: the step is
/// halved whenever the candidate fails to decrease the objective. The
/// decrease test carries a roundoff allowance so that progress invisible at
/// working precision does not stall the iteration short of the movement
/// criterion. Stops when the iterate moves less than `tol` in the sup norm.
inline Vector projected_gradient(const std::function<double(const Vector&)>& objective,
                                 const std::function<Vector(const Vector&)>& gradient,
                                 const std::function<Vector(const Vector&)>& project,
                                 const Vector& start, double step, double tol, long max_iters) {
  if (!(step > 0.0)) throw DomainError("projected_gradient: step must be positive");
  Vector x = project(start);
  double fx = objective(x);
  for (long k = 0; k < max_iters; ++k) {
    const Vector g = gradient(x);
    const double noise = 1e-14 * (1.0 + std::abs(fx));
    double local = step;
    Vector cand = project(x - local * g);
    double fc = objective(cand);
    // sufficient decrease relative to the step length, up to roundoff
    while (fc > fx - 1e-4 * dot(cand - x, cand - x) / local + noise) {
      if (inf_norm(cand - x) < tol) return x;  // no descent left at this point
      local *= 0.5;
      if (local < 1e-300) return x;
      cand = project(x - local * g);
      fc = objective(cand);
    }
    const double moved = inf_norm(cand - x);
    x = cand;
    fx = fc;
    step = local;
    if (moved < tol) return x;
  }
  throw ConvergenceError("projected_gradient: iteration cap reached");
}

}  // namespace bregsolve
