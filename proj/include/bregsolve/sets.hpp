#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <random>
#include <variant>
#include <vector>

#include "bregsolve/errors.hpp"
#include "bregsolve/linalg.hpp"

namespace bregsolve {

struct Box {
  Vector lower, upper;
};

struct Ball {
  Vector center;
  double radius = 1.0;
};

/// { x : <normal, x> <= offset }
struct Halfspace {
  Vector normal;
  double offset = 0.0;
};

/// Standard simplex { x >= 0, sum x_i = 1 }.
struct Simplex {
  int dim = 1;
};

/// Closed convex constraint set, one of the four supported variants.
class ConvexSet {
 public:
  using Variant = std::variant<Box, Ball, Halfspace, Simplex>;

  explicit ConvexSet(Box b) : v_(std::move(b)) {
    const auto& box = std::get<Box>(v_);
    require_same_dim(box.lower, box.upper);
    for (int i = 0; i < box.lower.dim(); ++i)
      if (box.lower[i] > box.upper[i]) throw DomainError("box: lower > upper");
  }

  explicit ConvexSet(Ball b) : v_(std::move(b)) {
    if (!(std::get<Ball>(v_).radius > 0.0)) throw DomainError("ball: radius must be positive");
  }

  explicit ConvexSet(Halfspace h) : v_(std::move(h)) {
    if (norm2(std::get<Halfspace>(v_).normal) == 0.0)
      throw DomainError("halfspace: zero normal");
  }

  explicit ConvexSet(Simplex s) : v_(std::move(s)) {
    if (std::get<Simplex>(v_).dim < 1) throw DomainError("simplex: dim must be >= 1");
  }

  static ConvexSet box(Vector lower, Vector upper) {
    return ConvexSet(Box{std::move(lower), std::move(upper)});
  }
  static ConvexSet interval(double lo, double hi) { return box({lo}, {hi}); }
  static ConvexSet ball(Vector center, double radius) {
    return ConvexSet(Ball{std::move(center), radius});
  }
  static ConvexSet halfspace(Vector normal, double offset) {
    return ConvexSet(Halfspace{std::move(normal), offset});
  }
  static ConvexSet simplex(int dim) { return ConvexSet(Simplex{dim}); }

  const Variant& value() const { return v_; }

  int dim() const {
    return std::visit(
        [](const auto& s) -> int {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Box>) return s.lower.dim();
          if constexpr (std::is_same_v<T, Ball>) return s.center.dim();
          if constexpr (std::is_same_v<T, Halfspace>) return s.normal.dim();
          if constexpr (std::is_same_v<T, Simplex>) return s.dim;
        },
        v_);
  }

 private:
  Variant v_;
};

/// True iff x is within `tol` of satisfying every defining constraint.
inline bool contains(const ConvexSet& set, const Vector& x, double tol) {
  if (x.dim() != set.dim()) throw DimensionError("contains: dimension mismatch");
  return std::visit(
      [&](const auto& s) -> bool {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Box>) {
          for (int i = 0; i < x.dim(); ++i)
            if (x[i] < s.lower[i] - tol || x[i] > s.upper[i] + tol) return false;
          return true;
        } else if constexpr (std::is_same_v<T, Ball>) {
          return norm2(x - s.center) <= s.radius + tol;
        } else if constexpr (std::is_same_v<T, Halfspace>) {
          return dot(s.normal, x) <= s.offset + tol;
        } else {
          double sum = 0.0;
          for (int i = 0; i < x.dim(); ++i) {
            if (x[i] < -tol) return false;
            sum += x[i];
          }
          return std::abs(sum - 1.0) <= tol;
        }
      },
      set.value());
}

namespace detail {

/// Euclidean projection onto the standard simplex (sort-based).
inline Vector euclidean_project_simplex(const Vector& x) {
  const int n = x.dim();
  std::vector<double> u(x.values());
  std::sort(u.begin(), u.end(), std::greater<double>());
  double css = 0.0, tau = 0.0;
  for (int j = 0; j < n; ++j) {
    css += u[static_cast<std::size_t>(j)];
    const double t = (css - 1.0) / (j + 1);
    if (u[static_cast<std::size_t>(j)] - t > 0.0) tau = t;
  }
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = std::max(x[i] - tau, 0.0);
  return Vector(std::move(out));
}

}  // namespace detail

/// Euclidean (metric) projection onto the set. This is the projection the
/// generic inner solver needs; the Bregman projection lives in projection.hpp.
inline Vector euclidean_project(const ConvexSet& set, const Vector& x) {
  if (x.dim() != set.dim()) throw DimensionError("euclidean_project: dimension mismatch");
  return std::visit(
      [&](const auto& s) -> Vector {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Box>) {
          std::vector<double> out(static_cast<std::size_t>(x.dim()));
          for (int i = 0; i < x.dim(); ++i)
            out[static_cast<std::size_t>(i)] = std::min(std::max(x[i], s.lower[i]), s.upper[i]);
          return Vector(std::move(out));
        } else if constexpr (std::is_same_v<T, Ball>) {
          const Vector d = x - s.center;
          const double r = norm2(d);
          if (r <= s.radius) return x;
          return s.center + (s.radius / r) * d;
        } else if constexpr (std::is_same_v<T, Halfspace>) {
          const double g = dot(s.normal, x) - s.offset;
          if (g <= 0.0) return x;
          return x - (g / dot(s.normal, s.normal)) * s.normal;
        } else {
          return detail::euclidean_project_simplex(x);
        }
      },
      set.value());
}

/// Draws a point of the set. `min_positive > 0` keeps every component at
/// least that far inside the positive orthant (for entropy-kernel pairings).
inline Vector sample_point(const ConvexSet& set, std::mt19937_64& rng, double min_positive = 0.0) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  return std::visit(
      [&](const auto& s) -> Vector {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Box>) {
          std::vector<double> out(static_cast<std::size_t>(set.dim()));
          for (int i = 0; i < set.dim(); ++i) {
            const double lo = std::max(s.lower[i], min_positive);
            out[static_cast<std::size_t>(i)] = lo + (s.upper[i] - lo) * unit(rng);
          }
          return Vector(std::move(out));
        } else if constexpr (std::is_same_v<T, Ball>) {
          std::normal_distribution<double> normal(0.0, 1.0);
          for (int attempt = 0; attempt < 64; ++attempt) {
            std::vector<double> dir(static_cast<std::size_t>(set.dim()));
            for (auto& d : dir) d = normal(rng);
            Vector v(std::move(dir));
            const double n = norm2(v);
            if (n == 0.0) continue;
            const double r = s.radius * std::pow(unit(rng), 1.0 / set.dim());
            Vector p = s.center + (r / n) * v;
            bool ok = true;
            for (double c : p)
              if (c < min_positive) ok = false;
            if (ok) return p;
          }
          return s.center;  // assumed valid for the chosen geometry
        } else if constexpr (std::is_same_v<T, Halfspace>) {
          for (int attempt = 0; attempt < 64; ++attempt) {
            std::vector<double> raw(static_cast<std::size_t>(set.dim()));
            for (auto& c : raw) c = -3.0 + 6.0 * unit(rng);
            Vector p = euclidean_project(set, Vector(std::move(raw)));
            bool ok = true;
            for (double c : p)
              if (c < min_positive) ok = false;
            if (ok) return p;
          }
          throw DomainError("sample_point: no positive halfspace sample found");
        } else {
          // Dirichlet(1,...,1): strictly positive with probability one
          std::vector<double> e(static_cast<std::size_t>(set.dim()));
          double sum = 0.0;
          for (auto& c : e) {
            c = -std::log(std::max(unit(rng), 1e-300));
            sum += c;
          }
          for (auto& c : e) c = std::max(c / sum, min_positive);
          double total = std::accumulate(e.begin(), e.end(), 0.0);
          for (auto& c : e) c /= total;
          return Vector(std::move(e));
        }
      },
      set.value());
}

/// A deterministic batch of samples; roughly every fourth point is pushed to
/// the boundary (box faces, sphere surface) when `min_positive == 0`.
inline std::vector<Vector> sample_points(const ConvexSet& set, int count, std::mt19937_64& rng,
                                         double min_positive = 0.0) {
  std::vector<Vector> out;
  out.reserve(static_cast<std::size_t>(count));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < count; ++i) {
    Vector p = sample_point(set, rng, min_positive);
    if (min_positive == 0.0 && i % 4 == 3) {
      if (const auto* box = std::get_if<Box>(&set.value())) {
        const int j = static_cast<int>(unit(rng) * box->lower.dim()) % box->lower.dim();
        p[j] = unit(rng) < 0.5 ? box->lower[j] : box->upper[j];
      } else if (const auto* ball = std::get_if<Ball>(&set.value())) {
        Vector d = p - ball->center;
        const double n = norm2(d);
        if (n > 0.0) p = ball->center + (ball->radius / n) * d;
      }
    }
    out.push_back(std::move(p));
  }
  return out;
}

/// Axis-aligned box enclosing the set, for grid oracles. Unbounded variants
/// (halfspace) are truncated to the given half-width around the origin.
inline Box bounding_box(const ConvexSet& set, double halfwidth_for_unbounded = 4.0) {
  return std::visit(
      [&](const auto& s) -> Box {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Box>) {
          return s;
        } else if constexpr (std::is_same_v<T, Ball>) {
          Vector lo = s.center, hi = s.center;
          for (int i = 0; i < lo.dim(); ++i) {
            lo[i] -= s.radius;
            hi[i] += s.radius;
          }
          return Box{lo, hi};
        } else if constexpr (std::is_same_v<T, Halfspace>) {
          return Box{Vector::constant(set.dim(), -halfwidth_for_unbounded),
                     Vector::constant(set.dim(), halfwidth_for_unbounded)};
        } else {
          return Box{Vector::zeros(set.dim()), Vector::constant(set.dim(), 1.0)};
        }
      },
      set.value());
}

}  // namespace bregsolve
