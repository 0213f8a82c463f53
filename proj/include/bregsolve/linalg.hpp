#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <utility>
#include <vector>

#include "bregsolve/errors.hpp"

namespace bregsolve {

/// Dense real vector. Finite-dimensional points and dual points share this
/// representation. Components must be finite; construction checks.
class Vector {
 public:
  Vector() = default;

  explicit Vector(std::vector<double> values) : values_(std::move(values)) {
    check_finite();
  }

  Vector(std::initializer_list<double> values) : values_(values) {
    check_finite();
  }

  static Vector zeros(int dim) { return Vector(std::vector<double>(static_cast<std::size_t>(dim), 0.0)); }

  static Vector constant(int dim, double v) {
    return Vector(std::vector<double>(static_cast<std::size_t>(dim), v));
  }

  int dim() const { return static_cast<int>(values_.size()); }
  bool empty() const { return values_.empty(); }

  double operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }
  double& operator[](int i) { return values_[static_cast<std::size_t>(i)]; }

  const std::vector<double>& values() const { return values_; }

  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

  friend bool operator==(const Vector& a, const Vector& b) { return a.values_ == b.values_; }

 private:
  void check_finite() const {
    for (double v : values_) {
      if (!std::isfinite(v)) throw DomainError("vector component is not finite");
    }
  }

  std::vector<double> values_;
};

inline void require_same_dim(const Vector& a, const Vector& b) {
  if (a.dim() != b.dim()) throw DimensionError("vector dimensions differ");
}

inline Vector operator+(const Vector& a, const Vector& b) {
  require_same_dim(a, b);
  std::vector<double> out(static_cast<std::size_t>(a.dim()));
  for (int i = 0; i < a.dim(); ++i) out[static_cast<std::size_t>(i)] = a[i] + b[i];
  return Vector(std::move(out));
}

inline Vector operator-(const Vector& a, const Vector& b) {
  require_same_dim(a, b);
  std::vector<double> out(static_cast<std::size_t>(a.dim()));
  for (int i = 0; i < a.dim(); ++i) out[static_cast<std::size_t>(i)] = a[i] - b[i];
  return Vector(std::move(out));
}

inline Vector operator*(double s, const Vector& a) {
  std::vector<double> out(static_cast<std::size_t>(a.dim()));
  for (int i = 0; i < a.dim(); ++i) out[static_cast<std::size_t>(i)] = s * a[i];
  return Vector(std::move(out));
}

inline double dot(const Vector& a, const Vector& b) {
  require_same_dim(a, b);
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

inline double inf_norm(const Vector& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

inline double norm2(const Vector& a) { return std::sqrt(dot(a, a)); }

/// Dense row-major matrix; only the small sizes this library needs.
class Matrix {
 public:
  Matrix() : rows_(0), cols_(0) {}

  Matrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill) {}

  Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = static_cast<int>(rows.size());
    cols_ = rows_ > 0 ? static_cast<int>(rows.begin()->size()) : 0;
    data_.reserve(static_cast<std::size_t>(rows_) * static_cast<std::size_t>(cols_));
    for (const auto& r : rows) {
      if (static_cast<int>(r.size()) != cols_) throw DimensionError("ragged matrix initializer");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double operator()(int i, int j) const { return data_[idx(i, j)]; }
  double& operator()(int i, int j) { return data_[idx(i, j)]; }

  Matrix transposed() const {
    Matrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Vector apply(const Vector& x) const {
    if (x.dim() != cols_) throw DimensionError("matrix-vector dimension mismatch");
    std::vector<double> out(static_cast<std::size_t>(rows_), 0.0);
    for (int i = 0; i < rows_; ++i) {
      double s = 0.0;
      for (int j = 0; j < cols_; ++j) s += (*this)(i, j) * x[j];
      out[static_cast<std::size_t>(i)] = s;
    }
    return Vector(std::move(out));
  }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DimensionError("matrix sizes differ");
    Matrix out(a.rows_, a.cols_);
    for (std::size_t i = 0; i < a.data_.size(); ++i) out.data_[i] = a.data_[i] + b.data_[i];
    return out;
  }

  friend Matrix operator*(double s, const Matrix& a) {
    Matrix out(a.rows_, a.cols_);
    for (std::size_t i = 0; i < a.data_.size(); ++i) out.data_[i] = s * a.data_[i];
    return out;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw DimensionError("matrix product dimension mismatch");
    Matrix out(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
      for (int k = 0; k < a.cols_; ++k) {
        const double aik = a(i, k);
        for (int j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
      }
    return out;
  }

 private:
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(j);
  }

  int rows_, cols_;
  std::vector<double> data_;
};

/// Solves A x = b by Gaussian elimination with partial pivoting.
inline Vector solve_linear(Matrix a, Vector b) {
  const int n = a.rows();
  if (a.cols() != n || b.dim() != n) throw DimensionError("solve_linear needs square A and matching b");
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
    if (a(piv, col) == 0.0) throw DomainError("singular linear system");
    if (piv != col) {
      for (int j = 0; j < n; ++j) std::swap(a(piv, j), a(col, j));
      std::swap(b[piv], b[col]);
    }
    for (int r = col + 1; r < n; ++r) {
      const double m = a(r, col) / a(col, col);
      if (m == 0.0) continue;
      for (int j = col; j < n; ++j) a(r, j) -= m * a(col, j);
      b[r] -= m * b[col];
    }
  }
  std::vector<double> x(static_cast<std::size_t>(n), 0.0);
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int j = i + 1; j < n; ++j) s -= a(i, j) * x[static_cast<std::size_t>(j)];
    x[static_cast<std::size_t>(i)] = s / a(i, i);
  }
  return Vector(std::move(x));
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
inline std::vector<double> symmetric_eigenvalues(Matrix a) {
  const int n = a.rows();
  if (a.cols() != n) throw DimensionError("symmetric_eigenvalues needs a square matrix");
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    if (off < 1e-30) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> eig(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) eig[static_cast<std::size_t>(i)] = a(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

inline double spectral_norm(const Matrix& a) {
  const auto eig = symmetric_eigenvalues(a.transposed() * a);
  return std::sqrt(std::max(0.0, eig.back()));
}

}  // namespace bregsolve
