#pragma once

// Dense fixed-size tensors over a generic scalar.
//
// Rank-k objects are nested std::arrays with all indices running over 0..3;
// a connection is stored as gamma[mu][nu][rho] = Γ^μ_{νρ} and a Riemann
// tensor as riemann[alpha][beta][gamma][mu] = R^α_{βγμ}.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <utility>

#include "framekin/dual.hpp"
#include "framekin/errors.hpp"

namespace framekin {

inline constexpr std::size_t kDim = 4;

template <class T>
using Vec4 = std::array<T, kDim>;
template <class T>
using Mat4 = std::array<std::array<T, kDim>, kDim>;
template <class T>
using Tensor3 = std::array<Mat4<T>, kDim>;
template <class T>
using Tensor4 = std::array<Tensor3<T>, kDim>;

template <class T>
Mat4<T> zero_mat() {
  Mat4<T> m;
  for (auto& row : m) row.fill(T(0.0));
  return m;
}

template <class T>
Mat4<T> identity_mat() {
  Mat4<T> m = zero_mat<T>();
  for (std::size_t i = 0; i < kDim; ++i) m[i][i] = T(1.0);
  return m;
}

/// Minkowski components diag(1,-1,-1,-1).
template <class T = double>
Mat4<T> minkowski_eta() {
  Mat4<T> m = zero_mat<T>();
  m[0][0] = T(1.0);
  for (std::size_t i = 1; i < kDim; ++i) m[i][i] = T(-1.0);
  return m;
}

template <class T>
Vec4<T> constant_vec(const Vec4<double>& x) {
  Vec4<T> r;
  for (std::size_t i = 0; i < kDim; ++i) r[i] = T(x[i]);
  return r;
}

template <class T>
Vec4<double> values(const Vec4<T>& x) {
  Vec4<double> r;
  for (std::size_t i = 0; i < kDim; ++i) r[i] = value_of(x[i]);
  return r;
}

template <class T>
Mat4<double> values(const Mat4<T>& m) {
  Mat4<double> r;
  for (std::size_t i = 0; i < kDim; ++i)
    for (std::size_t j = 0; j < kDim; ++j) r[i][j] = value_of(m[i][j]);
  return r;
}

/// Promote a point to the next nesting level with each coordinate seeded as
/// an independent variable.
template <class T>
Vec4<Dual<T>> seed(const Vec4<T>& x) {
  Vec4<Dual<T>> r;
  for (std::size_t i = 0; i < kDim; ++i) {
    r[i] = Dual<T>(x[i]);
    r[i].d[i] = T(1.0);
  }
  return r;
}

/// Seed a plain point at an arbitrary nesting level.
template <class T>
Vec4<T> seed_variables(const Vec4<double>& x) {
  Vec4<T> r;
  for (std::size_t i = 0; i < kDim; ++i) r[i] = variable<T>(x[i], i);
  return r;
}

template <class T>
Vec4<T> matvec(const Mat4<T>& m, const Vec4<T>& x) {
  Vec4<T> r;
  for (std::size_t i = 0; i < kDim; ++i) {
    T acc(0.0);
    for (std::size_t j = 0; j < kDim; ++j) acc += m[i][j] * x[j];
    r[i] = acc;
  }
  return r;
}

template <class T>
Mat4<T> matmul(const Mat4<T>& a, const Mat4<T>& b) {
  Mat4<T> r;
  for (std::size_t i = 0; i < kDim; ++i)
    for (std::size_t j = 0; j < kDim; ++j) {
      T acc(0.0);
      for (std::size_t k = 0; k < kDim; ++k) acc += a[i][k] * b[k][j];
      r[i][j] = acc;
    }
  return r;
}

template <class T>
Mat4<T> transpose(const Mat4<T>& a) {
  Mat4<T> r;
  for (std::size_t i = 0; i < kDim; ++i)
    for (std::size_t j = 0; j < kDim; ++j) r[i][j] = a[j][i];
  return r;
}

/// g(x, y) = g_{μν} x^μ y^ν.
template <class T>
T inner(const Mat4<T>& g, const Vec4<T>& x, const Vec4<T>& y) {
  T acc(0.0);
  for (std::size_t i = 0; i < kDim; ++i)
    for (std::size_t j = 0; j < kDim; ++j) acc += g[i][j] * x[i] * y[j];
  return acc;
}

/// Gauss-Jordan inverse with partial pivoting on the value part.
template <class T>
Mat4<T> inverse(const Mat4<T>& m) {
  Mat4<T> a = m;
  Mat4<T> inv = identity_mat<T>();
  double scale = 0.0;
  for (const auto& row : m)
    for (const auto& e : row) scale = std::max(scale, std::abs(value_of(e)));
  if (!(scale > 0.0) || !std::isfinite(scale)) throw NumericError("inverse: matrix is zero or non-finite");
  for (std::size_t col = 0; col < kDim; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < kDim; ++r)
      if (std::abs(value_of(a[r][col])) > std::abs(value_of(a[piv][col]))) piv = r;
    if (std::abs(value_of(a[piv][col])) <= 1e-14 * scale) throw NumericError("inverse: matrix is singular");
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    T p = a[col][col];
    for (std::size_t j = 0; j < kDim; ++j) {
      a[col][j] = a[col][j] / p;
      inv[col][j] = inv[col][j] / p;
    }
    for (std::size_t r = 0; r < kDim; ++r) {
      if (r == col) continue;
      T f = a[r][col];
      for (std::size_t j = 0; j < kDim; ++j) {
        a[r][j] -= f * a[col][j];
        inv[r][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

inline double max_abs(const Vec4<double>& x) {
  double m = 0.0;
  for (double e : x) m = std::max(m, std::abs(e));
  return m;
}

inline double max_abs(const Mat4<double>& x) {
  double m = 0.0;
  for (const auto& row : x) m = std::max(m, max_abs(row));
  return m;
}

inline double max_abs(const Tensor3<double>& x) {
  double m = 0.0;
  for (const auto& s : x) m = std::max(m, max_abs(s));
  return m;
}

inline double max_abs(const Tensor4<double>& x) {
  double m = 0.0;
  for (const auto& s : x) m = std::max(m, max_abs(s));
  return m;
}

}  // namespace framekin
