#pragma once

// Coordinate diffeomorphisms between charts.
//
// A ChartMap is given by one direction written as a generic callable (so it
// can be differentiated to third order) and a numeric solver for the other
// direction. Derivatives of the solved direction come from Newton steps
// carried out in dual arithmetic: starting from the exact value, each step
// with the frozen Jacobian fixes one more derivative order.

#include <functional>
#include <memory>
#include <string>
#include <utility>

#include "framekin/dual.hpp"
#include "framekin/errors.hpp"
#include "framekin/geometry.hpp"
#include "framekin/point_function.hpp"
#include "framekin/tensor.hpp"

namespace framekin {

using MapFunction = PointFunction<VecOf, double, D1, D2, D3>;
using PointSolver = std::function<Vec4<double>(const Vec4<double>&)>;

class ChartMap {
 public:
  enum class Explicit { Forward, Inverse };

  ChartMap() = default;

  /// `explicit_fn` maps source→target when `which == Forward`, target→source
  /// otherwise; `solve` inverts it on plain values.
  ChartMap(std::string source, std::string target, std::string label, MapFunction explicit_fn, PointSolver solve,
           Explicit which)
      : source_(std::move(source)),
        target_(std::move(target)),
        label_(std::move(label)),
        explicit_fn_(std::move(explicit_fn)),
        solve_(std::move(solve)),
        which_(which) {}

  const std::string& source_chart() const { return source_; }
  const std::string& target_chart() const { return target_; }
  const std::string& label() const { return label_; }

  template <class T>
  Vec4<T> forward(const Vec4<T>& x) const {
    return which_ == Explicit::Forward ? explicit_fn_(x) : solve_lifted(x);
  }

  template <class T>
  Vec4<T> inverse(const Vec4<T>& y) const {
    return which_ == Explicit::Inverse ? explicit_fn_(y) : solve_lifted(y);
  }

  /// Λ^μ_α = ∂y^μ/∂x^α at source point x.
  template <class T>
  Mat4<T> jacobian(const Vec4<T>& x) const {
    if (which_ == Explicit::Forward) return explicit_jacobian(x);
    return framekin::inverse(explicit_jacobian(forward(x)));
  }

  /// (Λ⁻¹)^α_μ = ∂x^α/∂y^μ at target point y.
  template <class T>
  Mat4<T> inverse_jacobian(const Vec4<T>& y) const {
    if (which_ == Explicit::Inverse) return explicit_jacobian(y);
    return framekin::inverse(explicit_jacobian(inverse(y)));
  }

  /// Derivative of the explicit direction; usable for T up to D2.
  template <class T>
  Mat4<T> explicit_jacobian(const Vec4<T>& z) const {
    Vec4<Dual<T>> out = explicit_fn_(seed(z));
    Mat4<T> j;
    for (std::size_t m = 0; m < kDim; ++m)
      for (std::size_t a = 0; a < kDim; ++a) j[m][a] = out[m].d[a];
    return j;
  }

  const MapFunction& explicit_function() const { return explicit_fn_; }
  Explicit explicit_direction() const { return which_; }

 private:
  template <class T>
  Vec4<T> solve_lifted(const Vec4<T>& target) const {
    const Vec4<double> z0 = solve_(values(target));
    if constexpr (std::is_same_v<T, double>) {
      return z0;
    } else {
      const Mat4<double> jinv = framekin::inverse(explicit_jacobian(z0));
      Vec4<T> z = constant_vec<T>(z0);
      for (int it = 0; it <= derivative_order_v<T>; ++it) {
        Vec4<T> r = explicit_fn_(z);
        for (std::size_t i = 0; i < kDim; ++i) r[i] -= target[i];
        for (std::size_t i = 0; i < kDim; ++i) {
          T corr(0.0);
          for (std::size_t j = 0; j < kDim; ++j) corr += jinv[i][j] * r[j];
          z[i] -= corr;
        }
      }
      return z;
    }
  }

  std::string source_;
  std::string target_;
  std::string label_;
  MapFunction explicit_fn_;
  PointSolver solve_;
  Explicit which_ = Explicit::Forward;
};

/// Metric of the source chart expressed in the target chart:
/// g'_{μν}(y) = (Λ⁻¹)^α_μ (Λ⁻¹)^β_ν g_{αβ}(x(y)).
inline MetricField push_metric(const ChartMap& map, const MetricField& metric) {
  if (metric.chart_id() != map.source_chart())
    throw ValidationError("push_metric: metric chart '" + metric.chart_id() + "' is not the map source '" +
                          map.source_chart() + "'");
  return MetricField(map.target_chart(), [map, metric](const auto& y) {
    using T = typename std::decay_t<decltype(y)>::value_type;
    const Vec4<T> x = map.inverse(y);
    const Mat4<T> ji = map.inverse_jacobian(y);
    const Mat4<T> g = metric.components(x);
    return matmul(transpose(ji), matmul(g, ji));
  });
}

/// Vector field of the source chart expressed in the target chart:
/// Q'^μ(y) = Λ^μ_α Q^α(x(y)).
inline VectorField push_vector_field(const ChartMap& map, const VectorField& field) {
  if (field.chart_id() != map.source_chart())
    throw ValidationError("push_vector_field: field chart '" + field.chart_id() + "' is not the map source '" +
                          map.source_chart() + "'");
  return VectorField(map.target_chart(), field.label(), [map, field](const auto& y) {
    using T = typename std::decay_t<decltype(y)>::value_type;
    const Vec4<T> x = map.inverse(y);
    return matvec(map.jacobian(x), field.components(x));
  });
}

/// Map applying `first` then `second`.
inline ChartMap compose(const ChartMap& first, const ChartMap& second) {
  if (first.target_chart() != second.source_chart())
    throw ValidationError("compose: chart mismatch '" + first.target_chart() + "' vs '" + second.source_chart() + "'");
  MapFunction fn([first, second](const auto& x) { return second.forward(first.forward(x)); });
  PointSolver solve = [first, second](const Vec4<double>& z) { return first.inverse(second.inverse(z)); };
  return ChartMap(first.source_chart(), second.target_chart(), second.label() + "∘" + first.label(), std::move(fn),
                  std::move(solve), ChartMap::Explicit::Forward);
}

/// Affine map y = A x + b within or between charts.
inline ChartMap affine_map(std::string source, std::string target, std::string label, const Mat4<double>& a,
                           const Vec4<double>& b) {
  const Mat4<double> ainv = inverse(a);
  MapFunction fn([a, b](const auto& x) {
    using T = typename std::decay_t<decltype(x)>::value_type;
    Vec4<T> y;
    for (std::size_t i = 0; i < kDim; ++i) {
      T acc(b[i]);
      for (std::size_t j = 0; j < kDim; ++j) acc += a[i][j] * x[j];
      y[i] = acc;
    }
    return y;
  });
  PointSolver solve = [ainv, b](const Vec4<double>& y) {
    Vec4<double> d;
    for (std::size_t i = 0; i < kDim; ++i) d[i] = y[i] - b[i];
    return matvec(ainv, d);
  };
  return ChartMap(std::move(source), std::move(target), std::move(label), std::move(fn), std::move(solve),
                  ChartMap::Explicit::Forward);
}

}  // namespace framekin
