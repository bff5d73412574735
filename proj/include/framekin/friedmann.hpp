#pragma once

// Model catalog: Minkowski, spatially flat Friedmann with R(t) = 1 + at,
// the frames V and Z, the chart adapted to Z, and Minkowski fixtures.

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "framekin/chart_map.hpp"
#include "framekin/dual.hpp"
#include "framekin/errors.hpp"
#include "framekin/frames.hpp"
#include "framekin/geometry.hpp"
#include "framekin/quadrature.hpp"
#include "framekin/tensor.hpp"

namespace framekin {

inline const std::string kMinkowskiChart = "minkowski";
inline const std::string kFriedmannChart = "friedmann";
inline const std::string kZChart = "friedmann-z";

/// R(t) = 1 + at, defined for t > −1/a.
struct LinearScaleFactor {
  double a = 0.0;

  template <class T>
  T R(const T& t) const {
    const T r = 1.0 + a * t;
    if (!(value_of(r) > 0.0)) throw DomainError("scale factor R(t) <= 0 at t = " + std::to_string(value_of(t)));
    return r;
  }
  double Rdot(double) const { return a; }
  double Rddot(double) const { return 0.0; }
  double domain_lower_bound() const {
    return a > 0.0 ? -1.0 / a : -std::numeric_limits<double>::infinity();
  }
};

inline MetricField make_minkowski() {
  return MetricField(kMinkowskiChart, [](const auto& x) {
    using T = typename std::decay_t<decltype(x)>::value_type;
    return minkowski_eta<T>();
  });
}

/// g = dt⊗dt − R(t)² Σ dxⁱ⊗dxⁱ.
inline MetricField friedmann_metric(const LinearScaleFactor& scale) {
  return MetricField(kFriedmannChart, [scale](const auto& x) {
    using T = typename std::decay_t<decltype(x)>::value_type;
    const T r = scale.R(x[0]);
    Mat4<T> g = zero_mat<T>();
    g[0][0] = T(1.0);
    for (std::size_t i = 1; i < kDim; ++i) g[i][i] = -(r * r);
    return g;
  });
}

struct FriedmannModel {
  LinearScaleFactor scale;
  MetricField metric;
  FrameField frame_V;
  double u = 0.0;
  double v = 0.0;  // u(1+u²)^{−1/2}
  FrameField frame_Z;
};

inline double velocity_from_u(double u) { return u / std::sqrt(1.0 + u * u); }

inline double u_from_velocity(double v) {
  if (!(std::abs(v) < 1.0)) throw ValidationError("velocity must satisfy |v| < 1");
  return v / std::sqrt(1.0 - v * v);
}

inline FriedmannModel make_friedmann(double a, double u) {
  if (!(a >= 0.0) || !std::isfinite(a)) throw ValidationError("expansion parameter a must be finite and >= 0");
  if (!std::isfinite(u)) throw ValidationError("u must be finite");
  FriedmannModel m;
  m.scale = LinearScaleFactor{a};
  m.metric = friedmann_metric(m.scale);
  m.u = u;
  m.v = velocity_from_u(u);
  const Vec4<double> origin{0.0, 0.0, 0.0, 0.0};
  m.frame_V = make_frame(VectorField(kFriedmannChart, "V",
                                     [](const auto& x) {
                                       using T = typename std::decay_t<decltype(x)>::value_type;
                                       return Vec4<T>{T(1.0), T(0.0), T(0.0), T(0.0)};
                                     }),
                         m.metric, origin);
  const auto scale = m.scale;
  m.frame_Z = make_frame(VectorField(kFriedmannChart, "Z",
                                     [scale, u](const auto& x) {
                                       using T = typename std::decay_t<decltype(x)>::value_type;
                                       using std::sqrt;
                                       const T r = scale.R(x[0]);
                                       return Vec4<T>{sqrt(r * r + u * u) / r, u / (r * r), T(0.0), T(0.0)};
                                     }),
                         m.metric, origin);
  return m;
}

/// The chart adapted to Z:
///   t′  = F(t) − u x¹,      F(t) = ∫₀ᵗ √(R²+u²)/R dr
///   x¹′ = x¹ − u G(t),      G(t) = ∫₀ᵗ 1/(R√(R²+u²)) dr
/// Inversion uses H = F − u²G = t′ + u x¹′, which is strictly increasing.
inline ChartMap z_chart(const FriedmannModel& model, double quad_tol = 1e-12) {
  const LinearScaleFactor scale = model.scale;
  const double u = model.u;
  auto f_integrand = [scale, u](const auto& t) {
    using std::sqrt;
    const auto r = scale.R(t);
    return sqrt(r * r + u * u) / r;
  };
  auto g_integrand = [scale, u](const auto& t) {
    using std::sqrt;
    const auto r = scale.R(t);
    return 1.0 / (r * sqrt(r * r + u * u));
  };
  auto F = [f_integrand, quad_tol](double t) { return adaptive_simpson(f_integrand, 0.0, t, quad_tol); };
  auto G = [g_integrand, quad_tol](double t) { return adaptive_simpson(g_integrand, 0.0, t, quad_tol); };

  MapFunction forward([=](const auto& x) {
    using T = typename std::decay_t<decltype(x)>::value_type;
    const double t0 = value_of(x[0]);
    if (!(t0 > scale.domain_lower_bound())) throw DomainError("z_chart: t outside the scale-factor domain");
    const T f = lift_antiderivative(x[0], F(t0), f_integrand);
    const T g = lift_antiderivative(x[0], G(t0), g_integrand);
    return Vec4<T>{f - u * x[1], x[1] - u * g, x[2], x[3]};
  });

  PointSolver solve = [=](const Vec4<double>& y) {
    const double target = y[0] + u * y[1];
    auto H = [&](double t) { return F(t) - u * u * G(t); };
    auto dH = [&](double t) {
      const double r = scale.R(t);
      return r / std::sqrt(r * r + u * u);
    };
    // Bracket: H′ ≤ 1 so H(t) ≤ t for t ≥ 0 and H(t) ≥ t for t ≤ 0.
    const double floor = scale.domain_lower_bound();
    double lo;
    double hi;
    if (target >= 0.0) {
      lo = 0.0;
      hi = std::max(1.0, target);
      while (H(hi) < target) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e12) throw NumericError("z_chart inverse: no bracket");
      }
    } else {
      hi = 0.0;
      lo = std::max(target, std::isfinite(floor) ? 0.5 * floor : target);
      while (H(lo) > target) {
        hi = lo;
        lo = std::isfinite(floor) ? 0.5 * (lo + floor) : 2.0 * lo;
        if (std::isfinite(floor) && lo - floor < 1e-14 * std::abs(floor))
          throw DomainError("z_chart inverse: preimage outside the scale-factor domain");
      }
    }
    for (int i = 0; i < 30; ++i) {
      const double mid = 0.5 * (lo + hi);
      (H(mid) < target ? lo : hi) = mid;
    }
    double t = 0.5 * (lo + hi);
    for (int i = 0; i < 50; ++i) {
      const double step = (H(t) - target) / dH(t);
      t -= step;
      if (std::abs(step) <= 1e-12 * std::max(1.0, std::abs(t))) break;
    }
    return Vec4<double>{t, y[1] + u * G(t), y[2], y[3]};
  };

  return ChartMap(kFriedmannChart, kZChart, "z-chart", std::move(forward), std::move(solve),
                  ChartMap::Explicit::Forward);
}

/// Uniformly rotating observers Q = γ(∂_t − ωy∂_x + ωx∂_y) on r < radius_cap.
inline FrameField rotating_minkowski_frame(const MetricField& minkowski, double omega, double radius_cap) {
  if (!(radius_cap > 0.0)) throw ValidationError("rotating frame: radius_cap must be positive");
  if (!(std::abs(omega) * radius_cap < 1.0)) throw ValidationError("rotating frame: omega*radius_cap must be < 1");
  VectorField raw(minkowski.chart_id(), "rotating", [omega, radius_cap](const auto& x) {
    using T = typename std::decay_t<decltype(x)>::value_type;
    const double r2 = value_of(x[1]) * value_of(x[1]) + value_of(x[2]) * value_of(x[2]);
    if (!(r2 < radius_cap * radius_cap)) throw DomainError("rotating frame evaluated outside its cylinder");
    return Vec4<T>{T(1.0), -omega * x[2], omega * x[1], T(0.0)};
  });
  const Vec4<double> probe{0.0, 0.0, 0.0, 0.0};
  return make_frame(raw, minkowski, probe);
}

/// Constant frame moving with velocity v along x¹ in Minkowski coordinates.
inline FrameField boosted_minkowski_frame(const MetricField& minkowski, double v) {
  if (!(std::abs(v) < 1.0)) throw ValidationError("boost velocity must satisfy |v| < 1");
  const double gamma = 1.0 / std::sqrt(1.0 - v * v);
  VectorField raw(minkowski.chart_id(), "boosted", [gamma, v](const auto& x) {
    using T = typename std::decay_t<decltype(x)>::value_type;
    return Vec4<T>{T(gamma), T(gamma * v), T(0.0), T(0.0)};
  });
  const Vec4<double> probe{0.0, 0.0, 0.0, 0.0};
  return make_frame(raw, minkowski, probe);
}

inline FrameField inertial_minkowski_frame(const MetricField& minkowski) { return boosted_minkowski_frame(minkowski, 0.0); }

inline Mat4<double> lorentz_boost_matrix(double v) {
  if (!(std::abs(v) < 1.0)) throw ValidationError("boost velocity must satisfy |v| < 1");
  const double gamma = 1.0 / std::sqrt(1.0 - v * v);
  Mat4<double> b = identity_mat<double>();
  b[0][0] = gamma;
  b[0][1] = -gamma * v;
  b[1][0] = -gamma * v;
  b[1][1] = gamma;
  return b;
}

/// x′ = Λx for a boost along x¹ within one chart.
inline ChartMap lorentz_boost(const std::string& chart, double v) {
  return affine_map(chart, chart, "boost", lorentz_boost_matrix(v), Vec4<double>{});
}

inline ChartMap translation(const std::string& chart, const Vec4<double>& shift) {
  return affine_map(chart, chart, "translation", identity_mat<double>(), shift);
}

inline ChartMap dilation(const std::string& chart, double factor) {
  if (factor == 0.0) throw ValidationError("dilation factor must be nonzero");
  Mat4<double> d = identity_mat<double>();
  for (std::size_t i = 0; i < kDim; ++i) d[i][i] = factor;
  return affine_map(chart, chart, "dilation", d, Vec4<double>{});
}

}  // namespace framekin
