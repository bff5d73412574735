#pragma once

// Geodesic integration, parallel transport of tetrads and the free-particle
// experiment in the chart adapted to Z.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "framekin/chart_map.hpp"
#include "framekin/errors.hpp"
#include "framekin/friedmann.hpp"
#include "framekin/geometry.hpp"
#include "framekin/tensor.hpp"

namespace framekin {

struct StepControl {
  enum class Method { RK4, DP45 };
  Method method = Method::RK4;
  double step = 1e-3;        // fixed step (RK4) or initial step (DP45)
  double tolerance = 1e-10;  // DP45 local error target
  double min_step = 1e-14;
  bool estimate_error = true;  // RK4: step-doubling estimate, costs two extra half steps
};

struct GeodesicSample {
  double s = 0.0;
  ChartPoint point;
  Vec4<double> velocity{};
};

struct IntegratorStats {
  std::size_t steps = 0;
  std::size_t rejected = 0;
  double max_error_estimate = 0.0;
};

struct GeodesicPath {
  std::vector<GeodesicSample> samples;
  std::string metric_id;
  IntegratorStats stats;
  bool truncated = false;
  std::string truncation_reason;
  std::size_t origin_index = 0;  // sample holding the initial point
};

struct GeodesicState {
  Vec4<double> x{};
  Vec4<double> u{};
};

/// d/ds (x, u) = (u, −Γ(u,u)).
inline GeodesicState geodesic_rhs(const MetricField& metric, const GeodesicState& y) {
  const Tensor3<double> gamma = connection_at<double>(metric, y.x);
  GeodesicState d;
  d.x = y.u;
  for (std::size_t m = 0; m < kDim; ++m) {
    double acc = 0.0;
    for (std::size_t a = 0; a < kDim; ++a)
      for (std::size_t b = 0; b < kDim; ++b) acc += gamma[m][a][b] * y.u[a] * y.u[b];
    d.u[m] = -acc;
  }
  return d;
}

namespace detail {

inline GeodesicState axpy(const GeodesicState& y, double h, const GeodesicState& k) {
  GeodesicState r = y;
  for (std::size_t i = 0; i < kDim; ++i) {
    r.x[i] += h * k.x[i];
    r.u[i] += h * k.u[i];
  }
  return r;
}

inline double state_distance(const GeodesicState& a, const GeodesicState& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < kDim; ++i) m = std::max({m, std::abs(a.x[i] - b.x[i]), std::abs(a.u[i] - b.u[i])});
  return m;
}

inline void require_unit_timelike(const MetricField& metric, const Vec4<double>& x, const Vec4<double>& v) {
  const double n = inner(metric.components(x), v, v);
  if (std::abs(n - 1.0) > 1e-10) throw ValidationError("initial velocity is not unit timelike (g(v,v) = " + std::to_string(n) + ")");
  if (!(v[0] > 0.0)) throw ValidationError("initial velocity is not future pointing");
}

}  // namespace detail

/// One classical RK4 step; h may be negative.
inline GeodesicState rk4_step(const MetricField& metric, const GeodesicState& y, double h) {
  const GeodesicState k1 = geodesic_rhs(metric, y);
  const GeodesicState k2 = geodesic_rhs(metric, detail::axpy(y, 0.5 * h, k1));
  const GeodesicState k3 = geodesic_rhs(metric, detail::axpy(y, 0.5 * h, k2));
  const GeodesicState k4 = geodesic_rhs(metric, detail::axpy(y, h, k3));
  GeodesicState r = y;
  for (std::size_t i = 0; i < kDim; ++i) {
    r.x[i] += h / 6.0 * (k1.x[i] + 2.0 * k2.x[i] + 2.0 * k3.x[i] + k4.x[i]);
    r.u[i] += h / 6.0 * (k1.u[i] + 2.0 * k2.u[i] + 2.0 * k3.u[i] + k4.u[i]);
  }
  return r;
}

namespace detail {

// Dormand–Prince 5(4) tableau.
struct DormandPrince {
  static constexpr double c[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
  static constexpr double a[7][6] = {
      {},
      {1.0 / 5},
      {3.0 / 40, 9.0 / 40},
      {44.0 / 45, -56.0 / 15, 32.0 / 9},
      {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
      {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
      {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
  };
  static constexpr double b5[7] = {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84, 0.0};
  static constexpr double b4[7] = {5179.0 / 57600, 0.0,          7571.0 / 16695, 393.0 / 640,
                                   -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};
};

inline std::pair<GeodesicState, double> dp45_step(const MetricField& metric, const GeodesicState& y, double h) {
  using DP = DormandPrince;
  std::array<GeodesicState, 7> k;
  for (int s = 0; s < 7; ++s) {
    GeodesicState ys = y;
    for (int j = 0; j < s; ++j) ys = axpy(ys, h * DP::a[s][j], k[j]);
    k[s] = geodesic_rhs(metric, ys);
  }
  GeodesicState hi = y;
  GeodesicState lo = y;
  for (int s = 0; s < 7; ++s) {
    hi = axpy(hi, h * DP::b5[s], k[s]);
    lo = axpy(lo, h * DP::b4[s], k[s]);
  }
  return {hi, state_distance(hi, lo)};
}

/// Integrate from s = 0 to s_end (either sign); samples in integration order.
inline GeodesicPath integrate_signed(const MetricField& metric, const ChartPoint& p0, const Vec4<double>& v0,
                                     double s_end, const StepControl& control) {
  if (!(control.step > 0.0)) throw ValidationError("step must be positive");
  GeodesicPath path;
  path.metric_id = metric.chart_id();
  GeodesicState y{p0.coords, v0};
  double s = 0.0;
  path.samples.push_back({s, p0, v0});
  const double dir = s_end >= 0.0 ? 1.0 : -1.0;
  const double span = std::abs(s_end);
  double h = control.step;
  auto push = [&](double s_new, const GeodesicState& y_new) {
    for (double c : y_new.x)
      if (!std::isfinite(c)) throw NumericError("geodesic integration produced non-finite coordinates");
    path.samples.push_back({s_new, ChartPoint{y_new.x, p0.chart_id}, y_new.u});
  };
  try {
    if (control.method == StepControl::Method::RK4) {
      const auto n = static_cast<std::size_t>(std::ceil(span / h - 1e-9));
      for (std::size_t i = 1; i <= n; ++i) {
        const double s_next = dir * std::min(span, static_cast<double>(i) * h);
        const double step = s_next - s;
        GeodesicState next = rk4_step(metric, y, step);
        if (control.estimate_error) {
          const GeodesicState half = rk4_step(metric, rk4_step(metric, y, 0.5 * step), 0.5 * step);
          path.stats.max_error_estimate =
              std::max(path.stats.max_error_estimate, state_distance(next, half) / 15.0);
        }
        y = next;
        s = s_next;
        ++path.stats.steps;
        push(s, y);
      }
    } else {
      while (std::abs(s) < span) {
        if (h < control.min_step) throw NumericError("adaptive step size underflow");
        const double step = dir * std::min(h, span - std::abs(s));
        auto [next, err] = dp45_step(metric, y, step);
        if (err <= control.tolerance) {
          y = next;
          s += step;
          ++path.stats.steps;
          path.stats.max_error_estimate = std::max(path.stats.max_error_estimate, err);
          push(s, y);
        } else {
          ++path.stats.rejected;
        }
        const double factor = err > 0.0 ? 0.9 * std::pow(control.tolerance / err, 0.2) : 5.0;
        h = std::abs(step) * std::clamp(factor, 0.2, 5.0);
      }
    }
  } catch (const DomainError& e) {
    path.truncated = true;
    path.truncation_reason = e.what();
  }
  return path;
}

}  // namespace detail

/// Proper-time geodesic from p0 with unit timelike v0, s ∈ [0, s_max]. Leaving
/// the chart domain truncates the path and records the reason.
inline GeodesicPath integrate_geodesic(const MetricField& metric, const ChartPoint& p0, const Vec4<double>& v0,
                                       double s_max, const StepControl& control = {}) {
  require_chart(metric, p0);
  if (!(s_max > 0.0)) throw ValidationError("s_max must be positive");
  detail::require_unit_timelike(metric, p0.coords, v0);
  return detail::integrate_signed(metric, p0, v0, s_max, control);
}

/// Geodesic through p with s ∈ [−half_span, half_span]; p sits at origin_index.
inline GeodesicPath integrate_geodesic_through(const MetricField& metric, const ChartPoint& p, const Vec4<double>& v,
                                               double half_span, const StepControl& control = {}) {
  require_chart(metric, p);
  if (!(half_span > 0.0)) throw ValidationError("half_span must be positive");
  detail::require_unit_timelike(metric, p.coords, v);
  GeodesicPath back = detail::integrate_signed(metric, p, v, -half_span, control);
  GeodesicPath fwd = detail::integrate_signed(metric, p, v, half_span, control);
  GeodesicPath path;
  path.metric_id = metric.chart_id();
  path.samples.assign(back.samples.rbegin(), back.samples.rend());
  path.origin_index = path.samples.size() - 1;
  path.samples.insert(path.samples.end(), fwd.samples.begin() + 1, fwd.samples.end());
  path.stats.steps = back.stats.steps + fwd.stats.steps;
  path.stats.rejected = back.stats.rejected + fwd.stats.rejected;
  path.stats.max_error_estimate = std::max(back.stats.max_error_estimate, fwd.stats.max_error_estimate);
  path.truncated = back.truncated || fwd.truncated;
  path.truncation_reason = back.truncated ? back.truncation_reason : fwd.truncation_reason;
  return path;
}

using Tetrad = std::array<Vec4<double>, kDim>;  // legs e₀..e₃, contravariant components

/// Max |g(e_a, e_b) − η_ab|.
inline double orthonormality_defect(const Mat4<double>& g, const Tetrad& e) {
  const Mat4<double> eta = minkowski_eta<double>();
  double m = 0.0;
  for (std::size_t a = 0; a < kDim; ++a)
    for (std::size_t b = 0; b < kDim; ++b) m = std::max(m, std::abs(inner(g, e[a], e[b]) - eta[a][b]));
  return m;
}

struct TransportedTetrad {
  GeodesicPath path;
  std::vector<Tetrad> legs;  // one tetrad per path sample
};

/// De_a/ds = −Γ(σ̇, e_a) integrated with RK4 on the path's own sample grid.
inline TransportedTetrad parallel_transport_tetrad(const MetricField& metric, const GeodesicPath& path,
                                                   const Tetrad& initial, std::size_t start_index,
                                                   double tolerance = 1e-10) {
  if (path.samples.empty()) throw ValidationError("parallel transport along an empty path");
  if (start_index >= path.samples.size()) throw ValidationError("start index outside the path");
  const auto& s0 = path.samples[start_index];
  if (orthonormality_defect(metric.components(s0.point.coords), initial) > tolerance)
    throw ValidationError("initial tetrad is not orthonormal");
  for (std::size_t i = 0; i < kDim; ++i)
    if (std::abs(initial[0][i] - s0.velocity[i]) > tolerance)
      throw ValidationError("initial tetrad e0 differs from the path velocity");

  // Joint state: position, velocity and four legs.
  struct State {
    GeodesicState geo;
    Tetrad e;
  };
  auto rhs = [&metric](const State& y) {
    const Tensor3<double> gamma = connection_at<double>(metric, y.geo.x);
    State d;
    d.geo.x = y.geo.u;
    auto transport = [&](const Vec4<double>& w) {
      Vec4<double> r{};
      for (std::size_t m = 0; m < kDim; ++m) {
        double acc = 0.0;
        for (std::size_t a = 0; a < kDim; ++a)
          for (std::size_t b = 0; b < kDim; ++b) acc += gamma[m][a][b] * y.geo.u[a] * w[b];
        r[m] = -acc;
      }
      return r;
    };
    d.geo.u = transport(y.geo.u);
    for (std::size_t l = 0; l < kDim; ++l) d.e[l] = transport(y.e[l]);
    return d;
  };
  auto add = [](const State& y, double h, const State& k) {
    State r = y;
    for (std::size_t i = 0; i < kDim; ++i) {
      r.geo.x[i] += h * k.geo.x[i];
      r.geo.u[i] += h * k.geo.u[i];
      for (std::size_t l = 0; l < kDim; ++l) r.e[l][i] += h * k.e[l][i];
    }
    return r;
  };
  auto step = [&](const State& y, double h) {
    const State k1 = rhs(y);
    const State k2 = rhs(add(y, 0.5 * h, k1));
    const State k3 = rhs(add(y, 0.5 * h, k2));
    const State k4 = rhs(add(y, h, k3));
    return add(add(add(add(y, h / 6.0, k1), h / 3.0, k2), h / 3.0, k3), h / 6.0, k4);
  };

  TransportedTetrad out;
  out.path = path;
  out.legs.resize(path.samples.size());
  out.legs[start_index] = initial;
  auto sweep = [&](int dir) {
    Tetrad e = initial;
    for (auto i = static_cast<std::ptrdiff_t>(start_index);;) {
      const std::ptrdiff_t j = i + dir;
      if (j < 0 || j >= static_cast<std::ptrdiff_t>(path.samples.size())) break;
      const auto& a = path.samples[static_cast<std::size_t>(i)];
      const auto& b = path.samples[static_cast<std::size_t>(j)];
      State y{{a.point.coords, a.velocity}, e};
      e = step(y, b.s - a.s).e;
      out.legs[static_cast<std::size_t>(j)] = e;
      i = j;
    }
  };
  sweep(+1);
  sweep(-1);
  return out;
}

inline TransportedTetrad parallel_transport_tetrad(const MetricField& metric, const GeodesicPath& path,
                                                   const Tetrad& initial) {
  return parallel_transport_tetrad(metric, path, initial, path.origin_index);
}

/// Orthonormal tetrad at x with e₀ = u, built by Gram–Schmidt from the
/// coordinate basis.
inline Tetrad tetrad_from_velocity(const Mat4<double>& g, const Vec4<double>& u) {
  Tetrad e{};
  e[0] = u;
  const Mat4<double> eta = minkowski_eta<double>();
  for (std::size_t a = 1; a < kDim; ++a) {
    Vec4<double> w{};
    w[a] = 1.0;
    for (std::size_t b = 0; b < a; ++b) {
      const double c = inner(g, w, e[b]) * eta[b][b];
      for (std::size_t i = 0; i < kDim; ++i) w[i] -= c * e[b][i];
    }
    const double n = inner(g, w, w);
    if (!(n < 0.0)) throw NumericError("Gram-Schmidt produced a non-spacelike leg");
    const double inv = 1.0 / std::sqrt(-n);
    for (auto& c : w) c *= inv;
    e[a] = w;
  }
  return e;
}

/// CSV: s,t,x1,x2,x3,u0,u1,u2,u3 with 17 significant digits.
inline std::string path_to_csv(const GeodesicPath& path) {
  std::string out = "s,t,x1,x2,x3,u0,u1,u2,u3\n";
  char buf[32];
  for (const auto& smp : path.samples) {
    auto put = [&](double v, bool last) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out += buf;
      out += last ? '\n' : ',';
    };
    put(smp.s, false);
    for (double c : smp.point.coords) put(c, false);
    for (std::size_t i = 0; i < kDim; ++i) put(smp.velocity[i], i + 1 == kDim);
  }
  return out;
}

struct ExperimentReport {
  std::string label;             // "a" or "b"
  double v1 = 0.0;               // dx¹′/dt′ at p₀
  double v2 = 0.0;               // dx²′/dt′ at p₀
  Vec4<double> velocity{};       // dx′^μ/ds at p₀
  Vec4<double> acceleration{};   // d²x′^μ/ds² at p₀
  double dt_ds = 0.0;            // dt′/ds at p₀
  double asymmetry = 0.0;        // |‖(acc¹,acc²)_a‖ − ‖(acc¹,acc²)_b‖|
};

struct ExperimentResult {
  ExperimentReport case_a;
  ExperimentReport case_b;
  MetricField metric;  // the metric in the chart adapted to Z
  ChartPoint origin;
};

/// Initial accelerations of free particles launched from p₀ in the chart
/// adapted to Z: case (a) along x¹′, case (b) along x²′, same coordinate speed.
inline ExperimentResult free_particle_experiment(double a, double u, double v_probe) {
  if (!(v_probe > 0.0 && v_probe < 1.0)) throw ValidationError("v_probe must lie in (0, 1)");
  if (!(a >= 0.0)) throw ValidationError("a must be >= 0");
  const FriedmannModel model = make_friedmann(a, u);
  const ChartMap chart = z_chart(model);
  ExperimentResult r;
  r.metric = push_metric(chart, model.metric);
  r.origin = ChartPoint{{0.0, 0.0, 0.0, 0.0}, kZChart};
  const Mat4<double> g = eval_metric(r.metric, r.origin);

  auto run = [&](const std::string& label, double v1, double v2) {
    ExperimentReport e;
    e.label = label;
    e.v1 = v1;
    e.v2 = v2;
    const Vec4<double> dir{1.0, v1, v2, 0.0};
    const double n = inner(g, dir, dir);
    if (!(n > 0.0)) throw ValidationError("probe velocity is not timelike in the adapted chart");
    e.dt_ds = 1.0 / std::sqrt(n);
    for (std::size_t i = 0; i < kDim; ++i) e.velocity[i] = dir[i] * e.dt_ds;
    e.acceleration = geodesic_rhs(r.metric, GeodesicState{r.origin.coords, e.velocity}).u;
    return e;
  };
  r.case_a = run("a", v_probe, 0.0);
  r.case_b = run("b", 0.0, v_probe);
  const double na = std::hypot(r.case_a.acceleration[1], r.case_a.acceleration[2]);
  const double nb = std::hypot(r.case_b.acceleration[1], r.case_b.acceleration[2]);
  r.case_a.asymmetry = r.case_b.asymmetry = std::abs(na - nb);
  return r;
}

}  // namespace framekin
