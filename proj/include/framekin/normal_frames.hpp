#pragma once

// Local Lorentz (Riemann normal) charts at a point and along a geodesic, and
// the frame L = ∂/∂ξ⁰ of the latter.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "framekin/chart_map.hpp"
#include "framekin/errors.hpp"
#include "framekin/frames.hpp"
#include "framekin/geodesic.hpp"
#include "framekin/geometry.hpp"
#include "framekin/tensor.hpp"

namespace framekin {

/// E[μ][a] = e_a^μ.
inline Mat4<double> tetrad_matrix(const Tetrad& e) {
  Mat4<double> m;
  for (std::size_t mu = 0; mu < kDim; ++mu)
    for (std::size_t a = 0; a < kDim; ++a) m[mu][a] = e[a][mu];
  return m;
}

namespace detail {

// Newton on an explicit map x = f(ξ) for ξ, plain values only.
inline Vec4<double> newton_invert(const MapFunction& f, const Vec4<double>& x, Vec4<double> xi, int max_iter = 60,
                                  double tol = 1e-15) {
  double residual = std::numeric_limits<double>::infinity();
  for (int it = 0; it < max_iter; ++it) {
    const Vec4<Dual<double>> fx = f(seed(xi));
    Mat4<double> j;
    Vec4<double> r;
    for (std::size_t m = 0; m < kDim; ++m) {
      r[m] = fx[m].v - x[m];
      residual = m == 0 ? std::abs(r[m]) : std::max(residual, std::abs(r[m]));
      for (std::size_t a = 0; a < kDim; ++a) j[m][a] = fx[m].d[a];
    }
    const Vec4<double> step = matvec(inverse(j), r);
    double size = 0.0;
    for (std::size_t i = 0; i < kDim; ++i) {
      xi[i] -= step[i];
      size = std::max(size, std::abs(step[i]));
    }
    if (size <= tol * std::max(1.0, max_abs(xi))) return xi;
  }
  // Rounding can stall the step test just above tol; a tiny residual is still a solution.
  if (residual <= 1e-12 * std::max(1.0, max_abs(x))) return xi;
  throw NumericError("normal chart: Newton inversion did not converge");
}

}  // namespace detail

/// Riemann normal chart at p₀ with axes given by an orthonormal tetrad.
/// The explicit direction is the third-order exponential map
///   x = x₀ + E(ξ − ½Γ̂ξξ + ⅙Cξξξ),
///   C^a_{bcd} = sym_{bcd}(−∂̂_dΓ̂^a_{bc} + 2Γ̂^a_{bl}Γ̂^l_{cd}),
/// with Γ̂ and ∂̂Γ̂ the connection jet at p₀ in the tetrad basis.
struct NormalChart {
  ChartPoint base_point;
  Tetrad tetrad{};
  ConnectionCoefficients gamma_at_p0;
  double validity_radius = 0.05;
  ChartMap map;             // base chart → normal chart
  MetricField metric;       // metric expressed in the normal chart
  Tensor3<double> gamma_hat{};
  Tensor4<double> cubic{};  // cubic[a][b][c][d] = C^a_{bcd}

  /// Pure second-order rule ξ = y + ½Γ̂yy, y = E⁻¹(x − x₀).
  Vec4<double> second_order_forward(const Vec4<double>& x) const {
    const Mat4<double> ei = inverse(tetrad_matrix(tetrad));
    Vec4<double> d;
    for (std::size_t i = 0; i < kDim; ++i) d[i] = x[i] - base_point.coords[i];
    const Vec4<double> y = matvec(ei, d);
    Vec4<double> xi = y;
    for (std::size_t a = 0; a < kDim; ++a)
      for (std::size_t b = 0; b < kDim; ++b)
        for (std::size_t c = 0; c < kDim; ++c) xi[a] += 0.5 * gamma_hat[a][b][c] * y[b] * y[c];
    return xi;
  }

  /// Its second-order inverse x = x₀ + E(ξ − ½Γ̂ξξ).
  Vec4<double> second_order_inverse(const Vec4<double>& xi) const {
    Vec4<double> y = xi;
    for (std::size_t a = 0; a < kDim; ++a)
      for (std::size_t b = 0; b < kDim; ++b)
        for (std::size_t c = 0; c < kDim; ++c) y[a] -= 0.5 * gamma_hat[a][b][c] * xi[b] * xi[c];
    Vec4<double> x = matvec(tetrad_matrix(tetrad), y);
    for (std::size_t i = 0; i < kDim; ++i) x[i] += base_point.coords[i];
    return x;
  }
};

inline NormalChart build_normal_chart(const MetricField& metric, const ChartPoint& p0, const Tetrad& tetrad,
                                      double validity_radius = 0.05, const std::string& label = "normal") {
  require_chart(metric, p0);
  if (!(validity_radius > 0.0)) throw ValidationError("validity_radius must be positive");
  const Mat4<double> g = eval_metric(metric, p0);
  if (orthonormality_defect(g, tetrad) > 1e-10) throw ValidationError("normal chart: tetrad is not orthonormal");
  if (!(tetrad[0][0] > 0.0)) throw ValidationError("normal chart: e0 is not future pointing");

  NormalChart nc;
  nc.base_point = p0;
  nc.tetrad = tetrad;
  nc.validity_radius = validity_radius;
  const ConnectionJet jet = connection_jet(metric, p0.coords);
  nc.gamma_at_p0 = ConnectionCoefficients{jet.gamma, p0};

  const Mat4<double> e = tetrad_matrix(tetrad);
  const Mat4<double> ei = inverse(e);
  Tensor3<double> gh{};
  Tensor4<double> dgh{};  // dgh[d][a][b][c] = ∂̂_d Γ̂^a_{bc}
  for (std::size_t a = 0; a < kDim; ++a)
    for (std::size_t b = 0; b < kDim; ++b)
      for (std::size_t c = 0; c < kDim; ++c) {
        double acc = 0.0;
        for (std::size_t m = 0; m < kDim; ++m)
          for (std::size_t n = 0; n < kDim; ++n)
            for (std::size_t r = 0; r < kDim; ++r) acc += ei[a][m] * jet.gamma[m][n][r] * e[n][b] * e[r][c];
        gh[a][b][c] = acc;
        for (std::size_t d = 0; d < kDim; ++d) {
          double dacc = 0.0;
          for (std::size_t k = 0; k < kDim; ++k)
            for (std::size_t m = 0; m < kDim; ++m)
              for (std::size_t n = 0; n < kDim; ++n)
                for (std::size_t r = 0; r < kDim; ++r)
                  dacc += ei[a][m] * jet.dgamma[k][m][n][r] * e[k][d] * e[n][b] * e[r][c];
          dgh[d][a][b][c] = dacc;
        }
      }
  nc.gamma_hat = gh;
  auto raw = [&](std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
    double q = 0.0;
    for (std::size_t l = 0; l < kDim; ++l) q += gh[a][b][l] * gh[l][c][d];
    return -dgh[d][a][b][c] + 2.0 * q;
  };
  for (std::size_t a = 0; a < kDim; ++a)
    for (std::size_t b = 0; b < kDim; ++b)
      for (std::size_t c = 0; c < kDim; ++c)
        for (std::size_t d = 0; d < kDim; ++d)
          nc.cubic[a][b][c][d] =
              (raw(a, b, c, d) + raw(a, b, d, c) + raw(a, c, b, d) + raw(a, c, d, b) + raw(a, d, b, c) +
               raw(a, d, c, b)) /
              6.0;

  const Vec4<double> x0 = p0.coords;
  const Tensor4<double> cubic = nc.cubic;
  MapFunction exp_map([e, x0, gh, cubic](const auto& xi) {
    using T = typename std::decay_t<decltype(xi)>::value_type;
    Vec4<T> y = xi;
    for (std::size_t a = 0; a < kDim; ++a) {
      T acc(0.0);
      for (std::size_t b = 0; b < kDim; ++b)
        for (std::size_t c = 0; c < kDim; ++c) {
          const T bc = xi[b] * xi[c];
          acc -= 0.5 * gh[a][b][c] * bc;
          for (std::size_t d = 0; d < kDim; ++d) acc += cubic[a][b][c][d] / 6.0 * bc * xi[d];
        }
      y[a] += acc;
    }
    Vec4<T> x;
    for (std::size_t m = 0; m < kDim; ++m) {
      T acc(x0[m]);
      for (std::size_t a = 0; a < kDim; ++a) acc += e[m][a] * y[a];
      x[m] = acc;
    }
    return x;
  });
  PointSolver solve = [exp_map, ei, x0, gh](const Vec4<double>& x) {
    Vec4<double> d;
    for (std::size_t i = 0; i < kDim; ++i) d[i] = x[i] - x0[i];
    const Vec4<double> y = matvec(ei, d);
    Vec4<double> guess = y;
    for (std::size_t a = 0; a < kDim; ++a)
      for (std::size_t b = 0; b < kDim; ++b)
        for (std::size_t c = 0; c < kDim; ++c) guess[a] += 0.5 * gh[a][b][c] * y[b] * y[c];
    return detail::newton_invert(exp_map, x, guess);
  };
  nc.map = ChartMap(metric.chart_id(), label, label, std::move(exp_map), std::move(solve), ChartMap::Explicit::Inverse);
  nc.metric = push_metric(nc.map, metric);
  return nc;
}

namespace detail {

/// Piecewise cubic Hermite interpolation of W-vectors with known derivatives.
template <std::size_t W>
class HermiteTrack {
 public:
  using Row = std::array<double, W>;

  void push(double s, const Row& value, const Row& slope) {
    if (!s_.empty() && !(s > s_.back())) throw ValidationError("Hermite nodes must be strictly increasing");
    s_.push_back(s);
    values_.push_back(value);
    slopes_.push_back(slope);
  }

  double front() const { return s_.front(); }
  double back() const { return s_.back(); }
  std::size_t size() const { return s_.size(); }
  double node(std::size_t i) const { return s_[i]; }
  const Row& value(std::size_t i) const { return values_[i]; }

  template <class T>
  std::array<T, W> operator()(const T& s) const {
    const double sv = value_of(s);
    if (s_.size() < 2 || sv < s_.front() - 1e-12 || sv > s_.back() + 1e-12)
      throw DomainError("parameter outside the sampled geodesic segment");
    auto it = std::upper_bound(s_.begin(), s_.end(), sv);
    std::size_t i = it == s_.begin() ? 0 : static_cast<std::size_t>(it - s_.begin()) - 1;
    i = std::min(i, s_.size() - 2);
    const double h = s_[i + 1] - s_[i];
    const T tau = (s - s_[i]) / h;
    const T tau2 = tau * tau;
    const T tau3 = tau2 * tau;
    const T h00 = 2.0 * tau3 - 3.0 * tau2 + 1.0;
    const T h10 = tau3 - 2.0 * tau2 + tau;
    const T h01 = -2.0 * tau3 + 3.0 * tau2;
    const T h11 = tau3 - tau2;
    std::array<T, W> out;
    for (std::size_t k = 0; k < W; ++k)
      out[k] = h00 * values_[i][k] + h10 * (h * slopes_[i][k]) + h01 * values_[i + 1][k] +
               h11 * (h * slopes_[i + 1][k]);
    return out;
  }

 private:
  std::vector<double> s_;
  std::vector<Row> values_;
  std::vector<Row> slopes_;
};

inline constexpr std::array<std::pair<std::size_t, std::size_t>, 6> kSpatialPairs = {
    {{1, 1}, {1, 2}, {1, 3}, {2, 2}, {2, 3}, {3, 3}}};

// Layout of one track row: γ (4), e₁..e₃ (12), C_ij for i ≤ j (24).
inline constexpr std::size_t kTrackWidth = 4 + 12 + 24;

inline Vec4<double> contract_gamma(const Tensor3<double>& g, const Vec4<double>& a, const Vec4<double>& b) {
  Vec4<double> r{};
  for (std::size_t m = 0; m < kDim; ++m) {
    double acc = 0.0;
    for (std::size_t n = 0; n < kDim; ++n)
      for (std::size_t k = 0; k < kDim; ++k) acc += g[m][n][k] * a[n] * b[k];
    r[m] = acc;
  }
  return r;
}

}  // namespace detail

/// Local Lorentz reference frame along a geodesic γ. The chart is
///   x(ξ) = γ(ξ⁰) + e_i(ξ⁰)ξ^i − ½Γ(e_i, e_j)|_{γ(ξ⁰)} ξ^iξ^j,
/// with e_i parallel transported and all ξ⁰-dependent data interpolated by
/// cubic Hermite polynomials using the exact transport derivatives at the
/// samples. L = ∂/∂ξ⁰ is returned raw and normalized.
struct LLRFFrame {
  GeodesicPath geodesic;
  TransportedTetrad transported;
  ChartMap map;        // base chart → llrf chart
  MetricField metric;  // metric in the llrf chart
  VectorField raw_field;
  FrameField frame;
  double validity_radius = 0.05;
  std::string label;
};

inline LLRFFrame llrf_along_geodesic(const MetricField& metric, const GeodesicPath& geodesic, const Tetrad& tetrad0,
                                     double validity_radius = 0.05, const std::string& label = "L") {
  if (!(validity_radius > 0.0)) throw ValidationError("tube radius must be positive");
  if (geodesic.samples.size() < 2) throw ValidationError("geodesic needs at least two samples");
  if (geodesic.metric_id != metric.chart_id()) throw ValidationError("geodesic and metric live in different charts");

  LLRFFrame f;
  f.geodesic = geodesic;
  f.validity_radius = validity_radius;
  f.label = label;
  f.transported = parallel_transport_tetrad(metric, geodesic, tetrad0, geodesic.origin_index);

  using Track = detail::HermiteTrack<detail::kTrackWidth>;
  auto track = std::make_shared<Track>();
  for (std::size_t n = 0; n < geodesic.samples.size(); ++n) {
    const auto& smp = geodesic.samples[n];
    const Tetrad& e = f.transported.legs[n];
    const ConnectionJet jet = connection_jet(metric, smp.point.coords);
    const Vec4<double>& u = smp.velocity;
    Track::Row val{};
    Track::Row der{};
    for (std::size_t m = 0; m < kDim; ++m) {
      val[m] = smp.point.coords[m];
      der[m] = u[m];
    }
    std::array<Vec4<double>, kDim> edot{};
    for (std::size_t i = 1; i < kDim; ++i) {
      const Vec4<double> d = detail::contract_gamma(jet.gamma, u, e[i]);
      for (std::size_t m = 0; m < kDim; ++m) {
        edot[i][m] = -d[m];
        val[4 + 4 * (i - 1) + m] = e[i][m];
        der[4 + 4 * (i - 1) + m] = -d[m];
      }
    }
    // dΓ/ds along γ: Σ_k ∂_kΓ u^k.
    Tensor3<double> gdot{};
    for (std::size_t k = 0; k < kDim; ++k)
      for (std::size_t m = 0; m < kDim; ++m)
        for (std::size_t a = 0; a < kDim; ++a)
          for (std::size_t b = 0; b < kDim; ++b) gdot[m][a][b] += jet.dgamma[k][m][a][b] * u[k];
    for (std::size_t pi = 0; pi < detail::kSpatialPairs.size(); ++pi) {
      const auto [i, j] = detail::kSpatialPairs[pi];
      const Vec4<double> c = detail::contract_gamma(jet.gamma, e[i], e[j]);
      const Vec4<double> c1 = detail::contract_gamma(gdot, e[i], e[j]);
      const Vec4<double> c2 = detail::contract_gamma(jet.gamma, edot[i], e[j]);
      const Vec4<double> c3 = detail::contract_gamma(jet.gamma, e[i], edot[j]);
      for (std::size_t m = 0; m < kDim; ++m) {
        val[16 + 4 * pi + m] = c[m];
        der[16 + 4 * pi + m] = c1[m] + c2[m] + c3[m];
      }
    }
    track->push(smp.s, val, der);
  }

  MapFunction chart_to_base([track](const auto& xi) {
    using T = typename std::decay_t<decltype(xi)>::value_type;
    const auto row = (*track)(xi[0]);
    Vec4<T> x;
    for (std::size_t m = 0; m < kDim; ++m) {
      T acc = row[m];
      for (std::size_t i = 1; i < kDim; ++i) acc += row[4 + 4 * (i - 1) + m] * xi[i];
      for (std::size_t pi = 0; pi < detail::kSpatialPairs.size(); ++pi) {
        const auto [i, j] = detail::kSpatialPairs[pi];
        const double w = i == j ? 0.5 : 1.0;
        acc -= w * row[16 + 4 * pi + m] * xi[i] * xi[j];
      }
      x[m] = acc;
    }
    return x;
  });

  PointSolver solve = [track, chart_to_base, validity_radius](const Vec4<double>& x) {
    // Start from the sample nearest in coordinates, spatial offset by linear solve.
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < track->size(); ++n) {
      double d = 0.0;
      for (std::size_t m = 0; m < kDim; ++m) d += std::pow(x[m] - track->value(n)[m], 2);
      if (d < best_d) {
        best_d = d;
        best = n;
      }
    }
    Vec4<double> xi{track->node(best), 0.0, 0.0, 0.0};
    xi = detail::newton_invert(chart_to_base, x, xi);
    const double r = std::sqrt(xi[1] * xi[1] + xi[2] * xi[2] + xi[3] * xi[3]);
    if (r > validity_radius) throw DomainError("point lies outside the LLRF validity tube");
    return xi;
  };

  const std::string chart = "llrf:" + label;
  f.map = ChartMap(metric.chart_id(), chart, chart, std::move(chart_to_base), std::move(solve),
                   ChartMap::Explicit::Inverse);
  f.metric = push_metric(f.map, metric);
  const ChartMap map = f.map;
  f.raw_field = VectorField(metric.chart_id(), label, [map](const auto& x) {
    using T = typename std::decay_t<decltype(x)>::value_type;
    const Vec4<T> xi = map.forward(x);
    const Mat4<T> j = map.explicit_jacobian(xi);  // ∂x^μ/∂ξ^a
    return Vec4<T>{j[0][0], j[1][0], j[2][0], j[3][0]};
  });
  f.frame = make_frame(f.raw_field, metric, geodesic.samples[geodesic.origin_index].point.coords);
  return f;
}

struct LlrfExpansion {
  double normalized = 0.0;  // Θ of the unit field
  double raw = 0.0;         // covariant divergence of ∂/∂ξ⁰ itself
};

inline LlrfExpansion llrf_expansion(const MetricField& metric, const LLRFFrame& llrf, const ChartPoint& p) {
  LlrfExpansion out;
  out.normalized = kinematic_decompose(metric, llrf.frame, p).expansion;
  const Mat4<double> d = covariant_derivative_field(metric, llrf.raw_field, p);
  for (std::size_t m = 0; m < kDim; ++m) out.raw += d[m][m];
  return out;
}

}  // namespace framekin
