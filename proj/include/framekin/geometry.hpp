#pragma once

// Metrics, Levi-Civita connection and curvature.
//
// Sign convention (used everywhere in the library):
//
//   R^α_{βγμ} = ∂_γ Γ^α_{μβ} − ∂_μ Γ^α_{γβ} + Γ^α_{γλ} Γ^λ_{μβ} − Γ^α_{μλ} Γ^λ_{γβ}
//   Ric_{βμ}  = R^α_{βαμ},   S = g^{βμ} Ric_{βμ},   G = Ric − ½ S g
//
// With signature (+,−,−,−) this makes G_{00} = 3(Ṙ/R)² for a spatially flat
// Friedmann metric, and in Riemann normal coordinates
//   ∂_μ Γ^α_{βγ} = −⅓ (R^α_{βγμ} + R^α_{γβμ}).

#include <Eigen/Dense>

#include <cmath>
#include <memory>
#include <string>
#include <utility>

#include "framekin/dual.hpp"
#include "framekin/errors.hpp"
#include "framekin/point_function.hpp"
#include "framekin/tensor.hpp"

namespace framekin {

struct ChartPoint {
  Vec4<double> coords{};
  std::string chart_id;
};

using MetricFunction = PointFunction<MatOf, double, D1, D2>;

/// A Lorentzian metric g_{μν} given in one chart. Components are produced by
/// a generic callable so first and second derivatives are exact.
class MetricField {
 public:
  static constexpr int derivative_order = 2;

  MetricField() = default;

  template <class F>
  MetricField(std::string chart_id, F components)
      : chart_id_(std::move(chart_id)), fn_(MetricFunction(std::move(components))) {}

  MetricField(std::string chart_id, MetricFunction fn) : chart_id_(std::move(chart_id)), fn_(std::move(fn)) {}

  template <class T>
  Mat4<T> components(const Vec4<T>& x) const {
    return fn_(x);
  }

  const std::string& chart_id() const { return chart_id_; }

 private:
  std::string chart_id_;
  MetricFunction fn_;
};

struct ConnectionCoefficients {
  Tensor3<double> gamma{};  // gamma[mu][nu][rho] = Γ^μ_{νρ}
  ChartPoint point;
};

struct CurvatureTensor {
  Tensor4<double> riemann{};  // riemann[a][b][c][m] = R^a_{bcm}
  Mat4<double> ricci{};
  double scalar = 0.0;
  Mat4<double> einstein{};
  ChartPoint point;
};

struct CurvatureContractions {
  Mat4<double> ricci{};
  double scalar = 0.0;
  Mat4<double> einstein{};
};

inline void require_chart(const MetricField& metric, const ChartPoint& p) {
  if (metric.chart_id() != p.chart_id)
    throw ValidationError("point in chart '" + p.chart_id + "' given to metric in chart '" + metric.chart_id() + "'");
  for (double c : p.coords)
    if (!std::isfinite(c)) throw ValidationError("non-finite coordinate");
}

/// Count of (positive, negative) eigenvalues of a symmetric 4x4 matrix.
inline std::pair<int, int> signature_of(const Mat4<double>& g) {
  Eigen::Matrix4d m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = g[i][j];
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(m, Eigen::EigenvaluesOnly);
  const double scale = es.eigenvalues().cwiseAbs().maxCoeff();
  int pos = 0;
  int neg = 0;
  for (int i = 0; i < 4; ++i) {
    const double ev = es.eigenvalues()(i);
    if (ev > 1e-14 * scale) ++pos;
    if (ev < -1e-14 * scale) ++neg;
  }
  return {pos, neg};
}

/// g_{μν}(p), checked for symmetry and (+,−,−,−) signature.
inline Mat4<double> eval_metric(const MetricField& metric, const ChartPoint& p) {
  require_chart(metric, p);
  Mat4<double> g = metric.components(p.coords);
  double scale = max_abs(g);
  for (std::size_t i = 0; i < kDim; ++i)
    for (std::size_t j = i + 1; j < kDim; ++j)
      if (std::abs(g[i][j] - g[j][i]) > 1e-12 * scale) throw NumericError("metric components are not symmetric");
  auto [pos, neg] = signature_of(g);
  if (pos != 1 || neg != 3) throw NumericError("metric is not Lorentzian (+,-,-,-) at the evaluated point");
  return g;
}

inline Mat4<double> inverse_metric(const MetricField& metric, const ChartPoint& p) {
  return inverse(eval_metric(metric, p));
}

/// Γ^μ_{νρ} at x in the scalar type T; the metric is evaluated one nesting
/// level higher to obtain ∂g.
template <class T>
Tensor3<T> connection_at(const MetricField& metric, const Vec4<T>& x) {
  Mat4<Dual<T>> gd = metric.components(seed(x));
  Mat4<T> g;
  Tensor3<T> dg;  // dg[k][a][b] = ∂_k g_{ab}
  for (std::size_t a = 0; a < kDim; ++a)
    for (std::size_t b = 0; b < kDim; ++b) {
      g[a][b] = gd[a][b].v;
      for (std::size_t k = 0; k < kDim; ++k) dg[k][a][b] = gd[a][b].d[k];
    }
  Mat4<T> gi = inverse(g);
  Tensor3<T> lowered;  // Γ_{α νρ}
  for (std::size_t al = 0; al < kDim; ++al)
    for (std::size_t nu = 0; nu < kDim; ++nu)
      for (std::size_t rho = nu; rho < kDim; ++rho) {
        T v = 0.5 * (dg[nu][al][rho] + dg[rho][al][nu] - dg[al][nu][rho]);
        lowered[al][nu][rho] = v;
        lowered[al][rho][nu] = v;
      }
  Tensor3<T> gamma;
  for (std::size_t mu = 0; mu < kDim; ++mu)
    for (std::size_t nu = 0; nu < kDim; ++nu)
      for (std::size_t rho = nu; rho < kDim; ++rho) {
        T acc(0.0);
        for (std::size_t al = 0; al < kDim; ++al) acc += gi[mu][al] * lowered[al][nu][rho];
        gamma[mu][nu][rho] = acc;
        gamma[mu][rho][nu] = acc;
      }
  return gamma;
}

inline ConnectionCoefficients christoffel(const MetricField& metric, const ChartPoint& p) {
  require_chart(metric, p);
  return {connection_at<double>(metric, p.coords), p};
}

/// Γ and its coordinate derivatives: dgamma[k][mu][nu][rho] = ∂_k Γ^μ_{νρ}.
struct ConnectionJet {
  Tensor3<double> gamma{};
  Tensor4<double> dgamma{};
};

inline ConnectionJet connection_jet(const MetricField& metric, const Vec4<double>& x) {
  Tensor3<D1> gd = connection_at<D1>(metric, seed(x));
  ConnectionJet jet;
  for (std::size_t mu = 0; mu < kDim; ++mu)
    for (std::size_t nu = 0; nu < kDim; ++nu)
      for (std::size_t rho = 0; rho < kDim; ++rho) {
        jet.gamma[mu][nu][rho] = gd[mu][nu][rho].v;
        for (std::size_t k = 0; k < kDim; ++k) jet.dgamma[k][mu][nu][rho] = gd[mu][nu][rho].d[k];
      }
  return jet;
}

inline Tensor4<double> riemann_from_jet(const ConnectionJet& jet) {
  const auto& G = jet.gamma;
  const auto& dG = jet.dgamma;
  Tensor4<double> r{};
  for (std::size_t a = 0; a < kDim; ++a)
    for (std::size_t b = 0; b < kDim; ++b)
      for (std::size_t c = 0; c < kDim; ++c)
        for (std::size_t m = 0; m < kDim; ++m) {
          double quad = 0.0;
          for (std::size_t l = 0; l < kDim; ++l) quad += G[a][c][l] * G[l][m][b] - G[a][m][l] * G[l][c][b];
          r[a][b][c][m] = (dG[c][a][m][b] - dG[m][a][c][b]) + quad;
        }
  return r;
}

inline CurvatureContractions contract(const Tensor4<double>& riem, const Mat4<double>& g) {
  CurvatureContractions c;
  for (std::size_t b = 0; b < kDim; ++b)
    for (std::size_t m = 0; m < kDim; ++m) {
      double acc = 0.0;
      for (std::size_t a = 0; a < kDim; ++a) acc += riem[a][b][a][m];
      c.ricci[b][m] = acc;
    }
  Mat4<double> gi = inverse(g);
  double s = 0.0;
  for (std::size_t b = 0; b < kDim; ++b)
    for (std::size_t m = 0; m < kDim; ++m) s += gi[b][m] * c.ricci[b][m];
  c.scalar = s;
  for (std::size_t b = 0; b < kDim; ++b)
    for (std::size_t m = 0; m < kDim; ++m) c.einstein[b][m] = c.ricci[b][m] - 0.5 * s * g[b][m];
  return c;
}

inline CurvatureTensor riemann(const MetricField& metric, const ChartPoint& p) {
  require_chart(metric, p);
  CurvatureTensor out;
  out.point = p;
  out.riemann = riemann_from_jet(connection_jet(metric, p.coords));
  auto c = contract(out.riemann, metric.components(p.coords));
  out.ricci = c.ricci;
  out.scalar = c.scalar;
  out.einstein = c.einstein;
  return out;
}

inline CurvatureContractions curvature_contractions(const MetricField& metric, const ChartPoint& p) {
  CurvatureTensor r = riemann(metric, p);
  return {r.ricci, r.scalar, r.einstein};
}

using VectorFunction = PointFunction<VecOf, double, D1>;

/// Contravariant components Q^μ of a vector field in one chart.
class VectorField {
 public:
  VectorField() = default;

  template <class F>
  VectorField(std::string chart_id, std::string label, F components)
      : chart_id_(std::move(chart_id)), label_(std::move(label)), fn_(VectorFunction(std::move(components))) {}

  VectorField(std::string chart_id, std::string label, VectorFunction fn)
      : chart_id_(std::move(chart_id)), label_(std::move(label)), fn_(std::move(fn)) {}

  template <class T>
  Vec4<T> components(const Vec4<T>& x) const {
    return fn_(x);
  }

  const std::string& chart_id() const { return chart_id_; }
  const std::string& label() const { return label_; }
  const VectorFunction& function() const { return fn_; }

 private:
  std::string chart_id_;
  std::string label_;
  VectorFunction fn_;
};

/// (DQ)^μ_{;ν} = ∂_ν Q^μ + Γ^μ_{νρ} Q^ρ, stored as out[mu][nu].
inline Mat4<double> covariant_derivative_field(const MetricField& metric, const VectorField& field,
                                               const ChartPoint& p) {
  require_chart(metric, p);
  if (field.chart_id() != p.chart_id)
    throw ValidationError("field '" + field.label() + "' lives in chart '" + field.chart_id() + "', point in '" +
                          p.chart_id + "'");
  Vec4<D1> qd = field.components(seed(p.coords));
  Tensor3<double> gamma = connection_at<double>(metric, p.coords);
  Mat4<double> out;
  for (std::size_t mu = 0; mu < kDim; ++mu)
    for (std::size_t nu = 0; nu < kDim; ++nu) {
      double acc = qd[mu].d[nu];
      for (std::size_t rho = 0; rho < kDim; ++rho) acc += gamma[mu][nu][rho] * qd[rho].v;
      out[mu][nu] = acc;
    }
  return out;
}

}  // namespace framekin
