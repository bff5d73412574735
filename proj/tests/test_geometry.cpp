#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "framekin/frames.hpp"
#include "framekin/friedmann.hpp"
#include "framekin/geometry.hpp"
#include "oracles/oracles.hpp"

using namespace framekin;

namespace {

std::vector<Vec4<double>> random_points(std::size_t n, unsigned seed, double tmin, double tmax, double xr) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> t(tmin, tmax);
  std::uniform_real_distribution<double> x(-xr, xr);
  std::vector<Vec4<double>> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back({t(rng), x(rng), x(rng), x(rng)});
  return out;
}

// A metric with all components and all coordinates in play.
MetricField wavy_metric() {
  return MetricField("wavy", [](const auto& x) {
    using T = typename std::decay_t<decltype(x)>::value_type;
    using std::cos;
    using std::exp;
    using std::sin;
    Mat4<T> g = minkowski_eta<T>();
    g[0][0] = 1.0 + 0.2 * sin(x[1] + 0.3 * x[0]);
    g[1][1] = -(1.0 + 0.1 * x[0] * x[0]);
    g[2][2] = -exp(0.2 * x[3]);
    g[3][3] = -(1.0 + 0.05 * cos(x[2]));
    g[0][1] = g[1][0] = 0.1 * x[2];
    g[2][3] = g[3][2] = 0.05 * sin(x[0] * x[1]);
    return g;
  });
}

oracle::MetricFn as_fn(const MetricField& m) {
  return [m](const Vec4<double>& x) { return m.components(x); };
}

double metric_compatibility_defect(const MetricField& m, const Vec4<double>& x) {
  const Vec4<D1> xs = seed(x);
  const Mat4<D1> gd = m.components(xs);
  const Tensor3<double> G = connection_at<double>(m, x);
  double worst = 0.0;
  for (std::size_t r = 0; r < kDim; ++r)
    for (std::size_t a = 0; a < kDim; ++a)
      for (std::size_t b = 0; b < kDim; ++b) {
        double v = gd[a][b].d[r];
        for (std::size_t l = 0; l < kDim; ++l) v -= G[l][r][a] * gd[l][b].v + G[l][r][b] * gd[a][l].v;
        worst = std::max(worst, std::abs(v));
      }
  return worst;
}

}  // namespace

TEST(EvalMetric, MinkowskiIsEta) {
  const MetricField g = make_minkowski();
  const Mat4<double> m = eval_metric(g, ChartPoint{{3.0, -1.0, 2.0, 0.5}, kMinkowskiChart});
  EXPECT_EQ(m, minkowski_eta<double>());
}

TEST(EvalMetric, FriedmannComponents) {
  const Mat4<double> m = eval_metric(make_friedmann(0.5, 0.0).metric, ChartPoint{{1.0, 0.3, -2.0, 7.0}, kFriedmannChart});
  EXPECT_DOUBLE_EQ(m[0][0], 1.0);
  for (std::size_t i = 1; i < kDim; ++i) EXPECT_DOUBLE_EQ(m[i][i], -2.25);
  const Mat4<double> m0 = eval_metric(make_friedmann(0.001, 0.0).metric, ChartPoint{{0.0, 0.0, 0.0, 0.0}, kFriedmannChart});
  EXPECT_EQ(m0, minkowski_eta<double>());
}

TEST(EvalMetric, OutsideScaleFactorDomainIsAnError) {
  const MetricField g = make_friedmann(0.5, 0.0).metric;
  EXPECT_THROW(eval_metric(g, ChartPoint{{-2.0, 0.0, 0.0, 0.0}, kFriedmannChart}), DomainError);
  EXPECT_THROW(eval_metric(g, ChartPoint{{-2.5, 0.0, 0.0, 0.0}, kFriedmannChart}), DomainError);
}

TEST(EvalMetric, WrongChartOrNonFiniteIsRejected) {
  const MetricField g = make_minkowski();
  EXPECT_THROW(eval_metric(g, ChartPoint{{0, 0, 0, 0}, kFriedmannChart}), ValidationError);
  EXPECT_THROW(eval_metric(g, ChartPoint{{std::nan(""), 0, 0, 0}, kMinkowskiChart}), ValidationError);
}

TEST(EvalMetric, EuclideanSignatureIsRejected) {
  const MetricField g("euclid", [](const auto& x) {
    using T = typename std::decay_t<decltype(x)>::value_type;
    return identity_mat<T>();
  });
  EXPECT_THROW(eval_metric(g, ChartPoint{{0, 0, 0, 0}, "euclid"}), NumericError);
}

TEST(InverseMetric, DiagonalCases) {
  EXPECT_EQ(inverse_metric(make_minkowski(), ChartPoint{{0, 0, 0, 0}, kMinkowskiChart}), minkowski_eta<double>());
  const Mat4<double> gi = inverse_metric(make_friedmann(0.5, 0.0).metric, ChartPoint{{1, 0, 0, 0}, kFriedmannChart});
  EXPECT_DOUBLE_EQ(gi[0][0], 1.0);
  for (std::size_t i = 1; i < kDim; ++i) EXPECT_NEAR(gi[i][i], -1.0 / 2.25, 1e-15);
}

TEST(InverseMetric, RandomLorentzianMatrixProductIsIdentity) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> d(-0.3, 0.3);
  for (int trial = 0; trial < 20; ++trial) {
    Mat4<double> a = identity_mat<double>();
    for (auto& row : a)
      for (auto& c : row) c += d(rng);
    const Mat4<double> g = matmul(transpose(a), matmul(minkowski_eta<double>(), a));
    const MetricField m("random", [g](const auto& x) {
      using T = typename std::decay_t<decltype(x)>::value_type;
      Mat4<T> out;
      for (std::size_t i = 0; i < kDim; ++i)
        for (std::size_t j = 0; j < kDim; ++j) out[i][j] = T(g[i][j]);
      return out;
    });
    const Mat4<double> gi = inverse_metric(m, ChartPoint{{0, 0, 0, 0}, "random"});
    const Mat4<double> prod = matmul(gi, g);
    for (std::size_t i = 0; i < kDim; ++i)
      for (std::size_t j = 0; j < kDim; ++j) EXPECT_NEAR(prod[i][j], i == j ? 1.0 : 0.0, 1e-13);
  }
}

TEST(Christoffel, MinkowskiVanishes) {
  EXPECT_EQ(max_abs(christoffel(make_minkowski(), ChartPoint{{1, 2, 3, 4}, kMinkowskiChart}).gamma), 0.0);
}

TEST(Christoffel, FriedmannAtOrigin) {
  const auto G = christoffel(make_friedmann(0.001, 0.0).metric, ChartPoint{{0, 0, 0, 0}, kFriedmannChart}).gamma;
  EXPECT_NEAR(G[0][1][1], 0.001, 1e-16);
  EXPECT_NEAR(G[1][0][1], 0.001, 1e-16);
  for (std::size_t i = 1; i < kDim; ++i) EXPECT_EQ(G[i][0][0], 0.0);
}

TEST(Christoffel, TorsionFreeExactly) {
  const MetricField g = wavy_metric();
  for (const auto& x : random_points(20, 3, -1.0, 1.0, 1.0)) {
    const auto G = christoffel(g, ChartPoint{x, "wavy"}).gamma;
    for (std::size_t m = 0; m < kDim; ++m)
      for (std::size_t n = 0; n < kDim; ++n)
        for (std::size_t r = 0; r < kDim; ++r) EXPECT_EQ(G[m][n][r], G[m][r][n]);
  }
}

TEST(Christoffel, MetricCompatibilityAtRandomPoints) {
  const auto pts = random_points(100, 11, -0.5, 5.0, 3.0);
  for (const auto& m : {make_minkowski(), make_friedmann(0.1, 0.0).metric, wavy_metric()})
    for (const auto& x : pts) EXPECT_LT(metric_compatibility_defect(m, x), 1e-10);
}

TEST(Christoffel, MetricCompatibilityInTheChartAdaptedToZ) {
  const FriedmannModel model = make_friedmann(0.1, 0.3);
  const MetricField gz = push_metric(z_chart(model), model.metric);
  for (const auto& y : random_points(10, 5, 0.0, 3.0, 2.0)) EXPECT_LT(metric_compatibility_defect(gz, y), 1e-10);
}

TEST(Christoffel, ExactMetricDerivativesMatchFiniteDifferences) {
  const MetricField g = wavy_metric();
  for (const auto& x : random_points(20, 13, -1.0, 1.0, 1.0)) {
    const Mat4<D1> gd = g.components(seed(x));
    const Tensor3<double> fd = oracle::metric_derivative(as_fn(g), x, 1e-5);
    for (std::size_t k = 0; k < kDim; ++k)
      for (std::size_t a = 0; a < kDim; ++a)
        for (std::size_t b = 0; b < kDim; ++b) EXPECT_NEAR(gd[a][b].d[k], fd[k][a][b], 1e-6);
  }
}

TEST(Christoffel, ChartCovariance) {
  // Nonlinear chart y = x + 0.1 sin(x) on the wavy metric; Γ′ must follow
  // Γ′ = Λ Γ Λ⁻¹ Λ⁻¹ + Λ ∂²x/∂y∂y.
  MapFunction f([](const auto& x) {
    using T = typename std::decay_t<decltype(x)>::value_type;
    using std::sin;
    Vec4<T> y;
    for (std::size_t i = 0; i < kDim; ++i) y[i] = x[i] + 0.1 * sin(x[(i + 1) % kDim]);
    return y;
  });
  PointSolver solve = [](const Vec4<double>& y) {
    Vec4<double> x = y;
    for (int it = 0; it < 200; ++it)
      for (std::size_t i = 0; i < kDim; ++i) x[i] = y[i] - 0.1 * std::sin(x[(i + 1) % kDim]);
    return x;
  };
  const MetricField g = wavy_metric();
  const ChartMap map("wavy", "wavy2", "wobble", f, solve, ChartMap::Explicit::Forward);
  const MetricField g2 = push_metric(map, g);
  const Vec4<double> x{0.2, -0.3, 0.4, 0.1};
  const Vec4<double> y = map.forward(x);
  const auto Gp = christoffel(g2, ChartPoint{y, "wavy2"}).gamma;
  const auto G = christoffel(g, ChartPoint{x, "wavy"}).gamma;
  const Mat4<double> lam = map.jacobian(x);
  const Mat4<double> li = inverse(lam);
  // ∂²x^α/∂y^ν∂y^ρ by differencing the inverse Jacobian.
  auto li_of = [&map](const Vec4<double>& z) { return inverse(map.jacobian(map.inverse(z))); };
  std::array<Mat4<double>, kDim> dli{};
  for (std::size_t r = 0; r < kDim; ++r) dli[r] = oracle::central(li_of, y, r, 1e-4);
  for (std::size_t m = 0; m < kDim; ++m)
    for (std::size_t n = 0; n < kDim; ++n)
      for (std::size_t r = 0; r < kDim; ++r) {
        double expect = 0.0;
        for (std::size_t a = 0; a < kDim; ++a) {
          for (std::size_t b = 0; b < kDim; ++b)
            for (std::size_t c = 0; c < kDim; ++c) expect += lam[m][a] * G[a][b][c] * li[b][n] * li[c][r];
          expect += lam[m][a] * dli[r][a][n];
        }
        EXPECT_NEAR(Gp[m][n][r], expect, 1e-8);
      }
}

TEST(Riemann, MinkowskiIsFlat) {
  const auto r = riemann(make_minkowski(), ChartPoint{{0, 1, 2, 3}, kMinkowskiChart});
  EXPECT_EQ(max_abs(r.riemann), 0.0);
  EXPECT_EQ(max_abs(r.ricci), 0.0);
  EXPECT_EQ(r.scalar, 0.0);
  EXPECT_EQ(max_abs(r.einstein), 0.0);
}

TEST(Riemann, FriedmannMatchesFiniteDifferenceOfConnection) {
  const MetricField g = make_friedmann(0.3, 0.0).metric;
  for (const auto& x : random_points(10, 17, 0.0, 2.0, 1.0)) {
    const auto r = riemann(g, ChartPoint{x, kFriedmannChart}).riemann;
    const auto fd = oracle::riemann_from_gamma([&g](const Vec4<double>& y) { return connection_at<double>(g, y); }, x);
    for (std::size_t a = 0; a < kDim; ++a)
      for (std::size_t b = 0; b < kDim; ++b)
        for (std::size_t c = 0; c < kDim; ++c)
          for (std::size_t m = 0; m < kDim; ++m) EXPECT_NEAR(r[a][b][c][m], fd[a][b][c][m], 1e-6);
  }
}

TEST(Riemann, WavyMetricMatchesFiniteDifferenceOfConnection) {
  const MetricField g = wavy_metric();
  const Vec4<double> x{0.3, 0.2, -0.1, 0.4};
  const auto r = riemann(g, ChartPoint{x, "wavy"}).riemann;
  const auto fd = oracle::riemann_from_gamma([&g](const Vec4<double>& y) { return oracle::christoffel(as_fn(g), y, 1e-3); }, x, 1e-3);
  EXPECT_LT([&] {
    double m = 0.0;
    for (std::size_t a = 0; a < kDim; ++a)
      for (std::size_t b = 0; b < kDim; ++b)
        for (std::size_t c = 0; c < kDim; ++c)
          for (std::size_t d = 0; d < kDim; ++d) m = std::max(m, std::abs(r[a][b][c][d] - fd[a][b][c][d]));
    return m;
  }(), 1e-6);
}

TEST(Riemann, RicciScalarMatchesComputerAlgebraFixture) {
  // S(a=0.3, t=0.5) from tests/oracles/cas_fixtures.py.
  const double fixture = -0.40831758034026465028;
  const auto c = curvature_contractions(make_friedmann(0.3, 0.0).metric, ChartPoint{{0.5, 1.0, -2.0, 0.3}, kFriedmannChart});
  EXPECT_NEAR(c.scalar, fixture, 1e-14);
  EXPECT_NEAR(c.scalar, oracle::friedmann_scalar(0.3, 0.5), 1e-14);
}

TEST(Riemann, AntisymmetryAndFirstBianchi) {
  for (const auto& m : {make_friedmann(0.2, 0.0).metric, wavy_metric()})
    for (const auto& x : random_points(20, 23, 0.0, 1.0, 1.0)) {
      const auto r = riemann(m, ChartPoint{x, m.chart_id()}).riemann;
      for (std::size_t a = 0; a < kDim; ++a)
        for (std::size_t b = 0; b < kDim; ++b)
          for (std::size_t c = 0; c < kDim; ++c)
            for (std::size_t d = 0; d < kDim; ++d) {
              EXPECT_NEAR(r[a][b][c][d], -r[a][b][d][c], 1e-9);
              EXPECT_NEAR(r[a][b][c][d] + r[a][c][d][b] + r[a][d][b][c], 0.0, 1e-9);
            }
    }
}

TEST(CurvatureContractions, FriedmannEinsteinIsDiagonalAndConsistent) {
  const double a = 0.2;
  for (const auto& x : random_points(20, 29, 0.0, 3.0, 2.0)) {
    const MetricField g = make_friedmann(a, 0.0).metric;
    const ChartPoint p{x, kFriedmannChart};
    const auto c = curvature_contractions(g, p);
    const Mat4<double> gm = g.components(x);
    const Mat4<double> gi = inverse(gm);
    double trace = 0.0;
    for (std::size_t i = 0; i < kDim; ++i)
      for (std::size_t j = 0; j < kDim; ++j) {
        trace += gi[i][j] * c.ricci[i][j];
        EXPECT_NEAR(c.ricci[i][j], c.ricci[j][i], 1e-10);
        EXPECT_EQ(c.einstein[i][j], c.ricci[i][j] - 0.5 * c.scalar * gm[i][j]);
        if (i != j) EXPECT_NEAR(c.einstein[i][j], 0.0, 1e-14);
      }
    EXPECT_NEAR(trace, c.scalar, 1e-10);
    const double r = oracle::R(a, x[0]);
    EXPECT_NEAR(c.einstein[0][0], 3.0 * a * a / (r * r), 1e-12);
  }
}

TEST(CovariantDerivative, InertialFrameIsCovariantlyConstant) {
  const MetricField g = make_minkowski();
  const FrameField i = inertial_minkowski_frame(g);
  EXPECT_EQ(max_abs(covariant_derivative_field(g, i, ChartPoint{{1, 2, 3, 4}, kMinkowskiChart})), 0.0);
}

TEST(CovariantDerivative, ComovingFrameDivergenceAndGeodesy) {
  const double a = 0.05;
  const FriedmannModel m = make_friedmann(a, 0.0);
  for (double t : {0.0, 1.0, 4.0}) {
    const auto d = covariant_derivative_field(m.metric, m.frame_V, ChartPoint{{t, 0.1, 0.2, 0.3}, kFriedmannChart});
    EXPECT_NEAR(d[0][0] + d[1][1] + d[2][2] + d[3][3], 3.0 * a / oracle::R(a, t), 1e-15);
    for (std::size_t mu = 0; mu < kDim; ++mu) EXPECT_NEAR(d[mu][0], 0.0, 1e-15);  // (D_V V)^μ = Q^μ_{;0}
  }
}
