#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "framekin/frames.hpp"
#include "framekin/friedmann.hpp"
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

}  // namespace

TEST(ScaleFactor, RejectsNonPositiveR) {
  const LinearScaleFactor s{0.5};
  EXPECT_DOUBLE_EQ(s.R(1.0), 1.5);
  EXPECT_THROW(s.R(-2.0), DomainError);
  EXPECT_DOUBLE_EQ(s.domain_lower_bound(), -2.0);
  EXPECT_THROW(make_friedmann(-0.1, 0.0), ValidationError);
  const FriedmannModel m = make_friedmann(0.5, 0.0);
  EXPECT_THROW(eval_metric(m.metric, ChartPoint{{-3.0, 0, 0, 0}, kFriedmannChart}), DomainError);
}

TEST(Friedmann, ConnectionMatchesClosedForm) {
  for (double a : {0.0, 1e-3, 0.5}) {
    const FriedmannModel m = make_friedmann(a, 0.0);
    for (const auto& x : random_points(100, 11, 0.0, 10.0, 10.0)) {
      const auto g = christoffel(m.metric, ChartPoint{x, kFriedmannChart}).gamma;
      EXPECT_LT(max_abs([&] {
                  Tensor3<double> d = g;
                  const Tensor3<double> o = oracle::friedmann_gamma(a, x);
                  for (std::size_t i = 0; i < kDim; ++i)
                    for (std::size_t j = 0; j < kDim; ++j)
                      for (std::size_t k = 0; k < kDim; ++k) d[i][j][k] -= o[i][j][k];
                  return d;
                }()),
                1e-12);
    }
  }
}

TEST(Friedmann, VelocityConversions) {
  EXPECT_NEAR(velocity_from_u(0.1005), 0.1, 1e-4);
  EXPECT_NEAR(velocity_from_u(u_from_velocity(0.37)), 0.37, 1e-15);
  EXPECT_THROW(u_from_velocity(1.0), ValidationError);
  const FriedmannModel m = make_friedmann(0.01, u_from_velocity(0.2));
  EXPECT_NEAR(m.v, 0.2, 1e-15);
}

TEST(ZChart, ZeroBoostIsIdentity) {
  const FriedmannModel m = make_friedmann(0.3, 0.0);
  const ChartMap zc = z_chart(m);
  for (const auto& x : random_points(20, 12, 0.0, 5.0, 3.0)) {
    const Vec4<double> y = zc.forward(x);
    for (std::size_t i = 0; i < kDim; ++i) EXPECT_NEAR(y[i], x[i], 1e-12);
  }
}

TEST(ZChart, OriginIsFixed) {
  const FriedmannModel m = make_friedmann(0.01, 0.3);
  const ChartMap zc = z_chart(m);
  EXPECT_EQ(zc.forward(Vec4<double>{0, 0, 0, 0}), (Vec4<double>{0, 0, 0, 0}));
  const Vec4<double> back = zc.inverse(Vec4<double>{0, 0, 0, 0});
  for (double c : back) EXPECT_NEAR(c, 0.0, 1e-14);
}

TEST(ZChart, StaticLimitQuadratureIsExact) {
  const double u = 0.4;
  const FriedmannModel m = make_friedmann(0.0, u);
  const ChartMap zc = z_chart(m);
  for (double t : {0.5, 2.0, 7.0}) {
    const Vec4<double> y = zc.forward(Vec4<double>{t, 0, 0, 0});
    EXPECT_NEAR(y[0], t * std::sqrt(1.0 + u * u), 1e-12);
    EXPECT_NEAR(y[1], -u * t / std::sqrt(1.0 + u * u), 1e-12);
  }
}

TEST(ZChart, InverseMatchesClosedFormTime) {
  for (double a : {1e-3, 0.05, 0.5}) {
    const double u = 0.3;
    const FriedmannModel m = make_friedmann(a, u);
    const ChartMap zc = z_chart(m);
    for (const auto& y : random_points(10, 13, 0.0, 4.0, 1.0)) {
      const Vec4<double> x = zc.inverse(y);
      EXPECT_NEAR(x[0], oracle::t_of_zchart(a, u, y[0], y[1]), 1e-10);
    }
  }
}

TEST(ZChart, RoundTripOverTheFullBox) {
  const FriedmannModel m = make_friedmann(0.05, 0.3);
  const ChartMap zc = z_chart(m);
  double worst = 0.0;
  for (const auto& x : random_points(40, 14, 0.0, 10.0, 10.0)) {
    const Vec4<double> back = zc.inverse(zc.forward(x));
    for (std::size_t i = 0; i < kDim; ++i) worst = std::max(worst, std::abs(back[i] - x[i]));
  }
  EXPECT_LT(worst, 1e-9);
}

TEST(ZChart, JacobianMatchesFiniteDifferences) {
  const FriedmannModel m = make_friedmann(0.2, 0.5);
  const ChartMap zc = z_chart(m);
  const Vec4<double> x{1.3, 0.4, -0.2, 0.1};
  const Mat4<double> j = zc.jacobian(x);
  for (std::size_t k = 0; k < kDim; ++k) {
    const Vec4<double> col = oracle::central([&](const Vec4<double>& y) { return zc.forward(y); }, x, k, 1e-3);
    for (std::size_t i = 0; i < kDim; ++i) EXPECT_NEAR(j[i][k], col[i], 1e-9);
  }
}

TEST(ZChart, PushedMetricMatchesPublishedForm) {
  for (double a : {1e-3, 0.05}) {
    const double u = u_from_velocity(0.3);
    const FriedmannModel m = make_friedmann(a, u);
    const MetricField gz = push_metric(z_chart(m), m.metric);
    for (const auto& y : random_points(20, 15, 0.0, 5.0, 2.0)) {
      const Mat4<double> g = gz.components(y);
      const Mat4<double> o = oracle::zchart_metric(a, u, y);
      for (std::size_t i = 0; i < kDim; ++i)
        for (std::size_t k = 0; k < kDim; ++k) EXPECT_NEAR(g[i][k], o[i][k], 1e-9) << i << k;
    }
  }
}

TEST(ZChart, PushedConnectionMatchesHandDerivation) {
  const double a = 0.05;
  const double u = 0.3;
  const FriedmannModel m = make_friedmann(a, u);
  const MetricField gz = push_metric(z_chart(m), m.metric);
  for (const auto& y : random_points(10, 16, 0.0, 3.0, 1.0)) {
    const auto g = christoffel(gz, ChartPoint{y, kZChart}).gamma;
    const Tensor3<double> o = oracle::zchart_gamma_exact(a, u, y);
    const Tensor3<double> fd = oracle::christoffel([&](const Vec4<double>& z) { return oracle::zchart_metric(a, u, z); }, y);
    for (std::size_t i = 0; i < kDim; ++i)
      for (std::size_t j = 0; j < kDim; ++j)
        for (std::size_t k = 0; k < kDim; ++k) {
          EXPECT_NEAR(g[i][j][k], o[i][j][k], 1e-9);
          EXPECT_NEAR(fd[i][j][k], o[i][j][k], 1e-8);
        }
  }
}

TEST(ZChart, PushedFieldIsTheTimeAxis) {
  const FriedmannModel m = make_friedmann(0.05, 0.3);
  const ChartMap zc = z_chart(m);
  const VectorField z = push_vector_field(zc, m.frame_Z.field());
  for (const auto& y : random_points(10, 17, 0.0, 3.0, 1.0)) {
    const Vec4<double> q = z.components(y);
    EXPECT_NEAR(q[0], 1.0, 1e-10);
    for (std::size_t i = 1; i < kDim; ++i) EXPECT_NEAR(q[i], 0.0, 1e-10);
  }
}

TEST(Catalog, FieldZIsGeodesicAndIrrotational) {
  const FriedmannModel m = make_friedmann(0.05, 0.3);
  for (const auto& x : random_points(20, 18, 0.0, 5.0, 3.0)) {
    const auto k = kinematic_decompose(m.metric, m.frame_Z, ChartPoint{x, kFriedmannChart});
    EXPECT_LT(max_abs(k.acceleration), 1e-12);
    EXPECT_LT(max_abs(k.vorticity), 1e-12);
    EXPECT_NEAR(k.expansion, oracle::theta_z_exact(0.05, 0.3, x[0]), 1e-12);
  }
}

TEST(Catalog, RotatingFrameKinematics) {
  const MetricField g = make_minkowski();
  const double omega = 0.1;
  const FrameField f = rotating_minkowski_frame(g, omega, 5.0);
  const auto k = kinematic_decompose(g, f, ChartPoint{{0, 0, 0, 0}, kMinkowskiChart});
  EXPECT_NEAR(k.vorticity[1][2], omega, 1e-14);
  EXPECT_NEAR(k.vorticity[2][1], -omega, 1e-14);
  EXPECT_NEAR(k.expansion, 0.0, 1e-14);
  // Centripetal acceleration γ²ω²r at radius r.
  const double r = 2.0;
  const double gam2 = 1.0 / (1.0 - omega * omega * r * r);
  const auto k2 = kinematic_decompose(g, f, ChartPoint{{0, r, 0, 0}, kMinkowskiChart});
  EXPECT_NEAR(k2.acceleration[1], gam2 * omega * omega * r, 1e-12);
  EXPECT_THROW(f.components(Vec4<double>{0, 6.0, 0, 0}), DomainError);
  EXPECT_THROW(rotating_minkowski_frame(g, 0.5, 3.0), ValidationError);
}

TEST(Catalog, AffineMaps) {
  const Mat4<double> b = lorentz_boost_matrix(0.6);
  const Mat4<double> eta = minkowski_eta<double>();
  const Mat4<double> r = matmul(transpose(b), matmul(eta, b));
  for (std::size_t i = 0; i < kDim; ++i)
    for (std::size_t j = 0; j < kDim; ++j) EXPECT_NEAR(r[i][j], eta[i][j], 1e-14);
  EXPECT_THROW(dilation(kMinkowskiChart, 0.0), ValidationError);
  const ChartMap t = translation(kMinkowskiChart, {1, 2, 3, 4});
  EXPECT_EQ(t.forward(Vec4<double>{0, 0, 0, 0}), (Vec4<double>{1, 2, 3, 4}));
}
