#pragma once

// Pushforward of tensor fields, symmetry tests and the physical-equivalence
// verdict based on kinematic invariants.

#include <array>
#include <cmath>
#include <functional>
#include <future>
#include <string>
#include <utility>
#include <vector>

#include "framekin/chart_map.hpp"
#include "framekin/errors.hpp"
#include "framekin/frames.hpp"
#include "framekin/friedmann.hpp"
#include "framekin/geodesic.hpp"
#include "framekin/geometry.hpp"
#include "framekin/normal_frames.hpp"
#include "framekin/tensor.hpp"

namespace framekin {

/// Dense components of a type (r, s) tensor at a point. Index order is all
/// upper indices then all lower ones, row-major, each index in 0..3.
struct TensorComponents {
  int upper = 0;
  int lower = 0;
  std::vector<double> data;

  std::size_t rank() const { return static_cast<std::size_t>(upper + lower); }

  static TensorComponents zeros(int r, int s) {
    if (r < 0 || s < 0) throw ValidationError("tensor type must be non-negative");
    TensorComponents t{r, s, {}};
    std::size_t n = 1;
    for (std::size_t i = 0; i < t.rank(); ++i) n *= kDim;
    t.data.assign(n, 0.0);
    return t;
  }
  static TensorComponents from_vector(const Vec4<double>& v) { return {1, 0, {v.begin(), v.end()}}; }
  static TensorComponents from_matrix(const Mat4<double>& m, int r, int s) {
    if (r + s != 2) throw ValidationError("from_matrix needs a rank-2 type");
    TensorComponents t = zeros(r, s);
    for (std::size_t i = 0; i < kDim; ++i)
      for (std::size_t j = 0; j < kDim; ++j) t.data[i * kDim + j] = m[i][j];
    return t;
  }
};

inline double max_abs_difference(const TensorComponents& a, const TensorComponents& b) {
  if (a.upper != b.upper || a.lower != b.lower || a.data.size() != b.data.size())
    throw ValidationError("tensor type mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) m = std::max(m, std::abs(a.data[i] - b.data[i]));
  return m;
}

/// T′^{μ…}_{ν…}(x′) = Λ^μ_α … T^{α…}_{β…}(x) (Λ⁻¹)^β_ν …, with x′ = forward(x).
inline TensorComponents pushforward_tensor(const ChartMap& map, const TensorComponents& t, const Vec4<double>& x) {
  std::size_t expected = 1;
  for (std::size_t i = 0; i < t.rank(); ++i) expected *= kDim;
  if (t.upper < 0 || t.lower < 0 || t.data.size() != expected)
    throw ValidationError("pushforward_tensor: component array does not match the declared type");
  const Mat4<double> lam = map.jacobian(x);
  const Mat4<double> lam_inv = inverse(lam);
  TensorComponents out = t;
  // Transform one slot at a time.
  for (std::size_t slot = 0; slot < t.rank(); ++slot) {
    const bool is_upper = static_cast<int>(slot) < t.upper;
    std::size_t stride = 1;
    for (std::size_t k = slot + 1; k < t.rank(); ++k) stride *= kDim;
    std::vector<double> next(out.data.size(), 0.0);
    for (std::size_t flat = 0; flat < out.data.size(); ++flat) {
      const std::size_t idx = (flat / stride) % kDim;
      const std::size_t base = flat - idx * stride;
      for (std::size_t j = 0; j < kDim; ++j) {
        const double f = is_upper ? lam[j][idx] : lam_inv[idx][j];
        next[base + j * stride] += f * out.data[flat];
      }
    }
    out.data = std::move(next);
  }
  return out;
}

/// A tensor field given pointwise in one chart.
struct TensorField {
  std::string chart_id;
  int upper = 0;
  int lower = 0;
  std::function<TensorComponents(const Vec4<double>&)> components;
};

inline TensorField metric_tensor_field(const MetricField& metric) {
  return {metric.chart_id(), 0, 2,
          [metric](const Vec4<double>& x) { return TensorComponents::from_matrix(metric.components(x), 0, 2); }};
}

struct SymmetryReport {
  bool is_symmetry = false;
  double max_deviation = 0.0;
  double tolerance = 1e-9;
};

/// h∗T = T at the mapped samples.
inline SymmetryReport is_symmetry(const ChartMap& map, const TensorField& field, const std::vector<Vec4<double>>& samples,
                                  double tolerance = 1e-9) {
  if (samples.empty()) throw ValidationError("is_symmetry: empty sample set");
  if (map.source_chart() != field.chart_id || map.target_chart() != field.chart_id)
    throw ValidationError("is_symmetry: map must act within the field's chart");
  SymmetryReport r;
  r.tolerance = tolerance;
  for (const auto& x : samples) {
    const TensorComponents pushed = pushforward_tensor(map, field.components(x), x);
    const TensorComponents here = field.components(map.forward(x));
    r.max_deviation = std::max(r.max_deviation, max_abs_difference(pushed, here));
  }
  r.is_symmetry = r.max_deviation <= tolerance;
  return r;
}

enum class Verdict { Equivalent, NotEquivalent };

inline const char* to_string(Verdict v) { return v == Verdict::Equivalent ? "Equivalent" : "NotEquivalent"; }

/// Scalar invariants of a decomposition: a_μa^μ, ½ω_{μν}ω^{μν}, ½σ_{μν}σ^{μν}, Θ.
struct KinematicInvariants {
  double acceleration_sq = 0.0;
  double vorticity_sq = 0.0;
  double shear_sq = 0.0;
  double expansion = 0.0;
};

inline KinematicInvariants invariants_of(const KinematicDecomposition& k, const Mat4<double>& g_inv) {
  KinematicInvariants inv;
  inv.expansion = k.expansion;
  for (std::size_t m = 0; m < kDim; ++m)
    for (std::size_t n = 0; n < kDim; ++n) {
      inv.acceleration_sq += g_inv[m][n] * k.acceleration[m] * k.acceleration[n];
      for (std::size_t a = 0; a < kDim; ++a)
        for (std::size_t b = 0; b < kDim; ++b) {
          const double gg = g_inv[m][a] * g_inv[n][b];
          inv.vorticity_sq += 0.5 * gg * k.vorticity[m][n] * k.vorticity[a][b];
          inv.shear_sq += 0.5 * gg * k.shear[m][n] * k.shear[a][b];
        }
    }
  return inv;
}

struct EquivalenceVerdict {
  Verdict verdict = Verdict::Equivalent;
  KinematicDecomposition first;
  KinematicDecomposition second;
  KinematicInvariants first_invariants;
  KinematicInvariants second_invariants;
  // |difference| per part: acceleration, vorticity, shear, expansion.
  std::array<double, 4> deltas{};
  double strict_delta = 0.0;  // max |Q_{μ;ν} − Q̄_{μ;ν}|
  std::string dominant;       // part with the largest delta
  double tolerance = 1e-7;
  bool strict = false;
};

inline constexpr std::array<const char*, 4> kKinematicParts = {"acceleration", "vorticity", "shear", "expansion"};

/// Frames are compared through their kinematic invariants at p; strict mode
/// compares raw Q_{μ;ν} components in the shared chart instead.
inline EquivalenceVerdict equivalence_verdict(const MetricField& metric, const FrameField& a, const FrameField& b,
                                              const ChartPoint& p, double tolerance = 1e-7, bool strict = false) {
  if (a.chart_id() != metric.chart_id() || b.chart_id() != metric.chart_id())
    throw ValidationError("equivalence_verdict: frames and metric must share a chart");
  if (!(tolerance > 0.0)) throw ValidationError("tolerance must be positive");
  EquivalenceVerdict v;
  v.tolerance = tolerance;
  v.strict = strict;
  v.first = kinematic_decompose(metric, a, p);
  v.second = kinematic_decompose(metric, b, p);
  const Mat4<double> gi = inverse_metric(metric, p);
  v.first_invariants = invariants_of(v.first, gi);
  v.second_invariants = invariants_of(v.second, gi);
  const auto& x = v.first_invariants;
  const auto& y = v.second_invariants;
  v.deltas = {std::abs(x.acceleration_sq - y.acceleration_sq), std::abs(x.vorticity_sq - y.vorticity_sq),
              std::abs(x.shear_sq - y.shear_sq), std::abs(x.expansion - y.expansion)};
  for (std::size_t m = 0; m < kDim; ++m)
    for (std::size_t n = 0; n < kDim; ++n)
      v.strict_delta = std::max(v.strict_delta, std::abs(v.first.gradient[m][n] - v.second.gradient[m][n]));
  std::size_t dom = 0;
  for (std::size_t i = 1; i < v.deltas.size(); ++i)
    if (v.deltas[i] > v.deltas[dom]) dom = i;
  v.dominant = v.deltas[dom] > 0.0 ? kKinematicParts[dom] : "none";
  const double worst = strict ? v.strict_delta : v.deltas[dom];
  v.verdict = worst > tolerance ? Verdict::NotEquivalent : Verdict::Equivalent;
  return v;
}

struct PlliOptions {
  double validity_radius = 0.05;
  double half_span = 0.2;  // proper-time extent of each geodesic on either side of p
  double step = 1e-3;
};

struct PlliResult {
  double a = 0.0;
  double v = 0.0;
  double u = 0.0;
  ChartPoint p;
  LlrfExpansion theta_L;
  LlrfExpansion theta_Lprime;
  FriedmannModel model;
  LLRFFrame L;
  LLRFFrame Lprime;

  /// Θ_L′(p) / (a v²); NaN when a v² = 0.
  double ratio_to_av2() const {
    const double d = a * v * v;
    return d == 0.0 ? std::nan("") : theta_Lprime.normalized / d;
  }
};

/// Local Lorentz frames at p = (0, 0) of the comoving geodesic γ and of the
/// integral line γ′ of Z, and their expansions at p. The two constructions
/// run concurrently.
inline PlliResult plli_expansion_pair(double a, double v, const PlliOptions& options = {}) {
  if (!(a >= 0.0)) throw ValidationError("a must be >= 0");
  if (!(v > 0.0 && v < 1.0)) throw ValidationError("v must lie in (0, 1)");
  PlliResult r;
  r.a = a;
  r.v = v;
  r.u = u_from_velocity(v);
  r.model = make_friedmann(a, r.u);
  r.p = ChartPoint{{0.0, 0.0, 0.0, 0.0}, kFriedmannChart};
  const MetricField& g = r.model.metric;
  const Mat4<double> gp = eval_metric(g, r.p);
  StepControl control;
  control.step = options.step;

  auto build = [&](const Vec4<double>& velocity, const std::string& label) {
    const GeodesicPath path = integrate_geodesic_through(g, r.p, velocity, options.half_span, control);
    if (path.truncated) throw NumericError("geodesic through p was truncated: " + path.truncation_reason);
    return llrf_along_geodesic(g, path, tetrad_from_velocity(gp, velocity), options.validity_radius, label);
  };
  const Vec4<double> v_gamma{1.0, 0.0, 0.0, 0.0};
  const Vec4<double> v_gamma_prime = r.model.frame_Z.components(r.p.coords);
  auto first = std::async(std::launch::async, build, v_gamma, std::string("L"));
  auto second = std::async(std::launch::async, build, v_gamma_prime, std::string("L'"));
  r.L = first.get();
  r.Lprime = second.get();
  r.theta_L = llrf_expansion(g, r.L, r.p);
  r.theta_Lprime = llrf_expansion(g, r.Lprime, r.p);
  return r;
}

}  // namespace framekin
