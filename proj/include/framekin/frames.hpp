#pragma once

// Reference frames: unit timelike vector fields, their kinematic
// decomposition and their classification.

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "framekin/dual.hpp"
#include "framekin/errors.hpp"
#include "framekin/geometry.hpp"
#include "framekin/tensor.hpp"

namespace framekin {

/// A future-pointing unit timelike vector field. The stored field is always
/// normalized pointwise; `rescaled` records whether the input needed it.
class FrameField {
 public:
  FrameField() = default;
  FrameField(VectorField unit_field, bool rescaled) : field_(std::move(unit_field)), rescaled_(rescaled) {}

  template <class T>
  Vec4<T> components(const Vec4<T>& x) const {
    return field_.components(x);
  }

  const VectorField& field() const { return field_; }
  const std::string& chart_id() const { return field_.chart_id(); }
  const std::string& label() const { return field_.label(); }
  bool rescaled() const { return rescaled_; }

 private:
  VectorField field_;
  bool rescaled_ = false;
};

/// Build a frame from raw components, normalizing by 1/√g(Q,Q). The probe
/// points are where timelike/future-pointing is checked up front; later
/// evaluations at spacelike or null points throw DomainError.
inline FrameField make_frame(const VectorField& components, const MetricField& metric,
                             std::span<const Vec4<double>> probes) {
  if (components.chart_id() != metric.chart_id())
    throw ValidationError("make_frame: field chart '" + components.chart_id() + "' differs from metric chart '" +
                          metric.chart_id() + "'");
  if (probes.empty()) throw ValidationError("make_frame: at least one probe point is required");
  bool rescaled = false;
  for (const auto& x : probes) {
    const Vec4<double> q = components.components(x);
    const double n2 = inner(metric.components(x), q, q);
    if (!(n2 > 0.0)) throw ValidationError("make_frame: field '" + components.label() + "' is not timelike at a probe");
    if (!(q[0] > 0.0)) throw ValidationError("make_frame: field '" + components.label() + "' is not future pointing");
    if (std::abs(n2 - 1.0) > 1e-12) rescaled = true;
  }
  VectorField unit(components.chart_id(), components.label(), [components, metric](const auto& x) {
    using T = typename std::decay_t<decltype(x)>::value_type;
    using std::sqrt;
    Vec4<T> q = components.components(x);
    const T n2 = inner(metric.components(x), q, q);
    if (!(value_of(n2) > 0.0)) throw DomainError("frame '" + components.label() + "' is not timelike here");
    const T inv = 1.0 / sqrt(n2);
    for (auto& c : q) c = c * inv;
    return q;
  });
  return FrameField(std::move(unit), rescaled);
}

inline FrameField make_frame(const VectorField& components, const MetricField& metric, const Vec4<double>& probe) {
  return make_frame(components, metric, std::span<const Vec4<double>>(&probe, 1));
}

inline Mat4<double> covariant_derivative_field(const MetricField& metric, const FrameField& frame,
                                               const ChartPoint& p) {
  return covariant_derivative_field(metric, frame.field(), p);
}

/// α_Q = g(Q, ·) at a point.
struct Coframe {
  Vec4<double> components{};
};

inline Coframe coframe(const MetricField& metric, const FrameField& frame, const ChartPoint& p) {
  require_chart(metric, p);
  const Mat4<double> g = metric.components(p.coords);
  const Vec4<double> q = frame.components(p.coords);
  Coframe a;
  for (std::size_t m = 0; m < kDim; ++m) {
    double acc = 0.0;
    for (std::size_t n = 0; n < kDim; ++n) acc += g[m][n] * q[n];
    a.components[m] = acc;
  }
  return a;
}

/// Dα_Q = a ⊗ α + ω + σ + ⅓Θh, all tensors with lower indices. The first
/// index of ∇α is the form index, the second the derivative index:
/// (∇α)_{μν} = Q_{μ;ν}.
struct KinematicDecomposition {
  Vec4<double> acceleration{};  // a_μ = Q_{μ;ν} Q^ν
  Mat4<double> vorticity{};     // ω_{μν}, projected antisymmetric part
  Mat4<double> shear{};         // σ_{μν}, projected symmetric trace-free part
  double expansion = 0.0;       // Θ = Q^μ_{;μ}
  Mat4<double> projection{};    // h_{μν} = g_{μν} − Q_μ Q_ν
  Mat4<double> gradient{};      // Q_{μ;ν} as computed directly
  Vec4<double> velocity{};      // Q^μ

  Vec4<double> coframe{};       // α_μ = g_{μν} Q^ν
  ChartPoint point;
  std::string frame_label;

  /// a ⊗ α + ω + σ + ⅓Θh.
  Mat4<double> reassembled() const {
    Mat4<double> r;
    for (std::size_t m = 0; m < kDim; ++m)
      for (std::size_t n = 0; n < kDim; ++n)
        r[m][n] = acceleration[m] * coframe[n] + vorticity[m][n] + shear[m][n] + expansion / 3.0 * projection[m][n];
    return r;
  }
};

inline KinematicDecomposition kinematic_decompose(const MetricField& metric, const FrameField& frame,
                                                  const ChartPoint& p) {
  const Mat4<double> g = metric.components(p.coords);
  const Mat4<double> gi = inverse(g);
  const Mat4<double> dq = covariant_derivative_field(metric, frame, p);  // Q^α_{;ν}
  const Vec4<double> q = frame.components(p.coords);

  KinematicDecomposition k;
  k.point = p;
  k.frame_label = frame.label();
  k.velocity = q;
  for (std::size_t m = 0; m < kDim; ++m) {
    double acc = 0.0;
    for (std::size_t n = 0; n < kDim; ++n) acc += g[m][n] * q[n];
    k.coframe[m] = acc;
  }
  for (std::size_t m = 0; m < kDim; ++m)
    for (std::size_t n = 0; n < kDim; ++n) {
      double acc = 0.0;
      for (std::size_t a = 0; a < kDim; ++a) acc += g[m][a] * dq[a][n];
      k.gradient[m][n] = acc;
    }
  const auto& lower = k.coframe;
  for (std::size_t m = 0; m < kDim; ++m) {
    double acc = 0.0;
    for (std::size_t n = 0; n < kDim; ++n) acc += k.gradient[m][n] * q[n];
    k.acceleration[m] = acc;
  }
  for (std::size_t m = 0; m < kDim; ++m)
    for (std::size_t n = 0; n < kDim; ++n) k.projection[m][n] = g[m][n] - lower[m] * lower[n];

  // B_{μν} = Q_{μ;ν} − a_μ Q_ν is the fully projected gradient for unit Q.
  Mat4<double> b;
  for (std::size_t m = 0; m < kDim; ++m)
    for (std::size_t n = 0; n < kDim; ++n) b[m][n] = k.gradient[m][n] - k.acceleration[m] * lower[n];

  double theta = 0.0;
  for (std::size_t m = 0; m < kDim; ++m)
    for (std::size_t n = 0; n < kDim; ++n) theta += gi[m][n] * k.gradient[m][n];
  k.expansion = theta;

  for (std::size_t m = 0; m < kDim; ++m)
    for (std::size_t n = 0; n < kDim; ++n) {
      k.vorticity[m][n] = 0.5 * (b[m][n] - b[n][m]);
      k.shear[m][n] = 0.5 * (b[m][n] + b[n][m]) - theta / 3.0 * k.projection[m][n];
    }
  return k;
}

/// Raw components of dα (2-form) and α∧dα (3-form) at a point.
struct ExteriorForms {
  Mat4<double> d_alpha{};            // (dα)_{μν} = ∂_μ α_ν − ∂_ν α_μ
  Tensor3<double> alpha_wedge_d{};  // (α∧dα)_{λμν} = α_λ dα_{μν} + α_μ dα_{νλ} + α_ν dα_{λμ}
};

inline ExteriorForms exterior_forms(const MetricField& metric, const FrameField& frame, const Vec4<double>& x) {
  const Vec4<D1> xs = seed(x);
  const Mat4<D1> g = metric.components(xs);
  const Vec4<D1> q = frame.components(xs);
  Vec4<D1> alpha;
  for (std::size_t m = 0; m < kDim; ++m) {
    D1 acc(0.0);
    for (std::size_t n = 0; n < kDim; ++n) acc += g[m][n] * q[n];
    alpha[m] = acc;
  }
  ExteriorForms f;
  for (std::size_t m = 0; m < kDim; ++m)
    for (std::size_t n = 0; n < kDim; ++n) f.d_alpha[m][n] = alpha[n].d[m] - alpha[m].d[n];
  for (std::size_t l = 0; l < kDim; ++l)
    for (std::size_t m = 0; m < kDim; ++m)
      for (std::size_t n = 0; n < kDim; ++n)
        f.alpha_wedge_d[l][m][n] =
            alpha[l].v * f.d_alpha[m][n] + alpha[m].v * f.d_alpha[n][l] + alpha[n].v * f.d_alpha[l][m];
  return f;
}

enum class Synchronizability {
  ProperTimeSynchronizable,
  Synchronizable,
  LocallyProperTimeSynchronizable,
  LocallySynchronizable,
  NonSynchronizable,
};

inline const char* to_string(Synchronizability s) {
  switch (s) {
    case Synchronizability::ProperTimeSynchronizable: return "ProperTimeSynchronizable";
    case Synchronizability::Synchronizable: return "Synchronizable";
    case Synchronizability::LocallyProperTimeSynchronizable: return "LocallyProperTimeSynchronizable";
    case Synchronizability::LocallySynchronizable: return "LocallySynchronizable";
    case Synchronizability::NonSynchronizable: return "NonSynchronizable";
  }
  return "?";
}

struct SynchronizabilityClass {
  Synchronizability value = Synchronizability::NonSynchronizable;
  double max_d_alpha = 0.0;       // max |(dα)_{μν}| over samples
  double max_alpha_wedge = 0.0;   // max |(α∧dα)_{λμν}| over samples
  double max_vorticity = 0.0;     // max |ω_{μν}| over samples
  bool region = false;            // samples span a 4-dimensional box
  double threshold = 1e-8;
  std::vector<double> d_alpha_per_sample;
  std::vector<double> alpha_wedge_per_sample;
};

/// Whether the sample set spans a 4-dimensional region, i.e. each coordinate
/// takes at least two distinct values.
inline bool spans_region(std::span<const Vec4<double>> samples) {
  for (std::size_t i = 0; i < kDim; ++i) {
    auto [lo, hi] = std::minmax_element(samples.begin(), samples.end(),
                                        [i](const auto& a, const auto& b) { return a[i] < b[i]; });
    if (!((*hi)[i] > (*lo)[i])) return false;
  }
  return true;
}

/// Classify by numeric dα and α∧dα over the samples. On a sample set spanning
/// a box, dα = 0 gives α = dt′ on the box and α∧dα = 0 gives α = h dt; the
/// verdict never extends beyond the sampled box. A degenerate sample set
/// only supports the local classes.
inline SynchronizabilityClass classify_synchronizability(const MetricField& metric, const FrameField& frame,
                                                         std::span<const Vec4<double>> samples,
                                                         double threshold = 1e-8) {
  if (samples.empty()) throw ValidationError("classify_synchronizability: empty sample set");
  SynchronizabilityClass c;
  c.threshold = threshold;
  c.region = spans_region(samples);
  for (const auto& x : samples) {
    const ExteriorForms f = exterior_forms(metric, frame, x);
    const double da = max_abs(f.d_alpha);
    const double aw = max_abs(f.alpha_wedge_d);
    c.d_alpha_per_sample.push_back(da);
    c.alpha_wedge_per_sample.push_back(aw);
    c.max_d_alpha = std::max(c.max_d_alpha, da);
    c.max_alpha_wedge = std::max(c.max_alpha_wedge, aw);
    const auto k = kinematic_decompose(metric, frame, ChartPoint{x, metric.chart_id()});
    c.max_vorticity = std::max(c.max_vorticity, max_abs(k.vorticity));
  }
  if (c.max_alpha_wedge >= threshold) {
    c.value = Synchronizability::NonSynchronizable;
  } else if (c.max_d_alpha < threshold) {
    c.value = c.region ? Synchronizability::ProperTimeSynchronizable
                       : Synchronizability::LocallyProperTimeSynchronizable;
  } else {
    c.value = c.region ? Synchronizability::Synchronizable : Synchronizability::LocallySynchronizable;
  }
  return c;
}

struct PirfReport {
  bool is_pirf = false;
  double max_acceleration = 0.0;  // max |(D_Q Q)^μ|
  double max_alpha_wedge = 0.0;   // max |(α∧dα)_{λμν}|
  double tolerance = 1e-8;
  std::size_t samples = 0;
};

/// Free fall (D_Q Q = 0) and no rotation (α∧dα = 0) on every sample.
inline PirfReport is_pirf(const MetricField& metric, const FrameField& frame, std::span<const Vec4<double>> samples,
                          double tolerance = 1e-8) {
  if (samples.empty()) throw ValidationError("is_pirf: empty sample set");
  PirfReport r;
  r.tolerance = tolerance;
  r.samples = samples.size();
  for (const auto& x : samples) {
    const ChartPoint p{x, metric.chart_id()};
    const Mat4<double> dq = covariant_derivative_field(metric, frame, p);
    const Vec4<double> q = frame.components(x);
    for (std::size_t m = 0; m < kDim; ++m) {
      double acc = 0.0;
      for (std::size_t n = 0; n < kDim; ++n) acc += dq[m][n] * q[n];
      r.max_acceleration = std::max(r.max_acceleration, std::abs(acc));
    }
    r.max_alpha_wedge = std::max(r.max_alpha_wedge, max_abs(exterior_forms(metric, frame, x).alpha_wedge_d));
  }
  r.is_pirf = r.max_acceleration < tolerance && r.max_alpha_wedge < tolerance;
  return r;
}

/// n⁴ grid over the box center ± half_width (n = 1 gives the center only).
inline std::vector<Vec4<double>> sample_grid(const Vec4<double>& center, const Vec4<double>& half_width,
                                             int per_axis = 3) {
  if (per_axis < 1) throw ValidationError("sample_grid: per_axis must be >= 1");
  std::vector<Vec4<double>> pts;
  auto coord = [&](std::size_t axis, int i) {
    if (per_axis == 1) return center[axis];
    return center[axis] - half_width[axis] + 2.0 * half_width[axis] * i / (per_axis - 1);
  };
  for (int i0 = 0; i0 < per_axis; ++i0)
    for (int i1 = 0; i1 < per_axis; ++i1)
      for (int i2 = 0; i2 < per_axis; ++i2)
        for (int i3 = 0; i3 < per_axis; ++i3)
          pts.push_back({coord(0, i0), coord(1, i1), coord(2, i2), coord(3, i3)});
  return pts;
}

}  // namespace framekin
