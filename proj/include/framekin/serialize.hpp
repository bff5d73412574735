#pragma once

// JSON views of result types. Doubles are written in nlohmann's shortest
// round-trip form, which reproduces the value bit for bit.

#include <json.hpp>

#include <string>
#include <vector>

#include "framekin/equivalence.hpp"
#include "framekin/frames.hpp"
#include "framekin/geodesic.hpp"
#include "framekin/normal_frames.hpp"

namespace framekin {

using nlohmann::json;

inline json flat(const Vec4<double>& v) { return json(std::vector<double>(v.begin(), v.end())); }

inline json flat(const Mat4<double>& m) {
  std::vector<double> out;
  for (const auto& row : m) out.insert(out.end(), row.begin(), row.end());
  return out;
}

inline json flat(const Tensor3<double>& t) {
  std::vector<double> out;
  for (const auto& m : t)
    for (const auto& row : m) out.insert(out.end(), row.begin(), row.end());
  return out;
}

inline void to_json(json& j, const ChartPoint& p) { j = json{{"coords", flat(p.coords)}, {"chart", p.chart_id}}; }

inline void to_json(json& j, const KinematicDecomposition& k) {
  j = json{{"theta", k.expansion},           {"accel", flat(k.acceleration)}, {"vorticity", flat(k.vorticity)},
           {"shear", flat(k.shear)},         {"point", flat(k.point.coords)}, {"frame_label", k.frame_label}};
}

inline void to_json(json& j, const SynchronizabilityClass& c) {
  j = json{{"class", to_string(c.value)},       {"max_d_alpha", c.max_d_alpha},
           {"max_alpha_wedge_d_alpha", c.max_alpha_wedge}, {"max_vorticity", c.max_vorticity},
           {"region", c.region},                 {"threshold", c.threshold},
           {"samples", c.d_alpha_per_sample.size()}};
}

inline void to_json(json& j, const PirfReport& r) {
  j = json{{"is_pirf", r.is_pirf},
           {"max_acceleration", r.max_acceleration},
           {"max_alpha_wedge_d_alpha", r.max_alpha_wedge},
           {"tolerance", r.tolerance},
           {"samples", r.samples}};
}

inline void to_json(json& j, const NormalChart& nc) {
  Mat4<double> e = tetrad_matrix(nc.tetrad);
  j = json{{"base_point", flat(nc.base_point.coords)},
           {"chart", nc.base_point.chart_id},
           {"tetrad", flat(e)},
           {"gamma", flat(nc.gamma_at_p0.gamma)},
           {"validity_radius", nc.validity_radius}};
}

inline void to_json(json& j, const ExperimentReport& r) {
  j = json{{"case", r.label},
           {"v1", r.v1},
           {"v2", r.v2},
           {"velocity", flat(r.velocity)},
           {"acceleration", flat(r.acceleration)},
           {"dt_ds", r.dt_ds},
           {"asymmetry", r.asymmetry}};
}

inline void to_json(json& j, const KinematicInvariants& k) {
  j = json{{"acceleration_sq", k.acceleration_sq},
           {"vorticity_sq", k.vorticity_sq},
           {"shear_sq", k.shear_sq},
           {"expansion", k.expansion}};
}

inline void to_json(json& j, const EquivalenceVerdict& v) {
  json deltas;
  for (std::size_t i = 0; i < v.deltas.size(); ++i) deltas[kKinematicParts[i]] = v.deltas[i];
  j = json{{"verdict", to_string(v.verdict)},
           {"dominant", v.dominant},
           {"deltas", deltas},
           {"strict", v.strict},
           {"strict_delta", v.strict_delta},
           {"tolerance", v.tolerance},
           {"first", v.first},
           {"second", v.second},
           {"first_invariants", v.first_invariants},
           {"second_invariants", v.second_invariants}};
}

inline void to_json(json& j, const GeodesicPath& p) {
  j = json{{"chart", p.metric_id},
           {"samples", p.samples.size()},
           {"steps", p.stats.steps},
           {"rejected", p.stats.rejected},
           {"max_error_estimate", p.stats.max_error_estimate},
           {"truncated", p.truncated},
           {"truncation_reason", p.truncation_reason}};
  if (!p.samples.empty()) {
    j["s_first"] = p.samples.front().s;
    j["s_last"] = p.samples.back().s;
    j["end_point"] = flat(p.samples.back().point.coords);
    j["end_velocity"] = flat(p.samples.back().velocity);
  }
}

inline void to_json(json& j, const PlliResult& r) {
  const double ratio = r.ratio_to_av2();
  j = json{{"a", r.a},
           {"v", r.v},
           {"u", r.u},
           {"point", flat(r.p.coords)},
           {"theta_L", r.theta_L.normalized},
           {"theta_Lprime", r.theta_Lprime.normalized},
           {"theta_L_raw", r.theta_L.raw},
           {"theta_Lprime_raw", r.theta_Lprime.raw},
           {"ratio_to_av2", std::isfinite(ratio) ? json(ratio) : json(nullptr)}};
}

}  // namespace framekin
