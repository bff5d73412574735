// framekin: scenario runner. One scenario per invocation, JSON report (or
// CSV trajectory for `geodesic`) written once at the end.
//
// Exit codes: 0 success, 2 invalid input, 3 numeric failure.

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "framekin/framekin.hpp"
#include "framekin/serialize.hpp"

using namespace framekin;
using nlohmann::json;

namespace {

constexpr const char* kToolVersion = "0.1.0";

enum class Kind { Number, Integer, Text, Point, Flag };

struct Key {
  const char* name;
  Kind kind;
  json fallback;
  const char* help;
};

// Keys shared by every scenario.
const std::vector<Key> kGlobalKeys = {
    {"out", Kind::Text, nullptr, "output path (stdout when absent)"},
    {"format", Kind::Text, "json", "json or csv"},
    {"tol", Kind::Number, nullptr, "tolerance for pass/fail style decisions"},
};

const Key kModel{"model", Kind::Text, "friedmann", "minkowski or friedmann"};
const Key kFrame{"frame", Kind::Text, "V", "inertial, boosted, rotating (minkowski); V, Z, L, Lprime (friedmann)"};
const Key kFrame2{"frame2", Kind::Text, "Z", "second frame, same names as --frame"};
const Key kA{"a", Kind::Number, 1e-3, "expansion parameter in R(t) = 1 + a t"};
const Key kU{"u", Kind::Number, nullptr, "boost parameter of Z (exclusive with v)"};
const Key kV{"v", Kind::Number, nullptr, "metric velocity of Z relative to V (exclusive with u)"};
const Key kOmega{"omega", Kind::Number, 0.1, "angular velocity of the rotating frame"};
const Key kRadius{"radius-cap", Kind::Number, 5.0, "cylinder radius of the rotating frame"};
const Key kBoost{"boost", Kind::Number, 0.5, "velocity of the boosted Minkowski frame"};
const Key kPoint{"point", Kind::Point, json::array({0.0, 0.0, 0.0, 0.0}), "t,x1,x2,x3"};
const Key kHalfWidth{"half-width", Kind::Point, json::array({0.5, 0.5, 0.5, 0.5}), "sample box half widths"};
const Key kGrid{"grid", Kind::Integer, 3, "samples per axis"};
const Key kSmax{"smax", Kind::Number, 10.0, "proper-time span"};
const Key kStep{"step", Kind::Number, 1e-3, "integrator step (fixed for rk4, initial for dp45)"};
const Key kMethod{"method", Kind::Text, "rk4", "rk4 or dp45"};
const Key kVProbe{"v-probe", Kind::Number, 0.01, "coordinate speed of the probe particles"};
const Key kRadiusValid{"validity-radius", Kind::Number, 0.05, "normal-chart / tube radius"};
const Key kHalfSpan{"half-span", Kind::Number, 0.2, "geodesic extent on either side of p"};
const Key kStrict{"strict", Kind::Flag, false, "compare full covariant derivatives"};

const std::map<std::string, std::vector<Key>> kScenarios = {
    {"decompose", {kModel, kFrame, kA, kU, kV, kOmega, kRadius, kBoost, kPoint}},
    {"classify", {kModel, kFrame, kA, kU, kV, kOmega, kRadius, kBoost, kPoint, kHalfWidth, kGrid}},
    {"pirf-check", {kModel, kFrame, kA, kU, kV, kOmega, kRadius, kBoost, kPoint, kHalfWidth, kGrid}},
    {"geodesic", {kA, kU, kV, kSmax, kStep, kMethod}},
    {"experiment", {kA, kU, kV, kVProbe}},
    {"normal-chart", {kA, kU, kV, kFrame, kPoint, kRadiusValid}},
    {"plli", {kA, kV, kRadiusValid, kHalfSpan, kStep}},
    {"equivalence", {kModel, kFrame, kFrame2, kA, kU, kV, kOmega, kRadius, kBoost, kPoint, kStrict, kRadiusValid,
                     kHalfSpan}},
};

struct InputError : ValidationError {
  using ValidationError::ValidationError;
};

json convert(const Key& k, const json& v) {
  auto bad = [&](const char* what) { return InputError(std::string("key '") + k.name + "' must be " + what); };
  switch (k.kind) {
    case Kind::Number:
      if (!v.is_number()) throw bad("a number");
      return v.get<double>();
    case Kind::Integer:
      if (!v.is_number_integer()) throw bad("an integer");
      return v;
    case Kind::Text:
      if (!v.is_string()) throw bad("a string");
      return v;
    case Kind::Flag:
      if (!v.is_boolean()) throw bad("a boolean");
      return v;
    case Kind::Point:
      if (!v.is_array() || v.size() != 4) throw bad("an array of four numbers");
      for (const auto& c : v)
        if (!c.is_number()) throw bad("an array of four numbers");
      return v;
  }
  return v;
}

json parse_flag(const Key& k, const std::string& raw) {
  try {
    switch (k.kind) {
      case Kind::Number: {
        std::size_t used = 0;
        const double d = std::stod(raw, &used);
        if (used != raw.size()) break;
        return d;
      }
      case Kind::Integer: {
        std::size_t used = 0;
        const long long i = std::stoll(raw, &used);
        if (used != raw.size()) break;
        return i;
      }
      case Kind::Text:
        return raw;
      case Kind::Flag:
        return true;
      case Kind::Point: {
        json arr = json::array();
        std::stringstream ss(raw);
        std::string part;
        while (std::getline(ss, part, ',')) arr.push_back(std::stod(part));
        return convert(k, arr);
      }
    }
  } catch (const InputError&) {
    throw;
  } catch (const std::exception&) {
  }
  throw InputError(std::string("cannot parse value '") + raw + "' for --" + k.name);
}

Vec4<double> point_of(const json& v) { return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>(), v[3].get<double>()}; }

/// u from the parameters, accepting either u or v.
double boost_parameter(const json& p) {
  const bool has_u = !p["u"].is_null();
  const bool has_v = !p["v"].is_null();
  if (has_u && has_v) throw InputError("give either u or v, not both");
  if (has_v) return u_from_velocity(p["v"].get<double>());
  if (has_u) return p["u"].get<double>();
  return 0.1005;
}

struct FrameSetup {
  MetricField metric;
  FrameField frame;
  std::optional<FriedmannModel> model;
  std::optional<PlliResult> plli;
};

FrameField frame_by_name(const json& p, const std::string& name, FrameSetup& s) {
  const std::string model = p["model"];
  if (model == "minkowski") {
    if (name == "inertial") return inertial_minkowski_frame(s.metric);
    if (name == "boosted") return boosted_minkowski_frame(s.metric, p["boost"].get<double>());
    if (name == "rotating") return rotating_minkowski_frame(s.metric, p["omega"].get<double>(), p["radius-cap"].get<double>());
    throw InputError("unknown minkowski frame '" + name + "' (inertial, boosted, rotating)");
  }
  if (name == "V") return s.model->frame_V;
  if (name == "Z") return s.model->frame_Z;
  if (name == "L" || name == "Lprime") {
    if (!s.plli) {
      PlliOptions o;
      if (p.contains("validity-radius")) o.validity_radius = p["validity-radius"].get<double>();
      if (p.contains("half-span")) o.half_span = p["half-span"].get<double>();
      s.plli = plli_expansion_pair(p["a"].get<double>(), s.model->v, o);
    }
    return name == "L" ? s.plli->L.frame : s.plli->Lprime.frame;
  }
  throw InputError("unknown friedmann frame '" + name + "' (V, Z, L, Lprime)");
}

FrameSetup setup(const json& p) {
  FrameSetup s;
  const std::string model = p["model"];
  if (model == "minkowski") {
    s.metric = make_minkowski();
  } else if (model == "friedmann") {
    s.model = make_friedmann(p["a"].get<double>(), boost_parameter(p));
    s.metric = s.model->metric;
  } else {
    throw InputError("unknown model '" + model + "' (minkowski, friedmann)");
  }
  s.frame = frame_by_name(p, p["frame"], s);
  return s;
}

std::vector<Vec4<double>> samples_of(const json& p) {
  const long long n = p["grid"].get<long long>();
  if (n < 1 || n > 12) throw InputError("grid must lie in [1, 12]");
  return sample_grid(point_of(p["point"]), point_of(p["half-width"]), static_cast<int>(n));
}

double tol_or(const json& p, double fallback) {
  if (p["tol"].is_null()) return fallback;
  const double t = p["tol"].get<double>();
  if (!(t > 0.0)) throw InputError("tol must be positive");
  return t;
}

struct Output {
  json result;
  json tolerances = json::object();
  std::optional<std::string> csv;
};

Output run_scenario(const std::string& name, const json& p) {
  Output out;
  if (name == "decompose") {
    FrameSetup s = setup(p);
    const ChartPoint cp{point_of(p["point"]), s.metric.chart_id()};
    const KinematicDecomposition k = kinematic_decompose(s.metric, s.frame, cp);
    out.result = k;
    out.result["invariants"] = invariants_of(k, inverse_metric(s.metric, cp));
  } else if (name == "classify") {
    FrameSetup s = setup(p);
    const double tol = tol_or(p, 1e-8);
    out.result = classify_synchronizability(s.metric, s.frame, samples_of(p), tol);
    out.tolerances["threshold"] = tol;
  } else if (name == "pirf-check") {
    FrameSetup s = setup(p);
    const double tol = tol_or(p, 1e-8);
    out.result = is_pirf(s.metric, s.frame, samples_of(p), tol);
    out.tolerances["pirf"] = tol;
  } else if (name == "geodesic") {
    const double u = boost_parameter(p);
    const FriedmannModel m = make_friedmann(p["a"].get<double>(), u);
    StepControl c;
    const std::string method = p["method"];
    if (method == "rk4") {
      c.method = StepControl::Method::RK4;
    } else if (method == "dp45") {
      c.method = StepControl::Method::DP45;
    } else {
      throw InputError("method must be rk4 or dp45");
    }
    c.step = p["step"].get<double>();
    c.tolerance = tol_or(p, c.tolerance);
    const GeodesicPath path = integrate_geodesic(m.metric, ChartPoint{{0, 0, 0, 0}, kFriedmannChart},
                                                 {std::sqrt(1.0 + u * u), u, 0.0, 0.0}, p["smax"].get<double>(), c);
    out.result = path;
    out.tolerances["local_error"] = c.tolerance;
    out.tolerances["step"] = c.step;
    out.csv = path_to_csv(path);
  } else if (name == "experiment") {
    const ExperimentResult r = free_particle_experiment(p["a"].get<double>(), boost_parameter(p), p["v-probe"].get<double>());
    out.result = json{{"case_a", r.case_a}, {"case_b", r.case_b}, {"asymmetry", r.case_a.asymmetry}};
  } else if (name == "normal-chart") {
    const FriedmannModel m = make_friedmann(p["a"].get<double>(), boost_parameter(p));
    const ChartPoint p0{point_of(p["point"]), kFriedmannChart};
    const std::string frame = p["frame"];
    if (frame != "V" && frame != "Z") throw InputError("normal-chart frame must be V or Z");
    const FrameField& f = frame == "V" ? m.frame_V : m.frame_Z;
    const Tetrad e = tetrad_from_velocity(eval_metric(m.metric, p0), f.components(p0.coords));
    const NormalChart nc = build_normal_chart(m.metric, p0, e, p["validity-radius"].get<double>());
    out.result = nc;
  } else if (name == "plli") {
    if (p["v"].is_null()) throw InputError("plli needs v");
    PlliOptions o;
    o.validity_radius = p["validity-radius"].get<double>();
    o.half_span = p["half-span"].get<double>();
    o.step = p["step"].get<double>();
    out.result = plli_expansion_pair(p["a"].get<double>(), p["v"].get<double>(), o);
  } else if (name == "equivalence") {
    FrameSetup s = setup(p);
    const FrameField second = frame_by_name(p, p["frame2"], s);
    const ChartPoint cp{point_of(p["point"]), s.metric.chart_id()};
    const double tol = tol_or(p, 1e-7);
    out.result = equivalence_verdict(s.metric, s.frame, second, cp, tol, p["strict"].get<bool>());
    out.tolerances["equivalence"] = tol;
  }
  return out;
}

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file '" + path + "'");
  try {
    json j = json::parse(in);
    if (!j.is_object()) throw InputError("config file must hold a JSON object");
    return j;
  } catch (const json::parse_error& e) {
    throw InputError(std::string("config file is not valid JSON: ") + e.what());
  }
}

void write_output(const std::optional<std::string>& path, const std::string& text) {
  if (!path) {
    std::cout << text;
    return;
  }
  std::ofstream out(*path);
  if (!out) throw InputError("cannot write '" + *path + "'");
  out << text;
}

void configure_logging() {
  auto logger = spdlog::stderr_color_mt("framekin");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("FRAMEKIN_LOG")) spdlog::set_level(spdlog::level::from_str(env));
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();
  CLI::App app{"framekin: reference frames in Lorentzian spacetimes"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file; flags override its keys");

  std::map<std::string, std::string> raw;
  std::map<std::string, CLI::Option*> given;
  std::map<std::string, bool> flags;
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, keys] : kScenarios) {
    CLI::App* sub = app.add_subcommand(name);
    subs[name] = sub;
    std::vector<Key> all = kGlobalKeys;
    all.insert(all.end(), keys.begin(), keys.end());
    for (const Key& k : all) {
      const std::string id = name + "/" + k.name;
      if (k.kind == Kind::Flag) {
        given[id] = sub->add_flag(std::string("--") + k.name, flags[id], k.help);
      } else {
        given[id] = sub->add_option(std::string("--") + k.name, raw[id], k.help);
      }
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << "scenarios:";
    for (const auto& kv : kScenarios) std::cerr << ' ' << kv.first;
    std::cerr << '\n';
    return 2;
  }

  std::string scenario;
  for (const auto& [name, sub] : subs)
    if (sub->parsed()) scenario = name;

  const auto t0 = std::chrono::steady_clock::now();
  try {
    std::vector<Key> keys = kGlobalKeys;
    keys.insert(keys.end(), kScenarios.at(scenario).begin(), kScenarios.at(scenario).end());
    json params = json::object();
    for (const Key& k : keys) params[k.name] = k.fallback;
    if (!config_path.empty()) {
      json cfg = load_config(config_path);
      if (cfg.contains("scenario") && cfg["scenario"] != scenario)
        throw InputError("config is for scenario '" + cfg["scenario"].dump() + "', not '" + scenario + "'");
      cfg.erase("scenario");
      for (auto it = cfg.begin(); it != cfg.end(); ++it) {
        auto k = std::find_if(keys.begin(), keys.end(), [&](const Key& x) { return it.key() == x.name; });
        if (k == keys.end()) throw InputError("unknown config key '" + it.key() + "' for scenario " + scenario);
        params[k->name] = convert(*k, it.value());
      }
    }
    for (const Key& k : keys) {
      const std::string id = scenario + "/" + k.name;
      if (given[id]->count() == 0) continue;
      params[k.name] = k.kind == Kind::Flag ? json(flags[id]) : parse_flag(k, raw[id]);
    }
    const std::string format = params["format"];
    if (format != "json" && format != "csv") throw InputError("format must be json or csv");
    if (format == "csv" && scenario != "geodesic") throw InputError("csv output is only available for geodesic");
    spdlog::info("running {} with {}", scenario, params.dump());

    const Output out = run_scenario(scenario, params);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const std::optional<std::string> path =
        params["out"].is_null() ? std::nullopt : std::optional<std::string>(params["out"].get<std::string>());
    if (format == "csv") {
      write_output(path, *out.csv);
    } else {
      json report{{"scenario", scenario}, {"input", params},       {"result", out.result},
                  {"tool_version", kToolVersion}, {"wall_time", wall}, {"tolerances", out.tolerances}};
      write_output(path, report.dump(2) + "\n");
    }
    spdlog::info("{} finished in {:.3f} s", scenario, wall);
    return 0;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return 3;
  }
}
