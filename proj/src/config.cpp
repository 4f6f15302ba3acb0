#include "dipolesim/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include <json.hpp>

#include "dipolesim/errors.hpp"

namespace dipolesim {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& message) { throw config_error(message); }

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed)
      if (item.key() == key) {
        known = true;
        break;
      }
    if (!known) fail("unknown key \"" + item.key() + "\" in " + where);
  }
}

double get_number(const json& v, const std::string& where) {
  if (!v.is_number()) fail(where + " must be a number");
  return v.get<double>();
}

int get_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) fail(where + " must be an integer");
  return v.get<int>();
}

bool get_bool(const json& v, const std::string& where) {
  if (!v.is_boolean()) fail(where + " must be a boolean");
  return v.get<bool>();
}

std::string get_string(const json& v, const std::string& where) {
  if (!v.is_string()) fail(where + " must be a string");
  return v.get<std::string>();
}

Vec3 get_vec3(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 3) fail(where + " must be an array of 3 numbers");
  return {get_number(v[0], where), get_number(v[1], where), get_number(v[2], where)};
}

cplx get_complex(const json& v, const std::string& where) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2)
    return {get_number(v[0], where), get_number(v[1], where)};
  fail(where + " components must be numbers or [re, im] pairs");
}

CVec3 get_cvec3(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 3) fail(where + " must be an array of 3 components");
  return {get_complex(v[0], where), get_complex(v[1], where), get_complex(v[2], where)};
}

void read_geometry(const json& j, GeometryConfig& g) {
  check_keys(j, "geometry",
             {"kind", "n", "n_second", "spacing", "axis", "orientation", "normal",
              "center_separation", "tilt_angle", "orientation_tilt_x"});
  if (j.contains("kind")) {
    const std::string kind = get_string(j["kind"], "geometry.kind");
    if (kind == "chain")
      g.kind = GeometryKind::chain;
    else if (kind == "ring")
      g.kind = GeometryKind::ring;
    else if (kind == "ring_pair")
      g.kind = GeometryKind::ring_pair;
    else
      fail("geometry.kind must be one of chain, ring, ring_pair");
  }
  if (j.contains("n")) g.n = get_int(j["n"], "geometry.n");
  if (j.contains("n_second")) g.n_second = get_int(j["n_second"], "geometry.n_second");
  if (j.contains("spacing")) g.spacing = get_number(j["spacing"], "geometry.spacing");
  if (j.contains("axis")) g.axis = get_vec3(j["axis"], "geometry.axis");
  if (j.contains("orientation"))
    g.orientation = get_vec3(j["orientation"], "geometry.orientation");
  if (j.contains("normal")) g.normal = get_vec3(j["normal"], "geometry.normal");
  if (j.contains("center_separation"))
    g.center_separation = get_number(j["center_separation"], "geometry.center_separation");
  if (j.contains("tilt_angle"))
    g.tilt_angle = get_number(j["tilt_angle"], "geometry.tilt_angle");
  if (j.contains("orientation_tilt_x"))
    g.orientation_tilt_x = get_number(j["orientation_tilt_x"], "geometry.orientation_tilt_x");
}

void read_drive(const json& j, DriveConfig& d) {
  check_keys(j, "drive", {"rabi", "detuning", "k_dir", "polarization", "pulse"});
  if (j.contains("rabi")) d.rabi = get_number(j["rabi"], "drive.rabi");
  if (j.contains("detuning")) {
    const json& v = j["detuning"];
    if (v.is_string()) {
      const std::string rule = v.get<std::string>();
      if (rule == "superradiant")
        d.rule = DetuningRule::superradiant;
      else if (rule == "subradiant")
        d.rule = DetuningRule::subradiant;
      else
        fail("drive.detuning must be a number, \"superradiant\", or \"subradiant\"");
    } else {
      d.rule = DetuningRule::fixed;
      d.detuning = get_number(v, "drive.detuning");
    }
  }
  if (j.contains("k_dir")) d.k_dir = get_vec3(j["k_dir"], "drive.k_dir");
  if (j.contains("polarization"))
    d.polarization = get_cvec3(j["polarization"], "drive.polarization");
  if (j.contains("pulse")) {
    const json& p = j["pulse"];
    check_keys(p, "drive.pulse", {"amplitude", "center", "width"});
    Pulse pulse;
    if (!p.contains("amplitude") || !p.contains("center") || !p.contains("width"))
      fail("drive.pulse requires amplitude, center, and width");
    pulse.amplitude = get_number(p["amplitude"], "drive.pulse.amplitude");
    pulse.center = get_number(p["center"], "drive.pulse.center");
    pulse.width = get_number(p["width"], "drive.pulse.width");
    d.pulse = pulse;
  }
}

void read_detector(const json& j, DetectorConfig& d) {
  check_keys(j, "detector",
             {"delta_phi", "r_far", "n_quad", "n_phi", "filtered", "filter_axis"});
  if (j.contains("delta_phi")) d.delta_phi = get_number(j["delta_phi"], "detector.delta_phi");
  if (j.contains("r_far")) d.r_far = get_number(j["r_far"], "detector.r_far");
  if (j.contains("n_quad")) d.n_quad = get_int(j["n_quad"], "detector.n_quad");
  if (j.contains("n_phi")) d.n_phi = get_int(j["n_phi"], "detector.n_phi");
  if (j.contains("filtered")) d.filtered = get_bool(j["filtered"], "detector.filtered");
  if (j.contains("filter_axis"))
    d.filter_axis = get_cvec3(j["filter_axis"], "detector.filter_axis");
}

void read_sweep(const json& j, std::optional<SweepConfig>& sweep) {
  check_keys(j, "sweep", {"variable", "values"});
  SweepConfig s;
  if (!j.contains("variable") || !j.contains("values"))
    fail("sweep requires variable and values");
  s.variable = get_string(j["variable"], "sweep.variable");
  const json& values = j["values"];
  if (!values.is_array() || values.empty()) fail("sweep.values must be a nonempty array");
  for (const json& v : values) s.values.push_back(get_number(v, "sweep.values"));
  sweep = std::move(s);
}

void read_disorder(const json& j, std::optional<DisorderConfig>& disorder) {
  check_keys(j, "disorder", {"epsilon", "n_realizations", "seed"});
  DisorderConfig d;
  if (!j.contains("epsilon")) fail("disorder requires epsilon");
  const json& eps = j["epsilon"];
  d.epsilons.clear();
  if (eps.is_array()) {
    if (eps.empty()) fail("disorder.epsilon array must be nonempty");
    for (const json& v : eps) d.epsilons.push_back(get_number(v, "disorder.epsilon"));
  } else {
    d.epsilons.push_back(get_number(eps, "disorder.epsilon"));
  }
  for (double e : d.epsilons)
    if (e < 0.0) fail("disorder.epsilon must be >= 0");
  if (j.contains("n_realizations"))
    d.n_realizations = get_int(j["n_realizations"], "disorder.n_realizations");
  if (d.n_realizations < 1) fail("disorder.n_realizations must be >= 1");
  if (!j.contains("seed")) fail("disorder requires a seed (reproducibility contract)");
  if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer())
    fail("disorder.seed must be an integer");
  d.seed = j["seed"].get<std::uint64_t>();
  disorder = std::move(d);
}

void read_solver(const json& j, SolverConfig& s) {
  check_keys(j, "solver", {"method", "tol", "max_time"});
  if (j.contains("method")) {
    s.method = get_string(j["method"], "solver.method");
    if (s.method != "auto" && s.method != "integration" && s.method != "null_space" &&
        s.method != "null-space" && s.method != "krylov")
      fail("solver.method must be auto, integration, null_space, or krylov");
  }
  if (j.contains("tol")) s.tol = get_number(j["tol"], "solver.tol");
  if (j.contains("max_time")) s.max_time = get_number(j["max_time"], "solver.max_time");
}

void read_time(const json& j, TimeGridConfig& t) {
  check_keys(j, "time", {"t_final", "n_samples"});
  if (j.contains("t_final")) t.t_final = get_number(j["t_final"], "time.t_final");
  if (j.contains("n_samples")) t.n_samples = get_int(j["n_samples"], "time.n_samples");
}

ScenarioConfig from_json(const json& root) {
  if (!root.is_object()) fail("config root must be a JSON object");
  check_keys(root, "config root",
             {"preset", "geometry", "drive", "n_max", "detector", "sweep", "disorder",
              "solver", "time", "dispersion_k_points", "threads"});
  if (!root.contains("preset")) fail("config requires a preset name");

  // Preset defaults first, explicit keys override.
  ScenarioConfig cfg = preset_config(get_string(root["preset"], "preset"));
  if (root.contains("geometry")) read_geometry(root["geometry"], cfg.geometry);
  if (root.contains("drive")) read_drive(root["drive"], cfg.drive);
  if (root.contains("n_max")) cfg.n_max = get_int(root["n_max"], "n_max");
  if (root.contains("detector")) read_detector(root["detector"], cfg.detector);
  if (root.contains("sweep")) read_sweep(root["sweep"], cfg.sweep);
  if (root.contains("disorder")) read_disorder(root["disorder"], cfg.disorder);
  if (root.contains("solver")) read_solver(root["solver"], cfg.solver);
  if (root.contains("time")) read_time(root["time"], cfg.time);
  if (root.contains("dispersion_k_points"))
    cfg.dispersion_k_points = get_int(root["dispersion_k_points"], "dispersion_k_points");
  if (root.contains("threads")) cfg.threads = get_int(root["threads"], "threads");

  if (cfg.n_max < 1) fail("n_max must be >= 1");
  if (cfg.geometry.n < 1) fail("geometry.n must be >= 1");
  if (cfg.geometry.spacing <= 0.0) fail("geometry.spacing must be > 0");
  if (cfg.detector.delta_phi <= 0.0) fail("detector.delta_phi must be > 0");
  if (cfg.detector.r_far <= 0.0) fail("detector.r_far must be > 0");
  if (cfg.detector.n_quad < 5 || cfg.detector.n_quad % 2 == 0)
    fail("detector.n_quad must be odd and >= 5");
  if (cfg.detector.n_phi < 8) fail("detector.n_phi must be >= 8");
  return cfg;
}

json value_to_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error&) {
    // Bare words double as strings so "--set drive.detuning=subradiant" works.
    return json(text);
  }
}

void apply_override(json& root, const std::string& spec) {
  const std::size_t eq = spec.find('=');
  if (eq == std::string::npos || eq == 0)
    fail("override must look like section.key=value: " + spec);
  const std::string path = spec.substr(0, eq);
  json value = value_to_json(spec.substr(eq + 1));

  json* node = &root;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = path.find('.', start);
    const std::string key = path.substr(start, dot - start);
    if (key.empty()) fail("override path has an empty segment: " + path);
    if (dot == std::string::npos) {
      (*node)[key] = std::move(value);
      return;
    }
    node = &(*node)[key];
    if (!node->is_object() && !node->is_null())
      fail("override path crosses a non-object: " + path);
    start = dot + 1;
  }
}

json cvec3_to_json(const CVec3& v) {
  const bool real = v.x.imag() == 0.0 && v.y.imag() == 0.0 && v.z.imag() == 0.0;
  json out = json::array();
  for (int i = 0; i < 3; ++i) {
    const cplx c = v[i];
    if (real)
      out.push_back(c.real());
    else
      out.push_back(json::array({c.real(), c.imag()}));
  }
  return out;
}

json vec3_to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

}  // namespace

ScenarioConfig parse_config_text(const std::string& text,
                                 const std::vector<std::string>& overrides) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("config is not valid JSON: ") + e.what());
  }
  for (const std::string& spec : overrides) apply_override(root, spec);
  return from_json(root);
}

ScenarioConfig parse_config_file(const std::string& path,
                                 const std::vector<std::string>& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_config_text(buffer.str(), overrides);
  } catch (const config_error& e) {
    fail(path + ": " + e.what());
  }
}

std::string serialize_config(const ScenarioConfig& cfg) {
  ordered_json root;
  root["preset"] = cfg.preset;

  ordered_json g;
  g["kind"] = cfg.geometry.kind == GeometryKind::chain
                  ? "chain"
                  : (cfg.geometry.kind == GeometryKind::ring ? "ring" : "ring_pair");
  g["n"] = cfg.geometry.n;
  g["n_second"] = cfg.geometry.n_second;
  g["spacing"] = cfg.geometry.spacing;
  g["axis"] = vec3_to_json(cfg.geometry.axis);
  g["orientation"] = vec3_to_json(cfg.geometry.orientation);
  g["normal"] = vec3_to_json(cfg.geometry.normal);
  g["center_separation"] = cfg.geometry.center_separation;
  g["tilt_angle"] = cfg.geometry.tilt_angle;
  g["orientation_tilt_x"] = cfg.geometry.orientation_tilt_x;
  root["geometry"] = std::move(g);

  ordered_json d;
  d["rabi"] = cfg.drive.rabi;
  switch (cfg.drive.rule) {
    case DetuningRule::fixed:
      d["detuning"] = cfg.drive.detuning;
      break;
    case DetuningRule::superradiant:
      d["detuning"] = "superradiant";
      break;
    case DetuningRule::subradiant:
      d["detuning"] = "subradiant";
      break;
  }
  d["k_dir"] = vec3_to_json(cfg.drive.k_dir);
  d["polarization"] = cvec3_to_json(cfg.drive.polarization);
  if (cfg.drive.pulse) {
    ordered_json p;
    p["amplitude"] = cfg.drive.pulse->amplitude;
    p["center"] = cfg.drive.pulse->center;
    p["width"] = cfg.drive.pulse->width;
    d["pulse"] = std::move(p);
  }
  root["drive"] = std::move(d);

  root["n_max"] = cfg.n_max;

  ordered_json det;
  det["delta_phi"] = cfg.detector.delta_phi;
  det["r_far"] = cfg.detector.r_far;
  det["n_quad"] = cfg.detector.n_quad;
  det["n_phi"] = cfg.detector.n_phi;
  det["filtered"] = cfg.detector.filtered;
  det["filter_axis"] = cvec3_to_json(cfg.detector.filter_axis);
  root["detector"] = std::move(det);

  if (cfg.sweep) {
    ordered_json s;
    s["variable"] = cfg.sweep->variable;
    s["values"] = cfg.sweep->values;
    root["sweep"] = std::move(s);
  }
  if (cfg.disorder) {
    ordered_json dis;
    dis["epsilon"] = cfg.disorder->epsilons;
    dis["n_realizations"] = cfg.disorder->n_realizations;
    dis["seed"] = cfg.disorder->seed;
    root["disorder"] = std::move(dis);
  }

  ordered_json s;
  s["method"] = cfg.solver.method;
  s["tol"] = cfg.solver.tol;
  s["max_time"] = cfg.solver.max_time;
  root["solver"] = std::move(s);

  ordered_json t;
  t["t_final"] = cfg.time.t_final;
  t["n_samples"] = cfg.time.n_samples;
  root["time"] = std::move(t);

  root["dispersion_k_points"] = cfg.dispersion_k_points;
  root["threads"] = cfg.threads;
  return root.dump(2) + "\n";
}

}  // namespace dipolesim
