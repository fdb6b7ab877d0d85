#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include <json.hpp>

#include "lgi/cli.hpp"
#include "lgi/models/moser_veselov.hpp"

namespace lgi::cli {

using nlohmann::json;

namespace {

const std::set<std::string> kTopKeys = {"model",  "parameters",  "initial_state", "steps",
                                        "solver", "diagnostics", "output"};

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError(where + ": " + what);
}

void only_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
  if (!obj.is_object()) fail(where, "expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) fail(where, "unknown key '" + key + "'");
  }
}

const json& required(const json& obj, const std::string& where, const std::string& key) {
  if (!obj.contains(key)) fail(where, "missing required key '" + key + "'");
  return obj.at(key);
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) fail(where, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(where, "expected a finite number");
  return d;
}

double positive(const json& v, const std::string& where) {
  const double d = number(v, where);
  if (!(d > 0.0)) fail(where, "must be positive");
  return d;
}

double get_number(const json& obj, const std::string& where, const std::string& key,
                  std::optional<double> fallback = std::nullopt) {
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    fail(where, "missing required key '" + key + "'");
  }
  return number(obj.at(key), where + "." + key);
}

double get_positive(const json& obj, const std::string& where, const std::string& key,
                    std::optional<double> fallback = std::nullopt) {
  if (!obj.contains(key) && fallback) return *fallback;
  return positive(required(obj, where, key), where + "." + key);
}

VecX vector(const json& v, const std::string& where, int size = -1) {
  if (!v.is_array()) fail(where, "expected an array of numbers");
  if (size >= 0 && static_cast<int>(v.size()) != size) {
    fail(where, "expected " + std::to_string(size) + " entries");
  }
  VecX out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = number(v[i], where + "[" + std::to_string(i) + "]");
  }
  return out;
}

Vec3 vec3(const json& obj, const std::string& where, const std::string& key,
          std::optional<Vec3> fallback = std::nullopt) {
  if (!obj.contains(key) && fallback) return *fallback;
  return vector(required(obj, where, key), where + "." + key, 3);
}

/// Inertia tensor: either the three principal moments or a 3x3 array.
Mat3 inertia(const json& obj, const std::string& where) {
  const std::string w = where + ".inertia";
  const json& v = required(obj, where, "inertia");
  if (!v.is_array()) fail(w, "expected 3 principal moments or a 3x3 array");
  Mat3 I;
  if (v.size() == 3 && v[0].is_number()) {
    I = Vec3(vector(v, w, 3)).asDiagonal();
  } else if (v.size() == 3) {
    for (int r = 0; r < 3; ++r) I.row(r) = vector(v[static_cast<std::size_t>(r)], w, 3).transpose();
  } else {
    fail(w, "expected 3 principal moments or a 3x3 array");
  }
  if (!I.isApprox(I.transpose(), 1e-12)) fail(w, "must be symmetric");
  Eigen::SelfAdjointEigenSolver<Mat3> es(I);
  if (!(es.eigenvalues().minCoeff() > 0.0)) fail(w, "must be positive definite");
  // The discrete rigid body needs Tr(I)/2 - I positive definite, i.e. the
  // principal moments satisfy the strict triangle inequality.
  Eigen::SelfAdjointEigenSolver<Mat3> es2(lagrangian_inertia(I));
  if (!(es2.eigenvalues().minCoeff() > 0.0)) {
    fail(w, "principal moments must satisfy the strict triangle inequality");
  }
  return I;
}

bool boolean(const json& obj, const std::string& where, const std::string& key, bool fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_boolean()) fail(where + "." + key, "expected true or false");
  return obj.at(key).get<bool>();
}

std::string string(const json& obj, const std::string& where, const std::string& key,
                   std::optional<std::string> fallback = std::nullopt) {
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    fail(where, "missing required key '" + key + "'");
  }
  if (!obj.at(key).is_string()) fail(where + "." + key, "expected a string");
  return obj.at(key).get<std::string>();
}

std::size_t count(const json& v, const std::string& where) {
  if (!v.is_number_integer()) fail(where, "expected a non-negative integer");
  if (v.get<long long>() < 0) fail(where, "must be >= 0");
  return static_cast<std::size_t>(v.get<long long>());
}

void parse_parameters(const json& p, ScenarioConfig& c) {
  const std::string w = "parameters";
  switch (c.model) {
    case ModelId::pair:
      only_keys(p, w, {"lagrangian", "mass", "stiffness", "h"});
      c.pair_lagrangian = string(p, w, "lagrangian", "harmonic_oscillator");
      if (c.pair_lagrangian != "harmonic_oscillator" && c.pair_lagrangian != "free_particle") {
        fail(w + ".lagrangian", "expected 'harmonic_oscillator' or 'free_particle'");
      }
      c.mass = get_positive(p, w, "mass", 1.0);
      c.stiffness = get_number(p, w, "stiffness", c.pair_lagrangian == "free_particle" ? 0.0 : 1.0);
      if (c.pair_lagrangian == "free_particle" && c.stiffness != 0.0) {
        fail(w + ".stiffness", "not a parameter of the free particle");
      }
      c.h = get_positive(p, w, "h");
      break;
    case ModelId::lie_group_so3:
    case ModelId::rigid_body_pair:
      only_keys(p, w, {"inertia", "h"});
      c.inertia = inertia(p, w);
      c.h = get_positive(p, w, "h");
      break;
    case ModelId::heavy_top: {
      only_keys(p, w, {"mass", "gravity", "length", "e", "inertia", "h"});
      c.mass = get_positive(p, w, "mass");
      c.gravity = get_number(p, w, "gravity", 9.81);
      c.length = get_positive(p, w, "length");
      c.e = vec3(p, w, "e", Vec3::UnitZ());
      if (std::abs(c.e.norm() - 1.0) > 1e-9) fail(w + ".e", "must be a unit vector");
      c.e.normalize();
      c.inertia = inertia(p, w);
      c.h = get_positive(p, w, "h");
      break;
    }
    case ModelId::beanie:
      only_keys(p, w, {"mass", "I1", "I2", "h", "potential_amplitude"});
      c.mass = get_positive(p, w, "mass");
      c.I1 = get_positive(p, w, "I1");
      c.I2 = get_positive(p, w, "I2");
      c.h = get_positive(p, w, "h");
      c.potential_amplitude = get_number(p, w, "potential_amplitude", 0.0);
      break;
  }
}

void parse_initial_state(const json& s, ScenarioConfig& c) {
  const std::string w = "initial_state";
  switch (c.model) {
    case ModelId::pair:
      only_keys(s, w, {"x", "y"});
      c.x0 = vector(required(s, w, "x"), w + ".x");
      c.x1 = vector(required(s, w, "y"), w + ".y", static_cast<int>(c.x0.size()));
      if (c.x0.size() == 0) fail(w + ".x", "must not be empty");
      break;
    case ModelId::lie_group_so3:
      only_keys(s, w, {"W"});
      c.w0 = vec3(s, w, "W");
      break;
    case ModelId::heavy_top:
      only_keys(s, w, {"gamma", "W"});
      c.gamma0 = vec3(s, w, "gamma");
      if (std::abs(c.gamma0.norm() - 1.0) > 1e-9) fail(w + ".gamma", "must be a unit vector");
      c.gamma0.normalize();
      c.w0 = vec3(s, w, "W");
      break;
    case ModelId::beanie:
      only_keys(s, w, {"psi0", "psi1", "omega"});
      c.psi0 = get_number(s, w, "psi0");
      c.psi1 = get_number(s, w, "psi1");
      c.omega = vec3(s, w, "omega");
      break;
    case ModelId::rigid_body_pair:
      only_keys(s, w, {"R", "W"});
      c.r0 = vec3(s, w, "R");
      c.w0 = vec3(s, w, "W");
      break;
  }
  if ((c.model == ModelId::lie_group_so3 || c.model == ModelId::heavy_top ||
       c.model == ModelId::rigid_body_pair) &&
      !(c.w0.norm() < M_PI)) {
    fail(w + ".W", "rotation angle must be below pi");
  }
}

void parse_solver(const json& s, ScenarioConfig& c) {
  const std::string w = "solver";
  only_keys(s, w, {"method", "max_iters", "residual_tol", "fd_step", "jacobian_step",
                   "jacobian_mode", "max_condition"});
  const std::string method = string(s, w, "method", "generic");
  if (method == "generic") {
    c.method = SolverMethod::generic;
  } else if (method == "closed_form") {
    c.method = SolverMethod::closed_form;
  } else {
    fail(w + ".method", "expected 'generic' or 'closed_form'");
  }
  NewtonConfig& n = c.newton;
  if (s.contains("max_iters")) {
    const std::size_t it = count(s.at("max_iters"), w + ".max_iters");
    if (it < 1) fail(w + ".max_iters", "must be >= 1");
    n.max_iters = static_cast<int>(it);
  }
  n.residual_tol = get_positive(s, w, "residual_tol", n.residual_tol);
  n.fd_step = get_positive(s, w, "fd_step", n.fd_step);
  n.jacobian_step = get_positive(s, w, "jacobian_step", n.jacobian_step);
  n.max_condition = get_positive(s, w, "max_condition", n.max_condition);
  const std::string mode = string(s, w, "jacobian_mode", "finite_difference");
  if (mode == "finite_difference") {
    n.jacobian_mode = JacobianMode::finite_difference;
  } else if (mode == "model_analytic") {
    n.jacobian_mode = JacobianMode::model_analytic;
  } else {
    fail(w + ".jacobian_mode", "expected 'finite_difference' or 'model_analytic'");
  }
}

void parse_diagnostics(const json& d, ScenarioConfig& c) {
  const std::string w = "diagnostics";
  only_keys(d, w, {"noether", "casimir", "symplectic_every_k", "reduction"});
  c.diagnostics.noether = boolean(d, w, "noether", true);
  c.diagnostics.casimir = boolean(d, w, "casimir", true);
  if (d.contains("symplectic_every_k")) {
    c.diagnostics.symplectic_every_k =
        static_cast<int>(count(d.at("symplectic_every_k"), w + ".symplectic_every_k"));
  }
  c.diagnostics.reduction = boolean(d, w, "reduction", false);
  if (c.diagnostics.reduction && c.model != ModelId::rigid_body_pair) {
    fail(w + ".reduction", "only available for rigid_body_pair");
  }
}

std::filesystem::path relative_path(const json& o, const std::string& where, const std::string& key,
                                    const std::filesystem::path& fallback) {
  const std::filesystem::path p = string(o, where, key, fallback.string());
  if (p.empty() || p.is_absolute() || p.filename().empty()) {
    fail(where + "." + key, "expected a relative file name");
  }
  return p;
}

void parse_output(const json& o, ScenarioConfig& c) {
  const std::string w = "output";
  only_keys(o, w, {"directory", "trajectory", "diagnostics", "summary"});
  c.output.directory = string(o, w, "directory", c.output.directory.string());
  c.output.trajectory = relative_path(o, w, "trajectory", c.output.trajectory);
  c.output.diagnostics = relative_path(o, w, "diagnostics", c.output.diagnostics);
  c.output.summary = relative_path(o, w, "summary", c.output.summary);
  if (c.output.trajectory == c.output.diagnostics || c.output.trajectory == c.output.summary ||
      c.output.diagnostics == c.output.summary) {
    fail(w, "output files must be distinct");
  }
}

}  // namespace

std::string to_string(ModelId id) {
  switch (id) {
    case ModelId::pair: return "pair";
    case ModelId::lie_group_so3: return "lie_group_so3";
    case ModelId::heavy_top: return "heavy_top";
    case ModelId::beanie: return "beanie";
    case ModelId::rigid_body_pair: return "rigid_body_pair";
  }
  return "unknown";
}

ModelId parse_model_id(const std::string& s) {
  for (ModelId id : {ModelId::pair, ModelId::lie_group_so3, ModelId::heavy_top, ModelId::beanie,
                     ModelId::rigid_body_pair}) {
    if (to_string(id) == s) return id;
  }
  fail("model", "unknown model id '" + s + "'");
}

ScenarioConfig parse_scenario(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  only_keys(doc, "config", kTopKeys);

  ScenarioConfig c;
  c.model = parse_model_id(string(doc, "config", "model"));
  parse_parameters(required(doc, "config", "parameters"), c);
  parse_initial_state(required(doc, "config", "initial_state"), c);
  c.steps = count(required(doc, "config", "steps"), "steps");
  if (doc.contains("solver")) parse_solver(doc.at("solver"), c);
  if (doc.contains("diagnostics")) parse_diagnostics(doc.at("diagnostics"), c);
  if (doc.contains("output")) parse_output(doc.at("output"), c);
  return c;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

}  // namespace lgi::cli
