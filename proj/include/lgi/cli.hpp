#pragma once

// Configuration-driven scenario runner behind the `lgi` tool. A scenario is a
// JSON document naming a model, its parameters, the initial element, a step
// count, solver overrides and the diagnostics to record; running it produces a
// trajectory CSV, a diagnostics CSV and a summary JSON. Everything written is
// a pure function of the config, so reruns are byte-identical.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lgi/diagnostics.hpp"
#include "lgi/error.hpp"
#include "lgi/geom.hpp"
#include "lgi/solver.hpp"

namespace lgi::cli {

/// Malformed or schema-invalid scenario; maps to exit code 2.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// Output could not be written; maps to exit code 4.
class IoError : public Error {
public:
  using Error::Error;
};

enum class ExitCode : int { ok = 0, usage = 1, config = 2, solver = 3, io = 4 };

enum class ModelId { pair, lie_group_so3, heavy_top, beanie, rigid_body_pair };

std::string to_string(ModelId id);
ModelId parse_model_id(const std::string& s);

enum class SolverMethod {
  /// Newton on the DEL equations through the groupoid interface.
  generic,
  /// The model's own closed-form or specialized step.
  closed_form,
};

struct DiagnosticsToggles {
  bool noether = true;
  bool casimir = true;
  /// Symplectic residual at every k-th element; 0 disables.
  int symplectic_every_k = 0;
  /// Compare against the reduced system (rigid_body_pair only).
  bool reduction = false;
};

struct OutputPaths {
  std::filesystem::path directory = ".";
  std::filesystem::path trajectory = "trajectory.csv";
  std::filesystem::path diagnostics = "diagnostics.csv";
  std::filesystem::path summary = "summary.json";
};

struct ScenarioConfig {
  ModelId model = ModelId::pair;

  // pair
  std::string pair_lagrangian = "harmonic_oscillator";
  double stiffness = 1.0;
  VecX x0;
  VecX x1;

  // rigid bodies and heavy top
  Mat3 inertia = Mat3::Identity();
  double gravity = 9.81;
  double length = 1.0;
  Vec3 e = Vec3::UnitZ();
  Vec3 gamma0 = Vec3::UnitZ();
  /// Rotation vector of the reduced element W_0.
  Vec3 w0 = Vec3::Zero();
  /// Rotation vector of R_0 (rigid_body_pair).
  Vec3 r0 = Vec3::Zero();

  // beanie
  double I1 = 1.0;
  double I2 = 1.0;
  double potential_amplitude = 0.0;
  double psi0 = 0.0;
  double psi1 = 0.0;
  Vec3 omega = Vec3::Zero();

  // shared
  double mass = 1.0;
  double h = 0.1;
  std::size_t steps = 0;
  SolverMethod method = SolverMethod::generic;
  NewtonConfig newton;
  DiagnosticsToggles diagnostics;
  OutputPaths output;
};

/// Parses a scenario from JSON text. Unknown keys, missing required fields,
/// wrong types and out-of-range values raise ConfigError.
ScenarioConfig parse_scenario(const std::string& json_text);
ScenarioConfig load_scenario(const std::filesystem::path& path);

struct ScenarioResult {
  std::vector<std::string> chart_names;
  /// charts[k] = chart coordinates of g_k.
  std::vector<VecX> charts;
  /// DEL residual norm of (g_{k-1}, g_k); 0 at k = 0.
  std::vector<double> del_residual;
  /// Newton iterations that produced g_k; 0 at k = 0 and for closed-form steps.
  std::vector<int> iterations;
  ConservationReport conservation;
  /// (k, residual) for the sampled elements.
  std::vector<std::pair<std::size_t, double>> symplectic;
  std::optional<ReductionReport> reduction;
  /// 1-based index of the step that failed, if any; the arrays above then
  /// hold the elements computed before it.
  std::optional<std::size_t> failed_step;
  std::string failure;
};

ScenarioResult run_scenario(const ScenarioConfig& cfg);

/// Writes the trajectory CSV, diagnostics CSV and summary JSON. Throws IoError.
void write_outputs(const ScenarioConfig& cfg, const ScenarioResult& result);

struct ComparisonResult {
  std::vector<double> discrepancy;
  double max_discrepancy = 0.0;
};

/// Per-step |chart(P(a_k)) - chart(b_k)|_inf for the projections
///   identity : A and B are the same model,
///   phi_l    : A is rigid_body_pair, B is lie_group_so3, P(R, S) = R^T S.
/// Throws ConfigError for unknown or inapplicable projections and for
/// trajectories of different length.
ComparisonResult compare_results(const ScenarioConfig& a, const ScenarioResult& ra,
                                 const ScenarioConfig& b, const ScenarioResult& rb,
                                 const std::string& projection);

/// `run` subcommand. Diagnostic messages go to err.
int run_command(const std::filesystem::path& config, const std::optional<std::filesystem::path>& out,
                std::ostream& err);

/// `compare` subcommand: writes discrepancy.csv and compare_summary.json.
int compare_command(const std::filesystem::path& config_a, const std::filesystem::path& config_b,
                    const std::string& projection,
                    const std::optional<std::filesystem::path>& out, std::ostream& err);

}  // namespace lgi::cli
