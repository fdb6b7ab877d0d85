#include <algorithm>
#include <fstream>
#include <future>
#include <iomanip>
#include <locale>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "lgi/cli.hpp"
#include "lgi/models/beanie.hpp"
#include "lgi/models/heavy_top.hpp"
#include "lgi/models/lie_group_so3.hpp"
#include "lgi/models/moser_veselov.hpp"
#include "lgi/models/pair.hpp"
#include "lgi/models/rotation_pair.hpp"

namespace lgi::cli {

using nlohmann::json;

namespace {

template <class Element>
using Quantity = std::pair<std::string, std::function<double(const Element&)>>;

template <LieGroupoid G>
struct Model {
  using Element = typename G::Element;
  G groupoid;
  DiscreteLagrangian<Element> lagrangian;
  Element g0;
  std::vector<std::string> chart_names;
  /// Closed-form successor; empty when the model has none.
  std::function<Element(const Element&)> closed_form;
  std::vector<Quantity<Element>> noether;
  std::vector<Quantity<Element>> casimir;
};

std::vector<std::string> matrix_names(const std::string& sym) {
  std::vector<std::string> out;
  for (int c = 1; c <= 3; ++c) {
    for (int r = 1; r <= 3; ++r) out.push_back(sym + std::to_string(r) + std::to_string(c));
  }
  return out;
}

std::vector<std::string> indexed(const std::string& sym, int n, int first = 1) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back(sym + std::to_string(i + first));
  return out;
}

template <class T>
void append(std::vector<T>& a, const std::vector<T>& b) {
  a.insert(a.end(), b.begin(), b.end());
}

/// Moser-Veselov residuals are momenta, the DEL residual is momentum / h.
MoserVeselovOptions mv_options(const ScenarioConfig& c) {
  MoserVeselovOptions o;
  o.max_iters = c.newton.max_iters;
  o.tol = c.newton.residual_tol * c.h;
  return o;
}

template <LieGroupoid G>
void simulate(const Model<G>& m, const ScenarioConfig& c, ScenarioResult& out) {
  using Element = typename G::Element;
  const G& gr = m.groupoid;
  const auto& L = m.lagrangian;
  if (c.method == SolverMethod::closed_form && !m.closed_form) {
    throw ConfigError("solver.method: no closed-form step for this model");
  }

  const CalculusConfig calc = c.newton.calculus();
  std::vector<Element> elements{m.g0};
  out.chart_names = m.chart_names;
  out.charts.push_back(gr.to_chart(m.g0));
  out.del_residual.push_back(0.0);
  out.iterations.push_back(0);

  const auto step = [&](const Element& g) -> StepResult<Element> {
    if (c.method == SolverMethod::closed_form) return {m.closed_form(g), {}};
    return evolve_step(gr, L, g, default_guess(gr, g), c.newton);
  };

  for (std::size_t k = 0; k < c.steps; ++k) {
    const Element& g = elements.back();
    try {
      auto r = step(g);
      const double res =
          del_residual(gr, L, g, r.element, calc).coords.template lpNorm<Eigen::Infinity>();
      out.charts.push_back(gr.to_chart(r.element));
      out.del_residual.push_back(res);
      out.iterations.push_back(r.report.iterations);
      elements.push_back(std::move(r.element));
    } catch (const Error& e) {
      out.failed_step = k + 1;
      out.failure = e.what();
      break;
    }
  }

  std::vector<Quantity<Element>> quantities;
  if (c.diagnostics.noether) append(quantities, m.noether);
  if (c.diagnostics.casimir) append(quantities, m.casimir);
  out.conservation = track_conserved(elements, quantities);

  if (c.diagnostics.symplectic_every_k > 0 && !out.failed_step) {
    const std::function<Element(const Element&)> xi = [&](const Element& g) {
      return step(g).element;
    };
    SymplecticConfig sc;
    sc.calculus = calc;
    for (std::size_t k = 0; k < elements.size();
         k += static_cast<std::size_t>(c.diagnostics.symplectic_every_k)) {
      try {
        out.symplectic.emplace_back(k, symplectic_residual(gr, L, elements[k], xi, sc));
      } catch (const Error& e) {
        out.failed_step = k + 1;
        out.failure = std::string("symplectic check: ") + e.what();
        break;
      }
    }
  }
}

Model<PairGroupoid> pair_model(const ScenarioConfig& c) {
  const CalculusConfig calc = c.newton.calculus();
  const int d = static_cast<int>(c.x0.size());
  const bool free = c.pair_lagrangian == "free_particle";
  Model<PairGroupoid> m{PairGroupoid(d),
                        free ? free_particle_lagrangian(c.mass, c.h)
                             : harmonic_oscillator_lagrangian(c.mass, c.stiffness, c.h),
                        {c.x0, c.x1},
                        indexed("x", d, 0),
                        {},
                        {},
                        {}};
  append(m.chart_names, indexed("y", d, 0));
  // The DEL equations are linear: solve for z given (x, y).
  const double a = c.mass / c.h;
  const double b = c.h * c.stiffness / 4.0;
  m.closed_form = [a, b](const PairGroupoid::Element& g) -> PairGroupoid::Element {
    return {g.y, (a * (2.0 * g.y - g.x) - b * (g.x + 2.0 * g.y)) / (a + b)};
  };
  if (free) {
    const PairGroupoid gr(d);
    const auto L = m.lagrangian;
    for (int i = 0; i < d; ++i) {
      const NoetherSymmetry<VecX> X{[d, i](const VecX&) { return VecX(VecX::Unit(d, i)); }, {}};
      m.noether.emplace_back("momentum" + std::to_string(i), [gr, L, X, calc](const auto& g) {
        return noether_constant(gr, L, X, g, calc);
      });
    }
  }
  return m;
}

Model<LieGroupSO3> so3_model(const ScenarioConfig& c) {
  const Mat3 II = lagrangian_inertia(c.inertia);
  const auto mv = mv_options(c);
  Model<LieGroupSO3> m{LieGroupSO3{},
                       free_rigid_body_lagrangian(c.inertia, c.h),
                       exp_so3(c.w0),
                       matrix_names("W"),
                       [II, mv](const Rotation& W) { return rigid_body_step(W, II, mv); },
                       {},
                       {}};
  m.casimir.emplace_back("pi_norm", [II](const Rotation& W) { return body_momentum(W, II).norm(); });
  return m;
}

Model<ActionGroupoidHeavyTop> heavy_top_model(const ScenarioConfig& c) {
  const CalculusConfig calc = c.newton.calculus();
  HeavyTopParams p;
  p.mass = c.mass;
  p.gravity = c.gravity;
  p.length = c.length;
  p.e = c.e;
  p.inertia = c.inertia;
  p.h = c.h;
  const auto mv = mv_options(c);
  using E = ActionGroupoidHeavyTop::Element;
  Model<ActionGroupoidHeavyTop> m{ActionGroupoidHeavyTop{},
                                  heavy_top_lagrangian(p),
                                  {c.gamma0, exp_so3(c.w0)},
                                  indexed("gamma", 3),
                                  [p, mv](const E& g) -> E {
                                    const auto s =
                                        heavy_top_step(make_heavy_top_state(g.gamma, g.W, p), p, mv);
                                    return {s.gamma, s.W};
                                  },
                                  {},
                                  {}};
  append(m.chart_names, matrix_names("W"));
  // Rotations about the vertical: X(Gamma) = Gamma in body coordinates.
  const NoetherSymmetry<Vec3> X{[](const Vec3& gamma) { return VecX(gamma); }, {}};
  const ActionGroupoidHeavyTop gr;
  const auto L = m.lagrangian;
  m.noether.emplace_back("noether",
                         [gr, L, X, calc](const E& g) { return noether_constant(gr, L, X, g, calc); });
  m.casimir.emplace_back("gamma_norm", [](const E& g) { return g.gamma.norm(); });
  return m;
}

Model<BeanieGroupoid> beanie_model(const ScenarioConfig& c) {
  BeanieParams p;
  p.mass = c.mass;
  p.I1 = c.I1;
  p.I2 = c.I2;
  p.h = c.h;
  p.potential = cosine_potential(c.potential_amplitude);
  using E = BeanieGroupoid::Element;
  Model<BeanieGroupoid> m{
      BeanieGroupoid(p.coupling()),
      beanie_lagrangian(p),
      BeanieGroupoid::from_velocities(c.psi0, c.psi1, c.omega(0), c.omega(1), c.omega(2)),
      {"psi0", "psi1", "Omega1", "Omega2", "Omega3"},
      [p](const E& q) { return beanie_step(q, p); },
      {},
      {}};
  m.noether.emplace_back("omega3", [](const E& q) { return q.omega3(); });
  m.casimir.emplace_back("omega12_norm", [](const E& q) { return q.g.translation.norm(); });
  return m;
}

Model<RotationPairGroupoid> rotation_pair_model(const ScenarioConfig& c) {
  const CalculusConfig calc = c.newton.calculus();
  const Mat3 II = lagrangian_inertia(c.inertia);
  const auto mv = mv_options(c);
  using E = RotationPairGroupoid::Element;
  const Rotation R0 = exp_so3(c.r0);
  Model<RotationPairGroupoid> m{RotationPairGroupoid{},
                                rigid_body_pair_lagrangian(c.inertia, c.h),
                                {R0, R0 * exp_so3(c.w0), Vec3::Zero()},
                                matrix_names("R"),
                                [II, mv](const E& g) -> E {
                                  const Rotation W = rigid_body_step(reduce_left(g), II, mv);
                                  return {g.S, project_to_so3(g.S * W), g.param};
                                },
                                {},
                                {}};
  append(m.chart_names, matrix_names("S"));
  append(m.chart_names, indexed("m", 3));
  // Left translations R -> exp(t e_i) R act through the body vector R^T e_i.
  const RotationPairGroupoid gr;
  const auto L = m.lagrangian;
  for (int i = 0; i < 3; ++i) {
    const NoetherSymmetry<RotationPairGroupoid::Base> X{
        [i](const RotationPairGroupoid::Base& x) { return VecX(x.R.transpose() * Vec3::Unit(i)); },
        {}};
    m.noether.emplace_back("spatial_momentum" + std::to_string(i + 1),
                           [gr, L, X, calc](const E& g) { return noether_constant(gr, L, X, g, calc); });
  }
  m.casimir.emplace_back("pi_norm",
                         [II](const E& g) { return body_momentum(reduce_left(g), II).norm(); });
  return m;
}

/// Unreduced vs reduced (discrete Lie-Poisson) rigid body along Phi_l.
ReductionReport rigid_body_reduction(const ScenarioConfig& c, const ScenarioResult& r) {
  const RotationPairGroupoid up;
  const LieGroupSO3 down;
  std::vector<RotationPairGroupoid::Element> traj;
  for (const auto& chart : r.charts) traj.push_back(up.from_chart(chart));
  const Mat3 II = lagrangian_inertia(c.inertia);
  const auto mv = mv_options(c);
  std::vector<Rotation> reduced{reduce_left(traj.front())};
  while (reduced.size() < traj.size()) reduced.push_back(rigid_body_step(reduced.back(), II, mv));

  std::vector<std::tuple<RotationPairGroupoid::Element, RotationPairGroupoid::Element, VecX>> samples;
  for (std::size_t k = 0; k + 1 < traj.size() && samples.size() < 100; ++k) {
    samples.emplace_back(traj[k], traj[k + 1], VecX(Vec3::Unit(static_cast<int>(k % 3))));
  }
  const GroupoidMorphism<RotationPairGroupoid::Element, RotationPairGroupoid::Base, Rotation> phi{
      reduce_left, [](const RotationPairGroupoid::Base&, const VecX& v) { return v; }};
  return reduction_check(up, down, phi, rigid_body_pair_lagrangian(c.inertia, c.h),
                         free_rigid_body_lagrangian(c.inertia, c.h), traj, reduced, samples,
                         c.newton.calculus());
}

std::string format_number(double v) {
  std::ostringstream s;
  s.imbue(std::locale::classic());
  s << std::setprecision(17) << v;
  return s.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f << content;
  f.close();
  if (!f) throw IoError("failed writing " + path.string());
}

void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError("cannot create output directory " + dir.string());
  }
}

std::string trajectory_csv(const ScenarioResult& r) {
  std::ostringstream s;
  s << "step";
  for (const auto& n : r.chart_names) s << ',' << n;
  s << ",del_residual,newton_iterations\n";
  for (std::size_t k = 0; k < r.charts.size(); ++k) {
    s << k;
    for (Eigen::Index i = 0; i < r.charts[k].size(); ++i) s << ',' << format_number(r.charts[k](i));
    s << ',' << format_number(r.del_residual[k]) << ',' << r.iterations[k] << '\n';
  }
  return s.str();
}

std::string diagnostics_csv(const ScenarioConfig& c, const ScenarioResult& r) {
  const bool symplectic = c.diagnostics.symplectic_every_k > 0;
  std::ostringstream s;
  s << "step";
  for (const auto& n : r.conservation.names) s << ',' << n;
  if (symplectic) s << ",symplectic_residual";
  s << '\n';
  std::size_t next = 0;
  for (std::size_t k = 0; k < r.charts.size(); ++k) {
    s << k;
    for (const auto& series : r.conservation.values) s << ',' << format_number(series[k]);
    if (symplectic) {
      s << ',';
      if (next < r.symplectic.size() && r.symplectic[next].first == k) {
        s << format_number(r.symplectic[next++].second);
      }
    }
    s << '\n';
  }
  return s.str();
}

std::string summary_json(const ScenarioConfig& c, const ScenarioResult& r) {
  json j;
  j["model"] = to_string(c.model);
  j["method"] = c.method == SolverMethod::generic ? "generic" : "closed_form";
  j["steps_requested"] = c.steps;
  j["steps_completed"] = r.charts.empty() ? 0 : r.charts.size() - 1;
  j["status"] = r.failed_step ? "solver_failure" : "ok";
  j["failure"] = r.failed_step ? json{{"step", *r.failed_step}, {"message", r.failure}} : json();
  j["max_del_residual"] = *std::max_element(r.del_residual.begin(), r.del_residual.end());
  j["max_newton_iterations"] = *std::max_element(r.iterations.begin(), r.iterations.end());
  json conserved = json::object();
  const auto& cr = r.conservation;
  for (std::size_t q = 0; q < cr.names.size(); ++q) {
    conserved[cr.names[q]] = {{"initial", cr.values[q].front()},
                              {"max_abs_drift", cr.max_abs_drift[q]},
                              {"max_rel_drift", cr.max_rel_drift[q]}};
  }
  j["conserved"] = conserved;
  if (c.diagnostics.symplectic_every_k > 0) {
    double worst = 0.0;
    for (const auto& [k, v] : r.symplectic) worst = std::max(worst, v);
    j["symplectic"] = {{"samples", r.symplectic.size()}, {"max_residual", worst}};
  }
  if (r.reduction) {
    j["reduction"] = {{"trajectory", r.reduction->trajectory}, {"pairing", r.reduction->pairing}};
  }
  return j.dump(2) + "\n";
}

void report_failure(const ScenarioResult& r, const std::string& label, std::ostream& err) {
  err << label << "solver failure at step " << *r.failed_step << ": " << r.failure << '\n';
}

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& c) {
  ScenarioResult r;
  switch (c.model) {
    case ModelId::pair: simulate(pair_model(c), c, r); break;
    case ModelId::lie_group_so3: simulate(so3_model(c), c, r); break;
    case ModelId::heavy_top: simulate(heavy_top_model(c), c, r); break;
    case ModelId::beanie: simulate(beanie_model(c), c, r); break;
    case ModelId::rigid_body_pair:
      simulate(rotation_pair_model(c), c, r);
      if (c.diagnostics.reduction && !r.failed_step) r.reduction = rigid_body_reduction(c, r);
      break;
  }
  return r;
}

void write_outputs(const ScenarioConfig& c, const ScenarioResult& r) {
  ensure_directory(c.output.directory);
  write_file(c.output.directory / c.output.trajectory, trajectory_csv(r));
  write_file(c.output.directory / c.output.diagnostics, diagnostics_csv(c, r));
  write_file(c.output.directory / c.output.summary, summary_json(c, r));
}

ComparisonResult compare_results(const ScenarioConfig& a, const ScenarioResult& ra,
                                 const ScenarioConfig& b, const ScenarioResult& rb,
                                 const std::string& projection) {
  if (ra.charts.size() != rb.charts.size()) {
    throw ConfigError("compare: trajectories have different numbers of steps");
  }
  std::function<VecX(const VecX&)> project;
  if (projection == "identity") {
    if (a.model != b.model || ra.chart_names != rb.chart_names) {
      throw ConfigError("compare: identity projection needs the same model on both sides");
    }
    project = [](const VecX& v) { return v; };
  } else if (projection == "phi_l") {
    if (a.model != ModelId::rigid_body_pair || b.model != ModelId::lie_group_so3) {
      throw ConfigError("compare: phi_l maps rigid_body_pair onto lie_group_so3");
    }
    project = [](const VecX& v) {
      return LieGroupSO3{}.to_chart(reduce_left(RotationPairGroupoid{}.from_chart(v)));
    };
  } else {
    throw ConfigError("compare: unknown projection '" + projection + "'");
  }
  ComparisonResult out;
  for (std::size_t k = 0; k < ra.charts.size(); ++k) {
    const double d = (project(ra.charts[k]) - rb.charts[k]).lpNorm<Eigen::Infinity>();
    out.discrepancy.push_back(d);
    out.max_discrepancy = std::max(out.max_discrepancy, d);
  }
  return out;
}

int run_command(const std::filesystem::path& config, const std::optional<std::filesystem::path>& out,
                std::ostream& err) {
  ScenarioConfig cfg;
  ScenarioResult result;
  try {
    cfg = load_scenario(config);
    if (out) cfg.output.directory = *out;
    result = run_scenario(cfg);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::config);
  } catch (const Error& e) {
    err << "solver failure: " << e.what() << '\n';
    return static_cast<int>(ExitCode::solver);
  }
  try {
    write_outputs(cfg, result);
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::io);
  }
  if (result.failed_step) {
    report_failure(result, "", err);
    return static_cast<int>(ExitCode::solver);
  }
  return static_cast<int>(ExitCode::ok);
}

int compare_command(const std::filesystem::path& config_a, const std::filesystem::path& config_b,
                    const std::string& projection,
                    const std::optional<std::filesystem::path>& out, std::ostream& err) {
  ScenarioConfig a;
  ScenarioConfig b;
  try {
    a = load_scenario(config_a);
    b = load_scenario(config_b);
    if (a.steps != b.steps) throw ConfigError("compare: configs request different step counts");
    if (projection != "identity" && projection != "phi_l") {
      throw ConfigError("compare: unknown projection '" + projection + "'");
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::config);
  }

  ComparisonResult cmp;
  try {
    // The two scenarios are independent.
    auto fa = std::async(std::launch::async, [&] { return run_scenario(a); });
    const ScenarioResult rb = run_scenario(b);
    const ScenarioResult ra = fa.get();
    for (const auto* r : {&ra, &rb}) {
      if (r->failed_step) {
        report_failure(*r, r == &ra ? "A: " : "B: ", err);
        return static_cast<int>(ExitCode::solver);
      }
    }
    cmp = compare_results(a, ra, b, rb, projection);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::config);
  } catch (const Error& e) {
    err << "solver failure: " << e.what() << '\n';
    return static_cast<int>(ExitCode::solver);
  }

  try {
    const std::filesystem::path dir = out.value_or(".");
    ensure_directory(dir);
    std::ostringstream csv;
    csv << "step,discrepancy\n";
    for (std::size_t k = 0; k < cmp.discrepancy.size(); ++k) {
      csv << k << ',' << format_number(cmp.discrepancy[k]) << '\n';
    }
    write_file(dir / "discrepancy.csv", csv.str());
    const json j = {{"projection", projection},
                    {"steps", a.steps},
                    {"max_discrepancy", cmp.max_discrepancy}};
    write_file(dir / "compare_summary.json", j.dump(2) + "\n");
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::io);
  }
  return static_cast<int>(ExitCode::ok);
}

}  // namespace lgi::cli
