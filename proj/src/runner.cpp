#include "twomode/runner.h"

#include <cmath>
#include <fstream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "twomode/equilibrium_detector.h"
#include "twomode/equilibrium_lab.h"
#include "twomode/exact_dynamics.h"
#include "twomode/generalized_dynamics.h"
#include "twomode/induced_dynamics.h"
#include "twomode/output.h"

namespace twomode {

using nlohmann::json;

namespace {

class OutputFile {
 public:
  explicit OutputFile(const std::filesystem::path& path) : path_(path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    out_.open(path, std::ios::binary | std::ios::trunc);
    if (!out_) throw ConfigError("cannot write output file '" + path.string() + "'");
  }
  std::ostream& stream() { return out_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

std::filesystem::path partial_marker(const std::filesystem::path& path) {
  return path.string() + ".partial";
}

// A stale marker from an earlier failed run would mislabel a good output.
void clear_partial_marker(const std::filesystem::path& path) {
  std::error_code ec;
  std::filesystem::remove(partial_marker(path), ec);
}

void mark_partial(const std::filesystem::path& path, const std::string& message) {
  std::ofstream note(partial_marker(path), std::ios::binary | std::ios::trunc);
  note << message << '\n';
}

void write_json(const std::filesystem::path& path, const json& doc) {
  OutputFile file(path);
  file.stream() << doc.dump(2) << '\n';
}

json params_json(const ModelParams& p) {
  return {{"omega1_0", p.omega1_0}, {"omega2_0", p.omega2_0}, {"lambda", p.lambda},
          {"alpha1", p.alpha1},     {"alpha2", p.alpha2},     {"n1", p.n1},
          {"n2", p.n2}};
}

// Writes a trajectory in the configured format, with optional extra JSON keys.
void write_trajectory(const RunConfig& c, const Trajectory& traj, json extra,
                      const std::string* error) {
  if (c.format == Format::csv) {
    OutputFile file(c.output_path);
    write_trajectory_csv(file.stream(), traj);
    if (error) mark_partial(c.output_path, *error);
    return;
  }
  json doc = std::move(extra);
  doc["params"] = params_json(c.params);
  doc["trajectory"] = trajectory_json(traj);
  if (error) {
    doc["partial"] = true;
    doc["error"] = *error;
  }
  write_json(c.output_path, doc);
}

Trajectory exact_trajectory(const ModelParams& p, const Sampling& s) {
  const FockState state = p.initial_state();
  const auto n = static_cast<std::size_t>(std::llround(s.horizon / s.sample_step));
  Trajectory traj;
  traj.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) * s.sample_step;
    const auto [n1, n2] = exact_mean_values(p, t);
    const OperatorPair ops = exact_operators(p, t);
    traj.push(t, n1, n2, p.omega1_0, p.omega2_0, coupling_term(ops.a1, ops.a2, state).imag());
  }
  return traj;
}

json summary(const RunConfig& c) {
  return {{"mode", to_string(c.mode)}, {"output", c.output_path.generic_string()}};
}

int run_exact(const RunConfig& c, std::ostream& report) {
  const Trajectory traj = exact_trajectory(c.params, *c.sampling);
  json extra;
  const bool oscillates = c.params.lambda != 0.0 || c.params.omega1_0 != c.params.omega2_0;
  if (oscillates) extra["period"] = oscillation_period(c.params);
  write_trajectory(c, traj, extra, nullptr);
  json s = summary(c);
  s["samples"] = traj.size();
  if (extra.contains("period")) s["period"] = extra["period"];
  report << s.dump() << '\n';
  return kExitOk;
}

json detection(const Trajectory& traj, const DetectorConfig& d) {
  if (traj.size() < 4 || traj.times.back() - traj.times.front() < 2.0 * d.window)
    return json(nullptr);
  return equilibrium_json(detect_equilibrium(traj, d.amp_tol, d.window));
}

int run_induced_mode(const RunConfig& c, std::ostream& report) {
  json s = summary(c);
  try {
    const InducedRun result = run_induced(c.params, c.schedule->schedule(), c.schedule->carry);
    json extra;
    extra["equilibrium"] = detection(result.trajectory, *c.detector);
    if (c.format == Format::json) {
      json junctions = json::array();
      for (const auto& j : result.junctions)
        junctions.push_back({{"time", j.time},
                             {"n1_before", j.n1_before},
                             {"n2_before", j.n2_before},
                             {"n1_after", j.n1_after},
                             {"n2_after", j.n2_after},
                             {"omega1", j.omega1},
                             {"omega2", j.omega2}});
      extra["junctions"] = std::move(junctions);
    }
    s["equilibrium"] = extra["equilibrium"];
    write_trajectory(c, result.trajectory, std::move(extra), nullptr);
  } catch (const SimulationError& e) {
    const std::string msg = e.what();
    write_trajectory(c, e.partial(), json::object(), &msg);
    s["error"] = msg;
    s["partial"] = true;
    report << s.dump() << '\n';
    return kExitSimulation;
  }
  report << s.dump() << '\n';
  return kExitOk;
}

int run_generalized(const RunConfig& c, std::ostream& report) {
  json s = summary(c);
  IntegratorConfig cfg = *c.integrator;
  if (c.detector->stop_early) cfg.stop_when_settled = SettleStop{c.detector->amp_tol, c.detector->window};
  try {
    const Trajectory traj = integrate_generalized(c.params, cfg);
    json extra;
    extra["equilibrium"] = detection(traj, *c.detector);
    extra["drift"] = traj.conservation_drift();
    s["equilibrium"] = extra["equilibrium"];
    s["drift"] = extra["drift"];
    write_trajectory(c, traj, std::move(extra), nullptr);
  } catch (const SimulationError& e) {
    const std::string msg = e.what();
    write_trajectory(c, e.partial(), json::object(), &msg);
    s["error"] = msg;
    s["partial"] = true;
    report << s.dump() << '\n';
    return kExitSimulation;
  }
  report << s.dump() << '\n';
  return kExitOk;
}

std::size_t count_errors(std::span<const SweepRecord> records) {
  std::size_t n = 0;
  for (const auto& r : records) n += r.status == PointStatus::error;
  return n;
}

std::string error_note(std::span<const SweepRecord> records) {
  std::string note;
  for (const auto& r : records)
    if (r.status == PointStatus::error) note += "x=" + format_number(r.x) + ": " + r.message + "\n";
  if (!note.empty()) note.pop_back();
  return note;
}

std::vector<SweepRecord> run_sweep_records(const RunConfig& c) {
  return sweep_equilibria(*c.sweep, *c.integrator, c.detector->settings(), c.threads);
}

int run_sweep(const RunConfig& c, std::ostream& report) {
  const auto records = run_sweep_records(c);
  const std::size_t errors = count_errors(records);
  const std::string note = error_note(records);
  if (c.format == Format::csv) {
    OutputFile file(c.output_path);
    write_sweep_csv(file.stream(), records);
    if (errors) mark_partial(c.output_path, note);
  } else {
    json doc = {{"sweep", sweep_json(records)}};
    if (errors) {
      doc["partial"] = true;
      doc["error"] = note;
    }
    write_json(c.output_path, doc);
  }
  std::size_t converged = 0;
  for (const auto& r : records) converged += r.status == PointStatus::converged;
  json s = summary(c);
  s["points"] = records.size();
  s["converged"] = converged;
  s["errors"] = errors;
  report << s.dump() << '\n';
  return errors ? kExitSimulation : kExitOk;
}

void write_fit(const RunConfig& c, const json& doc) {
  if (c.format == Format::json) {
    write_json(c.output_path, doc);
    return;
  }
  OutputFile file(c.output_path);
  auto& out = file.stream();
  out << "a,b,c,rms_residual,n_points,lambda,alpha1,alpha2,converged\n";
  for (const char* key : {"a", "b", "c", "rms_residual"})
    out << format_number(doc[key].get<double>()) << ',';
  out << doc["n_points"].get<std::size_t>() << ',';
  for (const char* key : {"lambda", "alpha1", "alpha2"})
    out << format_number(doc[key].get<double>()) << ',';
  out << (doc["converged"].get<bool>() ? "true" : "false") << '\n';
}

int run_fit(const RunConfig& c, std::ostream& report) {
  json s = summary(c);
  std::vector<FitPoint> points;
  double lambda = c.params.lambda, alpha1 = c.params.alpha1, alpha2 = c.params.alpha2;
  std::size_t sweep_errors = 0;
  if (c.input) {
    points = read_fit_points(*c.input);
  } else {
    const auto records = run_sweep_records(c);
    sweep_errors = count_errors(records);
    points = converged_points(records);
    lambda = c.sweep->lambda;
    alpha1 = c.sweep->alpha1;
    alpha2 = c.sweep->alpha2;
  }
  const std::optional<double> hint =
      lambda > 0.0 ? std::optional<double>(0.5 / lambda) : std::nullopt;
  TanhFit fit;
  bool converged = true;
  std::string failure;
  try {
    fit = fit_tanh(points, hint);
  } catch (const FitError& e) {
    fit = e.last_iterate();
    converged = false;
    failure = e.what();
  }
  json doc = fit_json(fit, lambda, alpha1, alpha2);
  doc["converged"] = converged;
  if (!converged) doc["error"] = failure;
  s["fit"] = doc;
  json pts = json::array();
  for (const auto& p : points) pts.push_back({{"x", p.x}, {"y", p.y}});
  doc["points"] = std::move(pts);
  write_fit(c, doc);
  s["sweep_errors"] = sweep_errors;
  report << s.dump() << '\n';
  if (!converged) return kExitFitFailed;
  return sweep_errors ? kExitSimulation : kExitOk;
}

int run_predict(const RunConfig& c, std::ostream& report) {
  const TanhLaw law = predict_equilibrium(c.params);
  json doc = law_json(law);
  doc["params"] = params_json(c.params);
  if (c.format == Format::json) {
    write_json(c.output_path, doc);
  } else {
    OutputFile file(c.output_path);
    file.stream() << "mu,predicted_n1_eq,law_variant,sign_factor,periodic_case\n"
                  << format_number(law.mu) << ',' << format_number(law.predicted_n1_eq) << ','
                  << to_string(law.law_variant) << ',' << law.sign_factor << ','
                  << (law.periodic_case ? "true" : "false") << '\n';
  }
  json s = summary(c);
  s["prediction"] = law_json(law);
  report << s.dump() << '\n';
  return kExitOk;
}

}  // namespace

int run(const RunConfig& config, std::ostream& report) {
  validate(config);
  clear_partial_marker(config.output_path);
  switch (config.mode) {
    case Mode::exact:
      return run_exact(config, report);
    case Mode::induced:
      return run_induced_mode(config, report);
    case Mode::generalized:
      return run_generalized(config, report);
    case Mode::sweep:
      return run_sweep(config, report);
    case Mode::fit:
      return run_fit(config, report);
    case Mode::predict:
      return run_predict(config, report);
  }
  return kExitConfig;
}

}  // namespace twomode
