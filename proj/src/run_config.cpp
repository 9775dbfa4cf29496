#include "twomode/run_config.h"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include <nlohmann/json.hpp>

namespace twomode {

using nlohmann::json;

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::exact:
      return "exact";
    case Mode::induced:
      return "induced";
    case Mode::generalized:
      return "generalized";
    case Mode::sweep:
      return "sweep";
    case Mode::fit:
      return "fit";
    case Mode::predict:
      return "predict";
  }
  return "exact";
}

std::string_view to_string(Format format) { return format == Format::csv ? "csv" : "json"; }

std::optional<Mode> parse_mode(std::string_view text) {
  for (Mode m : {Mode::exact, Mode::induced, Mode::generalized, Mode::sweep, Mode::fit,
                 Mode::predict})
    if (to_string(m) == text) return m;
  return std::nullopt;
}

std::optional<Format> parse_format(std::string_view text) {
  if (text == "csv") return Format::csv;
  if (text == "json") return Format::json;
  return std::nullopt;
}

namespace {

std::string_view to_string(CarryOver carry) {
  return carry == CarryOver::occupations ? "occupations" : "operators";
}

std::optional<CarryOver> parse_carry(std::string_view text) {
  if (text == "occupations") return CarryOver::occupations;
  if (text == "operators") return CarryOver::operators;
  return std::nullopt;
}

bool uses_sampling(Mode m) { return m == Mode::exact; }
bool uses_schedule(Mode m) { return m == Mode::induced; }
bool uses_integrator(Mode m) { return m == Mode::generalized || m == Mode::sweep || m == Mode::fit; }
bool uses_sweep(Mode m) { return m == Mode::sweep || m == Mode::fit; }
bool uses_detector(Mode m) {
  return m == Mode::induced || m == Mode::generalized || m == Mode::sweep || m == Mode::fit;
}

// Reads one JSON object field by field and rejects keys nobody asked for.
class FieldReader {
 public:
  FieldReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) fail(path_, "expected an object");
  }

  bool has(const std::string& key) const { return obj_.contains(key); }

  double number(const std::string& key, double fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_number()) fail(field(key), "expected a number");
    const double d = v->get<double>();
    if (!std::isfinite(d)) fail(field(key), "expected a finite number");
    return d;
  }

  long long integer(const std::string& key, long long fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_number_integer()) fail(field(key), "expected an integer");
    return v->get<long long>();
  }

  bool boolean(const std::string& key, bool fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_boolean()) fail(field(key), "expected true or false");
    return v->get<bool>();
  }

  std::optional<std::string> string(const std::string& key) {
    const json* v = find(key);
    if (!v) return std::nullopt;
    if (!v->is_string()) fail(field(key), "expected a string");
    return v->get<std::string>();
  }

  std::vector<double> numbers(const std::string& key, std::vector<double> fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_array()) fail(field(key), "expected an array of numbers");
    std::vector<double> out;
    for (const auto& e : *v) {
      if (!e.is_number()) fail(field(key), "expected an array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  const json* section(const std::string& key) { return find(key); }

  std::string field(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  void finish() const {
    for (const auto& [key, value] : obj_.items())
      if (!used_.contains(key)) fail(field(key), "unknown field");
  }

  [[noreturn]] static void fail(const std::string& where, const std::string& what) {
    throw ConfigError("config field '" + where + "': " + what);
  }

 private:
  const json* find(const std::string& key) {
    used_.insert(key);
    auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  const json& obj_;
  std::string path_;
  std::set<std::string> used_;
};

int occupation(FieldReader& r, const std::string& key, int fallback) {
  const long long v = r.integer(key, fallback);
  if (v != 0 && v != 1) FieldReader::fail(r.field(key), "must be 0 or 1");
  return static_cast<int>(v);
}

ModelParams read_params(const json& j, ModelParams p) {
  FieldReader r(j, "params");
  p.omega1_0 = r.number("omega1_0", p.omega1_0);
  p.omega2_0 = r.number("omega2_0", p.omega2_0);
  p.lambda = r.number("lambda", p.lambda);
  p.alpha1 = r.number("alpha1", p.alpha1);
  p.alpha2 = r.number("alpha2", p.alpha2);
  p.n1 = occupation(r, "n1", p.n1);
  p.n2 = occupation(r, "n2", p.n2);
  r.finish();
  return p;
}

Sampling read_sampling(const json& j, Sampling s) {
  FieldReader r(j, "sampling");
  s.horizon = r.number("horizon", s.horizon);
  s.sample_step = r.number("sample_step", s.sample_step);
  r.finish();
  return s;
}

ScheduleSettings read_schedule(const json& j, ScheduleSettings s) {
  FieldReader r(j, "schedule");
  s.tau = r.number("tau", s.tau);
  s.horizon = r.number("horizon", s.horizon);
  s.sample_step = r.number("sample_step", s.sample_step);
  if (auto carry = r.string("carry_over")) {
    auto parsed = parse_carry(*carry);
    if (!parsed) FieldReader::fail(r.field("carry_over"), "expected 'occupations' or 'operators'");
    s.carry = *parsed;
  }
  r.finish();
  return s;
}

IntegratorConfig read_integrator(const json& j, IntegratorConfig c) {
  FieldReader r(j, "integrator");
  c.step = r.number("step", c.step);
  c.horizon = r.number("horizon", c.horizon);
  const long long stride = r.integer("sample_stride", static_cast<long long>(c.sample_stride));
  if (stride <= 0) FieldReader::fail(r.field("sample_stride"), "must be positive");
  c.sample_stride = static_cast<std::size_t>(stride);
  r.finish();
  return c;
}

SweepSpec read_sweep(const json& j, SweepSpec s) {
  FieldReader r(j, "sweep");
  s.omega1_0 = r.number("omega1_0", s.omega1_0);
  s.omega2_grid = r.numbers("omega2_grid", s.omega2_grid);
  s.lambda = r.number("lambda", s.lambda);
  s.alpha1 = r.number("alpha1", s.alpha1);
  s.alpha2 = r.number("alpha2", s.alpha2);
  s.n1 = occupation(r, "n1", s.n1);
  s.n2 = occupation(r, "n2", s.n2);
  r.finish();
  return s;
}

DetectorConfig read_detector(const json& j, DetectorConfig d) {
  FieldReader r(j, "detector");
  d.amp_tol = r.number("amp_tol", d.amp_tol);
  d.window = r.number("window", d.window);
  d.stop_early = r.boolean("stop_early", d.stop_early);
  r.finish();
  return d;
}

// Re-derives defaults that depend on the parameters (integrator horizon).
void sync_defaults(RunConfig& c, bool integrator_given_horizon) {
  if (c.integrator && !integrator_given_horizon) {
    const ModelParams& p = c.sweep ? c.sweep->point(c.sweep->omega2_grid.front()) : c.params;
    c.integrator->horizon = default_horizon(p);
  }
}

}  // namespace

RunConfig default_config(Mode mode) {
  RunConfig c;
  c.mode = mode;
  // Rule-driven modes start from the first tabulated coupling, alpha = (0, -1).
  if (mode == Mode::generalized || mode == Mode::predict) c.params.alpha2 = -1.0;
  if (uses_sampling(mode)) c.sampling = Sampling{};
  if (uses_schedule(mode)) c.schedule = ScheduleSettings{};
  if (uses_sweep(mode)) c.sweep = SweepSpec{};
  if (uses_integrator(mode)) c.integrator = default_integrator(c.params);
  if (uses_detector(mode)) c.detector = DetectorConfig{};
  if (mode == Mode::sweep || mode == Mode::fit) {
    c.params = c.sweep->point(c.sweep->omega2_grid.front());
    c.integrator = default_integrator(c.params);
    c.detector->stop_early = true;
  }
  c.output_path = std::string("twomode_") + std::string(to_string(mode)) + ".csv";
  return c;
}

void validate(const RunConfig& c) {
  auto section = [&](bool present, bool wanted, const char* name) {
    if (present && !wanted)
      throw ConfigError(std::string("config field '") + name + "': not used by mode '" +
                        std::string(to_string(c.mode)) + "'");
    if (!present && wanted)
      throw ConfigError(std::string("config field '") + name + "': required by mode '" +
                        std::string(to_string(c.mode)) + "'");
  };
  const bool fit_from_file = c.mode == Mode::fit && c.input.has_value();
  section(c.sampling.has_value(), uses_sampling(c.mode), "sampling");
  section(c.schedule.has_value(), uses_schedule(c.mode), "schedule");
  section(c.integrator.has_value(), uses_integrator(c.mode) && !fit_from_file, "integrator");
  section(c.sweep.has_value(), uses_sweep(c.mode) && !fit_from_file, "sweep");
  section(c.detector.has_value(), uses_detector(c.mode) && !fit_from_file, "detector");
  if (c.input && c.mode != Mode::fit)
    throw ConfigError("config field 'input': only used by mode 'fit'");
  if (c.output_path.empty()) throw ConfigError("config field 'output_path': must not be empty");

  auto wrap = [](const char* where, auto&& fn) {
    try {
      fn();
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError(std::string("config field '") + where + "': " + e.what());
    }
  };
  wrap("params", [&] { c.params.validate(); });
  if (c.sampling) {
    if (!(c.sampling->horizon > 0.0))
      throw ConfigError("config field 'sampling.horizon': must be positive");
    if (!(c.sampling->sample_step > 0.0) || c.sampling->sample_step > c.sampling->horizon)
      throw ConfigError("config field 'sampling.sample_step': must be in (0, horizon]");
    if (c.params.omega1_0 == c.params.omega2_0 && c.params.lambda == 0.0)
      throw ConfigError("config field 'params': omega1_0 = omega2_0 with lambda = 0 is degenerate");
  }
  if (c.schedule) wrap("schedule", [&] { (void)c.schedule->schedule(); });
  if (c.sweep) wrap("sweep", [&] { c.sweep->validate(); });
  if (c.integrator) {
    if (c.sweep) {
      wrap("integrator", [&] {
        for (double w2 : c.sweep->omega2_grid) c.integrator->validate(c.sweep->point(w2));
      });
    } else {
      wrap("integrator", [&] { c.integrator->validate(c.params); });
    }
  }
  if (c.detector && (!(c.detector->amp_tol > 0.0) || !(c.detector->window > 0.0)))
    throw ConfigError("config field 'detector': amp_tol and window must be positive");
  if (c.mode == Mode::predict) {
    if (c.params.alpha1 == 0.0 && c.params.alpha2 == 0.0)
      throw ConfigError("config field 'params': predict needs alpha != (0, 0)");
    if (!(c.params.lambda > 0.0))
      throw ConfigError("config field 'params.lambda': predict needs lambda > 0");
  }
}

json to_json(const RunConfig& c) {
  json j;
  j["mode"] = to_string(c.mode);
  const auto& p = c.params;
  j["params"] = {{"omega1_0", p.omega1_0}, {"omega2_0", p.omega2_0}, {"lambda", p.lambda},
                 {"alpha1", p.alpha1},     {"alpha2", p.alpha2},     {"n1", p.n1},
                 {"n2", p.n2}};
  if (c.sampling)
    j["sampling"] = {{"horizon", c.sampling->horizon}, {"sample_step", c.sampling->sample_step}};
  if (c.schedule)
    j["schedule"] = {{"tau", c.schedule->tau},
                     {"horizon", c.schedule->horizon},
                     {"sample_step", c.schedule->sample_step},
                     {"carry_over", to_string(c.schedule->carry)}};
  if (c.integrator)
    j["integrator"] = {{"step", c.integrator->step},
                       {"horizon", c.integrator->horizon},
                       {"sample_stride", c.integrator->sample_stride}};
  if (c.sweep)
    j["sweep"] = {{"omega1_0", c.sweep->omega1_0}, {"omega2_grid", c.sweep->omega2_grid},
                  {"lambda", c.sweep->lambda},     {"alpha1", c.sweep->alpha1},
                  {"alpha2", c.sweep->alpha2},     {"n1", c.sweep->n1},
                  {"n2", c.sweep->n2}};
  if (c.detector)
    j["detector"] = {{"amp_tol", c.detector->amp_tol},
                     {"window", c.detector->window},
                     {"stop_early", c.detector->stop_early}};
  if (c.input) j["input"] = c.input->generic_string();
  j["output_path"] = c.output_path.generic_string();
  j["format"] = to_string(c.format);
  if (c.threads != 0) j["threads"] = c.threads;
  return j;
}

RunConfig config_from_json(const json& doc) {
  FieldReader r(doc, "");
  const auto mode_text = r.string("mode");
  if (!mode_text) FieldReader::fail("mode", "required");
  const auto mode = parse_mode(*mode_text);
  if (!mode)
    FieldReader::fail("mode", "expected one of exact, induced, generalized, sweep, fit, predict");

  RunConfig c = default_config(*mode);
  if (const json* p = r.section("params")) c.params = read_params(*p, c.params);

  auto optional_section = [&](const char* key, auto& slot, auto reader, auto fallback) {
    if (const json* s = r.section(key)) {
      slot = reader(*s, slot ? *slot : fallback);
    }
  };
  optional_section("sampling", c.sampling, read_sampling, Sampling{});
  optional_section("schedule", c.schedule, read_schedule, ScheduleSettings{});
  optional_section("sweep", c.sweep, read_sweep, SweepSpec{});
  bool horizon_given = false;
  if (const json* s = r.section("integrator")) {
    horizon_given = s->is_object() && s->contains("horizon");
    c.integrator = read_integrator(*s, c.integrator ? *c.integrator : IntegratorConfig{});
  }
  optional_section("detector", c.detector, read_detector, DetectorConfig{});
  if (auto in = r.string("input")) {
    c.input = *in;
    if (!doc.contains("sweep")) c.sweep.reset();
    if (!doc.contains("integrator")) c.integrator.reset();
    if (!doc.contains("detector")) c.detector.reset();
  }
  if (auto out = r.string("output_path")) c.output_path = *out;
  if (auto fmt = r.string("format")) {
    auto parsed = parse_format(*fmt);
    if (!parsed) FieldReader::fail("format", "expected 'csv' or 'json'");
    c.format = *parsed;
  }
  const long long threads = r.integer("threads", 0);
  if (threads < 0) FieldReader::fail("threads", "must be >= 0");
  c.threads = static_cast<unsigned>(threads);
  r.finish();

  if (c.sweep && !doc.contains("params")) c.params = c.sweep->point(c.sweep->omega2_grid.front());
  sync_defaults(c, horizon_given);
  validate(c);
  return c;
}

RunConfig config_from_text(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return config_from_json(doc);
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return config_from_text(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::pair<int, int> parse_seed_state(std::string_view text) {
  const auto comma = text.find(',');
  auto bit = [&](std::string_view s) {
    if (s == "0") return 0;
    if (s == "1") return 1;
    throw ConfigError("--seed-state: expected n1,n2 with values 0 or 1 (got '" + std::string(text) +
                      "')");
  };
  if (comma == std::string_view::npos)
    throw ConfigError("--seed-state: expected n1,n2 (got '" + std::string(text) + "')");
  return {bit(text.substr(0, comma)), bit(text.substr(comma + 1))};
}

void apply_overrides(RunConfig& c, const Overrides& o) {
  if (o.out) c.output_path = *o.out;
  if (o.format) c.format = *o.format;
  if (o.input) {
    if (c.mode != Mode::fit) throw ConfigError("--input: only used by mode 'fit'");
    c.input = *o.input;
    c.sweep.reset();
    c.integrator.reset();
    c.detector.reset();
  }

  bool params_changed = false;
  auto set = [&](const std::optional<double>& v, double& target) {
    if (v) {
      target = *v;
      params_changed = true;
    }
  };
  set(o.omega1, c.params.omega1_0);
  set(o.omega2, c.params.omega2_0);
  set(o.lambda, c.params.lambda);
  set(o.alpha1, c.params.alpha1);
  set(o.alpha2, c.params.alpha2);
  if (o.seed_state) {
    std::tie(c.params.n1, c.params.n2) = *o.seed_state;
    params_changed = true;
  }
  if (c.sweep) {
    if (o.omega2) throw ConfigError("--omega2: omega2 is the swept variable in mode '" +
                                    std::string(to_string(c.mode)) + "'");
    if (o.omega1) c.sweep->omega1_0 = *o.omega1;
    if (o.lambda) c.sweep->lambda = *o.lambda;
    if (o.alpha1) c.sweep->alpha1 = *o.alpha1;
    if (o.alpha2) c.sweep->alpha2 = *o.alpha2;
    if (o.seed_state) std::tie(c.sweep->n1, c.sweep->n2) = *o.seed_state;
  }

  if (o.tau) {
    if (!c.schedule) throw ConfigError("--tau: only used by mode 'induced'");
    c.schedule->tau = *o.tau;
  }
  if (o.horizon) {
    if (c.sampling) c.sampling->horizon = *o.horizon;
    else if (c.schedule) c.schedule->horizon = *o.horizon;
    else if (c.integrator) c.integrator->horizon = *o.horizon;
    else throw ConfigError("--horizon: not used by mode '" + std::string(to_string(c.mode)) + "'");
  } else if (params_changed && c.integrator) {
    // Keep the per-alpha default in step with the new parameters.
    const bool was_default =
        c.integrator->horizon == 1000.0 || c.integrator->horizon == 2000.0;
    if (was_default) {
      const ModelParams& p = c.sweep ? c.sweep->point(c.sweep->omega2_grid.front()) : c.params;
      c.integrator->horizon = default_horizon(p);
    }
  }
  if (o.step) {
    if (c.integrator) c.integrator->step = *o.step;
    else if (c.sampling) c.sampling->sample_step = *o.step;
    else if (c.schedule) c.schedule->sample_step = *o.step;
    else throw ConfigError("--step: not used by mode '" + std::string(to_string(c.mode)) + "'");
  }
}

}  // namespace twomode
