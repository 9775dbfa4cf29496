#include <doctest.h>

#include <nlohmann/json.hpp>

#include "twomode/output.h"
#include "twomode/run_config.h"

using namespace twomode;
using nlohmann::json;

namespace {

const Mode kModes[] = {Mode::exact, Mode::induced, Mode::generalized, Mode::sweep, Mode::fit, Mode::predict};

std::string error_of(const std::string& text) {
  try {
    config_from_text(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("defaults carry exactly the sections their mode needs") {
  for (Mode m : kModes) {
    const auto c = default_config(m);
    CHECK_NOTHROW(validate(c));
    CHECK(c.sampling.has_value() == (m == Mode::exact));
    CHECK(c.schedule.has_value() == (m == Mode::induced));
    CHECK(c.sweep.has_value() == (m == Mode::sweep || m == Mode::fit));
    CHECK(c.integrator.has_value() == (m == Mode::generalized || m == Mode::sweep || m == Mode::fit));
  }
}

TEST_CASE("serialized configs reload to the same plan") {
  for (Mode m : kModes) {
    auto c = default_config(m);
    c.format = Format::json;
    c.output_path = "out/run.json";
    c.params.lambda = 0.25;
    c.params.alpha1 = m == Mode::predict ? 1.0 : 0.0;
    if (c.integrator) c.integrator->sample_stride = 50;
    if (c.schedule) {
      c.schedule->tau = 2.5;
      c.schedule->carry = CarryOver::operators;
    }
    if (c.sweep) c.sweep->omega2_grid = {0.5, 0.9, 1.5};
    if (c.sweep) c.params = c.sweep->point(0.5);
    const auto text = to_json(c).dump(2);
    const auto back = config_from_text(text);
    CHECK(back == c);
    CHECK(to_json(back).dump(2) == text);
  }
}

TEST_CASE("fit from a table needs no simulation sections") {
  auto c = config_from_text(R"({"mode": "fit", "input": "points.csv", "params": {"lambda": 0.1}})");
  CHECK(c.input.has_value());
  CHECK_FALSE(c.sweep.has_value());
  CHECK_FALSE(c.integrator.has_value());
  CHECK(config_from_json(to_json(c)) == c);
}

TEST_CASE("missing fields take defaults") {
  const auto c = config_from_text(R"({"mode": "generalized", "params": {"alpha2": -1, "lambda": 0.2}})");
  CHECK(c.params.omega1_0 == 0.5);
  CHECK(c.params.alpha2 == -1.0);
  CHECK(c.integrator->step == 1e-3);
  CHECK(c.integrator->horizon == 1000.0);
  const auto opp = config_from_text(R"({"mode": "generalized", "params": {"alpha1": 1, "alpha2": -1}})");
  CHECK(opp.integrator->horizon == 2000.0);
}

TEST_CASE("diagnostics name the offending field") {
  CHECK(error_of(R"({"mode": "exact", "params": {"lamda": 0.1}})").find("params.lamda") != std::string::npos);
  CHECK(error_of(R"({"mode": "exact", "params": {"lambda": "x"}})").find("params.lambda") != std::string::npos);
  CHECK(error_of(R"({"mode": "exact", "schedule": {}})").find("schedule") != std::string::npos);
  CHECK(error_of(R"({"mode": "warp"})").find("mode") != std::string::npos);
  CHECK(error_of(R"({"params": {}})").find("mode") != std::string::npos);
  CHECK(error_of(R"({"mode": "exact", "params": {"n1": 2}})").find("params.n1") != std::string::npos);
  CHECK(error_of(R"({"mode": "induced", "schedule": {"tau": 3, "horizon": 100}})").find("schedule") != std::string::npos);
  CHECK(error_of(R"({"mode": "generalized", "integrator": {"step": 0.5}})").find("integrator") != std::string::npos);
  CHECK(error_of(R"({"mode": "sweep", "sweep": {"omega2_grid": [0.5, 0.4]}})").find("sweep") != std::string::npos);
  CHECK(error_of(R"({"mode": "predict", "params": {"alpha1": 0, "alpha2": 0}})").find("params") != std::string::npos);
  CHECK(error_of(R"({"mode": "exact", "format": "xml"})").find("format") != std::string::npos);
}

TEST_CASE("syntax errors report their position") {
  const auto msg = error_of("{\n  \"mode\": \"exact\",\n  \"params\": {\"lambda\": 0.1,}\n}");
  CHECK(msg.find("line 3") != std::string::npos);
}

TEST_CASE("flags override file values") {
  auto c = default_config(Mode::generalized);
  Overrides o;
  o.lambda = 0.3;
  o.alpha1 = 1.0;
  o.alpha2 = -1.0;
  o.step = 5e-4;
  o.seed_state = parse_seed_state("0,1");
  o.format = Format::json;
  o.out = "x.json";
  apply_overrides(c, o);
  CHECK(c.params.lambda == 0.3);
  CHECK(c.params.n1 == 0);
  CHECK(c.params.n2 == 1);
  CHECK(c.integrator->step == 5e-4);
  CHECK(c.integrator->horizon == 2000.0);
  CHECK(c.format == Format::json);
  CHECK(c.output_path == "x.json");

  auto s = default_config(Mode::sweep);
  Overrides so;
  so.lambda = 0.5;
  so.alpha2 = 1.0;
  apply_overrides(s, so);
  CHECK(s.sweep->lambda == 0.5);
  CHECK(s.sweep->alpha2 == 1.0);
  Overrides bad;
  bad.omega2 = 0.4;
  CHECK_THROWS_AS(apply_overrides(s, bad), ConfigError);

  auto e = default_config(Mode::exact);
  Overrides eo;
  eo.horizon = 50.0;
  eo.step = 0.5;
  apply_overrides(e, eo);
  CHECK(e.sampling->horizon == 50.0);
  CHECK(e.sampling->sample_step == 0.5);
  Overrides tau;
  tau.tau = 2.0;
  CHECK_THROWS_AS(apply_overrides(e, tau), ConfigError);

  CHECK_THROWS_AS(parse_seed_state("1"), ConfigError);
  CHECK_THROWS_AS(parse_seed_state("1,2"), ConfigError);
}

TEST_CASE("numbers print with 12 significant digits") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(22.21441469079183) == "22.2144146908");
  CHECK(format_number(1234567.0) == "1234567");
  CHECK(format_number(-2.5e-9) == "-2.5e-09");
}

TEST_CASE("fit tables are read by column name") {
  std::istringstream sweep_csv("x,n1_eq,status,settle_time\n-0.5,,periodic,\n-0.1,0.2,converged,30\n0.2,0.8,converged,40\n");
  const auto pts = read_fit_points(sweep_csv);
  REQUIRE(pts.size() == 2);
  CHECK(pts[1].x == 0.2);
  CHECK(pts[1].y == 0.8);
  std::istringstream plain("y,x\n1,2\n3,4\n");
  const auto p2 = read_fit_points(plain);
  CHECK(p2[1].x == 4.0);
  std::istringstream bad("x,y\n1,abc\n");
  CHECK_THROWS_AS(read_fit_points(bad), InvalidArgument);
  std::istringstream no_y("x,z\n1,2\n");
  CHECK_THROWS_AS(read_fit_points(no_y), InvalidArgument);
}
