#include "twomode/output.h"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "twomode/errors.h"

namespace twomode {

using nlohmann::json;

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << "time,n1,n2,omega1_eff,omega2_eff,coupling_im\n";
  for (std::size_t i = 0; i < traj.size(); ++i) {
    out << format_number(traj.times[i]) << ',' << format_number(traj.n1_values[i]) << ','
        << format_number(traj.n2_values[i]) << ',' << format_number(traj.omega1_values[i]) << ','
        << format_number(traj.omega2_values[i]) << ',' << format_number(traj.coupling_values[i])
        << '\n';
  }
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRecord> records) {
  out << "x,n1_eq,status,settle_time\n";
  for (const auto& r : records) {
    out << format_number(r.x) << ',';
    if (r.n1_eq) out << format_number(*r.n1_eq);
    out << ',' << to_string(r.status) << ',';
    if (r.settle_time) out << format_number(*r.settle_time);
    out << '\n';
  }
}

json trajectory_json(const Trajectory& traj) {
  return {{"time", traj.times},
          {"n1", traj.n1_values},
          {"n2", traj.n2_values},
          {"omega1_eff", traj.omega1_values},
          {"omega2_eff", traj.omega2_values},
          {"coupling_im", traj.coupling_values}};
}

namespace {

json maybe(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

json sweep_json(std::span<const SweepRecord> records) {
  json arr = json::array();
  for (const auto& r : records) {
    json row = {{"x", r.x},
                {"omega2_0", r.omega2_0},
                {"n1_eq", maybe(r.n1_eq)},
                {"status", to_string(r.status)},
                {"settle_time", maybe(r.settle_time)},
                {"time_average", maybe(r.time_average)},
                {"drift", r.drift}};
    if (!r.message.empty()) row["message"] = r.message;
    arr.push_back(std::move(row));
  }
  return arr;
}

json equilibrium_json(const EquilibriumResult& eq) {
  return {{"status", to_string(eq.status)},
          {"n1_eq", maybe(eq.n1_eq)},
          {"settle_time", maybe(eq.settle_time)},
          {"time_average", maybe(eq.time_average)},
          {"period", maybe(eq.period)},
          {"amplitude", eq.amplitude}};
}

json fit_json(const TanhFit& fit, double lambda, double alpha1, double alpha2) {
  return {{"a", fit.a},
          {"b", fit.b},
          {"c", fit.c},
          {"rms_residual", fit.rms_residual},
          {"n_points", fit.n_points},
          {"lambda", lambda},
          {"alpha1", alpha1},
          {"alpha2", alpha2},
          {"iterations", fit.iterations}};
}

json law_json(const TanhLaw& law) {
  return {{"mu", law.mu},
          {"predicted_n1_eq", law.predicted_n1_eq},
          {"law_variant", to_string(law.law_variant)},
          {"sign_factor", law.sign_factor},
          {"periodic_case", law.periodic_case}};
}

namespace {

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    cells.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_cell(const std::string& cell, std::size_t line_no) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(cell, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != cell.size())
    throw InvalidArgument("fit input line " + std::to_string(line_no) + ": '" + cell +
                          "' is not a number");
  return v;
}

}  // namespace

std::vector<FitPoint> read_fit_points(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("fit input: empty file");
  const auto header = split_row(line);
  auto column = [&](std::string_view name) -> std::ptrdiff_t {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return static_cast<std::ptrdiff_t>(i);
    return -1;
  };
  const auto xi = column("x");
  auto yi = column("y");
  if (yi < 0) yi = column("n1_eq");
  const auto si = column("status");
  if (xi < 0 || yi < 0) throw InvalidArgument("fit input: header needs an x column and a y or n1_eq column");

  std::vector<FitPoint> points;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_row(line);
    if (cells.size() != header.size())
      throw InvalidArgument("fit input line " + std::to_string(line_no) + ": expected " +
                            std::to_string(header.size()) + " fields");
    if (si >= 0 && cells[static_cast<std::size_t>(si)] != "converged") continue;
    points.push_back({parse_cell(cells[static_cast<std::size_t>(xi)], line_no),
                      parse_cell(cells[static_cast<std::size_t>(yi)], line_no)});
  }
  return points;
}

std::vector<FitPoint> read_fit_points(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read fit input '" + path.string() + "'");
  return read_fit_points(in);
}

}  // namespace twomode
