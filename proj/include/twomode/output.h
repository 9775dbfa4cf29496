// Plot-ready CSV and JSON writers, and the reader for fit input tables.
#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "twomode/equilibrium_detector.h"
#include "twomode/equilibrium_lab.h"
#include "twomode/trajectory.h"

namespace twomode {

// 12 significant digits, '.' separator, no grouping.
std::string format_number(double v);

// time,n1,n2,omega1_eff,omega2_eff,coupling_im
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
// x,n1_eq,status,settle_time; absent values are left empty
void write_sweep_csv(std::ostream& out, std::span<const SweepRecord> records);

nlohmann::json trajectory_json(const Trajectory& traj);
nlohmann::json sweep_json(std::span<const SweepRecord> records);
nlohmann::json equilibrium_json(const EquilibriumResult& eq);
nlohmann::json fit_json(const TanhFit& fit, double lambda, double alpha1, double alpha2);
nlohmann::json law_json(const TanhLaw& law);

// Reads (x, y) pairs from a CSV with a header. The y column is "y" or "n1_eq";
// if a "status" column exists only converged rows are kept. Throws InvalidArgument.
std::vector<FitPoint> read_fit_points(const std::filesystem::path& path);
std::vector<FitPoint> read_fit_points(std::istream& in);

}  // namespace twomode
