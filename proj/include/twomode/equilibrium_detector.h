// Classifies the tail of an n1 time series as settled, periodic or undecided.
#pragma once

#include <optional>
#include <string_view>

#include "twomode/trajectory.h"

namespace twomode {

inline constexpr double kDefaultAmpTol = 1e-3;
inline constexpr double kDefaultWindow = 100.0;
// Minimum normalized autocorrelation at the dominant lag for a periodic verdict.
inline constexpr double kPeriodicAcfThreshold = 0.8;
// Largest relative change of the peak-to-peak swing between the two halves of
// the window that still counts as a steady oscillation.
inline constexpr double kPeriodicAmplitudeStability = 0.05;

enum class EquilibriumStatus { converged, periodic, indeterminate };

std::string_view to_string(EquilibriumStatus status);

struct EquilibriumResult {
  EquilibriumStatus status = EquilibriumStatus::indeterminate;
  std::optional<double> n1_eq;         // trailing-window mean, when converged
  std::optional<double> settle_time;   // when converged
  std::optional<double> time_average;  // mean over whole periods, when periodic
  std::optional<double> period;        // dominant period, when periodic
  double amplitude = 0.0;              // peak-to-peak of n1 in the trailing window

  bool converged() const { return status == EquilibriumStatus::converged; }
  bool periodic() const { return status == EquilibriumStatus::periodic; }
};

// converged: peak-to-peak of n1 over the trailing window < amp_tol. The
//   settle time is the earliest sample from which the n1 range to the end of
//   the run stays below amp_tol.
// periodic: peak-to-peak > 10 amp_tol and the window's autocorrelation has a
//   dominant peak (>= 0.8) at a lag no longer than half the window, and the
//   swing in both halves of the window agrees within 5%.
// Anything else is indeterminate.
//
// Requires uniformly sampled times spanning at least 2 * window.
EquilibriumResult detect_equilibrium(const Trajectory& traj, double amp_tol = kDefaultAmpTol,
                                     double window = kDefaultWindow);

}  // namespace twomode
