#include "twomode/equilibrium_detector.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "twomode/errors.h"

namespace twomode {

std::string_view to_string(EquilibriumStatus status) {
  switch (status) {
    case EquilibriumStatus::converged:
      return "converged";
    case EquilibriumStatus::periodic:
      return "periodic";
    case EquilibriumStatus::indeterminate:
      return "indeterminate";
  }
  return "indeterminate";
}

namespace {

struct Peak {
  double lag;  // fractional lag in samples
  double value;
};

// Unbiased normalized autocorrelation; returns the first dominant peak past
// the first zero crossing, if any.
std::optional<Peak> dominant_acf_peak(std::span<const double> x) {
  const std::size_t n = x.size();
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n);
  if (!(var > 0.0)) return std::nullopt;

  const std::size_t max_lag = n / 2;
  std::vector<double> r(max_lag + 1);
  for (std::size_t lag = 0; lag <= max_lag; ++lag) {
    double s = 0.0;
    for (std::size_t i = 0; i + lag < n; ++i) s += (x[i] - mean) * (x[i + lag] - mean);
    r[lag] = s / static_cast<double>(n - lag) / var;
  }

  std::size_t lag = 1;
  while (lag <= max_lag && r[lag] >= 0.0) ++lag;  // first negative lobe
  while (lag <= max_lag && r[lag] < 0.0) ++lag;   // back to positive
  if (lag > max_lag) return std::nullopt;

  std::size_t best = lag;
  for (; lag <= max_lag && r[lag] >= 0.0; ++lag)
    if (r[lag] > r[best]) best = lag;

  Peak peak{static_cast<double>(best), r[best]};
  if (best > 0 && best < max_lag) {
    const double l = r[best - 1], c = r[best], rr = r[best + 1];
    const double denom = l - 2.0 * c + rr;
    if (denom < 0.0) {
      const double shift = 0.5 * (l - rr) / denom;
      peak.lag += shift;
      peak.value = c - 0.25 * (l - rr) * shift;
    }
  }
  return peak;
}

double interpolate(std::span<const double> t, std::span<const double> y, double at) {
  std::size_t i = static_cast<std::size_t>(std::upper_bound(t.begin(), t.end(), at) - t.begin());
  i = std::clamp<std::size_t>(i, 1, t.size() - 1);
  const double frac = (at - t[i - 1]) / (t[i] - t[i - 1]);
  return y[i - 1] + frac * (y[i] - y[i - 1]);
}

// Mean of the piecewise-linear interpolant of (t, y) over [from, to].
double interval_mean(std::span<const double> t, std::span<const double> y, double from, double to) {
  std::size_t i = static_cast<std::size_t>(std::upper_bound(t.begin(), t.end(), from) - t.begin());
  double prev_t = from;
  double prev_y = interpolate(t, y, from);
  double area = 0.0;
  for (; i < t.size() && t[i] < to; ++i) {
    area += 0.5 * (prev_y + y[i]) * (t[i] - prev_t);
    prev_t = t[i];
    prev_y = y[i];
  }
  area += 0.5 * (prev_y + interpolate(t, y, to)) * (to - prev_t);
  return area / (to - from);
}

// Upward crossings of level, linearly interpolated.
std::vector<double> upward_crossings(std::span<const double> t, std::span<const double> y,
                                     double level) {
  std::vector<double> out;
  for (std::size_t i = 1; i < t.size(); ++i)
    if (y[i - 1] < level && y[i] >= level)
      out.push_back(t[i - 1] + (level - y[i - 1]) / (y[i] - y[i - 1]) * (t[i] - t[i - 1]));
  return out;
}

}  // namespace

EquilibriumResult detect_equilibrium(const Trajectory& traj, double amp_tol, double window) {
  if (!(amp_tol > 0.0) || !(window > 0.0))
    throw InvalidArgument("detect_equilibrium: amp_tol and window must be positive");
  if (traj.size() < 4 || traj.times.back() - traj.times.front() < 2.0 * window)
    throw InvalidArgument("detect_equilibrium: trajectory must span at least 2 * window");

  const auto& t = traj.times;
  const auto& y = traj.n1_values;
  const double t_end = t.back();
  const double dt = t[1] - t[0];
  const auto first = static_cast<std::size_t>(
      std::lower_bound(t.begin(), t.end(), t_end - window - 1e-9 * dt) - t.begin());
  const std::span<const double> tail(y.data() + first, y.size() - first);

  EquilibriumResult result;
  const auto [lo, hi] = std::minmax_element(tail.begin(), tail.end());
  result.amplitude = *hi - *lo;

  if (result.amplitude < amp_tol) {
    result.status = EquilibriumStatus::converged;
    result.n1_eq = std::accumulate(tail.begin(), tail.end(), 0.0) / static_cast<double>(tail.size());
    double run_lo = y.back(), run_hi = y.back();
    std::size_t settle = y.size() - 1;
    for (std::size_t i = y.size(); i-- > 0;) {
      run_lo = std::min(run_lo, y[i]);
      run_hi = std::max(run_hi, y[i]);
      if (run_hi - run_lo >= amp_tol) break;
      settle = i;
    }
    result.settle_time = t[settle];
    return result;
  }

  // A decaying oscillation also has a strong autocorrelation peak; require
  // the two halves of the window to swing equally far.
  const std::size_t half = tail.size() / 2;
  const auto [lo1, hi1] = std::minmax_element(tail.begin(), tail.begin() + half);
  const auto [lo2, hi2] = std::minmax_element(tail.begin() + half, tail.end());
  const double swing1 = *hi1 - *lo1, swing2 = *hi2 - *lo2;
  const bool steady = std::abs(swing2 - swing1) <= kPeriodicAmplitudeStability * swing1;

  if (result.amplitude > 10.0 * amp_tol && steady) {
    const auto peak = dominant_acf_peak(tail);
    if (peak && peak->value >= kPeriodicAcfThreshold) {
      const double period = peak->lag * dt;
      const double cycles = std::floor(window / period + 1e-9);
      if (cycles >= 2.0) {
        result.status = EquilibriumStatus::periodic;
        const std::span<const double> ts(t.data() + first, t.size() - first);
        const double mean = std::accumulate(tail.begin(), tail.end(), 0.0) / static_cast<double>(tail.size());
        // Average between two upward mean crossings a whole number of periods
        // apart, so both ends sit at the same phase.
        const auto ups = upward_crossings(ts, tail, mean);
        if (!ups.empty()) {
          const double k = std::floor((t_end - ups.front()) / period + 1e-9);
          const double target = ups.front() + k * period;
          const auto nearest = std::min_element(ups.begin(), ups.end(), [&](double a, double b) {
            return std::abs(a - target) < std::abs(b - target);
          });
          if (k >= 1.0 && std::abs(*nearest - target) < 0.25 * period) {
            result.period = (*nearest - ups.front()) / k;
            result.time_average = interval_mean(ts, tail, ups.front(), *nearest);
            return result;
          }
        }
        result.period = period;
        result.time_average = interval_mean(ts, tail, t_end - cycles * period, t_end);
        return result;
      }
    }
  }
  result.status = EquilibriumStatus::indeterminate;
  return result;
}

}  // namespace twomode
