#include "twomode/trajectory.h"

#include <algorithm>
#include <cmath>

namespace twomode {

void Trajectory::reserve(std::size_t n) {
  times.reserve(n);
  n1_values.reserve(n);
  n2_values.reserve(n);
  omega1_values.reserve(n);
  omega2_values.reserve(n);
  coupling_values.reserve(n);
}

void Trajectory::push(double t, double n1, double n2, double omega1, double omega2,
                      double coupling) {
  times.push_back(t);
  n1_values.push_back(n1);
  n2_values.push_back(n2);
  omega1_values.push_back(omega1);
  omega2_values.push_back(omega2);
  coupling_values.push_back(coupling);
}

double Trajectory::conservation_drift() const {
  if (empty()) return 0.0;
  const double total = n1_values.front() + n2_values.front();
  double drift = 0.0;
  for (std::size_t i = 0; i < size(); ++i)
    drift = std::max(drift, std::abs(n1_values[i] + n2_values[i] - total));
  return drift;
}

}  // namespace twomode
