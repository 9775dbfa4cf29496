#pragma once

#include <cstddef>
#include <vector>

namespace twomode {

// Sampled time series. All columns share one length; times strictly increase.
struct Trajectory {
  std::vector<double> times;
  std::vector<double> n1_values;
  std::vector<double> n2_values;
  std::vector<double> omega1_values;  // effective inertia at each sample
  std::vector<double> omega2_values;
  std::vector<double> coupling_values;  // Im <phi, (a1^dag a2 - a2^dag a1) phi>

  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }

  void reserve(std::size_t n);
  void push(double t, double n1, double n2, double omega1, double omega2, double coupling);

  // max_i |n1_i + n2_i - (n1_0 + n2_0)|
  double conservation_drift() const;
};

}  // namespace twomode
