// Stepwise rule-induced dynamics.
//
// The horizon is split into n subintervals of length tau. Inside each the
// Hamiltonian is frozen and the evolution is the closed form; at every k*tau
// the rule rescales the inertia parameters by the change of the mean
// occupations over the last subinterval,
//
//   w_j <- w_j (1 + n_j(k tau) - n_j((k-1) tau)),
//
// and the evolution continues from where it is.
#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "twomode/exact_dynamics.h"
#include "twomode/trajectory.h"

namespace twomode {

// What is handed from one subinterval to the next.
enum class CarryOver {
  // The mean occupations: each subinterval starts from the diagonal state
  // with the current n1, n2 (coherences are dropped at the check).
  occupations,
  // The full operator pair a1, a2, propagated coherently across junctions.
  operators,
};

class RuleSchedule {
 public:
  // horizon must equal n * tau for a positive integer n (relative slack 1e-9).
  // sample_step defaults to tau / 50 and must not exceed tau.
  RuleSchedule(double tau, double horizon, double sample_step = 0.0);

  // Smallest n * tau >= min_horizon.
  static RuleSchedule covering(double tau, double min_horizon, double sample_step = 0.0);

  double tau() const { return tau_; }
  double horizon() const { return tau_ * static_cast<double>(intervals_); }
  double sample_step() const { return sample_step_; }
  std::size_t intervals() const { return intervals_; }

  bool operator==(const RuleSchedule&) const = default;

 private:
  double tau_;
  std::size_t intervals_;
  double sample_step_;
};

// (w1 (1 + d1), w2 (1 + d2)). Requires d1 + d2 = 0 within 1e-9.
// Throws ParameterCollapse (with an empty partial trajectory) if a result is <= 0.
std::pair<double, double> apply_rule(double omega1, double omega2, double delta1, double delta2);

struct Junction {
  double time;
  double n1_before, n2_before;  // end of the previous subinterval
  double n1_after, n2_after;    // start of the next one, under the updated Hamiltonian
  double omega1, omega2;        // parameters after the update
};

struct InducedRun {
  Trajectory trajectory;
  std::vector<Junction> junctions;
};

// Throws ParameterCollapse carrying the samples up to the failing junction.
InducedRun run_induced(const ModelParams& params, const RuleSchedule& schedule,
                       CarryOver carry = CarryOver::occupations);

}  // namespace twomode
