#include "twomode/induced_dynamics.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>

#include "twomode/errors.h"

namespace twomode {

namespace {

constexpr double kIntegerSlack = 1e-9;
constexpr double kConservationSlack = 1e-9;

}  // namespace

RuleSchedule::RuleSchedule(double tau, double horizon, double sample_step)
    : tau_(tau), intervals_(0), sample_step_(sample_step > 0.0 ? sample_step : tau / 50.0) {
  if (!std::isfinite(tau) || tau <= 0.0) throw InvalidArgument("tau must be positive");
  if (!std::isfinite(horizon) || horizon <= 0.0) throw InvalidArgument("horizon must be positive");
  const double ratio = horizon / tau;
  const double n = std::round(ratio);
  if (n < 1.0 || std::abs(ratio - n) > kIntegerSlack * std::max(1.0, ratio)) {
    std::ostringstream msg;
    msg << "horizon / tau must be a positive integer (got " << ratio << ")";
    throw InvalidArgument(msg.str());
  }
  intervals_ = static_cast<std::size_t>(n);
  if (!std::isfinite(sample_step_) || sample_step_ > tau * (1.0 + kIntegerSlack))
    throw InvalidArgument("sample_step must be positive and not exceed tau");
}

RuleSchedule RuleSchedule::covering(double tau, double min_horizon, double sample_step) {
  if (!std::isfinite(tau) || tau <= 0.0) throw InvalidArgument("tau must be positive");
  const double n = std::max(1.0, std::ceil(min_horizon / tau - kIntegerSlack));
  return RuleSchedule(tau, n * tau, sample_step);
}

std::pair<double, double> apply_rule(double omega1, double omega2, double delta1, double delta2) {
  if (!std::isfinite(omega1) || !std::isfinite(omega2) || !std::isfinite(delta1) ||
      !std::isfinite(delta2))
    throw InvalidArgument("apply_rule: non-finite input");
  if (std::abs(delta1 + delta2) > kConservationSlack)
    throw InvalidArgument("apply_rule: delta1 + delta2 must vanish");
  const double w1 = omega1 * (1.0 + delta1);
  const double w2 = omega2 * (1.0 + delta2);
  if (w1 <= 0.0 || w2 <= 0.0) {
    std::ostringstream msg;
    msg << "rule drove an inertia parameter non-positive (omega1 = " << w1 << ", omega2 = " << w2
        << ")";
    throw ParameterCollapse(msg.str(), Trajectory{});
  }
  return {w1, w2};
}

namespace {

// Mean occupations inside one subinterval, from whatever state was carried over.
class SubintervalState {
 public:
  SubintervalState(const ModelParams& params, CarryOver carry)
      : carry_(carry), state_(params.initial_state()), ops_(build_operators()),
        occ1_(params.n1), occ2_(params.n2) {}

  std::pair<double, double> at(const ExactPropagator& prop, double s) const {
    if (carry_ == CarryOver::occupations) return prop.mean_values(occ1_, occ2_, s);
    const OperatorPair evolved = prop.propagate(ops_, s);
    return {expectation(state_, number_operator(evolved.a1)).real(),
            expectation(state_, number_operator(evolved.a2)).real()};
  }

  void advance(const ExactPropagator& prop, double tau) {
    if (carry_ == CarryOver::occupations) {
      std::tie(occ1_, occ2_) = prop.mean_values(occ1_, occ2_, tau);
    } else {
      ops_ = prop.propagate(ops_, tau);
    }
  }

 private:
  CarryOver carry_;
  FockState state_;
  OperatorPair ops_;
  double occ1_;
  double occ2_;
};

}  // namespace

InducedRun run_induced(const ModelParams& params, const RuleSchedule& schedule, CarryOver carry) {
  params.validate();

  const double tau = schedule.tau();
  const double dt = schedule.sample_step();
  const double horizon = schedule.horizon();
  const auto n_samples = static_cast<std::size_t>(std::floor(horizon / dt + 1e-9)) + 1;

  InducedRun run;
  run.trajectory.reserve(n_samples);
  run.junctions.reserve(schedule.intervals());

  double w1 = params.omega1_0;
  double w2 = params.omega2_0;
  SubintervalState state(params, carry);
  std::size_t sample = 0;

  for (std::size_t k = 0; k < schedule.intervals(); ++k) {
    const double start = tau * static_cast<double>(k);
    const bool last = k + 1 == schedule.intervals();
    const double end = start + tau;
    const ExactPropagator prop(w1, w2, params.lambda);

    for (; sample < n_samples; ++sample) {
      const double t = dt * static_cast<double>(sample);
      if (!last && t >= end - 1e-12 * end) break;
      const auto [n1, n2] = state.at(prop, t - start);
      run.trajectory.push(t, n1, n2, w1, w2, 0.0);
    }
    if (last) break;

    const auto [b1, b2] = state.at(prop, 0.0);
    const auto [e1, e2] = state.at(prop, tau);
    state.advance(prop, tau);
    try {
      std::tie(w1, w2) = apply_rule(w1, w2, e1 - b1, e2 - b2);
    } catch (const ParameterCollapse& e) {
      throw ParameterCollapse(e.what(), std::move(run.trajectory));
    }
    const auto [a1, a2] = state.at(ExactPropagator(w1, w2, params.lambda), 0.0);
    run.junctions.push_back({end, e1, e2, a1, a2, w1, w2});
  }
  return run;
}

}  // namespace twomode
