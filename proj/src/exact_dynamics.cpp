#include "twomode/exact_dynamics.h"

#include <cmath>
#include <numbers>
#include <string>

#include "twomode/errors.h"

namespace twomode {

void ModelParams::validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(omega1_0) || omega1_0 <= 0.0)
    throw InvalidArgument("omega1_0 must be a positive finite number");
  if (!finite(omega2_0) || omega2_0 <= 0.0)
    throw InvalidArgument("omega2_0 must be a positive finite number");
  if (!finite(lambda) || lambda < 0.0)
    throw InvalidArgument("lambda must be a finite number >= 0");
  if (!finite(alpha1) || !finite(alpha2)) throw InvalidArgument("alpha1, alpha2 must be finite");
  if ((n1 != 0 && n1 != 1) || (n2 != 0 && n2 != 1))
    throw InvalidArgument("occupation labels n1, n2 must be 0 or 1");
}

double frequency_gap(double omega1, double omega2, double lambda) {
  return std::hypot(omega1 - omega2, 2.0 * lambda);
}

ExactPropagator::ExactPropagator(double omega1, double omega2, double lambda)
    : omega1_(omega1), omega2_(omega2), lambda_(lambda),
      delta_(frequency_gap(omega1, omega2, lambda)) {
  if (!(delta_ > 0.0) || !std::isfinite(delta_))
    throw DegenerateParameters("frequency gap delta vanishes (omega1 = omega2 = " +
                               std::to_string(omega1) + ", lambda = 0)");
}

double ExactPropagator::period() const { return 2.0 * std::numbers::pi / delta_; }

cplx ExactPropagator::phi_plus(double t) const {
  return 2.0 * std::polar(1.0, -t * (omega1_ + omega2_) / 2.0) * std::cos(delta_ * t / 2.0);
}

cplx ExactPropagator::phi_minus(double t) const {
  return cplx(0.0, -2.0) * std::polar(1.0, -t * (omega1_ + omega2_) / 2.0) *
         std::sin(delta_ * t / 2.0);
}

OperatorPair ExactPropagator::propagate(const OperatorPair& start, double s) const {
  const cplx pp = phi_plus(s);
  const cplx pm = phi_minus(s);
  const double inv = 1.0 / (2.0 * delta_);
  const double diff = omega1_ - omega2_;

  const cplx self1 = inv * (diff * pm + delta_ * pp);
  const cplx self2 = inv * (-diff * pm + delta_ * pp);
  const cplx cross = inv * 2.0 * lambda_ * pm;

  OperatorPair out;
  out.a1 = start.a1 * self1 + start.a2 * cross;
  out.a2 = start.a2 * self2 + start.a1 * cross;
  return out;
}

std::pair<double, double> ExactPropagator::mean_values(double occ1, double occ2, double s) const {
  const double d2 = delta_ * delta_;
  const double diff2 = (omega1_ - omega2_) * (omega1_ - omega2_);
  const double mix = 4.0 * lambda_ * lambda_ / d2;
  const double c2 = std::cos(delta_ * s / 2.0) * std::cos(delta_ * s / 2.0);
  const double s2 = std::sin(delta_ * s / 2.0) * std::sin(delta_ * s / 2.0);
  const double n1 = occ1 * diff2 / d2 + mix * (occ1 * c2 + occ2 * s2);
  const double n2 = occ2 * diff2 / d2 + mix * (occ2 * c2 + occ1 * s2);
  return {n1, n2};
}

OperatorMatrix build_hamiltonian(double omega1, double omega2, double lambda) {
  const auto ops = build_operators();
  const OperatorMatrix a1d = ops.a1.adjoint();
  const OperatorMatrix a2d = ops.a2.adjoint();
  return omega1 * (a1d * ops.a1) + omega2 * (a2d * ops.a2) + lambda * (a1d * ops.a2 + a2d * ops.a1);
}

OperatorPair exact_operators(const ModelParams& params, double t) {
  const ExactPropagator prop(params.omega1_0, params.omega2_0, params.lambda);
  return prop.propagate(build_operators(), t);
}

std::pair<double, double> exact_mean_values(const ModelParams& params, double t) {
  const ExactPropagator prop(params.omega1_0, params.omega2_0, params.lambda);
  return prop.mean_values(params.n1, params.n2, t);
}

double oscillation_period(const ModelParams& params) {
  return ExactPropagator(params.omega1_0, params.omega2_0, params.lambda).period();
}

}  // namespace twomode
