// Closed-form Heisenberg evolution under H = w1 n1 + w2 n2 + lambda (a1^dag a2 + a2^dag a1).
#pragma once

#include <utility>

#include "twomode/fermion_algebra.h"

namespace twomode {

struct ModelParams {
  double omega1_0 = 0.5;  // inertia of mode 1
  double omega2_0 = 0.7;  // inertia of mode 2
  double lambda = 0.1;    // interaction strength; 0 is the free case
  double alpha1 = 0.0;    // rule coupling of mode 1
  double alpha2 = 0.0;    // rule coupling of mode 2
  int n1 = 1;             // initial occupation labels in {0, 1}
  int n2 = 0;

  // Throws InvalidArgument on a violated invariant.
  void validate() const;
  FockState initial_state() const { return FockState::basis(n1, n2); }

  bool operator==(const ModelParams&) const = default;
};

// sqrt((w1 - w2)^2 + 4 lambda^2)
double frequency_gap(double omega1, double omega2, double lambda);

class ExactPropagator {
 public:
  // Throws DegenerateParameters when delta = 0.
  ExactPropagator(double omega1, double omega2, double lambda);

  double delta() const { return delta_; }
  double period() const;
  cplx phi_plus(double t) const;
  cplx phi_minus(double t) const;

  // Evolves the pair (a1(t0), a2(t0)) forward by s.
  OperatorPair propagate(const OperatorPair& start, double s) const;

  // Mean occupations after s starting from a diagonal state with occupations occ1, occ2.
  // Occupations may be fractional.
  std::pair<double, double> mean_values(double occ1, double occ2, double s) const;

 private:
  double omega1_;
  double omega2_;
  double lambda_;
  double delta_;
};

OperatorMatrix build_hamiltonian(double omega1, double omega2, double lambda);

OperatorPair exact_operators(const ModelParams& params, double t);

std::pair<double, double> exact_mean_values(const ModelParams& params, double t);

double oscillation_period(const ModelParams& params);

}  // namespace twomode
