// Continuous-rule dynamics: the inertia parameters follow the instantaneous
// rate of change of the occupations,
//
//   w1 = w1_0 (1 + alpha1 dn1/dt),   w2 = w2_0 (1 + alpha2 dn2/dt),
//
// with dn1/dt = -dn2/dt = i lambda <phi, (a1^dag a2 - a2^dag a1) phi>. The
// resulting nonlinear operator ODE is integrated with fixed-step RK4 on the
// stacked pair of 4x4 matrices.
#pragma once

#include <cstddef>
#include <functional>
#include <optional>

#include "twomode/exact_dynamics.h"
#include "twomode/fermion_algebra.h"
#include "twomode/trajectory.h"

namespace twomode {

inline constexpr double kDefaultStep = 1e-3;
inline constexpr double kMaxStep = 0.05;
inline constexpr double kDivergenceBound = 1e3;

// Stop the run as soon as the trailing window of n1 has settled.
struct SettleStop {
  double amp_tol = 1e-3;
  double window = 100.0;

  bool operator==(const SettleStop&) const = default;
};

struct IntegratorConfig {
  double step = kDefaultStep;
  double horizon = 1000.0;
  std::size_t sample_stride = 100;  // record every k-th step
  std::optional<SettleStop> stop_when_settled;

  // step in (0, 0.05], horizon >= 10 free periods of the initial parameters.
  void validate(const ModelParams& params) const;

  bool operator==(const IntegratorConfig&) const = default;
};

// 2000 when alpha1 * alpha2 < 0 (slow approach), 1000 otherwise.
double default_horizon(const ModelParams& params);
IntegratorConfig default_integrator(const ModelParams& params);

// <state, (a1^dag a2 - a2^dag a1) state>; purely imaginary.
cplx coupling_term(const OperatorMatrix& a1, const OperatorMatrix& a2, const FockState& state);

struct EffectiveInertia {
  double omega1;
  double omega2;
};

// w1_0 (1 + i alpha1 lambda C), w2_0 (1 - i alpha2 lambda C) with C the coupling
// term. Only Im C enters; the real part is round-off and is dropped so the
// instantaneous generator stays Hermitian.
EffectiveInertia effective_inertia(const ModelParams& params, cplx coupling);

// Time derivatives of (a1, a2).
OperatorPair rhs(const OperatorPair& ops, const ModelParams& params, const FockState& state);

// Called at every recorded sample with the current operators.
using SampleObserver = std::function<void(double t, const OperatorPair& ops)>;

// Throws IntegrationDiverged (with the samples so far) if any entry exceeds 1e3.
Trajectory integrate_generalized(const ModelParams& params, const IntegratorConfig& config,
                                 const SampleObserver& observer = {});

}  // namespace twomode
