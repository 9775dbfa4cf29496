#include "twomode/generalized_dynamics.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "twomode/errors.h"

namespace twomode {

void IntegratorConfig::validate(const ModelParams& params) const {
  if (!std::isfinite(step) || step <= 0.0 || step > kMaxStep)
    throw InvalidArgument("integrator step must lie in (0, 0.05]");
  if (sample_stride == 0) throw InvalidArgument("sample_stride must be positive");
  const double min_horizon = 10.0 * oscillation_period(params);
  if (!std::isfinite(horizon) || horizon < min_horizon) {
    std::ostringstream msg;
    msg << "integrator horizon must cover 10 free periods (>= " << min_horizon << ")";
    throw InvalidArgument(msg.str());
  }
  if (stop_when_settled &&
      (!(stop_when_settled->amp_tol > 0.0) || !(stop_when_settled->window > 0.0)))
    throw InvalidArgument("settle stop needs positive amp_tol and window");
}

double default_horizon(const ModelParams& params) {
  return params.alpha1 * params.alpha2 < 0.0 ? 2000.0 : 1000.0;
}

IntegratorConfig default_integrator(const ModelParams& params) {
  IntegratorConfig config;
  config.horizon = default_horizon(params);
  return config;
}

namespace {

double squared_norm(const FockState::Coefficients& v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return s;
}

cplx inner(const FockState::Coefficients& u, const FockState::Coefficients& v) {
  cplx s{};
  for (std::size_t i = 0; i < kDim; ++i) s += std::conj(u[i]) * v[i];
  return s;
}

// d = i (lambda other - omega self), entrywise.
void heisenberg_row(const OperatorMatrix& self, const OperatorMatrix& other, double omega,
                    double lambda, OperatorMatrix& d) {
  for (std::size_t r = 0; r < kDim; ++r)
    for (std::size_t c = 0; c < kDim; ++c) {
      const cplx v = lambda * other(r, c) - omega * self(r, c);
      d(r, c) = cplx(-v.imag(), v.real());
    }
}


// The stepping loop works on the pair flattened to 32 entries (a1 then a2),
// which keeps the RK4 stages free of temporaries.
constexpr std::size_t kBlock = 2 * kDim * kDim;
using Block = std::array<cplx, kBlock>;

Block flatten(const OperatorPair& ops) {
  Block b;
  std::copy(ops.a1.entries().begin(), ops.a1.entries().end(), b.begin());
  std::copy(ops.a2.entries().begin(), ops.a2.entries().end(), b.begin() + kDim * kDim);
  return b;
}

OperatorPair unflatten(const Block& b) {
  OperatorPair ops;
  for (std::size_t r = 0; r < kDim; ++r)
    for (std::size_t c = 0; c < kDim; ++c) {
      ops.a1(r, c) = b[r * kDim + c];
      ops.a2(r, c) = b[kDim * kDim + r * kDim + c];
    }
  return ops;
}

struct Probe {
  double n1, n2, coupling_im;
};

class RhsKernel {
 public:
  RhsKernel(const ModelParams& params, const FockState& state)
      : params_(params), psi_(state.coefficients()) {}

  Probe probe(const Block& y) const {
    FockState::Coefficients v1{}, v2{};
    for (std::size_t r = 0; r < kDim; ++r)
      for (std::size_t c = 0; c < kDim; ++c) {
        v1[r] += y[r * kDim + c] * psi_[c];
        v2[r] += y[kDim * kDim + r * kDim + c] * psi_[c];
      }
    // C = z - conj(z) with z = <a1 psi, a2 psi>
    const cplx z = inner(v1, v2);
    return {squared_norm(v1), squared_norm(v2), 2.0 * z.imag()};
  }

  void deriv(const Block& y, Block& d) const {
    const auto w = effective_inertia(params_, cplx(0.0, probe(y).coupling_im));
    const double lambda = params_.lambda;
    constexpr std::size_t m = kDim * kDim;
    for (std::size_t k = 0; k < m; ++k) {
      const cplx v1 = lambda * y[m + k] - w.omega1 * y[k];
      const cplx v2 = lambda * y[k] - w.omega2 * y[m + k];
      d[k] = cplx(-v1.imag(), v1.real());
      d[m + k] = cplx(-v2.imag(), v2.real());
    }
  }

 private:
  const ModelParams& params_;
  FockState::Coefficients psi_;
};

}  // namespace

cplx coupling_term(const OperatorMatrix& a1, const OperatorMatrix& a2, const FockState& state) {
  const auto v1 = apply_operator(a1, state.coefficients());
  const auto v2 = apply_operator(a2, state.coefficients());
  // <a1 psi, a2 psi> - <a2 psi, a1 psi>
  const cplx z = inner(v1, v2);
  return z - std::conj(z);
}

EffectiveInertia effective_inertia(const ModelParams& params, cplx coupling) {
  const double im = coupling.imag();
  // i * (i im) = -im
  return {params.omega1_0 * (1.0 - params.alpha1 * params.lambda * im),
          params.omega2_0 * (1.0 + params.alpha2 * params.lambda * im)};
}

OperatorPair rhs(const OperatorPair& ops, const ModelParams& params, const FockState& state) {
  const auto w = effective_inertia(params, coupling_term(ops.a1, ops.a2, state));
  OperatorPair d;
  heisenberg_row(ops.a1, ops.a2, w.omega1, params.lambda, d.a1);
  heisenberg_row(ops.a2, ops.a1, w.omega2, params.lambda, d.a2);
  return d;
}

Trajectory integrate_generalized(const ModelParams& params, const IntegratorConfig& config,
                                 const SampleObserver& observer) {
  params.validate();
  config.validate(params);

  const FockState state = params.initial_state();
  const double h = config.step;
  const auto steps = static_cast<std::size_t>(std::llround(config.horizon / h));
  const std::size_t stride = config.sample_stride;

  Trajectory traj;
  traj.reserve(steps / stride + 1);

  // Settle check cadence: every tenth of a window.
  std::size_t check_every = 1;
  std::size_t window_samples = 0;
  if (config.stop_when_settled) {
    const double sample_dt = h * static_cast<double>(stride);
    window_samples =
        static_cast<std::size_t>(std::ceil(config.stop_when_settled->window / sample_dt));
    check_every = std::max<std::size_t>(1, window_samples / 10);
  }

  RhsKernel kernel(params, state);
  Block y = flatten(build_operators());
  Block k1, k2, k3, k4, tmp;

  auto record = [&](std::size_t i) {
    const double t = h * static_cast<double>(i);
    const Probe p = kernel.probe(y);
    const auto w = effective_inertia(params, cplx(0.0, p.coupling_im));
    traj.push(t, p.n1, p.n2, w.omega1, w.omega2, p.coupling_im);
    if (observer) observer(t, unflatten(y));

    double bound = 0.0;
    for (const auto& z : y) {
      const double m = std::abs(z);
      if (std::isnan(m) || m > bound) bound = m;  // a NaN sticks
    }
    if (!(bound <= kDivergenceBound)) {
      std::ostringstream msg;
      msg << "integration diverged at t = " << t << " (max |entry| = " << bound << ")";
      throw IntegrationDiverged(msg.str(), std::move(traj));
    }
  };

  auto settled = [&]() {
    const auto& stop = *config.stop_when_settled;
    const std::size_t n = traj.size();
    if (n <= window_samples || traj.times.back() < 2.0 * stop.window) return false;
    if ((n - 1) % check_every != 0) return false;
    const auto first = traj.n1_values.end() - static_cast<std::ptrdiff_t>(window_samples + 1);
    const auto [lo, hi] = std::minmax_element(first, traj.n1_values.end());
    return *hi - *lo < stop.amp_tol;
  };

  auto stage = [&](const Block& k, double scale) {
    for (std::size_t j = 0; j < kBlock; ++j) tmp[j] = y[j] + scale * k[j];
  };

  record(0);
  for (std::size_t i = 1; i <= steps; ++i) {
    kernel.deriv(y, k1);
    stage(k1, 0.5 * h);
    kernel.deriv(tmp, k2);
    stage(k2, 0.5 * h);
    kernel.deriv(tmp, k3);
    stage(k3, h);
    kernel.deriv(tmp, k4);
    for (std::size_t j = 0; j < kBlock; ++j)
      y[j] += (h / 6.0) * (k1[j] + 2.0 * (k2[j] + k3[j]) + k4[j]);

    if (i % stride == 0) {
      record(i);
      if (config.stop_when_settled && settled()) break;
    }
  }
  return traj;
}

}  // namespace twomode
