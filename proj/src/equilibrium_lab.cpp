#include "twomode/equilibrium_lab.h"

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <sstream>
#include <thread>

namespace twomode {

std::vector<double> default_omega2_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 36; ++i) grid.push_back((10.0 + 5.0 * i) / 100.0);
  return grid;
}

void SweepSpec::validate() const {
  if (!std::isfinite(omega1_0) || omega1_0 <= 0.0)
    throw InvalidArgument("sweep: omega1_0 must be positive");
  if (!std::isfinite(lambda) || lambda <= 0.0) throw InvalidArgument("sweep: lambda must be > 0");
  if (omega2_grid.empty()) throw InvalidArgument("sweep: omega2 grid is empty");
  for (std::size_t i = 0; i < omega2_grid.size(); ++i) {
    if (!std::isfinite(omega2_grid[i]) || omega2_grid[i] <= 0.0)
      throw InvalidArgument("sweep: omega2 grid values must be positive");
    if (i > 0 && omega2_grid[i] <= omega2_grid[i - 1])
      throw InvalidArgument("sweep: omega2 grid must be strictly increasing");
  }
  point(omega2_grid.front()).validate();
}

ModelParams SweepSpec::point(double omega2) const {
  return {omega1_0, omega2, lambda, alpha1, alpha2, n1, n2};
}

std::string_view to_string(PointStatus status) {
  switch (status) {
    case PointStatus::converged:
      return "converged";
    case PointStatus::periodic:
      return "periodic";
    case PointStatus::indeterminate:
      return "indeterminate";
    case PointStatus::error:
      return "error";
  }
  return "error";
}

namespace {

SweepRecord run_point(const SweepSpec& spec, double omega2, const IntegratorConfig& base,
                      const DetectorSettings& detector) {
  SweepRecord rec;
  rec.omega2_0 = omega2;
  rec.x = spec.omega1_0 - omega2;
  IntegratorConfig config = base;
  if (detector.stop_early) config.stop_when_settled = SettleStop{detector.amp_tol, detector.window};
  try {
    const Trajectory traj = integrate_generalized(spec.point(omega2), config);
    rec.drift = traj.conservation_drift();
    const EquilibriumResult eq = detect_equilibrium(traj, detector.amp_tol, detector.window);
    rec.n1_eq = eq.n1_eq;
    rec.settle_time = eq.settle_time;
    rec.time_average = eq.time_average;
    switch (eq.status) {
      case EquilibriumStatus::converged:
        rec.status = PointStatus::converged;
        break;
      case EquilibriumStatus::periodic:
        rec.status = PointStatus::periodic;
        break;
      case EquilibriumStatus::indeterminate:
        rec.status = PointStatus::indeterminate;
        break;
    }
  } catch (const Error& e) {
    rec.status = PointStatus::error;
    rec.message = e.what();
  }
  return rec;
}

}  // namespace

std::vector<SweepRecord> sweep_equilibria(const SweepSpec& spec, const IntegratorConfig& config,
                                          const DetectorSettings& detector, unsigned threads) {
  spec.validate();
  const std::size_t n = spec.omega2_grid.size();
  std::vector<SweepRecord> records(n);

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++)
      records[i] = run_point(spec, spec.omega2_grid[i], config, detector);
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
  }

  std::sort(records.begin(), records.end(),
            [](const SweepRecord& l, const SweepRecord& r) { return l.x < r.x; });
  return records;
}

std::vector<FitPoint> converged_points(std::span<const SweepRecord> records) {
  std::vector<FitPoint> points;
  for (const auto& r : records)
    if (r.status == PointStatus::converged && r.n1_eq) points.push_back({r.x, *r.n1_eq});
  return points;
}

double TanhFit::operator()(double x) const { return a + b * std::tanh(c * x); }

namespace {

double sum_squares(std::span<const FitPoint> points, const Eigen::Vector3d& p) {
  double s = 0.0;
  for (const auto& pt : points) {
    const double r = pt.y - (p[0] + p[1] * std::tanh(p[2] * pt.x));
    s += r * r;
  }
  return s;
}

TanhFit make_fit(const Eigen::Vector3d& p, double sse, std::size_t n, std::size_t iterations) {
  TanhFit fit{p[0], p[1], p[2], std::sqrt(sse / static_cast<double>(n)), n, iterations};
  if (fit.c < 0.0) {
    fit.b = -fit.b;
    fit.c = -fit.c;
  }
  return fit;
}

}  // namespace

TanhFit fit_tanh(std::span<const FitPoint> points, std::optional<double> c_hint) {
  const std::size_t n = points.size();
  if (n < 5) throw InvalidArgument("fit_tanh: need at least 5 points");
  const bool has_neg = std::any_of(points.begin(), points.end(), [](auto& p) { return p.x < 0.0; });
  const bool has_pos = std::any_of(points.begin(), points.end(), [](auto& p) { return p.x > 0.0; });
  if (!has_neg || !has_pos) throw InvalidArgument("fit_tanh: x values must span both signs");
  for (const auto& p : points)
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw InvalidArgument("fit_tanh: non-finite data point");

  // Seed: a from the mean, |b| from the half range, sign of b from the slope
  // across x = 0.
  double y_min = points[0].y, y_max = points[0].y, y_sum = 0.0;
  const FitPoint* left = nullptr;
  const FitPoint* right = nullptr;
  for (const auto& p : points) {
    y_min = std::min(y_min, p.y);
    y_max = std::max(y_max, p.y);
    y_sum += p.y;
    if (p.x < 0.0 && (!left || p.x > left->x)) left = &p;
    if (p.x > 0.0 && (!right || p.x < right->x)) right = &p;
  }
  const double slope0 = (right->y - left->y) / (right->x - left->x);
  const double half_range = 0.5 * (y_max - y_min);
  Eigen::Vector3d p(y_sum / static_cast<double>(n), std::copysign(half_range, slope0), 1.0);
  if (c_hint && *c_hint > 0.0) {
    p[2] = *c_hint;
  } else if (half_range > 0.0) {
    p[2] = std::max(std::abs(slope0) / half_range, 1e-3);
  }

  double sse = sum_squares(points, p);
  Eigen::MatrixXd jac(n, 3);
  Eigen::VectorXd res(n);
  for (std::size_t iter = 1; iter <= kFitMaxIterations; ++iter) {
    for (std::size_t i = 0; i < n; ++i) {
      const double th = std::tanh(p[2] * points[i].x);
      res[static_cast<Eigen::Index>(i)] = points[i].y - (p[0] + p[1] * th);
      jac.row(static_cast<Eigen::Index>(i)) << 1.0, th, p[1] * points[i].x * (1.0 - th * th);
    }
    const Eigen::Vector3d step = jac.colPivHouseholderQr().solve(res);
    if (!step.allFinite()) throw FitError("fit_tanh: singular Jacobian", make_fit(p, sse, n, iter));

    // Halve the step until the residual decreases.
    double scale = 1.0;
    Eigen::Vector3d trial = p + step;
    double trial_sse = sum_squares(points, trial);
    for (int k = 0; k < 40 && !(trial_sse <= sse); ++k) {
      scale *= 0.5;
      trial = p + scale * step;
      trial_sse = sum_squares(points, trial);
    }
    const double update = (scale * step).norm();
    if (trial_sse <= sse) {
      p = trial;
      sse = trial_sse;
    }
    if (update < kFitUpdateTolerance || step.norm() < kFitUpdateTolerance)
      return make_fit(p, sse, n, iter);
    if (!(trial_sse <= sse) && step.norm() < 1e-8) return make_fit(p, sse, n, iter);
  }
  std::ostringstream msg;
  msg << "fit_tanh: no convergence after " << kFitMaxIterations << " iterations";
  throw FitError(msg.str(), make_fit(p, sse, n, kFitMaxIterations));
}

InverseLawFit fit_c_vs_lambda(std::span<const LambdaC> fits) {
  if (fits.size() < 5) throw InvalidArgument("fit_c_vs_lambda: need at least 5 lambda values");
  double num = 0.0, den = 0.0;
  for (const auto& f : fits) {
    if (!std::isfinite(f.lambda) || f.lambda <= 0.0 || !std::isfinite(f.c))
      throw InvalidArgument("fit_c_vs_lambda: lambda must be positive and c finite");
    num += f.c / f.lambda;
    den += 1.0 / (f.lambda * f.lambda);
  }
  InverseLawFit out;
  out.slope = num / den;
  double ss = 0.0;
  for (const auto& f : fits) {
    const double r = f.c - out.slope / f.lambda;
    ss += r * r;
  }
  out.rms = std::sqrt(ss / static_cast<double>(fits.size()));
  return out;
}

std::string_view to_string(LawVariant variant) {
  return variant == LawVariant::unified ? "unified" : "opposite-sign";
}

double reduced_gap(const ModelParams& params) {
  if (!(params.lambda > 0.0)) throw UndefinedGap("reduced gap is undefined for lambda = 0");
  return (params.omega1_0 - params.omega2_0) / (2.0 * params.lambda);
}

namespace {

int sign(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

TanhLaw predict_equilibrium(const ModelParams& params) {
  if (params.alpha1 == 0.0 && params.alpha2 == 0.0)
    throw NoPrediction("no equilibrium law without an active rule (alpha = (0, 0))");
  TanhLaw law;
  law.mu = reduced_gap(params);
  if (params.alpha1 * params.alpha2 < 0.0) {
    law.law_variant = LawVariant::opposite_sign;
    law.sign_factor = sign(params.alpha1) * sign(params.omega1_0 - params.omega2_0);
    law.periodic_case = params.omega1_0 == params.omega2_0;
  } else {
    law.law_variant = LawVariant::unified;
    law.sign_factor = sign(params.alpha1 + params.alpha2);
  }
  law.predicted_n1_eq = 0.5 * (1.0 - law.sign_factor * std::tanh(law.mu));
  return law;
}

}  // namespace twomode
