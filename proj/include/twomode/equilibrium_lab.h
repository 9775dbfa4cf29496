// Parameter sweeps over the initial inertia gap, tanh fits of the resulting
// equilibria, and the closed-form tanh laws.
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "twomode/equilibrium_detector.h"
#include "twomode/errors.h"
#include "twomode/exact_dynamics.h"
#include "twomode/generalized_dynamics.h"

namespace twomode {

// 0.1, 0.15, ..., 1.9
std::vector<double> default_omega2_grid();

struct SweepSpec {
  double omega1_0 = 1.0;
  std::vector<double> omega2_grid = default_omega2_grid();
  double lambda = 0.1;
  double alpha1 = 0.0;
  double alpha2 = -1.0;
  int n1 = 1;
  int n2 = 0;

  // Strictly increasing positive grid, lambda > 0.
  void validate() const;
  ModelParams point(double omega2) const;

  bool operator==(const SweepSpec&) const = default;
};

enum class PointStatus { converged, periodic, indeterminate, error };

std::string_view to_string(PointStatus status);

struct SweepRecord {
  double x = 0.0;  // omega1_0 - omega2_0
  double omega2_0 = 0.0;
  PointStatus status = PointStatus::error;
  std::optional<double> n1_eq;
  std::optional<double> settle_time;
  std::optional<double> time_average;
  double drift = 0.0;  // n1 + n2 conservation drift of the run
  std::string message;  // error text, if any
};

struct DetectorSettings {
  double amp_tol = kDefaultAmpTol;
  double window = kDefaultWindow;
  // Stop each run once settled instead of running the full horizon.
  bool stop_early = true;
};

// One run per grid point (threads > 1 fans them out), records sorted by x.
// Failing points are kept with PointStatus::error.
std::vector<SweepRecord> sweep_equilibria(const SweepSpec& spec, const IntegratorConfig& config,
                                          const DetectorSettings& detector = {},
                                          unsigned threads = 0);

struct FitPoint {
  double x;
  double y;
};

// Converged records only.
std::vector<FitPoint> converged_points(std::span<const SweepRecord> records);

struct TanhFit {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;  // > 0; the sign is carried by b
  double rms_residual = 0.0;
  std::size_t n_points = 0;
  std::size_t iterations = 0;

  double operator()(double x) const;
};

class FitError : public Error {
 public:
  FitError(const std::string& what, TanhFit last) : Error(what), last_(last) {}
  const TanhFit& last_iterate() const { return last_; }

 private:
  TanhFit last_;
};

inline constexpr std::size_t kFitMaxIterations = 200;
inline constexpr double kFitUpdateTolerance = 1e-10;

// Least-squares fit of y = a + b tanh(c x) by damped Gauss-Newton. Needs
// >= 5 points with x of both signs. c_hint seeds c (1 / (2 lambda) is a good
// choice); otherwise c is seeded from the slope at x = 0.
TanhFit fit_tanh(std::span<const FitPoint> points, std::optional<double> c_hint = std::nullopt);

struct InverseLawFit {
  double slope = 0.0;
  double rms = 0.0;
};

struct LambdaC {
  double lambda;
  double c;
};

// Least-squares c = slope / lambda. Needs >= 5 positive lambdas.
InverseLawFit fit_c_vs_lambda(std::span<const LambdaC> fits);

// predict_equilibrium with alpha = (0, 0): no rule is active.
class NoPrediction : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// reduced_gap with lambda = 0.
class UndefinedGap : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

enum class LawVariant {
  unified,        // alpha1 alpha2 >= 0: sign factor sign(alpha1 + alpha2)
  opposite_sign,  // alpha1 alpha2 < 0: sign factor sign(alpha1) sign(w1_0 - w2_0)
};

std::string_view to_string(LawVariant variant);

struct TanhLaw {
  double mu = 0.0;
  double predicted_n1_eq = 0.0;
  LawVariant law_variant = LawVariant::unified;
  int sign_factor = 0;
  // Opposite-sign couplings with equal inertia never settle; 1/2 is then the
  // time average of the oscillation.
  bool periodic_case = false;
};

// (w1_0 - w2_0) / (2 lambda). Throws UndefinedGap for lambda = 0.
double reduced_gap(const ModelParams& params);

// n1_eq = (1 - s tanh(mu)) / 2. Throws NoPrediction for alpha = (0, 0), UndefinedGap
// for lambda = 0.
TanhLaw predict_equilibrium(const ModelParams& params);

}  // namespace twomode
