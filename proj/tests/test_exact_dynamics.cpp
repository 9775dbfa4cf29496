#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracle.h"
#include "twomode/errors.h"
#include "twomode/exact_dynamics.h"

using namespace twomode;

namespace {

ModelParams fig1() { return {0.5, 0.7, 0.1, 0.0, 0.0, 1, 0}; }

}  // namespace

TEST_CASE("free hamiltonian is diagonal") {
  const auto h = build_hamiltonian(0.5, 0.7, 0.0);
  const double diag[] = {0.0, 0.5, 0.7, 1.2};
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c)
      CHECK(std::abs(h(r, c) - cplx(r == c ? diag[r] : 0.0)) < 1e-15);
}

TEST_CASE("hamiltonian is Hermitian with split single-excitation block") {
  const auto h = build_hamiltonian(0.5, 0.7, 0.1);
  CHECK(approx_equal(h, h.adjoint()));
  Eigen::SelfAdjointEigenSolver<oracle::Mat> eig(oracle::to_eigen(h));
  const auto& ev = eig.eigenvalues();
  const double delta = std::sqrt(0.08);
  CHECK(ev[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(ev[1] == doctest::Approx(0.6 - delta / 2).epsilon(1e-12));
  CHECK(ev[2] == doctest::Approx(0.6 + delta / 2).epsilon(1e-12));
  CHECK(ev[3] == doctest::Approx(1.2).epsilon(1e-12));
  CHECK(frequency_gap(0.5, 0.7, 0.1) == doctest::Approx(0.282842712474619));
}

TEST_CASE("operators at t = 0 are the initial ones") {
  const auto ops = exact_operators(fig1(), 0.0);
  const auto ref = build_operators();
  CHECK(max_abs_diff(ops.a1, ref.a1) == 0.0);
  CHECK(max_abs_diff(ops.a2, ref.a2) == 0.0);
}

TEST_CASE("one period returns the operators up to a global phase") {
  const ExactPropagator prop(0.5, 0.7, 0.1);
  const double t = prop.period();
  // cos(pi) = -1 contributes the extra sign
  const cplx phase = -std::exp(cplx(0.0, -std::numbers::pi * 1.2 / prop.delta()));
  const auto ops = exact_operators(fig1(), t);
  const auto ref = build_operators();
  CHECK(max_abs_diff(ops.a1, phase * ref.a1) < 1e-12);
  CHECK(max_abs_diff(ops.a2, phase * ref.a2) < 1e-12);
}

TEST_CASE("evolved operators still satisfy the anticommutation relations") {
  CHECK(car_violation(exact_operators(fig1(), 3.7)) < 1e-12);
}

TEST_CASE("closed form agrees with brute-force propagation") {
  std::mt19937 rng(20240611);
  std::uniform_real_distribution<double> w(0.05, 2.0), lam(0.0, 1.0), time(0.0, 50.0);
  const auto ops0 = build_operators();
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const ModelParams p{w(rng), w(rng), lam(rng), 0.0, 0.0, 1, 0};
    const double t = time(rng);
    const auto got = exact_operators(p, t);
    worst = std::max(worst, max_abs_diff(got.a1, oracle::heisenberg(ops0.a1, p.omega1_0, p.omega2_0, p.lambda, t)));
    worst = std::max(worst, max_abs_diff(got.a2, oracle::heisenberg(ops0.a2, p.omega1_0, p.omega2_0, p.lambda, t)));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("mean values agree with expectations of evolved number operators") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> w(0.05, 2.0), lam(0.0, 1.0), time(0.0, 50.0);
  std::uniform_int_distribution<int> bit(0, 1);
  for (int i = 0; i < 200; ++i) {
    const ModelParams p{w(rng), w(rng), lam(rng), 0.0, 0.0, bit(rng), bit(rng)};
    const double t = time(rng);
    const auto ops = exact_operators(p, t);
    const auto [n1, n2] = exact_mean_values(p, t);
    const auto phi = p.initial_state();
    CHECK(std::abs(n1 - expectation(phi, number_operator(ops.a1)).real()) < 1e-10);
    CHECK(std::abs(n2 - expectation(phi, number_operator(ops.a2)).real()) < 1e-10);
    CHECK(std::abs(n1 + n2 - (p.n1 + p.n2)) < 1e-12);
    CHECK(n1 >= -1e-12);
    CHECK(n1 <= 1.0 + 1e-12);
    CHECK(n2 >= -1e-12);
    CHECK(n2 <= 1.0 + 1e-12);
  }
}

TEST_CASE("mean value special cases") {
  const ModelParams both{0.5, 0.7, 0.1, 0.0, 0.0, 1, 1};
  for (double t : {0.0, 1.3, 17.0}) {
    const auto [n1, n2] = exact_mean_values(both, t);
    CHECK(n1 == doctest::Approx(1.0));
    CHECK(n2 == doctest::Approx(1.0));
  }
  const double half = std::numbers::pi / frequency_gap(0.5, 0.7, 0.1);
  const auto [h1, h2] = exact_mean_values(fig1(), half);
  CHECK(h1 == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(h2 == doctest::Approx(0.5).epsilon(1e-12));

  const ModelParams free{0.5, 0.7, 0.0, 0.0, 0.0, 1, 0};
  for (double t : {0.0, 4.0, 40.0}) {
    const auto [f1, f2] = exact_mean_values(free, t);
    CHECK(f1 == 1.0);
    CHECK(f2 == 0.0);
  }
}

TEST_CASE("fractional occupations follow the same law") {
  const ExactPropagator prop(0.9, 0.4, 0.3);
  const auto [a1, a2] = prop.mean_values(0.3, 0.6, 2.0);
  CHECK(a1 + a2 == doctest::Approx(0.9));
  // mixture of the two pure cases
  const auto [p1, q1] = prop.mean_values(1.0, 0.0, 2.0);
  const auto [p2, q2] = prop.mean_values(0.0, 1.0, 2.0);
  CHECK(a1 == doctest::Approx(0.3 * p1 + 0.6 * p2));
  CHECK(a2 == doctest::Approx(0.3 * q1 + 0.6 * q2));
}

TEST_CASE("phi functions keep a constant norm") {
  const ExactPropagator prop(0.5, 0.7, 0.1);
  for (double t = 0.0; t < 60.0; t += 0.37)
    CHECK(std::norm(prop.phi_plus(t)) + std::norm(prop.phi_minus(t)) == doctest::Approx(4.0).epsilon(1e-13));
}

TEST_CASE("oscillation period") {
  CHECK(std::abs(oscillation_period(fig1()) - 22.2144) < 5e-4);
  CHECK(oscillation_period({0.5, 0.5, 0.1, 0, 0, 1, 0}) == doctest::Approx(10.0 * std::numbers::pi));
  CHECK(oscillation_period({1.0, 0.2, 0.3, 0, 0, 1, 0}) == doctest::Approx(2.0 * std::numbers::pi));
}

TEST_CASE("degenerate parameters are rejected") {
  const ModelParams p{0.5, 0.5, 0.0, 0, 0, 1, 0};
  CHECK_THROWS_AS(exact_operators(p, 1.0), DegenerateParameters);
  CHECK_THROWS_AS(exact_mean_values(p, 1.0), DegenerateParameters);
  CHECK_THROWS_AS(oscillation_period(p), DegenerateParameters);
  CHECK_THROWS_AS(ExactPropagator(0.3, 0.3, 0.0), DegenerateParameters);
}

TEST_CASE("parameter validation") {
  CHECK_NOTHROW(fig1().validate());
  CHECK_THROWS_AS((ModelParams{0.0, 0.7, 0.1, 0, 0, 1, 0}.validate()), InvalidArgument);
  CHECK_THROWS_AS((ModelParams{0.5, -0.7, 0.1, 0, 0, 1, 0}.validate()), InvalidArgument);
  CHECK_THROWS_AS((ModelParams{0.5, 0.7, -0.1, 0, 0, 1, 0}.validate()), InvalidArgument);
  CHECK_THROWS_AS((ModelParams{0.5, 0.7, 0.1, NAN, 0, 1, 0}.validate()), InvalidArgument);
  CHECK_THROWS_AS((ModelParams{0.5, 0.7, 0.1, 0, 0, 2, 0}.validate()), InvalidArgument);
}
