#include <doctest.h>

#include <array>
#include <random>

#include "twomode/errors.h"
#include "twomode/fermion_algebra.h"

using namespace twomode;

namespace {

OperatorMatrix matrix_with(std::initializer_list<std::pair<std::pair<int, int>, double>> entries) {
  OperatorMatrix m;
  for (const auto& [rc, v] : entries) m(static_cast<std::size_t>(rc.first), static_cast<std::size_t>(rc.second)) = v;
  return m;
}

}  // namespace

TEST_CASE("annihilators have the expected entries") {
  const auto ops = build_operators();
  CHECK(max_abs_diff(ops.a1, matrix_with({{{0, 1}, 1.0}, {{2, 3}, 1.0}})) == 0.0);
  CHECK(max_abs_diff(ops.a2, matrix_with({{{0, 2}, 1.0}, {{1, 3}, -1.0}})) == 0.0);
}

TEST_CASE("all anticommutation identities hold") {
  const auto ops = build_operators();
  CHECK(car_violation(ops) <= kAlgebraTolerance);
  CHECK(approx_equal(anticommutator(ops.a1, ops.a1.adjoint()), OperatorMatrix::identity()));
  CHECK(approx_equal(anticommutator(ops.a2, ops.a2.adjoint()), OperatorMatrix::identity()));
  CHECK(approx_equal(anticommutator(ops.a1, ops.a2), OperatorMatrix::zero()));
  CHECK(approx_equal(anticommutator(ops.a1, ops.a1), OperatorMatrix::zero()));
  CHECK(approx_equal(anticommutator(ops.a1, ops.a2.adjoint()), OperatorMatrix::zero()));
}

TEST_CASE("car_violation notices a broken sign") {
  auto ops = build_operators();
  ops.a2(1, 3) = 1.0;
  CHECK(car_violation(ops) == doctest::Approx(2.0));
}

TEST_CASE("squares of annihilators and creators vanish exactly") {
  const auto ops = build_operators();
  for (const auto* a : {&ops.a1, &ops.a2}) {
    CHECK(((*a) * (*a)).max_abs() == 0.0);
    CHECK((a->adjoint() * a->adjoint()).max_abs() == 0.0);
  }
}

TEST_CASE("number operators have the basis occupations as eigenvalues") {
  const auto ops = build_operators();
  const auto n1 = number_operator(ops.a1);
  const auto n2 = number_operator(ops.a2);
  for (int o1 : {0, 1})
    for (int o2 : {0, 1}) {
      const auto phi = FockState::basis(o1, o2);
      const auto v1 = apply_operator(n1, phi.coefficients());
      const auto v2 = apply_operator(n2, phi.coefficients());
      for (std::size_t i = 0; i < kDim; ++i) {
        CHECK(std::abs(v1[i] - static_cast<double>(o1) * phi[i]) == 0.0);
        CHECK(std::abs(v2[i] - static_cast<double>(o2) * phi[i]) == 0.0);
      }
    }
  CHECK(expectation(FockState::basis(1, 0), n1) == cplx(1.0));
  CHECK(expectation(FockState::basis(1, 0), n2) == cplx(0.0));
}

TEST_CASE("basis order is 00, 10, 01, 11") {
  CHECK(FockState::basis_index(0, 0) == 0);
  CHECK(FockState::basis_index(1, 0) == 1);
  CHECK(FockState::basis_index(0, 1) == 2);
  CHECK(FockState::basis_index(1, 1) == 3);
  // creators build the basis from the vacuum
  const auto ops = build_operators();
  const auto vac = FockState::basis(0, 0).coefficients();
  const auto phi10 = apply_operator(ops.a1.adjoint(), vac);
  const auto phi11 = apply_operator(ops.a1.adjoint(), apply_operator(ops.a2.adjoint(), vac));
  CHECK(phi10[1] == cplx(1.0));
  CHECK(phi11[3] == cplx(1.0));
}

TEST_CASE("hopping observable is anti-Hermitian with imaginary expectations") {
  const auto ops = build_operators();
  const auto x = ops.a1.adjoint() * ops.a2 - ops.a2.adjoint() * ops.a1;
  CHECK(approx_equal(x.adjoint(), -1.0 * x));
  CHECK(std::abs(expectation(FockState::basis(1, 0), x)) == 0.0);

  std::mt19937 rng(7);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 50; ++trial) {
    FockState::Coefficients c;
    double norm = 0.0;
    for (auto& z : c) {
      z = cplx(g(rng), g(rng));
      norm += std::norm(z);
    }
    for (auto& z : c) z /= std::sqrt(norm);
    CHECK(std::abs(expectation(FockState(c), x).real()) < 1e-12);
  }
}

TEST_CASE("non-normalized states are rejected") {
  CHECK_THROWS_AS(FockState(FockState::Coefficients{cplx(1.0), cplx(1.0), cplx(), cplx()}), InvalidArgument);
  CHECK_THROWS_AS(FockState(FockState::Coefficients{}), InvalidArgument);
  CHECK_THROWS_AS(FockState::basis(2, 0), InvalidArgument);
  CHECK_NOTHROW(FockState(FockState::Coefficients{cplx(0.6), cplx(0.0, 0.8), cplx(), cplx()}));
}

TEST_CASE("matrix arithmetic") {
  const auto ops = build_operators();
  const auto id = OperatorMatrix::identity();
  CHECK(approx_equal(id * ops.a1, ops.a1));
  CHECK(approx_equal(commutator(ops.a1, ops.a1), OperatorMatrix::zero()));
  CHECK(ops.a1.is_finite());
  auto bad = ops.a1;
  bad(0, 0) = cplx(std::nan(""), 0.0);
  CHECK_FALSE(bad.is_finite());
}
