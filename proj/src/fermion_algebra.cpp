#include "twomode/fermion_algebra.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "twomode/errors.h"

namespace twomode {

OperatorMatrix OperatorMatrix::identity() {
  OperatorMatrix m;
  for (std::size_t i = 0; i < kDim; ++i) m(i, i) = 1.0;
  return m;
}

OperatorMatrix OperatorMatrix::adjoint() const {
  OperatorMatrix out;
  for (std::size_t r = 0; r < kDim; ++r)
    for (std::size_t c = 0; c < kDim; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

bool OperatorMatrix::is_finite() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const cplx& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

double OperatorMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& z : entries_) m = std::max(m, std::abs(z));
  return m;
}

OperatorMatrix& OperatorMatrix::operator+=(const OperatorMatrix& other) {
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
  return *this;
}

OperatorMatrix& OperatorMatrix::operator-=(const OperatorMatrix& other) {
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= other.entries_[i];
  return *this;
}

OperatorMatrix& OperatorMatrix::operator*=(cplx scale) {
  for (auto& z : entries_) z *= scale;
  return *this;
}

OperatorMatrix& OperatorMatrix::operator*=(double scale) {
  for (auto& z : entries_) z *= scale;
  return *this;
}

OperatorMatrix operator*(const OperatorMatrix& lhs, const OperatorMatrix& rhs) {
  OperatorMatrix out;
  for (std::size_t r = 0; r < kDim; ++r)
    for (std::size_t k = 0; k < kDim; ++k) {
      const cplx l = lhs(r, k);
      if (l == cplx{}) continue;
      for (std::size_t c = 0; c < kDim; ++c) out(r, c) += l * rhs(k, c);
    }
  return out;
}

double max_abs_diff(const OperatorMatrix& lhs, const OperatorMatrix& rhs) {
  double m = 0.0;
  for (std::size_t r = 0; r < kDim; ++r)
    for (std::size_t c = 0; c < kDim; ++c) m = std::max(m, std::abs(lhs(r, c) - rhs(r, c)));
  return m;
}

bool approx_equal(const OperatorMatrix& lhs, const OperatorMatrix& rhs, double tol) {
  return max_abs_diff(lhs, rhs) <= tol;
}

OperatorMatrix anticommutator(const OperatorMatrix& lhs, const OperatorMatrix& rhs) {
  return lhs * rhs + rhs * lhs;
}

OperatorMatrix commutator(const OperatorMatrix& lhs, const OperatorMatrix& rhs) {
  return lhs * rhs - rhs * lhs;
}

double car_violation(const OperatorPair& ops) {
  const OperatorMatrix* a[2] = {&ops.a1, &ops.a2};
  const OperatorMatrix ad[2] = {ops.a1.adjoint(), ops.a2.adjoint()};
  const OperatorMatrix zero = OperatorMatrix::zero();
  const OperatorMatrix id = OperatorMatrix::identity();
  double worst = 0.0;
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) {
      worst = std::max(worst, max_abs_diff(anticommutator(*a[j], ad[k]), j == k ? id : zero));
      if (k < j) continue;
      worst = std::max(worst, max_abs_diff(anticommutator(*a[j], *a[k]), zero));
      worst = std::max(worst, max_abs_diff(anticommutator(ad[j], ad[k]), zero));
    }
  return worst;
}

OperatorPair build_operators() {
  OperatorPair ops;
  // a1: phi_10 -> phi_00, phi_11 -> phi_01
  ops.a1(0, 1) = 1.0;
  ops.a1(2, 3) = 1.0;
  // a2: phi_01 -> phi_00, phi_11 -> -phi_10
  ops.a2(0, 2) = 1.0;
  ops.a2(1, 3) = -1.0;
  return ops;
}

OperatorMatrix number_operator(const OperatorMatrix& annihilator) {
  return annihilator.adjoint() * annihilator;
}

FockState::FockState(const Coefficients& coefficients) : coefficients_(coefficients) {
  const double n = norm();
  if (!std::isfinite(n) || std::abs(n - 1.0) > kAlgebraTolerance)
    throw InvalidArgument("FockState: state is not normalized (norm = " + std::to_string(n) +
                          ")");
}

std::size_t FockState::basis_index(int n1, int n2) {
  if ((n1 != 0 && n1 != 1) || (n2 != 0 && n2 != 1))
    throw InvalidArgument("occupation labels must be 0 or 1");
  return static_cast<std::size_t>(n1 + 2 * n2);
}

FockState FockState::basis(int n1, int n2) {
  Coefficients v{};
  v[basis_index(n1, n2)] = 1.0;
  return FockState(v);
}

double FockState::norm() const {
  double s = 0.0;
  for (const auto& z : coefficients_) s += std::norm(z);
  return std::sqrt(s);
}

FockState::Coefficients apply_operator(const OperatorMatrix& op, const FockState::Coefficients& v) {
  FockState::Coefficients out{};
  for (std::size_t r = 0; r < kDim; ++r)
    for (std::size_t c = 0; c < kDim; ++c) out[r] += op(r, c) * v[c];
  return out;
}

cplx expectation(const FockState& state, const OperatorMatrix& op) {
  const auto image = apply_operator(op, state.coefficients());
  cplx sum{};
  for (std::size_t i = 0; i < kDim; ++i) sum += std::conj(state[i]) * image[i];
  return sum;
}

}  // namespace twomode
