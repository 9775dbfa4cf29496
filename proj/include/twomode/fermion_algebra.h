// Two-mode fermionic operator algebra as explicit 4x4 complex matrices.
//
// Fock basis order is (phi_00, phi_10, phi_01, phi_11), with
// phi_{n1,n2} = (a1^dag)^n1 (a2^dag)^n2 phi_00. The Jordan-Wigner sign sits on
// a2: a2 phi_11 = -phi_10.
#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>

namespace twomode {

using cplx = std::complex<double>;

inline constexpr std::size_t kDim = 4;
inline constexpr double kAlgebraTolerance = 1e-12;

class OperatorMatrix {
 public:
  OperatorMatrix() { entries_.fill(cplx{}); }

  static OperatorMatrix identity();
  static OperatorMatrix zero() { return {}; }

  cplx& operator()(std::size_t row, std::size_t col) { return entries_[row * kDim + col]; }
  const cplx& operator()(std::size_t row, std::size_t col) const {
    return entries_[row * kDim + col];
  }

  std::span<const cplx, kDim * kDim> entries() const { return entries_; }

  OperatorMatrix adjoint() const;
  bool is_finite() const;
  double max_abs() const;

  OperatorMatrix& operator+=(const OperatorMatrix& other);
  OperatorMatrix& operator-=(const OperatorMatrix& other);
  OperatorMatrix& operator*=(cplx scale);
  OperatorMatrix& operator*=(double scale);

  friend OperatorMatrix operator+(OperatorMatrix lhs, const OperatorMatrix& rhs) { return lhs += rhs; }
  friend OperatorMatrix operator-(OperatorMatrix lhs, const OperatorMatrix& rhs) { return lhs -= rhs; }
  friend OperatorMatrix operator*(OperatorMatrix lhs, cplx s) { return lhs *= s; }
  friend OperatorMatrix operator*(cplx s, OperatorMatrix rhs) { return rhs *= s; }
  friend OperatorMatrix operator*(OperatorMatrix lhs, double s) { return lhs *= s; }
  friend OperatorMatrix operator*(double s, OperatorMatrix rhs) { return rhs *= s; }
  friend OperatorMatrix operator*(const OperatorMatrix& lhs, const OperatorMatrix& rhs);

 private:
  std::array<cplx, kDim * kDim> entries_;
};

// Max entrywise |A - B|.
double max_abs_diff(const OperatorMatrix& lhs, const OperatorMatrix& rhs);
bool approx_equal(const OperatorMatrix& lhs, const OperatorMatrix& rhs,
                  double tol = kAlgebraTolerance);

// {A, B} = AB + BA
OperatorMatrix anticommutator(const OperatorMatrix& lhs, const OperatorMatrix& rhs);
OperatorMatrix commutator(const OperatorMatrix& lhs, const OperatorMatrix& rhs);

struct OperatorPair {
  OperatorMatrix a1;
  OperatorMatrix a2;

  OperatorPair& operator+=(const OperatorPair& o) {
    a1 += o.a1;
    a2 += o.a2;
    return *this;
  }
  OperatorPair& operator*=(double s) {
    a1 *= s;
    a2 *= s;
    return *this;
  }
  friend OperatorPair operator+(OperatorPair l, const OperatorPair& r) { return l += r; }
  friend OperatorPair operator*(OperatorPair l, double s) { return l *= s; }
  friend OperatorPair operator*(double s, OperatorPair r) { return r *= s; }
};

// Largest entrywise violation over the ten anticommutation identities
// {a_j, a_k^dag} = delta_jk I, {a_j, a_k} = 0, {a_j^dag, a_k^dag} = 0.
double car_violation(const OperatorPair& ops);

// The annihilation operators a1(0), a2(0) in the fixed basis order.
OperatorPair build_operators();

// a^dag a
OperatorMatrix number_operator(const OperatorMatrix& annihilator);

class FockState {
 public:
  using Coefficients = std::array<cplx, kDim>;

  // Throws InvalidArgument unless the vector has unit norm within kAlgebraTolerance.
  explicit FockState(const Coefficients& coefficients);

  // phi_{n1,n2}; n1, n2 in {0, 1}.
  static FockState basis(int n1, int n2);
  static std::size_t basis_index(int n1, int n2);

  const Coefficients& coefficients() const { return coefficients_; }
  const cplx& operator[](std::size_t i) const { return coefficients_[i]; }

  double norm() const;

 private:
  Coefficients coefficients_;
};

FockState::Coefficients apply_operator(const OperatorMatrix& op, const FockState::Coefficients& v);

// <state, X state>
cplx expectation(const FockState& state, const OperatorMatrix& op);

}  // namespace twomode
