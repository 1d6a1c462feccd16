#pragma once

// Spin-1 (x) spin-1 operators for the NV- ground state with a 14N nucleus.
//
// Basis ordering is fixed everywhere: |m_s> (x) |m_I>, each factor ordered
// (+1, 0, -1), so index = 3 * slot(m_s) + slot(m_I) with slot(+1) = 0,
// slot(0) = 1, slot(-1) = 2.

#include <cmath>
#include <stdexcept>

#include <unsupported/Eigen/KroneckerProduct>

#include "nvdnp/types.hpp"

namespace nvdnp {

inline constexpr int slot(int m) {
  return m == 1 ? 0 : (m == 0 ? 1 : 2);
}

inline int basis_index(int ms, int mi) {
  if (ms < -1 || ms > 1 || mi < -1 || mi > 1) {
    throw std::out_of_range("spin projection must be -1, 0 or +1");
  }
  return 3 * slot(ms) + slot(mi);
}

template <typename Real = double>
struct SpinOne {
  Matrix3c<Real> x, y, z, identity;
};

template <typename Real = double>
SpinOne<Real> spin_one() {
  using C = Complex<Real>;
  const Real r = std::sqrt(Real(2)) / Real(2);
  SpinOne<Real> s;
  s.x.setZero();
  s.y.setZero();
  s.z.setZero();
  s.x(0, 1) = s.x(1, 0) = s.x(1, 2) = s.x(2, 1) = C(r, 0);
  s.y(0, 1) = s.y(1, 2) = C(0, -r);
  s.y(1, 0) = s.y(2, 1) = C(0, r);
  s.z(0, 0) = C(1, 0);
  s.z(2, 2) = C(-1, 0);
  s.identity.setIdentity();
  return s;
}

// Gell-Mann couplings on the electronic factor in (+1, 0, -1) ordering.
// lambda2 = -i(|+1><0| - |0><+1|) couples 0 <-> +1;
// lambda7 = -i|0><-1| + h.c. couples 0 <-> -1.
template <typename Real = double>
Matrix3c<Real> gell_mann_2() {
  Matrix3c<Real> m = Matrix3c<Real>::Zero();
  m(0, 1) = Complex<Real>(0, -1);
  m(1, 0) = Complex<Real>(0, 1);
  return m;
}

template <typename Real = double>
Matrix3c<Real> gell_mann_7() {
  Matrix3c<Real> m = Matrix3c<Real>::Zero();
  m(1, 2) = Complex<Real>(0, -1);
  m(2, 1) = Complex<Real>(0, 1);
  return m;
}

template <typename Real = double>
Matrix9c<Real> on_electron(const Matrix3c<Real>& op) {
  return Eigen::kroneckerProduct(op, Matrix3c<Real>::Identity()).eval();
}

template <typename Real = double>
Matrix9c<Real> on_nucleus(const Matrix3c<Real>& op) {
  return Eigen::kroneckerProduct(Matrix3c<Real>::Identity(), op).eval();
}

template <typename Real = double>
struct OperatorSet {
  Matrix9c<Real> Sx, Sy, Sz;
  Matrix9c<Real> Ix, Iy, Iz;
  Matrix9c<Real> P_minus1, P_plus1;
  Matrix9c<Real> L2, L7;
};

template <typename Real = double>
OperatorSet<Real> build_operator_set() {
  const SpinOne<Real> s = spin_one<Real>();
  OperatorSet<Real> ops;
  ops.Sx = on_electron<Real>(s.x);
  ops.Sy = on_electron<Real>(s.y);
  ops.Sz = on_electron<Real>(s.z);
  ops.Ix = on_nucleus<Real>(s.x);
  ops.Iy = on_nucleus<Real>(s.y);
  ops.Iz = on_nucleus<Real>(s.z);

  Matrix3c<Real> pm = Matrix3c<Real>::Zero();
  pm(slot(-1), slot(-1)) = 1;
  Matrix3c<Real> pp = Matrix3c<Real>::Zero();
  pp(slot(1), slot(1)) = 1;
  ops.P_minus1 = on_electron<Real>(pm);
  ops.P_plus1 = on_electron<Real>(pp);

  ops.L2 = on_electron<Real>(gell_mann_2<Real>());
  ops.L7 = on_electron<Real>(gell_mann_7<Real>());
  return ops;
}

// Shared double-precision instance; immutable after first use.
inline const OperatorSet<double>& operators() {
  static const OperatorSet<double> ops = build_operator_set<double>();
  return ops;
}

}  // namespace nvdnp
