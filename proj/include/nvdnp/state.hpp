#pragma once

#include <algorithm>

#include <Eigen/Eigenvalues>

#include "nvdnp/operators.hpp"

namespace nvdnp {

// Pure product state |m_s, m_I><m_s, m_I|.
template <typename Real = double>
Matrix9c<Real> product_state(int ms, int mi) {
  Matrix9c<Real> rho = Matrix9c<Real>::Zero();
  const int k = basis_index(ms, mi);
  rho(k, k) = Real(1);
  return rho;
}

// Electron polarized into m_s = 0, nucleus maximally mixed.
template <typename Real = double>
Matrix9c<Real> initial_state() {
  Matrix9c<Real> rho = Matrix9c<Real>::Zero();
  for (int mi : {1, 0, -1}) {
    const int k = basis_index(0, mi);
    rho(k, k) = Real(1) / Real(3);
  }
  return rho;
}

template <typename Derived>
Matrix3c<typename Derived::RealScalar> trace_out_electron(const Eigen::MatrixBase<Derived>& rho) {
  using Real = typename Derived::RealScalar;
  Matrix3c<Real> out = Matrix3c<Real>::Zero();
  for (int e = 0; e < 3; ++e) out += rho.template block<3, 3>(3 * e, 3 * e);
  return out;
}

template <typename Derived>
Matrix3c<typename Derived::RealScalar> trace_out_nucleus(const Eigen::MatrixBase<Derived>& rho) {
  using Real = typename Derived::RealScalar;
  Matrix3c<Real> out = Matrix3c<Real>::Zero();
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int n = 0; n < 3; ++n) out(a, b) += rho(3 * a + n, 3 * b + n);
  return out;
}

// <m_I = 0| Tr_e rho |m_I = 0>.
template <typename Derived>
typename Derived::RealScalar population_mI0(const Eigen::MatrixBase<Derived>& rho) {
  return std::real(trace_out_electron(rho)(slot(0), slot(0)));
}

// Diagonal of rho as real populations, basis ordering as above.
template <typename Derived>
Vector9<typename Derived::RealScalar> populations(const Eigen::MatrixBase<Derived>& rho) {
  return rho.diagonal().real();
}

template <typename Real = double>
struct StateDiagnostics {
  Real trace_error = 0;        // |tr(rho) - 1|
  Real hermiticity_defect = 0; // max |rho - rho^H|
  Real min_eigenvalue = 0;
};

template <typename Derived>
StateDiagnostics<typename Derived::RealScalar> diagnose(const Eigen::MatrixBase<Derived>& rho) {
  using Real = typename Derived::RealScalar;
  StateDiagnostics<Real> d;
  d.trace_error = std::abs(rho.trace() - Complex<Real>(1));
  d.hermiticity_defect = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  const Matrix9c<Real> h = (rho + rho.adjoint()) / Real(2);
  Eigen::SelfAdjointEigenSolver<Matrix9c<Real>> es(h, Eigen::EigenvaluesOnly);
  d.min_eigenvalue = es.eigenvalues().minCoeff();
  return d;
}

template <typename Derived>
bool is_valid_state(const Eigen::MatrixBase<Derived>& rho, double tol = 1e-10) {
  const auto d = diagnose(rho);
  return d.trace_error <= tol && d.hermiticity_defect <= tol && d.min_eigenvalue >= -tol;
}

}  // namespace nvdnp
