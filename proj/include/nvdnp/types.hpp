#pragma once

#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

namespace nvdnp {

template <typename Real>
using Complex = std::complex<Real>;

template <typename Real>
using Matrix3c = Eigen::Matrix<Complex<Real>, 3, 3>;

// Operators on the electron (x) nuclear product space.
template <typename Real>
using Matrix9c = Eigen::Matrix<Complex<Real>, 9, 9>;

template <typename Real>
using Vector9 = Eigen::Matrix<Real, 9, 1>;

using Mat3 = Matrix3c<double>;
using Mat9 = Matrix9c<double>;
using Vec9 = Vector9<double>;

// 9x9 density matrix in the |m_s> (x) |m_I> basis.
using DensityMatrix = Mat9;

// Malformed or out-of-domain user input (CLI exit code 2).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace nvdnp
