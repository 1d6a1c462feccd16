#pragma once

// Hamiltonians in MHz (H/h, ordinary frequency). Propagators apply the 2*pi.

#include "nvdnp/constants.hpp"
#include "nvdnp/operators.hpp"

namespace nvdnp {

// Lab-frame ground-state Hamiltonian at axial field Bz (gauss).
template <typename Real = double>
Matrix9c<Real> build_h0(const PhysicalConstants& c, Real Bz,
                        const OperatorSet<Real>& ops = build_operator_set<Real>()) {
  const Real D = c.D_mhz, ge = c.gamma_e_mhz_per_g, gn = c.gamma_n_mhz_per_g;
  const Real Q = c.Q_mhz, Apar = c.A_par_mhz, Aperp = c.A_perp_mhz;
  return (D * ops.Sz * ops.Sz + ge * Bz * ops.Sz - gn * Bz * ops.Iz + Q * ops.Iz * ops.Iz +
          Apar * ops.Sz * ops.Iz + Aperp * (ops.Sx * ops.Ix + ops.Sy * ops.Iy))
      .eval();
}

struct TransitionFrequencies {
  double f_m1 = 0;  // |0,-1> <-> |-1,-1>
  double f_p1 = 0;  // |0,+1> <-> |+1,+1>
};

inline TransitionFrequencies transition_frequencies(const PhysicalConstants& c, double Bz) {
  const double zeeman = c.gamma_e_mhz_per_g * Bz;
  return {c.D_mhz - zeeman + c.A_par_mhz, c.D_mhz + zeeman + c.A_par_mhz};
}

struct RotatingFrameParams {
  double delta_m1 = 0;       // carrier offset from f_-1, MHz
  double delta_p1 = 0;       // carrier offset from f_+1, MHz
  double zeeman_offset = 0;  // gamma_e * (Bz - B0), MHz
};

// Static rotating-frame Hamiltonian
//   A_par Sz Iz - (d_m1 + A_par) P_-1 - (d_p1 + A_par) P_+1
// with the member's Zeeman offset o folded into the effective carrier
// detunings: a member at B0 + dB has f_-1 lowered and f_+1 raised by
// gamma_e * dB, so d_m1 -> d_m1 + o and d_p1 -> d_p1 - o.
// The gamma_n and Q terms conserve m_I and are dropped.
template <typename Real = double>
Matrix9c<Real> build_rotating_h0(const PhysicalConstants& c, const RotatingFrameParams& p,
                                 const OperatorSet<Real>& ops = build_operator_set<Real>()) {
  const Real A = c.A_par_mhz;
  const Real dm = p.delta_m1 + p.zeeman_offset;
  const Real dp = p.delta_p1 - p.zeeman_offset;
  return (A * ops.Sz * ops.Iz - (dm + A) * ops.P_minus1 - (dp + A) * ops.P_plus1).eval();
}

// Drive coupling with envelopes given as on-resonance Rabi frequencies:
// amp_m1 couples m_s = 0 <-> -1 (lambda7), amp_p1 couples m_s = 0 <-> +1
// (lambda2), each with two-level matrix element magnitude amp / 2.
template <typename Real = double>
Matrix9c<Real> build_drive(Real amp_m1, Real amp_p1,
                           const OperatorSet<Real>& ops = build_operator_set<Real>()) {
  return (Real(0.5) * amp_m1 * ops.L7 - Real(0.5) * amp_p1 * ops.L2).eval();
}

}  // namespace nvdnp
