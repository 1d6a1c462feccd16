#pragma once

#include "nvdnp/pulses.hpp"
#include "nvdnp/types.hpp"

namespace nvdnp {

enum class PropagationMethod {
  PiecewiseExponential,  // exact exponential of each held sample
  RungeKutta4,           // classical RK4 on the von Neumann equation
};

struct PropagationConfig {
  double dt = 1e-3;  // us; upper bound on the integration sub-step
  PropagationMethod method = PropagationMethod::PiecewiseExponential;
};

void validate(const PropagationConfig& cfg);

enum class Branch { MinusOne, PlusOne };

// Unitary of one MW pulse on the given branch under the static
// rotating-frame Hamiltonian h0_rot (the carrier detuning is expected to be
// folded into h0_rot already; env.detuning is not reapplied here).
Mat9 pulse_unitary(const Mat9& h0_rot, const PulseEnvelope& env, Branch branch);

// Pulse on f_-1 (env_m1) followed immediately by the pulse on f_+1 (env_p1).
DensityMatrix propagate(const DensityMatrix& rho, const Mat9& h0_rot, const PulseEnvelope& env_m1,
                        const PulseEnvelope& env_p1, const PropagationConfig& cfg = {});

// Idealized RF flip: identity on m_s = 0, i-phased swap of nuclear +1 <-> 0
// on m_s = +1 and of nuclear -1 <-> 0 on m_s = -1.
const Mat9& rf_flip_operator();
DensityMatrix rf_flip(const DensityMatrix& rho);

}  // namespace nvdnp
