#pragma once

#include "nvdnp/constants.hpp"
#include "nvdnp/dynamics.hpp"
#include "nvdnp/pulses.hpp"

namespace nvdnp {

struct PulsePair {
  PulseEnvelope env_m1;  // carrier near f_-1, applied first
  PulseEnvelope env_p1;  // carrier near f_+1, applied second
};

// One ensemble member at Zeeman offset gamma_e * (Bz - B0) (MHz):
// initial state -> both MW pulses -> RF flip -> P(m_I = 0).
double run_dnp_member(const PhysicalConstants& c, const PulsePair& pulses, double zeeman_offset,
                      const PropagationConfig& cfg = {});

// Ideal band-edge bound: each MW pulse fully inverts every transition of
// its branch whose frequency is at most carrier + |A_par|/2 and leaves the
// rest untouched, then the RF flip is applied. Population bookkeeping only.
double limit_member(const PhysicalConstants& c, double zeeman_offset);

// Exact mean of limit_member over [offset - width/2, offset + width/2].
// limit_member is piecewise constant, so this integrates it segment by
// segment between its breakpoints.
double limit_cell_average(const PhysicalConstants& c, double offset, double width);

}  // namespace nvdnp
