#include "nvdnp/dnp.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "nvdnp/hamiltonian.hpp"
#include "nvdnp/state.hpp"

namespace nvdnp {

double run_dnp_member(const PhysicalConstants& c, const PulsePair& pulses, double zeeman_offset,
                      const PropagationConfig& cfg) {
  const RotatingFrameParams frame{pulses.env_m1.detuning, pulses.env_p1.detuning, zeeman_offset};
  const Mat9 h0 = build_rotating_h0<double>(c, frame, operators());
  const DensityMatrix after_mw = propagate(initial_state<double>(), h0, pulses.env_m1, pulses.env_p1, cfg);
  return population_mI0(rf_flip(after_mw));
}

namespace {

// Transition frequency of |0, m_I> <-> |m_s, m_I> relative to the nominal
// carrier of that branch, for a member at Zeeman offset o.
double relative_frequency(const PhysicalConstants& c, int ms, int mi, double o) {
  const double A = c.A_par_mhz;
  return ms < 0 ? -o - A * (mi + 1) : o + A * (mi - 1);
}

}  // namespace

double limit_member(const PhysicalConstants& c, double zeeman_offset) {
  const double cutoff = 0.5 * std::abs(c.A_par_mhz);
  Vec9 pop = populations(initial_state<double>());
  for (int ms : {-1, 1}) {
    for (int mi : {1, 0, -1}) {
      if (relative_frequency(c, ms, mi, zeeman_offset) <= cutoff) {
        std::swap(pop(basis_index(0, mi)), pop(basis_index(ms, mi)));
      }
    }
  }
  const DensityMatrix rho = pop.cast<Complex<double>>().asDiagonal();
  return population_mI0(rf_flip(rho));
}

double limit_cell_average(const PhysicalConstants& c, double offset, double width) {
  if (!(width > 0)) return limit_member(c, offset);
  const double lo = offset - 0.5 * width;
  const double hi = offset + 0.5 * width;
  const double cutoff = 0.5 * std::abs(c.A_par_mhz);
  const double A = c.A_par_mhz;

  std::vector<double> cuts{lo, hi};
  for (int mi : {1, 0, -1}) {
    for (double b : {-A * (mi + 1) - cutoff, cutoff - A * (mi - 1)}) {
      if (b > lo && b < hi) cuts.push_back(b);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double len = cuts[k + 1] - cuts[k];
    if (len > 0) acc += len * limit_member(c, 0.5 * (cuts[k] + cuts[k + 1]));
  }
  return acc / width;
}

}  // namespace nvdnp
