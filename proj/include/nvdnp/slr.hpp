#pragma once

// Shinnar-Le Roux design of band-selective inversion pulses.
//
// A hard-pulse train of n rotations maps to a pair of degree n-1
// polynomials (alpha, beta) in z^-1; |beta(w)|^2 is the inversion profile.
// Design runs the map backwards: pick beta as a linear-phase FIR filter,
// complete it with the minimum-phase alpha satisfying |alpha|^2 + |beta|^2 = 1,
// then peel off one rotation per sample.

#include <span>
#include <stdexcept>
#include <utility>

#include <Eigen/Dense>

#include "nvdnp/pulses.hpp"

namespace nvdnp {

struct SlrSpec {
  double length = 4.0;     // us
  double bandwidth = 4.0;  // MHz, full width of the inverted band
  int n_samples = 256;
  double in_band_ripple = 0.01;   // on the inversion profile
  double out_band_ripple = 0.01;  // on the inversion profile
  double detuning = 0.0;          // MHz
};

void validate(const SlrSpec& spec);

// The requested profile cannot be realised (|beta| > 1 or the transition
// band does not fit below Nyquist).
class InfeasibleDesign : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Empirical time-bandwidth x fractional-transition-width product of an
// equiripple linear-phase filter with pass/stop ripples d1, d2.
double transition_width_factor(double d1, double d2);

// Band edges are fractions of Nyquist in [0, 1].
struct FirBand {
  double lo = 0;
  double hi = 0;
  double desired = 0;
  double weight = 1;
};

// Weighted least-squares linear-phase (symmetric) FIR design.
Eigen::VectorXd least_squares_fir(int n_taps, std::span<const FirBand> bands);

// Minimum-phase alpha with |alpha|^2 = 1 - |beta|^2 on the unit circle,
// via the folded real cepstrum. Throws InfeasibleDesign if |beta| > 1.
Eigen::VectorXcd min_phase_alpha(const Eigen::VectorXcd& beta, int fft_size = 0);

// Hard-pulse rotations (angle * exp(i phase), radians) -> (alpha, beta).
std::pair<Eigen::VectorXcd, Eigen::VectorXcd> forward_slr(const Eigen::VectorXcd& rotations);

// (alpha, beta) -> hard-pulse rotations; inverse of forward_slr.
Eigen::VectorXcd inverse_slr(Eigen::VectorXcd alpha, Eigen::VectorXcd beta);

struct SlrDesign {
  PulseEnvelope envelope;
  Eigen::VectorXd beta_filter;  // real linear-phase filter, beta = -i * filter
  Eigen::VectorXcd alpha;
  Eigen::VectorXcd rotations;
  double transition_fraction = 0;  // half-width of the transition band / (bandwidth / 2)
  double quadrature_fraction = 0;  // max |Im rotation| / max |rotation|
};

SlrDesign design_slr(const SlrSpec& spec);

// Real amplitude-modulated envelope of the designed pulse.
PulseEnvelope slr_design(const SlrSpec& spec);

}  // namespace nvdnp
