#pragma once

#include <iosfwd>
#include <span>
#include <vector>

namespace nvdnp {

// Sampled amplitude-modulated envelope. Each sample is an instantaneous
// on-resonance Rabi frequency (MHz) held for dt (us); the carrier sits at
// `detuning` (MHz) from the nominal transition frequency.
struct PulseEnvelope {
  std::vector<double> samples;
  double dt = 0;
  double detuning = 0;

  double duration() const { return static_cast<double>(samples.size()) * dt; }
  // Integral of the Rabi frequency; 1/2 is a pi rotation.
  double area() const;
};

// Throws InvalidInput on an empty grid, dt <= 0 or non-finite values.
void validate(const PulseEnvelope& env);

// Zero-amplitude envelope: leaves the system untouched.
PulseEnvelope idle_envelope();

// Every synthesized shape gets at least this many samples.
inline constexpr int kMinPulseSamples = 500;

struct SquareSpec {
  double rabi = 1.0;            // MHz
  double duration_scale = 1.0;  // multiplier on the pi duration 1/(2 rabi)
  double detuning = 0.0;        // MHz
};

struct GaussianSpec {
  double peak_rabi = 1.0;  // MHz
  double detuning = 0.0;   // MHz
  double truncation = 4.0; // envelope cut at +-truncation sigma
};

PulseEnvelope square_envelope(const SquareSpec& spec, double dt);

// Unit-area-calibrated pi pulse: sigma = 1 / (2 peak sqrt(2 pi)), cut at
// +-truncation sigma, amplitudes rescaled so the sampled area is exactly 1/2.
PulseEnvelope gaussian_envelope(const GaussianSpec& spec, double dt);
double gaussian_sigma(double peak_rabi);

// Isolated two-level system driven from the ground state with total
// detuning env.detuning + delta; returns the final excited population.
double two_level_inversion(const PulseEnvelope& env, double delta);
std::vector<double> excitation_profile(const PulseEnvelope& env, std::span<const double> detunings);

// Rabi frequency giving a pi rotation on resonance and a 2 pi rotation at
// detuning delta_omega.
double crosstalk_free_rabi(double delta_omega);

// CSV with mandatory header "time_us,rabi_mhz"; lines starting with '#'
// are comments, "# detuning_mhz=<v>" carries the carrier detuning.
void write_envelope_csv(std::ostream& os, const PulseEnvelope& env);
PulseEnvelope read_envelope_csv(std::istream& is);

}  // namespace nvdnp
