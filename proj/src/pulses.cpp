#include "nvdnp/pulses.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <istream>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "nvdnp/report.hpp"
#include "nvdnp/types.hpp"

namespace nvdnp {

using std::numbers::pi;

double PulseEnvelope::area() const {
  return std::accumulate(samples.begin(), samples.end(), 0.0) * dt;
}

void validate(const PulseEnvelope& env) {
  if (env.samples.empty()) throw InvalidInput("pulse envelope has no samples");
  if (!(env.dt > 0) || !std::isfinite(env.dt)) throw InvalidInput("pulse envelope dt must be positive");
  if (!std::isfinite(env.detuning)) throw InvalidInput("pulse detuning must be finite");
  for (double s : env.samples) {
    if (!std::isfinite(s)) throw InvalidInput("pulse envelope sample is not finite");
  }
}

PulseEnvelope idle_envelope() { return {{0.0}, 1e-3, 0.0}; }

namespace {

int sample_count(double duration, double dt) {
  if (!(dt > 0) || !std::isfinite(dt)) throw InvalidInput("sample spacing dt must be positive");
  const double n = std::ceil(duration / dt - 1e-9);
  return std::max(kMinPulseSamples, static_cast<int>(n));
}

}  // namespace

PulseEnvelope square_envelope(const SquareSpec& spec, double dt) {
  if (!(spec.rabi > 0) || !std::isfinite(spec.rabi)) throw InvalidInput("square pulse rabi must be positive");
  if (!(spec.duration_scale > 0) || !std::isfinite(spec.duration_scale)) {
    throw InvalidInput("square pulse duration_scale must be positive");
  }
  const double duration = spec.duration_scale / (2.0 * spec.rabi);
  const int n = sample_count(duration, dt);
  return {std::vector<double>(n, spec.rabi), duration / n, spec.detuning};
}

double gaussian_sigma(double peak_rabi) { return 1.0 / (2.0 * peak_rabi * std::sqrt(2.0 * pi)); }

PulseEnvelope gaussian_envelope(const GaussianSpec& spec, double dt) {
  if (!(spec.peak_rabi > 0) || !std::isfinite(spec.peak_rabi)) {
    throw InvalidInput("gaussian peak_rabi must be positive");
  }
  if (!(spec.truncation >= 3) || !std::isfinite(spec.truncation)) {
    throw InvalidInput("gaussian truncation must be at least 3 sigma");
  }
  const double sigma = gaussian_sigma(spec.peak_rabi);
  const double duration = 2.0 * spec.truncation * sigma;
  const int n = sample_count(duration, dt);
  const double step = duration / n;

  PulseEnvelope env{std::vector<double>(n), step, spec.detuning};
  for (int k = 0; k < n; ++k) {
    const double t = (k + 0.5) * step - 0.5 * duration;
    env.samples[k] = spec.peak_rabi * std::exp(-t * t / (2.0 * sigma * sigma));
  }
  const double scale = 0.5 / env.area();
  for (double& s : env.samples) s *= scale;
  return env;
}

double two_level_inversion(const PulseEnvelope& env, double delta) {
  validate(env);
  // Rotating frame: ground energy 0, excited energy -Delta, coupling Omega/2.
  const double Delta = env.detuning + delta;
  using C = std::complex<double>;
  C g{1, 0}, e{0, 0};
  const std::size_t n = env.samples.size();
  for (std::size_t k = 0; k < n;) {
    std::size_t run = 1;
    while (k + run < n && env.samples[k + run] == env.samples[k]) ++run;
    const double omega = env.samples[k];
    const double t = env.dt * static_cast<double>(run);
    // H = -Delta/2 * 1 + [[Delta/2, omega/2], [omega/2, -Delta/2]]
    const double w = 0.5 * std::hypot(omega, Delta);
    const double phi = 2.0 * pi * w * t;
    const double sinc = w > 0 ? std::sin(phi) / w : 2.0 * pi * t;
    const C c{std::cos(phi), 0};
    const C u00 = c - C(0, 1) * sinc * (0.5 * Delta);
    const C u11 = c + C(0, 1) * sinc * (0.5 * Delta);
    const C u01 = -C(0, 1) * sinc * (0.5 * omega);
    const C ng = u00 * g + u01 * e;
    const C ne = u01 * g + u11 * e;
    g = ng;
    e = ne;
    k += run;
  }
  return std::norm(e);
}

std::vector<double> excitation_profile(const PulseEnvelope& env, std::span<const double> detunings) {
  std::vector<double> out;
  out.reserve(detunings.size());
  for (double d : detunings) {
    if (!std::isfinite(d)) throw InvalidInput("profile detuning must be finite");
    out.push_back(two_level_inversion(env, d));
  }
  return out;
}

double crosstalk_free_rabi(double delta_omega) {
  if (!(delta_omega >= 0)) throw InvalidInput("delta_omega must be non-negative");
  return delta_omega / std::sqrt(3.0);
}

void write_envelope_csv(std::ostream& os, const PulseEnvelope& env) {
  os << "# detuning_mhz=" << format_number(env.detuning) << '\n';
  os << "time_us,rabi_mhz\n";
  for (std::size_t k = 0; k < env.samples.size(); ++k) {
    os << format_number(static_cast<double>(k) * env.dt) << ',' << format_number(env.samples[k]) << '\n';
  }
}

PulseEnvelope read_envelope_csv(std::istream& is) {
  PulseEnvelope env;
  std::string line;
  bool header = false;
  std::vector<double> times;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string key = "# detuning_mhz=";
      if (line.rfind(key, 0) == 0) env.detuning = std::stod(line.substr(key.size()));
      continue;
    }
    if (!header) {
      if (line != "time_us,rabi_mhz") throw InvalidInput("envelope CSV: expected header 'time_us,rabi_mhz'");
      header = true;
      continue;
    }
    std::istringstream row(line);
    double t = 0, r = 0;
    char comma = 0;
    if (!(row >> t >> comma >> r) || comma != ',') throw InvalidInput("envelope CSV: malformed row '" + line + "'");
    times.push_back(t);
    env.samples.push_back(r);
  }
  if (!header) throw InvalidInput("envelope CSV: missing header");
  if (times.size() < 2) throw InvalidInput("envelope CSV: need at least two samples");
  env.dt = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
  for (std::size_t k = 1; k < times.size(); ++k) {
    // Times are printed with 6 significant digits.
    const double rounding = 1e-5 * std::max(std::abs(times[k]), std::abs(times[k - 1]));
    if (std::abs((times[k] - times[k - 1]) - env.dt) > 1e-3 * env.dt + rounding) {
      throw InvalidInput("envelope CSV: non-uniform time grid");
    }
  }
  validate(env);
  return env;
}

}  // namespace nvdnp
