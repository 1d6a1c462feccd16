#include "nvdnp/slr.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "nvdnp/types.hpp"

namespace nvdnp {

using std::numbers::pi;
using C = std::complex<double>;

void validate(const SlrSpec& spec) {
  if (!(spec.length > 0) || !std::isfinite(spec.length)) throw InvalidInput("SLR length must be positive");
  if (!(spec.bandwidth > 0) || !std::isfinite(spec.bandwidth)) throw InvalidInput("SLR bandwidth must be positive");
  if (spec.n_samples < 64) throw InvalidInput("SLR pulse needs at least 64 samples");
  if (!(spec.in_band_ripple > 0 && spec.in_band_ripple < 1)) throw InvalidInput("SLR in-band ripple must be in (0, 1)");
  if (!(spec.out_band_ripple > 0 && spec.out_band_ripple < 1)) throw InvalidInput("SLR out-of-band ripple must be in (0, 1)");
  if (!std::isfinite(spec.detuning)) throw InvalidInput("SLR detuning must be finite");
}

double transition_width_factor(double d1, double d2) {
  constexpr double a1 = 5.309e-3, a2 = 7.114e-2, a3 = -4.761e-1;
  constexpr double a4 = -2.66e-3, a5 = -5.941e-1, a6 = -4.278e-1;
  const double l1 = std::log10(d1), l2 = std::log10(d2);
  return (a1 * l1 * l1 + a2 * l1 + a3) * l2 + (a4 * l1 * l1 + a5 * l1 + a6);
}

namespace {

// Integral of cos(c w) over [w0, w1].
double cos_integral(double c, double w0, double w1) {
  if (c == 0) return w1 - w0;
  return (std::sin(c * w1) - std::sin(c * w0)) / c;
}

std::vector<C> fft_forward(const std::vector<C>& x) {
  Eigen::FFT<double> fft;
  std::vector<C> out;
  fft.fwd(out, x);
  return out;
}

std::vector<C> fft_inverse(const std::vector<C>& x) {
  Eigen::FFT<double> fft;
  std::vector<C> out;
  fft.inv(out, x);
  return out;
}

int default_fft_size(Eigen::Index n) {
  int size = 1;
  while (size < 16 * n) size *= 2;
  return size;
}

std::vector<C> spectrum(const Eigen::VectorXcd& coeffs, int size) {
  std::vector<C> padded(size, C{});
  for (Eigen::Index k = 0; k < coeffs.size(); ++k) padded[k] = coeffs(k);
  return fft_forward(padded);
}

}  // namespace

Eigen::VectorXd least_squares_fir(int n_taps, std::span<const FirBand> bands) {
  if (n_taps < 2) throw InvalidInput("FIR design needs at least two taps");
  // H(w) = sum_k a_k cos(c_k w); c_k = k + 1/2 for even length, k for odd.
  const bool even = n_taps % 2 == 0;
  const int m = even ? n_taps / 2 : (n_taps + 1) / 2;
  auto freq = [&](int k) { return even ? k + 0.5 : static_cast<double>(k); };

  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(m, m);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
  for (const FirBand& b : bands) {
    const double w0 = pi * b.lo, w1 = pi * b.hi;
    for (int k = 0; k < m; ++k) {
      rhs(k) += b.weight * b.desired * cos_integral(freq(k), w0, w1);
      for (int l = 0; l <= k; ++l) {
        const double q = 0.5 * b.weight *
                         (cos_integral(freq(k) - freq(l), w0, w1) + cos_integral(freq(k) + freq(l), w0, w1));
        gram(k, l) += q;
        if (l != k) gram(l, k) += q;
      }
    }
  }
  const Eigen::VectorXd a = gram.ldlt().solve(rhs);

  Eigen::VectorXd h(n_taps);
  if (even) {
    for (int k = 0; k < m; ++k) h(m - 1 - k) = h(m + k) = 0.5 * a(k);
  } else {
    const int mid = m - 1;
    h(mid) = a(0);
    for (int k = 1; k < m; ++k) h(mid - k) = h(mid + k) = 0.5 * a(k);
  }
  return h;
}

Eigen::VectorXcd min_phase_alpha(const Eigen::VectorXcd& beta, int fft_size) {
  const Eigen::Index n = beta.size();
  const int size = fft_size > 0 ? fft_size : default_fft_size(n);
  if (size < 2 * n) throw InvalidInput("FFT size too small for spectral factorization");

  const std::vector<C> bf = spectrum(beta, size);
  std::vector<C> log_mag(size);
  for (int k = 0; k < size; ++k) {
    const double b2 = std::norm(bf[k]);
    if (b2 > 1.0) throw InfeasibleDesign("|beta| exceeds 1; no alpha completes the rotation");
    log_mag[k] = C(0.5 * std::log(1.0 - b2), 0);
  }
  // Fold the real cepstrum onto positive quefrencies.
  std::vector<C> cep = fft_inverse(log_mag);
  std::vector<C> folded(size, C{});
  folded[0] = cep[0].real();
  for (int k = 1; k < size / 2; ++k) folded[k] = 2.0 * cep[k].real();
  folded[size / 2] = cep[size / 2].real();
  std::vector<C> af = fft_forward(folded);
  for (C& v : af) v = std::exp(v);
  const std::vector<C> a = fft_inverse(af);

  Eigen::VectorXcd alpha(n);
  for (Eigen::Index k = 0; k < n; ++k) alpha(k) = a[k];
  return alpha;
}

std::pair<Eigen::VectorXcd, Eigen::VectorXcd> forward_slr(const Eigen::VectorXcd& rotations) {
  Eigen::VectorXcd a = Eigen::VectorXcd::Ones(1);
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(1);
  for (Eigen::Index j = 0; j < rotations.size(); ++j) {
    const double theta = std::abs(rotations(j));
    const double phase = std::arg(rotations(j));
    const double c = std::cos(0.5 * theta);
    const C s = C(0, -1) * std::polar(std::sin(0.5 * theta), phase);
    if (j == 0) {
      a(0) = c;
      b(0) = s;
      continue;
    }
    const Eigen::Index len = a.size() + 1;
    Eigen::VectorXcd ap = Eigen::VectorXcd::Zero(len), bs = Eigen::VectorXcd::Zero(len);
    ap.head(len - 1) = a;
    bs.tail(len - 1) = b;  // z^-1 B: free precession between samples
    a = c * ap - std::conj(s) * bs;
    b = s * ap + c * bs;
  }
  return {a, b};
}

Eigen::VectorXcd inverse_slr(Eigen::VectorXcd alpha, Eigen::VectorXcd beta) {
  const Eigen::Index n = alpha.size();
  if (beta.size() != n) throw InvalidInput("inverse_slr: alpha and beta lengths differ");
  Eigen::VectorXcd rot(n);
  for (Eigen::Index j = n - 1; j >= 0; --j) {
    // S / C = b_0 / a_0 with S = -i e^{i phase} sin(theta / 2).
    const C q = C(0, 1) * beta(0) / alpha(0);
    const double theta = 2.0 * std::atan(std::abs(q));
    const double phase = std::arg(q);
    rot(j) = std::polar(theta, phase);
    if (j == 0) break;
    const double c = std::cos(0.5 * theta);
    const C s = C(0, -1) * std::polar(std::sin(0.5 * theta), phase);
    const Eigen::VectorXcd a_prev = c * alpha + std::conj(s) * beta;
    const Eigen::VectorXcd b_shift = -s * alpha + c * beta;
    alpha = a_prev.head(j);
    beta = b_shift.tail(j);
  }
  return rot;
}

SlrDesign design_slr(const SlrSpec& spec) {
  validate(spec);
  const int n = spec.n_samples;
  const double tbw = spec.length * spec.bandwidth;
  // Inversion: the profile is |beta|^2, so ripples map onto beta as below.
  const double d1 = spec.in_band_ripple / 8.0;
  const double d2 = std::sqrt(spec.out_band_ripple / 2.0);
  const double w = transition_width_factor(d1, d2) / tbw;
  const double f_pass = (1.0 - w) * tbw / n;
  const double f_stop = (1.0 + w) * tbw / n;
  if (!(w > 0) || w >= 1.0 || f_stop >= 1.0) {
    throw InfeasibleDesign("SLR transition band does not fit below Nyquist; raise n_samples or lower length*bandwidth");
  }

  const FirBand bands[] = {{0.0, f_pass, 1.0, 1.0}, {f_stop, 1.0, 0.0, d1 / d2}};
  Eigen::VectorXd h = least_squares_fir(n, bands);
  h /= h.sum();

  const int size = default_fft_size(n);
  double peak = 0;
  for (const C& v : spectrum(h.cast<C>(), size)) peak = std::max(peak, std::abs(v));
  if (peak * peak > 1.0 + spec.in_band_ripple) {
    throw InfeasibleDesign("SLR beta filter overshoots |B| = 1 beyond the in-band ripple budget");
  }
  if (peak >= 1.0) h /= peak * (1.0 + 1e-7);

  SlrDesign d;
  d.beta_filter = h;
  const Eigen::VectorXcd beta = C(0, -1) * h.cast<C>();
  d.alpha = min_phase_alpha(beta, size);
  d.rotations = inverse_slr(d.alpha, beta);
  d.transition_fraction = w;

  const double dt = spec.length / n;
  double max_rot = 0, max_quad = 0;
  d.envelope.dt = dt;
  d.envelope.detuning = spec.detuning;
  d.envelope.samples.resize(n);
  for (int k = 0; k < n; ++k) {
    max_rot = std::max(max_rot, std::abs(d.rotations(k)));
    max_quad = std::max(max_quad, std::abs(d.rotations(k).imag()));
    d.envelope.samples[k] = d.rotations(k).real() / (2.0 * pi * dt);
  }
  d.quadrature_fraction = max_rot > 0 ? max_quad / max_rot : 0.0;
  return d;
}

PulseEnvelope slr_design(const SlrSpec& spec) { return design_slr(spec).envelope; }

}  // namespace nvdnp
