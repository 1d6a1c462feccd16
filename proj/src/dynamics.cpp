#include "nvdnp/dynamics.hpp"

#include <cmath>
#include <numbers>

#include "nvdnp/hamiltonian.hpp"
#include "nvdnp/propagator.hpp"

namespace nvdnp {

using std::numbers::pi;
using C = std::complex<double>;

void validate(const PropagationConfig& cfg) {
  if (!(cfg.dt > 0) || !std::isfinite(cfg.dt)) throw InvalidInput("propagation dt must be positive");
}

namespace {

Mat9 unit_drive(Branch branch) {
  return branch == Branch::MinusOne ? build_drive<double>(1.0, 0.0, operators())
                                    : build_drive<double>(0.0, 1.0, operators());
}

// d rho / dt = -i 2 pi [H, rho]
Mat9 von_neumann(const Mat9& h, const Mat9& rho) {
  const Mat9 comm = h * rho - rho * h;
  return C(0, -2.0 * pi) * comm;
}

DensityMatrix rk4_pulse(const DensityMatrix& rho0, const Mat9& h0_rot, const PulseEnvelope& env, Branch branch,
                        double max_dt) {
  const Mat9 v = unit_drive(branch);
  const int sub = std::max(1, static_cast<int>(std::ceil(env.dt / max_dt - 1e-9)));
  const double h = env.dt / sub;
  DensityMatrix rho = rho0;
  for (double a : env.samples) {
    const Mat9 ham = h0_rot + a * v;
    for (int s = 0; s < sub; ++s) {
      const Mat9 k1 = von_neumann(ham, rho);
      const Mat9 k2 = von_neumann(ham, rho + 0.5 * h * k1);
      const Mat9 k3 = von_neumann(ham, rho + 0.5 * h * k2);
      const Mat9 k4 = von_neumann(ham, rho + h * k3);
      rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
  }
  return rho;
}

}  // namespace

Mat9 pulse_unitary(const Mat9& h0_rot, const PulseEnvelope& env, Branch branch) {
  validate(env);
  BlockPropagator prop(h0_rot, unit_drive(branch));
  const std::size_t n = env.samples.size();
  for (std::size_t k = 0; k < n;) {
    std::size_t run = 1;
    while (k + run < n && env.samples[k + run] == env.samples[k]) ++run;
    prop.step(env.samples[k], env.dt * static_cast<double>(run));
    k += run;
  }
  return prop.unitary();
}

DensityMatrix propagate(const DensityMatrix& rho, const Mat9& h0_rot, const PulseEnvelope& env_m1,
                        const PulseEnvelope& env_p1, const PropagationConfig& cfg) {
  validate(cfg);
  validate(env_m1);
  validate(env_p1);
  if (cfg.method == PropagationMethod::RungeKutta4) {
    const DensityMatrix mid = rk4_pulse(rho, h0_rot, env_m1, Branch::MinusOne, cfg.dt);
    return rk4_pulse(mid, h0_rot, env_p1, Branch::PlusOne, cfg.dt);
  }
  const Mat9 u = pulse_unitary(h0_rot, env_p1, Branch::PlusOne) * pulse_unitary(h0_rot, env_m1, Branch::MinusOne);
  return u * rho * u.adjoint();
}

const Mat9& rf_flip_operator() {
  static const Mat9 u = [] {
    const C i{0, 1};
    Mat9 m = Mat9::Zero();
    for (int mi : {1, 0, -1}) m(basis_index(0, mi), basis_index(0, mi)) = 1;
    // m_s = +1: i(|+1><0| + |0><+1|) + |-1><-1|
    m(basis_index(1, 1), basis_index(1, 0)) = i;
    m(basis_index(1, 0), basis_index(1, 1)) = i;
    m(basis_index(1, -1), basis_index(1, -1)) = 1;
    // m_s = -1: i(|-1><0| + |0><-1|) + |+1><+1|
    m(basis_index(-1, -1), basis_index(-1, 0)) = i;
    m(basis_index(-1, 0), basis_index(-1, -1)) = i;
    m(basis_index(-1, 1), basis_index(-1, 1)) = 1;
    return m;
  }();
  return u;
}

DensityMatrix rf_flip(const DensityMatrix& rho) {
  const Mat9& u = rf_flip_operator();
  return u * rho * u.adjoint();
}

}  // namespace nvdnp
